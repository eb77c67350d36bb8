//! Spin bookkeeping: exact half-integer labels, angular momentum matrices,
//! rotation operators, spin coherent states and the embedding of a spin-j
//! multiplet into the symmetric subspace of `2j` spin-1/2 constituents.
//!
//! Basis convention: index `k` of a `(2j+1)`-vector is the `J_z` eigenket with
//! `m = j - k`, so index 0 is `|j, j⟩` and the last index is `|j, -j⟩`. For
//! registers of spin-1/2 constituents, qubit 0 is the most significant bit and
//! bit value 0 is spin up.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen, Vector2, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type Mat2 = Matrix2<C64>;
pub type Vec2 = Vector2<C64>;

pub const NORM_TOLERANCE: f64 = 1e-12;

/// Spin quantum number `j`, stored as the integer `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinJ {
    twice_j: u32,
}

impl SpinJ {
    pub fn from_twice(twice_j: u32) -> Result<Self> {
        if twice_j == 0 {
            return Err(Error::InvalidSpin(twice_j));
        }
        Ok(Self { twice_j })
    }

    /// `j = (2n+1)/2`.
    pub fn half_odd(n: u32) -> Self {
        Self { twice_j: 2 * n + 1 }
    }

    pub fn twice_j(self) -> u32 {
        self.twice_j
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice_j) / 2.0
    }

    pub fn dim(self) -> usize {
        self.twice_j as usize + 1
    }

    /// True when `j` is half-odd-integer, the case where every pair of coherent
    /// state frames overlaps fully.
    pub fn is_gate_valid(self) -> bool {
        self.twice_j % 2 == 1
    }

    /// `n` in `j = (2n+1)/2`, when defined.
    pub fn n(self) -> Option<u32> {
        self.is_gate_valid().then(|| (self.twice_j - 1) / 2)
    }

    pub fn require_gate_valid(self) -> Result<u32> {
        self.n().ok_or(Error::NotGateSpin(self.twice_j))
    }

    /// `(-1)^{2j}`.
    pub fn parity_sign(self) -> f64 {
        if self.twice_j.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for SpinJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_j.is_multiple_of(2) {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}

impl FromStr for SpinJ {
    type Err = Error;

    /// Accepts `3/2`, `1`, or a decimal such as `1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse spin `{s}`"));
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "2" => Self::from_twice(num),
                "1" => Self::from_twice(2 * num),
                _ => Err(bad()),
            };
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        let twice = 2.0 * v;
        if !(twice.is_finite() && twice >= 1.0 && twice.fract() == 0.0 && twice < 1e6) {
            return Err(bad());
        }
        Self::from_twice(twice as u32)
    }
}

/// A point `(θ, φ)` on the unit sphere, used as the label of a measurement
/// subspace.
///
/// At the poles the azimuth is kept as given: `(0, φ)` labels the frame
/// `e^{-iφJ_z}{|j⟩, |-j⟩}`, which differs from `(0, 0)` by phases only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    pub const NORTH: Direction = Direction { theta: 0.0, phi: 0.0 };

    /// Builds a direction with `θ ∈ [0, π]`; `φ` is reduced into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) || !(-1e-12..=PI + 1e-12).contains(&theta) {
            return Err(Error::InvalidDirection { theta, phi });
        }
        Ok(Self { theta: theta.clamp(0.0, PI), phi: crate::angle::wrap_tau(phi) })
    }

    /// Accepts any polar angle: `θ` outside `[0, π]` is reflected to the same
    /// point of the sphere, `(2π - θ, φ + π)`. The frame attached to the
    /// reflected label differs from the unreflected one by per-vector phases
    /// only, which leaves holonomies unchanged.
    pub fn from_any_polar(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(Error::InvalidDirection { theta, phi });
        }
        let t = crate::angle::wrap_tau(theta);
        if t <= PI {
            Self::new(t, phi)
        } else {
            Self::new(TAU - t, phi + PI)
        }
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn phi(self) -> f64 {
        self.phi
    }

    pub fn unit_vector(self) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(st * cp, st * sp, ct)
    }

    /// Inverse of [`Direction::unit_vector`]; the azimuth at the poles is 0.
    pub fn from_unit_vector(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidDirection { theta: f64::NAN, phi: f64::NAN });
        }
        let u = v / norm;
        let theta = u.z.clamp(-1.0, 1.0).acos();
        let phi = if u.x == 0.0 && u.y == 0.0 { 0.0 } else { u.y.atan2(u.x) };
        Self::new(theta, phi)
    }

    /// True when both labels agree to `tol`, azimuths compared modulo 2π.
    pub fn same_label(self, other: Direction, tol: f64) -> bool {
        let dphi = crate::angle::wrap_pi(self.phi - other.phi).abs();
        (self.theta - other.theta).abs() <= tol && dphi <= tol
    }
}

/// Which extremal weight of a coherent state pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Extremal {
    /// `|+j; n⟩`
    Up,
    /// `|-j; n⟩`
    Down,
}

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes `v`, returning the state and the squared norm it had.
    pub fn normalized(v: CVector) -> Result<(Self, f64)> {
        let weight = v.norm_squared();
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::ZeroWeight);
        }
        Ok((Self { amplitudes: v / C64::from(weight.sqrt()) }, weight))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// Angular momentum matrices in the `|j, m⟩` basis, `m = j, j-1, …, -j`.
#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
}

impl SpinOperators {
    /// `n·J`.
    pub fn along(&self, d: Direction) -> CMatrix {
        let n = d.unit_vector();
        &self.jx * C64::from(n.x) + &self.jy * C64::from(n.y) + &self.jz * C64::from(n.z)
    }
}

pub fn angular_momentum_ops(j: SpinJ) -> SpinOperators {
    let dim = j.dim();
    let jv = j.value();
    let m = |k: usize| jv - k as f64;
    let jz = CMatrix::from_fn(dim, dim, |r, c| if r == c { C64::from(m(r)) } else { C64::from(0.0) });
    // J+ |m⟩ = sqrt(j(j+1) - m(m+1)) |m+1⟩, i.e. entry (k-1, k).
    let mut jp = CMatrix::zeros(dim, dim);
    for k in 1..dim {
        let mk = m(k);
        jp[(k - 1, k)] = C64::from((jv * (jv + 1.0) - mk * (mk + 1.0)).sqrt());
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * C64::from(0.5);
    let jy = (&jp - &jm) * C64::new(0.0, -0.5);
    SpinOperators { jx, jy, jz }
}

/// `exp(-i t H)` for Hermitian `H` through its eigendecomposition.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    if t == 0.0 {
        return CMatrix::identity(h.nrows(), h.ncols());
    }
    let eig = SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let phases =
        CVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|&l| C64::from_polar(1.0, -t * l)));
    v * CMatrix::from_diagonal(&phases) * v.adjoint()
}

/// `e^{-iφJ_z} e^{-iθJ_y}`.
pub fn rotation_full(j: SpinJ, d: Direction) -> CMatrix {
    let ops = angular_momentum_ops(j);
    rotation_with(&ops, d)
}

pub(crate) fn rotation_with(ops: &SpinOperators, d: Direction) -> CMatrix {
    let jv = (ops.jz.nrows() as f64 - 1.0) / 2.0;
    let z_phase = CVector::from_iterator(
        ops.jz.nrows(),
        (0..ops.jz.nrows()).map(|k| C64::from_polar(1.0, -d.phi() * (jv - k as f64))),
    );
    let ry = expm_hermitian(&ops.jy, d.theta());
    CMatrix::from_diagonal(&z_phase) * ry
}

/// The spin-1/2 rotation `e^{-iφσ_z/2} e^{-iθσ_y/2}` in closed form.
pub fn spin_half_rotation(d: Direction) -> Mat2 {
    let (s, c) = (d.theta() / 2.0).sin_cos();
    let e = C64::from_polar(1.0, -d.phi() / 2.0);
    Mat2::new(e * c, -e * s, e.conj() * s, e.conj() * c)
}

/// `|±j; n⟩ = e^{-iφJ_z} e^{-iθJ_y} |j, ±j⟩`.
pub fn scs_state(j: SpinJ, d: Direction, which: Extremal) -> StateVector {
    let rot = rotation_full(j, d);
    scs_from_rotation(&rot, which)
}

pub(crate) fn scs_from_rotation(rot: &CMatrix, which: Extremal) -> StateVector {
    let col = match which {
        Extremal::Up => 0,
        Extremal::Down => rot.ncols() - 1,
    };
    StateVector { amplitudes: rot.column(col).into_owned() }
}

/// Both frame vectors `(|+j; n⟩, |-j; n⟩)` as the columns of a `(2j+1)×2`
/// matrix.
pub fn frame(j: SpinJ, d: Direction) -> CMatrix {
    let rot = rotation_full(j, d);
    let last = rot.ncols() - 1;
    CMatrix::from_columns(&[rot.column(0), rot.column(last)])
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Maps a `(2j+1)`-vector onto the symmetric subspace of `2j` spin-1/2
/// constituents without normalization checks.
pub fn dicke_embed_vector(j: SpinJ, v: &CVector) -> Result<CVector> {
    let dim = j.dim();
    if v.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
    }
    let n = j.twice_j();
    let mut out = CVector::zeros(1usize << n);
    let weights: Vec<f64> = (0..=n).map(|k| binomial(n, k).sqrt().recip()).collect();
    for (idx, amp) in out.iter_mut().enumerate() {
        let downs = idx.count_ones();
        *amp = v[downs as usize] * weights[downs as usize];
    }
    Ok(out)
}

/// `|j, m⟩ ↦` normalized symmetric sum of all strings with `j - m` down spins.
pub fn dicke_embed(j: SpinJ, v: &StateVector) -> Result<StateVector> {
    Ok(StateVector { amplitudes: dicke_embed_vector(j, v.amplitudes())? })
}

/// `‖U†U - I‖_max`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let prod = u.adjoint() * u;
    let id = CMatrix::identity(u.ncols(), u.ncols());
    (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn mat2_to_dynamic(m: &Mat2) -> CMatrix {
    CMatrix::from_fn(2, 2, |r, c| m[(r, c)])
}

pub fn dynamic_to_mat2(m: &CMatrix) -> Mat2 {
    Mat2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}
