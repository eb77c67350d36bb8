//! Phase relation, subspace-angle solving and gate compilation.
//!
//! The four-measurement z cycle `(0,0) → (π/2,π) → (π/2,φ) → (0,0)` gives
//! `U_D ∝ diag(z*, z)` with
//! `z = e^{i(2n+1)φ/2}((-1)^n cos^{2n+1}(φ/2) - i sin^{2n+1}(φ/2))`.
//! Its relative phase `arg(z*/z)` equals `arg(U_00/U_11)`, so a cycle with
//! relative phase `ϕ` implements `D_z(-ϕ)`; the x and y cycles behave the
//! same way about their axes.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angle::{wrap_pi, wrap_tau};
use crate::error::{Error, Result};
use crate::holonomy::{self, MeasurementPath};
use crate::spin::{Direction, Mat2, SpinJ, C64};

/// Residual accepted after bisection.
pub const ROOT_RESIDUAL: f64 = 1e-12;
/// Roots closer than this are merged.
pub const ROOT_MERGE: f64 = 1e-9;
/// Minimum fidelity a synthesized sequence must reach against its target.
pub const RECOMPOSITION_FLOOR: f64 = 1.0 - 1e-9;

const UNITARY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(Error::InvalidArgument(format!("unknown axis `{other}`"))),
        }
    }
}

/// `D_axis(angle) = exp(-i angle σ_axis / 2)`.
pub fn rotation_matrix(axis: Axis, angle: f64) -> Mat2 {
    let (s, c) = (angle / 2.0).sin_cos();
    let (c, zero) = (C64::from(c), C64::from(0.0));
    match axis {
        Axis::X => Mat2::new(c, C64::new(0.0, -s), C64::new(0.0, -s), c),
        Axis::Y => Mat2::new(c, C64::from(-s), C64::from(s), c),
        Axis::Z => Mat2::new(C64::from_polar(1.0, -angle / 2.0), zero, zero, C64::from_polar(1.0, angle / 2.0)),
    }
}

/// The z-cycle diagonal factor `z(n, φ)`.
pub fn z_factor(n: u32, varphi: f64) -> C64 {
    let (s, c) = (varphi / 2.0).sin_cos();
    let p = 2 * n as i32 + 1;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    C64::from_polar(1.0, p as f64 * varphi / 2.0) * C64::new(sign * c.powi(p), -s.powi(p))
}

/// `arg(z*/z)` in `(-π, π]`.
pub fn relative_phase(n: u32, varphi: f64) -> f64 {
    let zc = z_factor(n, varphi).conj();
    wrap_pi((zc * zc).arg())
}

/// Target relative phase for a rotation by `angle`.
pub fn target_phase_for(angle: f64) -> f64 {
    wrap_pi(-angle)
}

/// All `φ ∈ [0, 2π)` with `relative_phase(n, φ) = target_phase`, ascending.
///
/// For `n = 0` the relative phase vanishes identically; the only reported
/// root is `0` (for target 0).
pub fn solve_subspace_angle(n: u32, target_phase: f64) -> Vec<f64> {
    let residual = |v: f64| wrap_pi(relative_phase(n, v) - target_phase);
    if n == 0 {
        return if residual(0.0).abs() <= ROOT_RESIDUAL { vec![0.0] } else { Vec::new() };
    }
    let cells = 4096 * n as usize;
    let h = TAU / cells as f64;
    let values: Vec<f64> = (0..=cells).map(|k| residual(k as f64 * h)).collect();

    let mut roots = Vec::new();
    for k in 0..cells {
        let (fa, fb) = (values[k], values[k + 1]);
        if fa == 0.0 {
            roots.push(k as f64 * h);
            continue;
        }
        if fb == 0.0 || fa.signum() == fb.signum() {
            continue;
        }
        let root = bisect(&residual, k as f64 * h, (k + 1) as f64 * h, fa);
        // Sign changes across the ±π branch cut land here with residual ≈ π.
        if residual(root).abs() <= ROOT_RESIDUAL {
            roots.push(root);
        }
    }
    merge_roots(roots)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

fn merge_roots(mut roots: Vec<f64>) -> Vec<f64> {
    for r in roots.iter_mut() {
        *r = wrap_tau(*r);
        if TAU - *r < ROOT_MERGE {
            *r = 0.0;
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|b, a| (*b - *a).abs() < ROOT_MERGE);
    roots
}

/// The four-vertex cycle rotating about `axis` with subspace angle `varphi`.
pub fn rotation_path(n: u32, axis: Axis, varphi: f64) -> Result<MeasurementPath> {
    let north = Direction::NORTH;
    let vertices = match axis {
        Axis::Z => vec![north, Direction::new(FRAC_PI_2, PI)?, Direction::new(FRAC_PI_2, varphi)?, north],
        Axis::X => vec![north, Direction::new(FRAC_PI_2, PI)?, Direction::from_any_polar(varphi, FRAC_PI_2)?, north],
        Axis::Y => {
            let phi = if n.is_multiple_of(2) { 0.0 } else { PI };
            vec![north, Direction::from_any_polar(varphi, phi)?, Direction::new(FRAC_PI_2, FRAC_PI_2)?, north]
        }
    };
    MeasurementPath::new(vertices)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootChoice {
    pub varphi: f64,
    /// Position of the chosen root among `candidates`.
    pub index: usize,
    pub candidates: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub axis: Axis,
    /// Rotation angle this segment is meant to implement.
    pub angle: f64,
    pub target_phase: f64,
    pub root: RootChoice,
    pub path: MeasurementPath,
    /// Unitary polar part of the segment's holonomy.
    pub holonomy: Mat2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthesizedSequence {
    pub j: SpinJ,
    pub segments: Vec<Segment>,
    pub predicted_unitary: Mat2,
    /// Product of segment holonomies, later segments acting after earlier.
    pub composed_unitary: Mat2,
    pub recomposition_fidelity: f64,
}

impl SynthesizedSequence {
    fn assemble(j: SpinJ, segments: Vec<Segment>, predicted_unitary: Mat2) -> Result<Self> {
        let composed_unitary = segments.iter().fold(Mat2::identity(), |acc, s| s.holonomy * acc);
        let recomposition_fidelity = fidelity_up_to_phase(&composed_unitary, &predicted_unitary);
        if recomposition_fidelity < RECOMPOSITION_FLOOR {
            return Err(Error::ContractViolation(format!(
                "recomposition fidelity {recomposition_fidelity} below {RECOMPOSITION_FLOOR}"
            )));
        }
        Ok(Self { j, segments, predicted_unitary, composed_unitary, recomposition_fidelity })
    }

    /// `(φ, root index)` per segment.
    pub fn branch_choices(&self) -> Vec<(f64, usize)> {
        self.segments.iter().map(|s| (s.root.varphi, s.root.index)).collect()
    }

    /// The full vertex list with the shared north pole between consecutive
    /// segments measured once.
    pub fn vertices(&self) -> Vec<Direction> {
        let mut out: Vec<Direction> = Vec::new();
        for seg in &self.segments {
            let skip = usize::from(!out.is_empty());
            out.extend_from_slice(&seg.path.vertices()[skip..]);
        }
        out
    }

    pub fn full_path(&self) -> Result<MeasurementPath> {
        MeasurementPath::new(self.vertices())
    }
}

fn make_segment(n: u32, axis: Axis, angle: f64, choice: RootChoice, path: MeasurementPath) -> Result<Segment> {
    let h = holonomy::holonomy(SpinJ::half_odd(n), &path)?;
    Ok(Segment { axis, angle, target_phase: target_phase_for(angle), root: choice, path, holonomy: h.unitary })
}

fn smallest_root_segment(n: u32, axis: Axis, angle: f64) -> Result<Segment> {
    let target = target_phase_for(angle);
    let candidates = solve_subspace_angle(n, target);
    let Some(&varphi) = candidates.first() else {
        return Err(Error::NoRoot { target });
    };
    let path = rotation_path(n, axis, varphi)?;
    make_segment(n, axis, angle, RootChoice { varphi, index: 0, candidates }, path)
}

/// Single-segment sequence realizing `D_axis(angle)` with the smallest root.
pub fn synth_rotation(n: u32, axis: Axis, angle: f64) -> Result<SynthesizedSequence> {
    synth_rotations(n, &[(axis, angle)])
}

/// Rotations applied in the given (time) order.
pub fn synth_rotations(n: u32, rotations: &[(Axis, f64)]) -> Result<SynthesizedSequence> {
    let segments =
        rotations.iter().map(|&(axis, angle)| smallest_root_segment(n, axis, angle)).collect::<Result<Vec<_>>>()?;
    let predicted = rotations.iter().fold(Mat2::identity(), |acc, &(a, t)| rotation_matrix(a, t) * acc);
    SynthesizedSequence::assemble(SpinJ::half_odd(n), segments, predicted)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CliffordGate {
    T,
    S,
    H,
}

impl CliffordGate {
    pub fn matrix(self) -> Mat2 {
        let zero = C64::from(0.0);
        let one = C64::from(1.0);
        match self {
            CliffordGate::T => Mat2::new(one, zero, zero, C64::from_polar(1.0, FRAC_PI_4)),
            CliffordGate::S => Mat2::new(one, zero, zero, C64::new(0.0, 1.0)),
            CliffordGate::H => Mat2::new(one, one, one, -one) * C64::from(std::f64::consts::FRAC_1_SQRT_2),
        }
    }
}

impl FromStr for CliffordGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "T" => Ok(CliffordGate::T),
            "S" => Ok(CliffordGate::S),
            "H" => Ok(CliffordGate::H),
            other => Err(Error::InvalidArgument(format!("unknown gate `{other}`"))),
        }
    }
}

/// Which angle table [`synth_clifford_t`] follows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum CliffordTable {
    /// Solve for the requested gate. T and S use the smallest roots of
    /// `D_z(π/4)` and `D_z(π/2)`.
    #[default]
    Compiled,
    /// The tabulated n = 1 angles (`φ_T`, `φ_S`, `arctan √2`). Under the
    /// holonomy convention used here its T and S rows implement `T†` and
    /// `S†`; its H row implements H.
    Printed,
    /// As `Printed`, with the fifth H vertex `(π/2, π)` replaced by `(π/2, 0)`.
    PrintedAlternateH,
}

/// `2 arcsec(2 sqrt(6 / (sqrt(6 (sqrt2 - sqrt(36 sqrt2 + 70) + 10)) + 12)))`.
pub fn phi_t() -> f64 {
    let s2 = 2f64.sqrt();
    let inner = (6.0 * (s2 - (36.0 * s2 + 70.0).sqrt() + 10.0)).sqrt() + 12.0;
    let x = 2.0 * (6.0 / inner).sqrt();
    2.0 * (1.0 / x).acos()
}

/// `arctan((3 + √17) / 2)`.
pub fn phi_s() -> f64 {
    ((3.0 + 17f64.sqrt()) / 2.0).atan()
}

/// `arctan √2`.
pub fn phi_h() -> f64 {
    2f64.sqrt().atan()
}

pub fn synth_clifford_t(n: u32, gate: CliffordGate, table: CliffordTable) -> Result<SynthesizedSequence> {
    if n == 0 {
        return Err(Error::NotGateSpin(1));
    }
    match table {
        CliffordTable::Compiled => match gate {
            CliffordGate::T => synth_rotation(n, Axis::Z, FRAC_PI_4),
            CliffordGate::S => synth_rotation(n, Axis::Z, FRAC_PI_2),
            CliffordGate::H => synth_rotations(n, &[(Axis::Y, -FRAC_PI_2), (Axis::Z, PI)]),
        },
        CliffordTable::Printed | CliffordTable::PrintedAlternateH => {
            let alternate = table == CliffordTable::PrintedAlternateH;
            printed_sequence(n, gate, alternate)
        }
    }
}

/// Segment whose angle is fixed by `fixed` for n = 1 and solved otherwise.
fn printed_segment(n: u32, axis: Axis, angle: f64, fixed: f64) -> Result<Segment> {
    let target = target_phase_for(angle);
    let candidates = solve_subspace_angle(n, target);
    if n != 1 {
        return smallest_root_segment(n, axis, angle);
    }
    let index = nearest_index(&candidates, fixed).ok_or(Error::NoRoot { target })?;
    let path = rotation_path(n, axis, fixed)?;
    make_segment(n, axis, angle, RootChoice { varphi: fixed, index, candidates }, path)
}

fn nearest_index(candidates: &[f64], value: f64) -> Option<usize> {
    candidates.iter().enumerate().min_by(|a, b| (a.1 - value).abs().total_cmp(&(b.1 - value).abs())).map(|(i, _)| i)
}

fn printed_sequence(n: u32, gate: CliffordGate, alternate_h: bool) -> Result<SynthesizedSequence> {
    let j = SpinJ::half_odd(n);
    let (segments, predicted) = match gate {
        CliffordGate::T => {
            let seg = printed_segment(n, Axis::Z, -FRAC_PI_4, phi_t())?;
            (vec![seg], rotation_matrix(Axis::Z, -FRAC_PI_4))
        }
        CliffordGate::S => {
            let seg = printed_segment(n, Axis::Z, -FRAC_PI_2, phi_s())?;
            (vec![seg], rotation_matrix(Axis::Z, -FRAC_PI_2))
        }
        CliffordGate::H => {
            let y = printed_segment(n, Axis::Y, -FRAC_PI_2, phi_s())?;
            let mut z = printed_segment(n, Axis::Z, PI, phi_h())?;
            if alternate_h {
                let mut v = z.path.vertices().to_vec();
                v[1] = Direction::new(FRAC_PI_2, 0.0)?;
                z.path = MeasurementPath::new(v)?;
                z.holonomy = holonomy::holonomy(j, &z.path)?.unitary;
            }
            (vec![y, z], CliffordGate::H.matrix())
        }
    };
    SynthesizedSequence::assemble(j, segments, predicted)
}

/// Euler angles with `U = e^{iδ} D_z(α) D_y(β) D_z(γ)` and `β ∈ [0, π]`.
pub fn zyz_decompose(u: &Mat2) -> Result<(f64, f64, f64)> {
    let defect = (u.adjoint() * u - Mat2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > UNITARY_TOLERANCE {
        return Err(Error::NotUnitary(defect));
    }
    let (c, s) = (u[(0, 0)].norm(), u[(1, 0)].norm());
    let beta = 2.0 * s.atan2(c);
    const EPS: f64 = 1e-14;
    let (alpha, gamma) = if s < EPS {
        ((u[(1, 1)] * u[(0, 0)].conj()).arg(), 0.0)
    } else if c < EPS {
        ((u[(1, 0)] * (-u[(0, 1)]).conj()).arg(), 0.0)
    } else {
        ((u[(1, 0)] * u[(0, 0)].conj()).arg(), (u[(1, 1)] * u[(1, 0)].conj()).arg())
    };
    let (alpha, gamma) = (wrap_pi(alpha), wrap_pi(gamma));
    let clean = |x: f64| if x.abs() < EPS { 0.0 } else { x };
    Ok((clean(alpha), clean(beta), clean(gamma)))
}

pub fn zyz_compose(alpha: f64, beta: f64, gamma: f64) -> Mat2 {
    rotation_matrix(Axis::Z, alpha) * rotation_matrix(Axis::Y, beta) * rotation_matrix(Axis::Z, gamma)
}

/// Three segments `z(γ)`, `y(β)`, `z(α)` in time order.
pub fn compile_su2(n: u32, u: &Mat2) -> Result<SynthesizedSequence> {
    let (alpha, beta, gamma) = zyz_decompose(u)?;
    let mut seq = synth_rotations(n, &[(Axis::Z, gamma), (Axis::Y, beta), (Axis::Z, alpha)])?;
    seq.predicted_unitary = *u;
    seq.recomposition_fidelity = fidelity_up_to_phase(&seq.composed_unitary, u);
    if seq.recomposition_fidelity < RECOMPOSITION_FLOOR {
        return Err(Error::ContractViolation(format!(
            "compiled fidelity {} below {RECOMPOSITION_FLOOR}",
            seq.recomposition_fidelity
        )));
    }
    Ok(seq)
}

/// `|tr(U†V)| / 2`.
pub fn fidelity_up_to_phase(u: &Mat2, v: &Mat2) -> f64 {
    ((u.adjoint() * v).trace().norm() / 2.0).min(1.0)
}
