//! Two-qubit gate built from auxiliary states of a second qubit.
//!
//! Frames are extended to `{|+j; n_a⟩ ⊗ |ζ_+⟩, |-j; n_a⟩ ⊗ |ζ_-⟩}` with
//! `ξ = ⟨ζ_+|ζ_-⟩`. At `ξ = 1` the single-qubit gates come back; at `ξ = 0`
//! every overlap is `diag(R, R*)` and the cycle is a controlled phase.

use nalgebra::{Matrix2, Vector4};

use crate::angle::wrap_pi;
use crate::error::{Error, Result};
use crate::holonomy::{self, HolonomyResult, MeasurementPath};
use crate::overlap::{self, OverlapMatrix};
use crate::spin::{self, Direction, SpinJ, Vec2, C64};

/// `|R|` at or below this leaves the leg phase undefined.
pub const ZERO_R: f64 = 1e-15;
const XI_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct AuxPair {
    pub zeta_plus: Vec2,
    pub zeta_minus: Vec2,
    /// `⟨ζ_+|ζ_-⟩`.
    pub xi: C64,
}

impl AuxPair {
    pub fn new(zeta_plus: Vec2, zeta_minus: Vec2) -> Result<Self> {
        for v in [&zeta_plus, &zeta_minus] {
            let norm = v.norm();
            if (norm - 1.0).abs() > spin::NORM_TOLERANCE {
                return Err(Error::NotNormalized { norm });
            }
        }
        let xi = zeta_plus.dotc(&zeta_minus);
        Ok(Self { zeta_plus, zeta_minus, xi })
    }

    /// `ζ_± = |±j⟩`, so `ξ = 0`.
    pub fn stretched() -> Self {
        let (one, zero) = (C64::from(1.0), C64::from(0.0));
        Self { zeta_plus: Vec2::new(one, zero), zeta_minus: Vec2::new(zero, one), xi: zero }
    }

    /// `ζ_+ = |j⟩`, `ζ_- = xi |j⟩ + sqrt(1 - xi²) |-j⟩` for real `xi ∈ [-1, 1]`.
    pub fn from_real_xi(xi: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&xi) {
            return Err(Error::InvalidArgument(format!("xi = {xi} outside [-1, 1]")));
        }
        let plus = Vec2::new(C64::from(1.0), C64::from(0.0));
        let minus = Vec2::new(C64::from(xi), C64::from((1.0 - xi * xi).max(0.0).sqrt()));
        Self::new(plus, minus)
    }

    fn is_gate_capable(&self) -> bool {
        let m = self.xi.norm();
        m <= XI_TOLERANCE || (m - 1.0).abs() <= XI_TOLERANCE
    }
}

/// `(F_a|F_b)` in the extended frames.
pub fn two_qubit_overlap(j: SpinJ, a: Direction, b: Direction, aux: &AuxPair) -> Result<OverlapMatrix> {
    j.require_gate_valid()?;
    let rs = overlap::rs_coefficients(j, a, b);
    let xs = aux.xi * rs.s;
    let weight = rs.r.norm_sqr() + xs.norm_sqr();
    if weight <= holonomy::DEGENERATE_WEIGHT {
        return Err(Error::DegenerateLeg(weight));
    }
    let matrix = Matrix2::new(rs.r, xs, -(aux.xi.conj() * rs.s.conj()), rs.r.conj());
    Ok(OverlapMatrix::from_parts(matrix, weight))
}

/// Holonomy of `path` in the extended frames.
pub fn two_qubit_holonomy(j: SpinJ, path: &MeasurementPath, aux: &AuxPair) -> Result<HolonomyResult> {
    let legs = path.legs().map(|(from, to)| two_qubit_overlap(j, to, from, aux)).collect::<Result<Vec<_>>>()?;
    holonomy::accumulate(j, &legs)
}

/// `Φ = Σ arg R` over the legs, wrapped to `(-π, π]`.
pub fn accumulated_phase(j: SpinJ, path: &MeasurementPath) -> Result<f64> {
    let mut total = 0.0;
    for (i, (from, to)) in path.legs().enumerate() {
        let r = overlap::rs_coefficients(j, to, from).r;
        if r.norm() <= ZERO_R {
            return Err(Error::ZeroR(i));
        }
        total += r.arg();
    }
    Ok(wrap_pi(total))
}

/// Two-qubit pure state over `{|j⟩, |-j⟩} ⊗ {|j⟩, |-j⟩}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitState {
    /// Renormalized `(w, x, y, z)` for `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub amplitudes: Vector4<C64>,
    /// Squared norm before renormalization.
    pub weight: f64,
}

impl TwoQubitState {
    pub fn from_unnormalized(v: Vector4<C64>) -> Self {
        let weight = v.norm_squared();
        let amplitudes = if weight > 0.0 { v / C64::from(weight.sqrt()) } else { v };
        Self { amplitudes, weight }
    }
}

/// Runs the cycle on `ψ ⊗ ψ̃` with `ψ` given in the first frame.
pub fn two_qubit_gate_action(
    j: SpinJ,
    path: &MeasurementPath,
    psi: &Vec2,
    psi_tilde: &Vec2,
    aux: &AuxPair,
) -> Result<TwoQubitState> {
    if !aux.is_gate_capable() {
        return Err(Error::UnsupportedXi(aux.xi.norm()));
    }
    for v in [psi, psi_tilde] {
        let norm = v.norm();
        if (norm - 1.0).abs() > spin::NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
    }
    let h = two_qubit_holonomy(j, path, aux)?;
    let c = Vec2::new(psi[0] * aux.zeta_plus.dotc(psi_tilde), psi[1] * aux.zeta_minus.dotc(psi_tilde));
    let out = h.d * c;
    let (zp, zm) = (&aux.zeta_plus, &aux.zeta_minus);
    let v = Vector4::new(out[0] * zp[0], out[0] * zp[1], out[1] * zm[0], out[1] * zm[1]);
    Ok(TwoQubitState::from_unnormalized(v))
}

/// `2|wz - xy|` of the renormalized state.
pub fn concurrence(state: &TwoQubitState) -> Result<f64> {
    if !(state.weight > 0.0) {
        return Err(Error::ZeroWeight);
    }
    let a = &state.amplitudes;
    Ok((2.0 * (a[0] * a[3] - a[1] * a[2]).norm()).min(1.0))
}
