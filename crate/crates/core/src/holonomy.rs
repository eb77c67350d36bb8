//! Holonomies of closed measurement sequences.
//!
//! A path `n_1 → n_2 → … → n_q → n_1` of filtering measurements maps an input
//! `|ψ⟩` in the first subspace to `Σ_kl |1_k⟩ D_kl ⟨1_l|ψ⟩` with
//! `D = (F_1|F_q)(F_q|F_{q-1}) ⋯ (F_2|F_1)`. The holonomy is the unitary polar
//! factor `U_D` of `D`, and `‖D ψ⟩‖²` is the probability that every filtering
//! step succeeds.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::{self, wrap_pi};
use crate::error::{Error, Result};
use crate::overlap::{self, OverlapMatrix};
use crate::spin::{self, Direction, Mat2, SpinJ, Vec2, C64};

/// Legs with `|R|² + |S|²` at or below this are treated as orthogonal.
pub const DEGENERATE_WEIGHT: f64 = 1e-24;

const LABEL_TOLERANCE: f64 = 1e-12;

/// Closed sequence of measurement directions; the first and last vertex label
/// the same subspace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPath {
    vertices: Vec<Direction>,
}

impl MeasurementPath {
    pub fn new(vertices: Vec<Direction>) -> Result<Self> {
        let (Some(first), Some(last)) = (vertices.first(), vertices.last()) else {
            return Err(Error::InvalidPath("empty path".into()));
        };
        if vertices.len() < 2 {
            return Err(Error::InvalidPath("a cycle needs at least two vertices".into()));
        }
        if !first.same_label(*last, LABEL_TOLERANCE) {
            return Err(Error::InvalidPath(format!(
                "path is not closed: starts at ({}, {}) and ends at ({}, {})",
                first.theta(),
                first.phi(),
                last.theta(),
                last.phi()
            )));
        }
        Ok(Self { vertices })
    }

    /// Convenience constructor from raw `(θ, φ)` pairs.
    pub fn from_angles(angles: &[(f64, f64)]) -> Result<Self> {
        let vertices = angles.iter().map(|&(t, p)| Direction::new(t, p)).collect::<Result<Vec<_>>>()?;
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[Direction] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn start(&self) -> Direction {
        self.vertices[0]
    }

    /// Consecutive `(from, to)` pairs in traversal order.
    pub fn legs(&self) -> impl Iterator<Item = (Direction, Direction)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self { vertices }
    }

    /// Runs `other` after `self`; the shared endpoint is measured once.
    pub fn concat(&self, other: &MeasurementPath) -> Result<Self> {
        if !self.start().same_label(other.start(), LABEL_TOLERANCE) {
            return Err(Error::InvalidPath("paths start in different subspaces".into()));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        Ok(Self { vertices })
    }

    /// Parses the text path format: one `theta phi` vertex per line, angles
    /// as decimal radians or `k*pi/m`, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, PathParseError> {
        let mut vertices = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| PathParseError { line: line_no, message };
            let fields: Vec<&str> = content.split_whitespace().collect();
            let [theta, phi] = fields.as_slice() else {
                return Err(err(format!("expected `theta phi`, found {} fields", fields.len())));
            };
            let theta = angle::parse_angle(theta).map_err(|e| err(e.to_string()))?;
            let phi = angle::parse_angle(phi).map_err(|e| err(e.to_string()))?;
            let d = Direction::new(theta, phi).map_err(|e| err(e.to_string()))?;
            vertices.push(d);
        }
        Self::new(vertices).map_err(|e| PathParseError { line: last_line, message: e.to_string() })
    }

    /// Inverse of [`MeasurementPath::parse`] with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "{:.16e} {:.16e}", v.theta(), v.phi());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct PathParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HolonomyResult {
    pub j: SpinJ,
    /// `D`, the ordered product of overlap matrices.
    pub d: Mat2,
    /// Unitary polar factor of `D`.
    pub unitary: Mat2,
    /// Product of the per-leg `κ`, so that `D = unitary / kappa_product`.
    pub kappa_product: f64,
    /// Survival probability for [`default_input`].
    pub default_survival: f64,
}

/// `(|0⟩ + |1⟩)/√2`, the input used when none is given.
pub fn default_input() -> Vec2 {
    Vec2::new(C64::from(FRAC_1_SQRT_2), C64::from(FRAC_1_SQRT_2))
}

impl HolonomyResult {
    pub fn survival_probability(&self, input: &Vec2) -> f64 {
        (self.d * input).norm_squared().clamp(0.0, 1.0)
    }

    /// `arg(U_00 / U_11)` in `(-π, π]`. A holonomy with relative phase `φ`
    /// acts as `diag(e^{iφ/2}, e^{-iφ/2})` on the diagonal.
    pub fn relative_phase(&self) -> f64 {
        relative_phase_of(&self.unitary)
    }

    pub fn max_offdiag(&self) -> f64 {
        self.unitary[(0, 1)].norm().max(self.unitary[(1, 0)].norm())
    }
}

pub fn relative_phase_of(u: &Mat2) -> f64 {
    wrap_pi((u[(0, 0)] * u[(1, 1)].conj()).arg())
}

/// Multiplies a sequence of leg overlaps (in traversal order) into a holonomy.
pub(crate) fn accumulate(j: SpinJ, legs: &[OverlapMatrix]) -> Result<HolonomyResult> {
    let mut d = Mat2::identity();
    let mut scaled = Mat2::identity();
    let mut kappa_product = 1.0;
    for leg in legs {
        d = leg.matrix * d;
        // Rescaling every leg keeps the product O(1) on long paths.
        scaled = (leg.matrix * C64::from(leg.kappa)) * scaled;
        kappa_product *= leg.kappa;
    }
    let (_, unitary) = overlap::polar_unitary(&spin::mat2_to_dynamic(&scaled))?;
    let unitary = spin::dynamic_to_mat2(&unitary);
    let mut result = HolonomyResult { j, d, unitary, kappa_product, default_survival: 0.0 };
    result.default_survival = result.survival_probability(&default_input());
    Ok(result)
}

pub fn holonomy(j: SpinJ, path: &MeasurementPath) -> Result<HolonomyResult> {
    j.require_gate_valid()?;
    let legs = path
        .legs()
        .enumerate()
        .map(|(i, (from, to))| {
            let rs = overlap::rs_coefficients(j, to, from);
            let weight = rs.weight();
            if weight <= DEGENERATE_WEIGHT {
                return Err(Error::DegenerateCycle { leg: i, weight });
            }
            Ok(overlap::overlap_matrix(j, to, from))
        })
        .collect::<Result<Vec<_>>>()?;
    accumulate(j, &legs)
}

pub fn survival_probability(j: SpinJ, path: &MeasurementPath, input: &Vec2) -> Result<f64> {
    let norm = input.norm();
    if (norm - 1.0).abs() > spin::NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm });
    }
    Ok(holonomy(j, path)?.survival_probability(input))
}

/// `4^{-2n} (cos^{2+4n}(φ/2) + sin^{2+4n}(φ/2))`, the survival probability of
/// the z-rotation cycle `(0,0) → (π/2,π) → (π/2,φ) → (0,0)`.
pub fn transition_amplitude_closed_form(n: u32, varphi: f64) -> f64 {
    let (s, c) = (varphi / 2.0).sin_cos();
    let p = 2 + 4 * n as i32;
    (c.powi(p) + s.powi(p)) * 4f64.powi(-2 * n as i32)
}

/// Subdivides every leg into `steps_per_leg` equal-angle steps along the
/// great circle between its endpoints. Original vertices are kept verbatim.
pub fn densify_path(path: &MeasurementPath, steps_per_leg: usize) -> Result<MeasurementPath> {
    if steps_per_leg == 0 {
        return Err(Error::InvalidArgument("steps_per_leg must be positive".into()));
    }
    let mut vertices = vec![path.start()];
    for (i, (from, to)) in path.legs().enumerate() {
        let (va, vb) = (from.unit_vector(), to.unit_vector());
        let cos_omega = va.dot(&vb).clamp(-1.0, 1.0);
        if steps_per_leg > 1 && cos_omega < -1.0 + 1e-12 {
            return Err(Error::AntipodalLeg(i));
        }
        let omega = cos_omega.acos();
        for step in 1..steps_per_leg {
            let t = step as f64 / steps_per_leg as f64;
            vertices.push(slerp(from, va, vb, omega, t)?);
        }
        vertices.push(to);
    }
    MeasurementPath::new(vertices)
}

fn slerp(from: Direction, va: Vector3<f64>, vb: Vector3<f64>, omega: f64, t: f64) -> Result<Direction> {
    if omega < 1e-15 {
        return Ok(from);
    }
    let so = omega.sin();
    let v = va * (((1.0 - t) * omega).sin() / so) + vb * ((t * omega).sin() / so);
    Direction::from_unit_vector(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZenoRow {
    pub steps_per_leg: usize,
    pub relative_phase: f64,
    pub survival_probability: f64,
    pub max_offdiag: f64,
}

/// Holonomy observables of `base` densified to each of `step_counts`.
pub fn zeno_sweep(j: SpinJ, base: &MeasurementPath, input: &Vec2, step_counts: &[usize]) -> Result<Vec<ZenoRow>> {
    j.require_gate_valid()?;
    let norm = input.norm();
    if (norm - 1.0).abs() > spin::NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm });
    }
    step_counts
        .par_iter()
        .map(|&steps| {
            let path = densify_path(base, steps)?;
            let h = holonomy(j, &path)?;
            Ok(ZenoRow {
                steps_per_leg: steps,
                relative_phase: h.relative_phase(),
                survival_probability: h.survival_probability(input),
                max_offdiag: h.max_offdiag(),
            })
        })
        .collect()
}

/// Relative phase `-2jφ` (wrapped) of the continuous-path holonomy
/// `exp(i j σ_z φ)` reached in the dense-measurement limit.
pub fn zeno_predicted_phase(j: SpinJ, varphi: f64) -> f64 {
    wrap_pi(-(j.twice_j() as f64) * varphi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn z_path(varphi: f64) -> MeasurementPath {
        MeasurementPath::from_angles(&[(0.0, 0.0), (FRAC_PI_2, PI), (FRAC_PI_2, varphi), (0.0, 0.0)]).unwrap()
    }

    #[test]
    fn path_validation() {
        assert!(MeasurementPath::from_angles(&[]).is_err());
        assert!(MeasurementPath::from_angles(&[(0.0, 0.0)]).is_err());
        assert!(MeasurementPath::from_angles(&[(0.0, 0.0), (1.0, 0.0)]).is_err());
        assert!(MeasurementPath::from_angles(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]).is_ok());
    }

    #[test]
    fn trivial_path() {
        let j = SpinJ::half_odd(1);
        let p = MeasurementPath::from_angles(&[(0.4, 1.0); 4]).unwrap();
        let h = holonomy(j, &p).unwrap();
        assert!((h.unitary - Mat2::identity()).norm() < 1e-12);
        assert!((h.kappa_product - 1.0).abs() < 1e-12);
        assert!((h.default_survival - 1.0).abs() < 1e-12);
    }

    #[test]
    fn z_path_matches_three_halves_closed_form() {
        // diag(1 + 3e^{-2iφ}, 1 + 3e^{2iφ}) up to a global phase.
        let j = SpinJ::half_odd(1);
        for varphi in [0.2, 1.0, 2.5, 4.0] {
            let h = holonomy(j, &z_path(varphi)).unwrap();
            let e = C64::from_polar(3.0, -2.0 * varphi);
            let closed = Mat2::new(C64::from(1.0) + e, C64::from(0.0), C64::from(0.0), C64::from(1.0) + e.conj());
            let closed = closed / C64::from((10.0 + 6.0 * (2.0 * varphi).cos()).sqrt());
            let overlap = (h.unitary.adjoint() * closed).trace().norm() / 2.0;
            assert!((overlap - 1.0).abs() < 1e-12, "{varphi}");
            assert!(h.unitary[(0, 1)].norm() < 1e-12);
        }
    }

    #[test]
    fn unitary_and_scalar_structure() {
        let j = SpinJ::half_odd(2);
        let p = MeasurementPath::from_angles(&[(0.0, 0.0), (1.0, 2.0), (2.2, 4.4), (0.0, 0.0)]).unwrap();
        let h = holonomy(j, &p).unwrap();
        assert!((h.unitary.adjoint() * h.unitary - Mat2::identity()).norm() < 1e-10);
        assert!((h.d * C64::from(h.kappa_product) - h.unitary).norm() < 1e-10);
    }

    #[test]
    fn survival_examples() {
        let j = SpinJ::half_odd(1);
        let input = default_input();
        assert!((survival_probability(j, &z_path(0.0), &input).unwrap() - 1.0 / 16.0).abs() < 1e-12);
        assert!((survival_probability(j, &z_path(FRAC_PI_2), &input).unwrap() - 1.0 / 64.0).abs() < 1e-12);
        let bad = Vec2::new(C64::from(1.0), C64::from(1.0));
        assert!(survival_probability(j, &z_path(0.0), &bad).is_err());
    }

    #[test]
    fn closed_form_transition_values() {
        assert!((transition_amplitude_closed_form(1, 0.0) - 1.0 / 16.0).abs() < 1e-15);
        assert!((transition_amplitude_closed_form(1, FRAC_PI_2) - 1.0 / 64.0).abs() < 1e-15);
        for v in [0.0, 0.3, 2.0, 5.5] {
            assert!((transition_amplitude_closed_form(0, v) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn integer_spin_rejected() {
        let j = SpinJ::from_twice(2).unwrap();
        assert!(matches!(holonomy(j, &z_path(0.3)), Err(Error::NotGateSpin(2))));
    }

    #[test]
    fn densify_examples() {
        let base = MeasurementPath::from_angles(&[(0.0, 0.0), (FRAC_PI_2, 0.0), (FRAC_PI_2, 0.9), (0.0, 0.0)]).unwrap();
        assert_eq!(densify_path(&base, 1).unwrap(), base);
        let two = densify_path(&base, 2).unwrap();
        assert_eq!(two.len(), 7);
        assert!(two.vertices()[1].same_label(Direction::new(FRAC_PI_4, 0.0).unwrap(), 1e-14));
        let k = 5;
        let many = densify_path(&base, k).unwrap();
        for i in 1..k {
            let v = many.vertices()[k + i];
            assert!(v.same_label(Direction::new(FRAC_PI_2, 0.9 * i as f64 / k as f64).unwrap(), 1e-14));
        }
        assert_eq!(many.vertices()[0], base.vertices()[0]);
        assert_eq!(many.vertices()[3 * k], base.vertices()[3]);
        assert!(densify_path(&base, 0).is_err());
    }

    #[test]
    fn densify_rejects_antipodal_leg() {
        let p = MeasurementPath::from_angles(&[(0.0, 0.0), (PI, 0.0), (0.0, 0.0)]).unwrap();
        assert!(matches!(densify_path(&p, 3), Err(Error::AntipodalLeg(0))));
    }

    #[test]
    fn predicted_phase_values() {
        let j = SpinJ::half_odd(1);
        assert!((zeno_predicted_phase(j, FRAC_PI_4) + 3.0 * FRAC_PI_4).abs() < 1e-15);
        assert_eq!(zeno_predicted_phase(j, 0.0), 0.0);
        assert!(zeno_predicted_phase(j, 2.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn predicted_phase_wraps_consistently_with_dense_limit() {
        // varphi = 2π/3 wraps -2π to 0; the N = 512 sweep must land there.
        let j = SpinJ::half_odd(1);
        let varphi = 2.0 * PI / 3.0;
        let base =
            MeasurementPath::from_angles(&[(0.0, 0.0), (FRAC_PI_2, 0.0), (FRAC_PI_2, varphi), (0.0, 0.0)]).unwrap();
        let rows = zeno_sweep(j, &base, &default_input(), &[512]).unwrap();
        let gap = wrap_pi(rows[0].relative_phase - zeno_predicted_phase(j, varphi)).abs();
        assert!(gap < 1e-3, "{gap}");
    }

    #[test]
    fn path_text_format() {
        let text = "# T gate\n0 0\npi/2 pi   # second\n\n  pi/2 1.4384016082329931\n0 0\n";
        let p = MeasurementPath::parse(text).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.vertices()[1], Direction::new(FRAC_PI_2, PI).unwrap());
        let again = MeasurementPath::parse(&p.to_text()).unwrap();
        assert_eq!(again, p);

        let err = MeasurementPath::parse("0 0\npi/2\n0 0\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = MeasurementPath::parse("0 0\n1 x\n0 0\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = MeasurementPath::parse("0 0\n1 1\n").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
