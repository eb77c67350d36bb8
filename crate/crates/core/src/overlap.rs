//! Overlap matrices between coherent-state frames.
//!
//! For frames `F_a = {|+j; n_a⟩, |-j; n_a⟩}` the overlap matrix
//! `(F_a|F_b)_{kl} = ⟨a_k|b_l⟩` has the closed form
//!
//! ```text
//! ( R_ab              S_ab  )
//! ( (-1)^{2j} S_ab*   R_ab* )
//! ```
//!
//! with `R_ab`, `S_ab` the `2j`-th powers of the corresponding spin-1/2
//! amplitudes. For half-odd-integer `j` the matrix is a positive multiple of a
//! unitary, `(F_a|F_b) = κ_ab^{-1} U_ab` with `κ_ab^{-1} = sqrt(|R|² + |S|²)`.

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::spin::{self, CMatrix, Direction, Mat2, SpinJ, C64};

/// Smallest singular value accepted by [`polar_unitary`].
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

/// Tolerance on `‖M†M - κ^{-2} I‖` for flagging a matrix as proportional to
/// a unitary.
pub const PROPORTIONALITY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RsCoefficients {
    pub r: C64,
    pub s: C64,
    pub j: SpinJ,
    pub a: Direction,
    pub b: Direction,
}

impl RsCoefficients {
    /// `|R|² + |S|²`, i.e. `κ^{-2}`.
    pub fn weight(&self) -> f64 {
        self.r.norm_sqr() + self.s.norm_sqr()
    }
}

pub fn rs_coefficients(j: SpinJ, a: Direction, b: Direction) -> RsCoefficients {
    let half_diff_theta = (a.theta() - b.theta()) / 2.0;
    let half_sum_theta = (a.theta() + b.theta()) / 2.0;
    let (sin_dphi, cos_dphi) = ((a.phi() - b.phi()) / 2.0).sin_cos();
    let r1 = C64::new(half_diff_theta.cos() * cos_dphi, half_sum_theta.cos() * sin_dphi);
    let s1 = C64::new(half_diff_theta.sin() * cos_dphi, -half_sum_theta.sin() * sin_dphi);
    let power = j.twice_j();
    RsCoefficients { r: r1.powu(power), s: s1.powu(power), j, a, b }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OverlapMatrix {
    pub matrix: Mat2,
    /// `(|R|² + |S|²)^{-1/2}`; infinite when the frames are orthogonal.
    pub kappa: f64,
    /// Unitary polar factor of `matrix`.
    pub unitary: Mat2,
    /// Whether `matrix` is a positive multiple of `unitary` within
    /// [`PROPORTIONALITY_TOLERANCE`]. Always true for half-odd-integer `j`.
    pub proportional: bool,
}

impl OverlapMatrix {
    /// Builds the record for a matrix whose scalar `κ^{-1}` is already known.
    pub(crate) fn from_parts(matrix: Mat2, inv_kappa_sq: f64) -> Self {
        let kappa = inv_kappa_sq.sqrt().recip();
        let dynamic = spin::mat2_to_dynamic(&matrix);
        let (_, unitary) = polar_factors(&dynamic);
        let defect = proportionality_defect(&matrix, inv_kappa_sq);
        Self {
            matrix,
            kappa,
            unitary: spin::dynamic_to_mat2(&unitary),
            proportional: defect <= PROPORTIONALITY_TOLERANCE,
        }
    }
}

/// `‖M†M - c I‖_max`.
pub fn proportionality_defect(m: &Mat2, c: f64) -> f64 {
    let gram = m.adjoint() * m - Mat2::identity() * C64::from(c);
    gram.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn overlap_matrix(j: SpinJ, a: Direction, b: Direction) -> OverlapMatrix {
    let rs = rs_coefficients(j, a, b);
    let sign = C64::from(j.parity_sign());
    let matrix = Matrix2::new(rs.r, rs.s, sign * rs.s.conj(), rs.r.conj());
    OverlapMatrix::from_parts(matrix, rs.weight())
}

/// Left polar factors `M = P U` from the SVD `M = W Σ V†`:
/// `P = W Σ W†`, `U = W V†`. No singularity check.
pub(crate) fn polar_factors(m: &CMatrix) -> (CMatrix, CMatrix) {
    let svd = m.clone().svd(true, true);
    let w = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma = CMatrix::from_diagonal(&svd.singular_values.map(C64::from));
    let p = &w * sigma * w.adjoint();
    let u = w * v_t;
    (p, u)
}

/// Left polar decomposition `M = P U` of a nonsingular square matrix, with
/// `P = sqrt(M M†)` positive definite and `U` unitary.
pub fn polar_unitary(m: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
    }
    let smallest = m.singular_values().iter().copied().fold(f64::INFINITY, f64::min);
    if !(smallest > SINGULAR_TOLERANCE) {
        return Err(Error::SingularInput(smallest));
    }
    Ok(polar_factors(m))
}

/// Overlap matrix from explicit inner products of coherent state vectors.
pub fn overlap_bruteforce(j: SpinJ, a: Direction, b: Direction) -> Mat2 {
    let fa = spin::frame(j, a);
    let fb = spin::frame(j, b);
    spin::dynamic_to_mat2(&(fa.adjoint() * fb))
}
