//! Reference computations that avoid the library's own numerics.
#![allow(dead_code)]

use discrete_holonomy::{CMatrix, CVector, Direction, Mat2, SpinJ, Vec2, C64};
use rand::Rng;

/// `J_y` in the `m = j, j-1, ..., -j` basis from the ladder matrix elements.
pub fn jy(j: SpinJ) -> CMatrix {
    let dim = j.dim();
    let jv = j.value();
    let mut out = CMatrix::zeros(dim, dim);
    for k in 1..dim {
        // <m+1| J+ |m> with m = j - k
        let m = jv - k as f64;
        let c = (jv * (jv + 1.0) - m * (m + 1.0)).sqrt();
        out[(k - 1, k)] = C64::new(0.0, -c / 2.0);
        out[(k, k - 1)] = C64::new(0.0, c / 2.0);
    }
    out
}

/// Frame columns `(|+j; n⟩, |-j; n⟩)` built with a Padé matrix exponential.
pub fn frame_pade(j: SpinJ, d: Direction) -> CMatrix {
    let dim = j.dim();
    let jv = j.value();
    let ry = (jy(j) * C64::new(0.0, -d.theta())).exp();
    let rz = CMatrix::from_diagonal(&CVector::from_iterator(
        dim,
        (0..dim).map(|k| C64::from_polar(1.0, -d.phi() * (jv - k as f64))),
    ));
    let rot = rz * ry;
    CMatrix::from_columns(&[rot.column(0), rot.column(dim - 1)])
}

/// `⟨frame(a)|frame(b)⟩` as a 2×2 matrix.
pub fn overlap_ref(j: SpinJ, a: Direction, b: Direction) -> Mat2 {
    let m = frame_pade(j, a).adjoint() * frame_pade(j, b);
    Mat2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}

/// Ordered product of frame overlaps around the vertex list.
pub fn cycle_product(j: SpinJ, vertices: &[Direction]) -> Mat2 {
    vertices.windows(2).fold(Mat2::identity(), |acc, w| overlap_ref(j, w[1], w[0]) * acc)
}

/// `(M M†)^{-1/2} M` with the 2×2 square root in closed form.
pub fn polar_ref(m: &Mat2) -> Mat2 {
    let a = m * m.adjoint();
    let s = a.determinant().re.max(0.0).sqrt();
    let t = (a.trace().re + 2.0 * s).sqrt();
    let sqrt_a = (a + Mat2::identity() * C64::from(s)) / C64::from(t);
    sqrt_a.try_inverse().expect("nonsingular") * m
}

pub fn fidelity(u: &Mat2, v: &Mat2) -> f64 {
    ((u.adjoint() * v).trace().norm() / 2.0).powi(2)
}

pub fn max_diff(a: &Mat2, b: &Mat2) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn random_direction<R: Rng>(rng: &mut R) -> Direction {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    Direction::new(z.acos(), phi).unwrap()
}

pub fn random_qubit<R: Rng>(rng: &mut R) -> Vec2 {
    let mut g = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let v = Vec2::new(g(), g());
    v / C64::from(v.norm())
}

/// Random SU(2) element from a normalized quaternion.
pub fn random_su2<R: Rng>(rng: &mut R) -> Mat2 {
    let mut q: [f64; 4] = [0.0; 4];
    loop {
        for x in q.iter_mut() {
            *x = rng.random_range(-1.0..1.0);
        }
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            q.iter_mut().for_each(|x| *x /= n);
            break;
        }
    }
    let a = C64::new(q[0], q[3]);
    let b = C64::new(q[2], q[1]);
    Mat2::new(a, -b.conj(), b, a.conj())
}
