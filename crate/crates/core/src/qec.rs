//! Error correction on the spin-1/2 constituents of a spin-3/2 qubit.
//!
//! `|3/2⟩ = |↑↑↑⟩` and `|-3/2⟩ = |↓↓↓⟩` are the bit-flip code words, so every
//! frame `n` carries a rotated copy of the code whose stabilizers are the
//! collectively rotated `σ_z σ_z` checks `(n·σ^i)(n·σ^j)`. The Shor code
//! stacks three such blocks with `(|3/2⟩ ± |-3/2⟩)/√2` per block.

use nalgebra::Vector3;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holonomy::{self, HolonomyResult, MeasurementPath};
use crate::overlap::{self, OverlapMatrix};
use crate::spin::{self, CMatrix, CVector, Direction, Mat2, SpinJ, Vec2, C64};

const DETERMINISTIC: f64 = 1e-9;
const BRANCH_FLOOR: f64 = 1e-15;

/// Qubit `q` of an `n`-qubit register is bit `n - 1 - q` of the basis index,
/// with bit value 0 for spin up.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalRegister {
    num_qubits: usize,
    amplitudes: CVector,
}

impl PhysicalRegister {
    pub fn new(num_qubits: usize, amplitudes: CVector) -> Result<Self> {
        if num_qubits == 0 || amplitudes.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << num_qubits, got: amplitudes.len() });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > spin::NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { num_qubits, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn inner(&self, other: &PhysicalRegister) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn fidelity(&self, other: &PhysicalRegister) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Tensor product, `self` on the leading qubits.
    pub fn tensor(&self, other: &PhysicalRegister) -> PhysicalRegister {
        let amplitudes = self.amplitudes.kronecker(&other.amplitudes);
        PhysicalRegister { num_qubits: self.num_qubits + other.num_qubits, amplitudes }
    }

    fn check_index(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::IndexOutOfRange { index: q, num_qubits: self.num_qubits });
        }
        Ok(())
    }

    fn apply_unchecked(&mut self, q: usize, op: &Mat2) {
        apply_single(&mut self.amplitudes, self.num_qubits, q, op);
    }

    pub fn apply(&mut self, q: usize, op: &Mat2) -> Result<()> {
        self.check_index(q)?;
        self.apply_unchecked(q, op);
        Ok(())
    }

    /// `op` on every qubit.
    pub fn apply_all(&mut self, op: &Mat2) {
        for q in 0..self.num_qubits {
            self.apply_unchecked(q, op);
        }
    }
}

fn apply_single(v: &mut CVector, n: usize, q: usize, op: &Mat2) {
    let mask = 1usize << (n - 1 - q);
    for i in 0..v.len() {
        if i & mask == 0 {
            let (a, b) = (v[i], v[i | mask]);
            v[i] = op[(0, 0)] * a + op[(0, 1)] * b;
            v[i | mask] = op[(1, 0)] * a + op[(1, 1)] * b;
        }
    }
}

/// Product of single-qubit operators on distinct qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    pub num_qubits: usize,
    pub factors: Vec<(usize, Mat2)>,
}

impl LocalOperator {
    pub fn new(num_qubits: usize, factors: Vec<(usize, Mat2)>) -> Result<Self> {
        for (i, (q, _)) in factors.iter().enumerate() {
            if *q >= num_qubits {
                return Err(Error::IndexOutOfRange { index: *q, num_qubits });
            }
            if factors[..i].iter().any(|(p, _)| p == q) {
                return Err(Error::InvalidArgument(format!("qubit {q} appears twice")));
            }
        }
        Ok(Self { num_qubits, factors })
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        let mut out = v.clone();
        for (q, op) in &self.factors {
            apply_single(&mut out, self.num_qubits, *q, op);
        }
        out
    }

    pub fn to_dense(&self) -> CMatrix {
        let dim = 1usize << self.num_qubits;
        let mut m = CMatrix::zeros(dim, dim);
        for c in 0..dim {
            let mut e = CVector::zeros(dim);
            e[c] = C64::from(1.0);
            m.set_column(c, &self.apply(&e));
        }
        m
    }

    /// `⟨ψ|O|ψ⟩`, real for Hermitian `O`.
    pub fn expectation(&self, v: &CVector) -> f64 {
        v.dotc(&self.apply(v)).re
    }
}

/// `n·σ`.
pub fn n_dot_sigma(n: Vector3<f64>) -> Mat2 {
    Mat2::new(C64::from(n.z), C64::new(n.x, -n.y), C64::new(n.x, n.y), C64::from(-n.z))
}

pub fn pauli_x() -> Mat2 {
    n_dot_sigma(Vector3::x())
}

pub fn pauli_y() -> Mat2 {
    n_dot_sigma(Vector3::y())
}

pub fn pauli_z() -> Mat2 {
    n_dot_sigma(Vector3::z())
}

/// `R σ R†` with `R` the spin-1/2 rotation taking `ẑ` to `d`.
pub fn rotated(d: Direction, op: &Mat2) -> Mat2 {
    let r = spin::spin_half_rotation(d);
    r * op * r.adjoint()
}

/// `(n·σ^i)(n·σ^j)` for every pair.
pub fn rotated_syndrome_ops(d: Direction, pairs: &[(usize, usize)], num_qubits: usize) -> Result<Vec<LocalOperator>> {
    let s = n_dot_sigma(d.unit_vector());
    pairs.iter().map(|&(i, j)| LocalOperator::new(num_qubits, vec![(i, s), (j, s)])).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodeKind {
    BitFlip3,
    Shor9,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CodeSpec {
    pub kind: CodeKind,
    pub logical_zero: PhysicalRegister,
    pub logical_one: PhysicalRegister,
}

impl CodeSpec {
    pub fn encode(&self, logical: &Vec2) -> Result<PhysicalRegister> {
        let v = &self.logical_zero.amplitudes * logical[0] + &self.logical_one.amplitudes * logical[1];
        PhysicalRegister::new(self.logical_zero.num_qubits, v)
    }
}

fn dicke_register(j: SpinJ, v: &CVector) -> Result<PhysicalRegister> {
    PhysicalRegister::new(j.twice_j() as usize, spin::dicke_embed_vector(j, v)?)
}

fn stretched(up: f64, down: f64) -> CVector {
    CVector::from_vec(vec![C64::from(up), C64::from(0.0), C64::from(0.0), C64::from(down)])
}

/// `|0_L⟩ = |↑↑↑⟩`, `|1_L⟩ = |↓↓↓⟩`.
pub fn bitflip_code() -> CodeSpec {
    let j = SpinJ::half_odd(1);
    CodeSpec {
        kind: CodeKind::BitFlip3,
        logical_zero: dicke_register(j, &stretched(1.0, 0.0)).expect("stretched state is normalized"),
        logical_one: dicke_register(j, &stretched(0.0, 1.0)).expect("stretched state is normalized"),
    }
}

/// `|x_L⟩ = ((|3/2⟩ ± |-3/2⟩)/√2)^{⊗3}`, each block through the symmetric
/// embedding.
pub fn shor_logical_states() -> CodeSpec {
    let j = SpinJ::half_odd(1);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = dicke_register(j, &stretched(h, h)).expect("normalized");
    let minus = dicke_register(j, &stretched(h, -h)).expect("normalized");
    CodeSpec {
        kind: CodeKind::Shor9,
        logical_zero: plus.tensor(&plus).tensor(&plus),
        logical_one: minus.tensor(&minus).tensor(&minus),
    }
}

/// Standard bit-flip checks `Z_0Z_1`, `Z_1Z_2`.
pub const BITFLIP_PAIRS: [(usize, usize); 2] = [(0, 1), (1, 2)];

/// Qubit flagged by a `(Z_0Z_1, Z_1Z_2)` syndrome.
pub fn bitflip_lookup(syndrome: (i8, i8)) -> Option<usize> {
    match syndrome {
        (-1, 1) => Some(0),
        (-1, -1) => Some(1),
        (1, -1) => Some(2),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorFrame {
    /// `R σ_x R†`, a flip in the frame the state currently lives in.
    Rotated,
    /// Unrotated `σ_x`.
    Lab,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyndromeBranch {
    pub syndrome: (i8, i8),
    pub probability: f64,
    pub corrected: PhysicalRegister,
    pub fidelity: f64,
}

/// `R^{⊗3}(a|↑↑↑⟩ + b|↓↓↓⟩)`.
pub fn bitflip_encode(d: Direction, logical: &Vec2) -> Result<PhysicalRegister> {
    let mut reg = bitflip_code().encode(logical)?;
    reg.apply_all(&spin::spin_half_rotation(d));
    Ok(reg)
}

/// Every syndrome outcome of one round after an optional flip on
/// `error_qubit`, each corrected by the rotated lookup table.
pub fn bitflip_branches(
    d: Direction,
    logical: &Vec2,
    error_qubit: Option<usize>,
    frame: ErrorFrame,
) -> Result<Vec<SyndromeBranch>> {
    let encoded = bitflip_encode(d, logical)?;
    let mut state = encoded.clone();
    if let Some(q) = error_qubit {
        let flip = match frame {
            ErrorFrame::Rotated => rotated(d, &pauli_x()),
            ErrorFrame::Lab => pauli_x(),
        };
        state.apply(q, &flip)?;
    }
    let ops = rotated_syndrome_ops(d, &BITFLIP_PAIRS, 3)?;
    let correction = rotated(d, &pauli_x());
    let mut out = Vec::new();
    for s1 in [1i8, -1] {
        for s2 in [1i8, -1] {
            let mut v = state.amplitudes.clone();
            for (op, s) in ops.iter().zip([s1, s2]) {
                let ov = op.apply(&v);
                v = (&v + ov * C64::from(f64::from(s))) * C64::from(0.5);
            }
            let probability = v.norm_squared();
            if probability <= BRANCH_FLOOR {
                continue;
            }
            let mut corrected = PhysicalRegister { num_qubits: 3, amplitudes: v / C64::from(probability.sqrt()) };
            if let Some(q) = bitflip_lookup((s1, s2)) {
                corrected.apply_unchecked(q, &correction);
            }
            let fidelity = corrected.fidelity(&encoded);
            out.push(SyndromeBranch { syndrome: (s1, s2), probability, corrected, fidelity });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BitflipOutcome {
    pub corrected: PhysicalRegister,
    pub syndrome: (i8, i8),
    pub fidelity: f64,
}

/// Encode in the frame at `d`, apply a rotated flip, read both rotated
/// syndromes and correct. The syndrome is deterministic for this error model.
pub fn bitflip_encode_and_correct(d: Direction, logical: &Vec2, error_qubit: Option<usize>) -> Result<BitflipOutcome> {
    let branches = bitflip_branches(d, logical, error_qubit, ErrorFrame::Rotated)?;
    let best = branches.into_iter().max_by(|a, b| a.probability.total_cmp(&b.probability)).ok_or(Error::ZeroWeight)?;
    if (best.probability - 1.0).abs() > DETERMINISTIC {
        return Err(Error::ContractViolation(format!(
            "rotated flip gave a random syndrome (p = {})",
            best.probability
        )));
    }
    Ok(BitflipOutcome { corrected: best.corrected, syndrome: best.syndrome, fidelity: best.fidelity })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineStep {
    pub vertex: usize,
    pub projection_probability: f64,
    pub error_qubit: Option<usize>,
    pub syndrome: (i8, i8),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineReport {
    pub steps: Vec<PipelineStep>,
    /// Product of the projection probabilities.
    pub survival: f64,
    /// `‖D ψ‖²` of the unencoded spin-3/2 cycle.
    pub analytic_survival: f64,
    /// Overlap of the final register with the encoded `U_D ψ`.
    pub fidelity: f64,
}

fn frame_registers(d: Direction) -> (CVector, CVector) {
    let r = spin::spin_half_rotation(d);
    let code = bitflip_code();
    let mut up = code.logical_zero.clone();
    let mut down = code.logical_one.clone();
    up.apply_all(&r);
    down.apply_all(&r);
    (up.amplitudes, down.amplitudes)
}

/// Runs the j = 3/2 cycle on the three constituents: at every vertex after
/// the first, project onto the frame, inject any scheduled rotated flip,
/// read the rotated syndromes and correct. Failed projections are
/// postselected away and their probability is tracked in `survival`.
pub fn bitflip_pipeline(path: &MeasurementPath, logical: &Vec2, errors: &[(usize, usize)]) -> Result<PipelineReport> {
    let j = SpinJ::half_odd(1);
    let h = holonomy::holonomy(j, path)?;
    let mut state = bitflip_encode(path.start(), logical)?;
    let mut steps = Vec::new();
    let mut survival = 1.0;
    for (k, &d) in path.vertices().iter().enumerate().skip(1) {
        let (up, down) = frame_registers(d);
        let v = &up * up.dotc(&state.amplitudes) + &down * down.dotc(&state.amplitudes);
        let p = v.norm_squared();
        if p <= BRANCH_FLOOR {
            return Err(Error::DegenerateCycle { leg: k - 1, weight: p });
        }
        survival *= p;
        state.amplitudes = v / C64::from(p.sqrt());
        let error_qubit = errors.iter().find(|(vertex, _)| *vertex == k).map(|&(_, q)| q);
        if let Some(q) = error_qubit {
            state.apply(q, &rotated(d, &pauli_x()))?;
        }
        let ops = rotated_syndrome_ops(d, &BITFLIP_PAIRS, 3)?;
        let syndrome = measure_deterministic(&ops, &state.amplitudes)?;
        let syndrome = (syndrome[0], syndrome[1]);
        if let Some(q) = bitflip_lookup(syndrome) {
            state.apply_unchecked(q, &rotated(d, &pauli_x()));
        }
        steps.push(PipelineStep { vertex: k, projection_probability: p, error_qubit, syndrome });
    }
    let target = bitflip_encode(path.start(), &(h.unitary * logical))?;
    Ok(PipelineReport {
        steps,
        survival,
        analytic_survival: h.survival_probability(logical),
        fidelity: state.fidelity(&target),
    })
}

fn measure_deterministic(ops: &[LocalOperator], v: &CVector) -> Result<Vec<i8>> {
    ops.iter()
        .map(|op| {
            let e = op.expectation(v);
            if (e.abs() - 1.0).abs() > DETERMINISTIC {
                return Err(Error::ContractViolation(format!("syndrome expectation {e} is not ±1")));
            }
            Ok(if e > 0.0 { 1 } else { -1 })
        })
        .collect()
}

/// Logical matrix elements `⟨x_L|U|y_L⟩` of the collective rotation
/// `U = e^{iθ_a J_y} e^{-i(φ_b - φ_a) J_z} e^{-iθ_b J_y}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShorOverlap {
    /// Per-block closed form in `R`, `S`, cubed.
    pub closed_form: Mat2,
    /// Full 2⁹-dimensional contraction.
    pub direct: Option<Mat2>,
}

impl ShorOverlap {
    pub fn deviation(&self) -> Option<f64> {
        self.direct.map(|d| (d - self.closed_form).iter().map(|z| z.norm()).fold(0.0, f64::max))
    }
}

/// `((e_0 ± e_1)/√2)† M ((e_0 ± e_1)/√2)` cubed, `M` the stretched-state block
/// `[[R, S], [-S*, R*]]` of the spin-3/2 overlap.
pub fn shor_overlap_closed_form(a: Direction, b: Direction) -> Mat2 {
    let m = overlap::overlap_matrix(SpinJ::half_odd(1), a, b).matrix;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let hv = [Vec2::new(C64::from(h), C64::from(h)), Vec2::new(C64::from(h), C64::from(-h))];
    Mat2::from_fn(|x, y| hv[x].dotc(&(m * hv[y])).powu(3))
}

pub fn shor_overlap_direct(a: Direction, b: Direction) -> Mat2 {
    let code = shor_logical_states();
    let u = spin::spin_half_rotation(a).adjoint() * spin::spin_half_rotation(b);
    let logical = [&code.logical_zero, &code.logical_one];
    let images: Vec<PhysicalRegister> = logical
        .iter()
        .map(|s| {
            let mut r = (*s).clone();
            r.apply_all(&u);
            r
        })
        .collect();
    Mat2::from_fn(|x, y| logical[x].inner(&images[y]))
}

pub fn shor_overlap_elements(a: Direction, b: Direction, with_direct: bool) -> ShorOverlap {
    ShorOverlap { closed_form: shor_overlap_closed_form(a, b), direct: with_direct.then(|| shor_overlap_direct(a, b)) }
}

/// Largest violation of `M_10 = -M_01*` and `M_11 = M_00*`.
pub fn shor_condition_violation(m: &Mat2) -> f64 {
    let off = (m[(1, 0)] + m[(0, 1)].conj()).norm();
    let diag = (m[(1, 1)] - m[(0, 0)].conj()).norm();
    off.max(diag)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShorUnitarity {
    pub kappa: f64,
    pub unitary: Mat2,
    /// `‖M†M - κ^{-2} I‖_max`.
    pub defect: f64,
}

pub fn shor_unitarity_check(a: Direction, b: Direction) -> Result<ShorUnitarity> {
    let m = shor_overlap_closed_form(a, b);
    let (_, u) = overlap::polar_unitary(&spin::mat2_to_dynamic(&m))?;
    let inv_kappa_sq =
        (m[(0, 0)].norm_sqr() + m[(0, 1)].norm_sqr() + m[(1, 0)].norm_sqr() + m[(1, 1)].norm_sqr()) / 2.0;
    Ok(ShorUnitarity {
        kappa: inv_kappa_sq.sqrt().recip(),
        unitary: spin::dynamic_to_mat2(&u),
        defect: overlap::proportionality_defect(&m, inv_kappa_sq),
    })
}

/// Holonomy of a cycle acting on the Shor logical qubit.
pub fn shor_holonomy(path: &MeasurementPath) -> Result<HolonomyResult> {
    let legs = path
        .legs()
        .enumerate()
        .map(|(i, (from, to))| {
            let m = shor_overlap_closed_form(to, from);
            let weight =
                (m[(0, 0)].norm_sqr() + m[(0, 1)].norm_sqr() + m[(1, 0)].norm_sqr() + m[(1, 1)].norm_sqr()) / 2.0;
            if weight <= holonomy::DEGENERATE_WEIGHT {
                return Err(Error::DegenerateCycle { leg: i, weight });
            }
            Ok(OverlapMatrix::from_parts(m, weight))
        })
        .collect::<Result<Vec<_>>>()?;
    holonomy::accumulate(SpinJ::half_odd(1), &legs)
}

/// Stabilizer generators of the Shor code rotated into the frame at `d`:
/// six `Z Z` checks inside the blocks, then two six-qubit `X` checks.
pub fn shor_rotated_stabilizers(d: Direction) -> Vec<LocalOperator> {
    let z = rotated(d, &pauli_z());
    let x = rotated(d, &pauli_x());
    let mut ops = Vec::with_capacity(8);
    for block in 0..3 {
        let b = 3 * block;
        ops.push(LocalOperator { num_qubits: 9, factors: vec![(b, z), (b + 1, z)] });
        ops.push(LocalOperator { num_qubits: 9, factors: vec![(b + 1, z), (b + 2, z)] });
    }
    ops.push(LocalOperator { num_qubits: 9, factors: (0..6).map(|q| (q, x)).collect() });
    ops.push(LocalOperator { num_qubits: 9, factors: (3..9).map(|q| (q, x)).collect() });
    ops
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Mat2 {
        match self {
            Pauli::X => pauli_x(),
            Pauli::Y => pauli_y(),
            Pauli::Z => pauli_z(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShorCorrection {
    pub syndrome: Vec<i8>,
    pub fidelity: f64,
}

/// Encode in the frame at `d`, apply the rotated `error` on `qubit`, extract
/// all eight rotated stabilizers and correct.
pub fn shor_correct(d: Direction, logical: &Vec2, error: Option<(usize, Pauli)>) -> Result<ShorCorrection> {
    let mut encoded = shor_logical_states().encode(logical)?;
    encoded.apply_all(&spin::spin_half_rotation(d));
    let mut state = encoded.clone();
    if let Some((q, p)) = error {
        state.apply(q, &rotated(d, &p.matrix()))?;
    }
    let ops = shor_rotated_stabilizers(d);
    let syndrome = measure_deterministic(&ops, &state.amplitudes)?;
    for block in 0..3 {
        if let Some(q) = bitflip_lookup((syndrome[2 * block], syndrome[2 * block + 1])) {
            state.apply_unchecked(3 * block + q, &rotated(d, &pauli_x()));
        }
    }
    if let Some(block) = bitflip_lookup((syndrome[6], syndrome[7])) {
        state.apply_unchecked(3 * block, &rotated(d, &pauli_z()));
    }
    Ok(ShorCorrection { fidelity: state.fidelity(&encoded), syndrome })
}

/// Uniform direction on the sphere.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> Direction {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    Direction::new((1.0 - 2.0 * u).clamp(-1.0, 1.0).acos(), std::f64::consts::TAU * v)
        .expect("sampled angles are in range")
}

/// Haar-random normalized 2-vector.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> Vec2 {
    let d = random_direction(rng);
    let (s, c) = (d.theta() / 2.0).sin_cos();
    Vec2::new(C64::from(c), C64::from_polar(s, d.phi()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn d(t: f64, p: f64) -> Direction {
        Direction::new(t, p).unwrap()
    }

    fn kron3(a: &Mat2, b: &Mat2, c: &Mat2) -> CMatrix {
        let (a, b, c) = (spin::mat2_to_dynamic(a), spin::mat2_to_dynamic(b), spin::mat2_to_dynamic(c));
        a.kronecker(&b).kronecker(&c)
    }

    #[test]
    fn syndrome_operator_examples() {
        let i2 = Mat2::identity();
        let ops = rotated_syndrome_ops(Direction::NORTH, &[(0, 1)], 3).unwrap();
        assert!(spin::max_abs_diff(&ops[0].to_dense(), &kron3(&pauli_z(), &pauli_z(), &i2)) < 1e-15);
        let ops = rotated_syndrome_ops(d(FRAC_PI_2, 0.0), &[(0, 1)], 3).unwrap();
        assert!(spin::max_abs_diff(&ops[0].to_dense(), &kron3(&pauli_x(), &pauli_x(), &i2)) < 1e-15);
        let dir = d(1.3, 4.4);
        for op in rotated_syndrome_ops(dir, &BITFLIP_PAIRS, 3).unwrap() {
            let m = op.to_dense();
            assert!(spin::max_abs_diff(&(&m * &m), &CMatrix::identity(8, 8)) < 1e-12);
        }
        assert!(matches!(
            rotated_syndrome_ops(dir, &[(0, 3)], 3),
            Err(Error::IndexOutOfRange { index: 3, num_qubits: 3 })
        ));
    }

    #[test]
    fn n_dot_sigma_is_rotated_sigma_z() {
        let dir = d(2.1, 0.7);
        let a = n_dot_sigma(dir.unit_vector());
        let b = rotated(dir, &pauli_z());
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn rotated_encoding_matches_symmetric_embedding() {
        let j = SpinJ::half_odd(1);
        let dir = d(0.9, 2.5);
        let logical = Vec2::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        let reg = bitflip_encode(dir, &logical).unwrap();
        let f = spin::frame(j, dir);
        let scs = f.column(0) * logical[0] + f.column(1) * logical[1];
        let embedded = spin::dicke_embed_vector(j, &scs.into_owned()).unwrap();
        assert!((reg.amplitudes() - embedded).norm() < 1e-12);
    }

    #[test]
    fn bitflip_standard_table() {
        let logical = Vec2::new(C64::new(0.6, 0.0), C64::new(0.8, 0.0));
        let none = bitflip_encode_and_correct(Direction::NORTH, &logical, None).unwrap();
        assert_eq!(none.syndrome, (1, 1));
        assert!((none.fidelity - 1.0).abs() < 1e-12);
        let expected = [(-1, 1), (-1, -1), (1, -1)];
        for (q, s) in expected.iter().enumerate() {
            let out = bitflip_encode_and_correct(Direction::NORTH, &logical, Some(q)).unwrap();
            assert_eq!(out.syndrome, *s);
            assert!((out.fidelity - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bitflip_corrects_rotated_flips_anywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let dir = random_direction(&mut rng);
            let logical = random_qubit(&mut rng);
            for q in 0..3 {
                let out = bitflip_encode_and_correct(dir, &logical, Some(q)).unwrap();
                assert_eq!(Some(q), bitflip_lookup(out.syndrome));
                assert!((out.fidelity - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lab_frame_flip_is_not_always_corrected() {
        let dir = d(1.0, 0.3);
        let logical = Vec2::new(C64::new(0.6, 0.0), C64::new(0.8, 0.0));
        let branches = bitflip_branches(dir, &logical, Some(1), ErrorFrame::Lab).unwrap();
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(branches.len() > 1);
        let mean: f64 = branches.iter().map(|b| b.probability * b.fidelity).sum();
        assert!(mean < 1.0 - 1e-3);
    }

    #[test]
    fn syndromes_commute_and_detect_their_flips() {
        let dir = d(2.0, 5.0);
        let ops = rotated_syndrome_ops(dir, &BITFLIP_PAIRS, 3).unwrap();
        let (a, b) = (ops[0].to_dense(), ops[1].to_dense());
        assert!(spin::max_abs_diff(&(&a * &b), &(&b * &a)) < 1e-12);
        for q in 0..3 {
            let err = LocalOperator::new(3, vec![(q, rotated(dir, &pauli_x()))]).unwrap().to_dense();
            for (k, op) in [&a, &b].into_iter().enumerate() {
                let anti = op * &err + &err * op;
                let comm = op * &err - &err * op;
                let flags = BITFLIP_PAIRS[k].0 == q || BITFLIP_PAIRS[k].1 == q;
                let zero = if flags { anti } else { comm };
                assert!(zero.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
            }
        }
    }

    #[test]
    fn pipeline_tracks_holonomy_and_fixes_errors() {
        let path = MeasurementPath::from_angles(&[(0.0, 0.0), (1.0, 0.5), (1.9, 2.8), (0.7, 4.0), (0.0, 0.0)]).unwrap();
        let logical = Vec2::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        let clean = bitflip_pipeline(&path, &logical, &[]).unwrap();
        assert!((clean.fidelity - 1.0).abs() < 1e-12);
        assert!((clean.survival - clean.analytic_survival).abs() < 1e-12);
        let noisy = bitflip_pipeline(&path, &logical, &[(1, 0), (2, 2), (4, 1)]).unwrap();
        assert!((noisy.fidelity - 1.0).abs() < 1e-12);
        assert!((noisy.survival - clean.survival).abs() < 1e-12);
        assert_eq!(noisy.steps[0].syndrome, (-1, 1));
        assert_eq!(noisy.steps[3].syndrome, (-1, -1));
    }

    #[test]
    fn shor_logical_examples() {
        let code = shor_logical_states();
        assert!((code.logical_zero.inner(&code.logical_zero) - C64::from(1.0)).norm() < 1e-12);
        assert!(code.logical_zero.inner(&code.logical_one).norm() < 1e-12);
        // First block of |0_L⟩ reduces to (|↑↑↑⟩ + |↓↓↓⟩)/√2.
        let amps = code.logical_zero.amplitudes();
        let block_norm = 1.0 / 8f64.sqrt();
        assert!((amps[0].re - block_norm).abs() < 1e-12);
        assert!((amps[0b111_000_000].re - block_norm).abs() < 1e-12);
        assert!(amps[0b100_000_000].norm() < 1e-15);
    }

    #[test]
    fn shor_closed_form_matches_nine_qubit_contraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let (a, b) = (random_direction(&mut rng), random_direction(&mut rng));
            let e = shor_overlap_elements(a, b, true);
            assert!(e.deviation().unwrap() < 1e-10);
            assert!(shor_condition_violation(&e.closed_form) < 1e-10);
        }
        let same = shor_overlap_closed_form(d(0.4, 1.0), d(0.4, 1.0));
        assert!((same - Mat2::identity()).norm() < 1e-12);
    }

    #[test]
    fn shor_unitarity_examples() {
        let t = shor_unitarity_check(d(0.4, 1.0), d(0.4, 1.0)).unwrap();
        assert!((t.kappa - 1.0).abs() < 1e-12 && (t.unitary - Mat2::identity()).norm() < 1e-12);
        let r = shor_unitarity_check(d(0.3, 0.2), d(2.5, 3.9)).unwrap();
        assert!(r.defect < 1e-10);
        let anti = shor_unitarity_check(d(0.8, 1.0), d(PI - 0.8, 1.0 + PI)).unwrap();
        assert!(anti.defect < 1e-10);
    }

    #[test]
    fn shor_cycle_holonomy_is_unitary() {
        let path = MeasurementPath::from_angles(&[(0.0, 0.0), (1.0, 0.5), (1.9, 2.8), (0.0, 0.0)]).unwrap();
        let h = shor_holonomy(&path).unwrap();
        assert!((h.unitary.adjoint() * h.unitary - Mat2::identity()).norm() < 1e-9);
        assert!((h.d * C64::from(h.kappa_product) - h.unitary).norm() < 1e-9);
    }

    #[test]
    fn shor_corrects_every_single_qubit_pauli() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let dir = random_direction(&mut rng);
        let logical = random_qubit(&mut rng);
        let clean = shor_correct(dir, &logical, None).unwrap();
        assert!(clean.syndrome.iter().all(|&s| s == 1));
        for q in 0..9 {
            for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                let out = shor_correct(dir, &logical, Some((q, p))).unwrap();
                assert!((out.fidelity - 1.0).abs() < 1e-12, "{q} {p:?}");
            }
        }
    }
}
