//! Shot-by-shot simulation of the filtering sequence.
//!
//! Each shot prepares the input in the first frame, applies the rank-two
//! projector of every later vertex with Born-rule sampling and either
//! discards the shot on failure (postselect) or starts over from a fresh
//! preparation (restart). Shot `k` draws from ChaCha stream `k` of the seed,
//! so results do not depend on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holonomy::{self, MeasurementPath};
use crate::spin::{self, CMatrix, CVector, Direction, SpinJ, StateVector, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Postselect,
    Restart,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "postselect" => Ok(Strategy::Postselect),
            "restart" => Ok(Strategy::Restart),
            other => Err(Error::InvalidArgument(format!("unknown strategy `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub shots: u64,
    pub seed: u64,
    pub strategy: Strategy,
    /// Restarts allowed per shot after the first attempt.
    pub max_restarts: u32,
}

impl SimConfig {
    pub fn new(shots: u64, seed: u64, strategy: Strategy, max_restarts: u32) -> Result<Self> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        if max_restarts == 0 {
            return Err(Error::InvalidArgument("max_restarts must be at least 1".into()));
        }
        Ok(Self { shots, seed, strategy, max_restarts })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub shots: u64,
    pub successes: u64,
    /// Preparations used across all shots.
    pub total_attempts: u64,
    pub empirical_success_rate: f64,
    pub mean_restarts: f64,
    /// Shots that used up `max_restarts` without passing.
    pub exhausted_restarts: u64,
    /// Mean `|⟨U_D ψ|out⟩|²` over successful shots; `None` without any.
    pub final_fidelity: Option<f64>,
    /// `‖D ψ‖²` from the holonomy engine.
    pub analytic_survival: f64,
}

/// `|+j; n⟩⟨+j; n| + |-j; n⟩⟨-j; n|`.
pub fn projector_scs(j: SpinJ, d: Direction) -> CMatrix {
    let f = spin::frame(j, d);
    &f * f.adjoint()
}

/// Samples the two-outcome measurement `{P, 1 - P}`.
pub fn born_measure<R: Rng + ?Sized>(state: &StateVector, p: &CMatrix, rng: &mut R) -> (bool, StateVector) {
    let psi = state.amplitudes();
    let projected = p * psi;
    let prob = projected.norm_squared().clamp(0.0, 1.0);
    let passed = rng.random::<f64>() < prob;
    let branch = if passed { projected } else { psi - &projected };
    // A zero-norm branch is only reachable through rounding in the clamp.
    let collapsed = StateVector::normalized(branch).map(|(s, _)| s).unwrap_or_else(|_| state.clone());
    (passed, collapsed)
}

struct ShotOutcome {
    success: bool,
    attempts: u64,
    fidelity: f64,
}

pub fn run_sequence(j: SpinJ, path: &MeasurementPath, input: &Vec2, cfg: &SimConfig) -> Result<RunStats> {
    if cfg.shots == 0 || cfg.max_restarts == 0 {
        return Err(Error::InvalidArgument("shots and max_restarts must be positive".into()));
    }
    let norm = input.norm();
    if (norm - 1.0).abs() > spin::NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm });
    }
    let h = holonomy::holonomy(j, path)?;
    let f1 = spin::frame(j, path.start());
    let (prepared, _) = StateVector::normalized(&f1 * CVector::from_column_slice(input.as_slice()))?;
    let expected = &f1 * CVector::from_column_slice((h.unitary * input).as_slice());
    let projectors: Vec<CMatrix> = path.vertices()[1..].iter().map(|&d| projector_scs(j, d)).collect();

    let max_attempts = match cfg.strategy {
        Strategy::Postselect => 1,
        Strategy::Restart => 1 + u64::from(cfg.max_restarts),
    };

    let outcomes: Vec<ShotOutcome> = (0..cfg.shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(shot);
            for attempt in 1..=max_attempts {
                let mut state = prepared.clone();
                let mut alive = true;
                for p in &projectors {
                    let (passed, next) = born_measure(&state, p, &mut rng);
                    state = next;
                    if !passed {
                        alive = false;
                        break;
                    }
                }
                if alive {
                    let fidelity = expected.dotc(state.amplitudes()).norm_sqr();
                    return ShotOutcome { success: true, attempts: attempt, fidelity };
                }
            }
            ShotOutcome { success: false, attempts: max_attempts, fidelity: 0.0 }
        })
        .collect();

    let mut successes = 0u64;
    let mut total_attempts = 0u64;
    let mut fidelity_sum = 0.0;
    for o in &outcomes {
        total_attempts += o.attempts;
        if o.success {
            successes += 1;
            fidelity_sum += o.fidelity;
        }
    }
    let exhausted_restarts = match cfg.strategy {
        Strategy::Postselect => 0,
        Strategy::Restart => cfg.shots - successes,
    };
    Ok(RunStats {
        shots: cfg.shots,
        successes,
        total_attempts,
        empirical_success_rate: successes as f64 / cfg.shots as f64,
        mean_restarts: (total_attempts - cfg.shots) as f64 / cfg.shots as f64,
        exhausted_restarts,
        final_fidelity: (successes > 0).then(|| fidelity_sum / successes as f64),
        analytic_survival: h.survival_probability(input),
    })
}
