//! Shot-by-shot filtering of the T-gate sequence, with postselection and with
//! restart-until-success.

use discrete_holonomy::holonomy;
use discrete_holonomy::sim::{self, SimConfig, Strategy};
use discrete_holonomy::synthesis::{self, CliffordGate, CliffordTable};
use discrete_holonomy::SpinJ;

fn main() -> discrete_holonomy::Result<()> {
    let seq = synthesis::synth_clifford_t(1, CliffordGate::T, CliffordTable::Compiled)?;
    let path = seq.full_path()?;
    let input = holonomy::default_input();
    for strategy in [Strategy::Postselect, Strategy::Restart] {
        let cfg = SimConfig::new(20_000, 42, strategy, 200)?;
        let s = sim::run_sequence(SpinJ::half_odd(1), &path, &input, &cfg)?;
        println!(
            "{strategy:?}: success {:.4} (analytic {:.4}), mean restarts {:.2}, exhausted {}, fidelity {:.12}",
            s.empirical_success_rate,
            s.analytic_survival,
            s.mean_restarts,
            s.exhausted_restarts,
            s.final_fidelity.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
