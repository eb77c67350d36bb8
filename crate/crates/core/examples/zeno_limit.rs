//! Dense-measurement sweep: the discrete holonomy approaches the continuous
//! geometric phase and the survival probability approaches one.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use discrete_holonomy::holonomy::{self, MeasurementPath};
use discrete_holonomy::SpinJ;

fn main() -> discrete_holonomy::Result<()> {
    let j = SpinJ::half_odd(1);
    let base = MeasurementPath::from_angles(&[(0.0, 0.0), (FRAC_PI_2, 0.0), (FRAC_PI_2, FRAC_PI_4), (0.0, 0.0)])?;
    let steps = [1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024];
    let rows = holonomy::zeno_sweep(j, &base, &holonomy::default_input(), &steps)?;
    println!("limit phase {:.6}", holonomy::zeno_predicted_phase(j, FRAC_PI_4));
    println!("N,relative_phase,survival,max_offdiag");
    for r in rows {
        println!("{},{:.8},{:.6},{:.2e}", r.steps_per_leg, r.relative_phase, r.survival_probability, r.max_offdiag);
    }
    Ok(())
}
