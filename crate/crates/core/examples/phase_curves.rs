//! Relative phase and survival of the z-rotation cycle as functions of the
//! subspace angle, with every root of a few target phases.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use discrete_holonomy::holonomy;
use discrete_holonomy::synthesis::{self, Axis};

fn main() -> discrete_holonomy::Result<()> {
    println!("varphi,phase_n1,phase_n2,phase_n3,survival_n1");
    for k in 0..=32 {
        let v = 2.0 * PI * k as f64 / 32.0;
        let phases: Vec<String> = (1..=3).map(|n| format!("{:.6}", synthesis::relative_phase(n, v))).collect();
        println!("{v:.6},{},{:.6}", phases.join(","), holonomy::transition_amplitude_closed_form(1, v));
    }
    for angle in [FRAC_PI_4, FRAC_PI_2, PI] {
        for n in 1..=3 {
            let roots = synthesis::solve_subspace_angle(n, synthesis::target_phase_for(angle));
            let survival: Vec<String> = roots
                .iter()
                .map(|&v| {
                    let path = synthesis::rotation_path(n, Axis::Z, v)?;
                    let j = discrete_holonomy::SpinJ::half_odd(n);
                    Ok(format!("{:.4}", holonomy::holonomy(j, &path)?.default_survival))
                })
                .collect::<discrete_holonomy::Result<_>>()?;
            println!("angle {angle:.4}, n = {n}: roots {roots:.4?}, survival [{}]", survival.join(", "));
        }
    }
    Ok(())
}
