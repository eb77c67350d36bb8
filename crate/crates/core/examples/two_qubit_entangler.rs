//! Entangling phase gate from a spin cycle with a stretched auxiliary pair.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use discrete_holonomy::holonomy::MeasurementPath;
use discrete_holonomy::two_qubit::{self, AuxPair};
use discrete_holonomy::{SpinJ, Vec2, C64};

fn main() -> discrete_holonomy::Result<()> {
    let j = SpinJ::half_odd(1);
    let aux = AuxPair::stretched();
    let h = C64::from(FRAC_1_SQRT_2);
    let plus = Vec2::new(h, h);
    for v in [FRAC_PI_4, FRAC_PI_2, 2.0] {
        let path = MeasurementPath::from_angles(&[(0.0, 0.0), (FRAC_PI_2, PI), (FRAC_PI_2, v), (0.0, 0.0)])?;
        let phase = two_qubit::accumulated_phase(j, &path)?;
        let out = two_qubit::two_qubit_gate_action(j, &path, &plus, &plus, &aux)?;
        println!(
            "varphi {v:.4}: Phi = {phase:.6}, concurrence {:.12}, weight {:.6}",
            two_qubit::concurrence(&out)?,
            out.weight
        );
    }
    let skewed = Vec2::new(C64::from(0.8), C64::from(0.6));
    let path = MeasurementPath::from_angles(&[(0.0, 0.0), (FRAC_PI_2, PI), (FRAC_PI_2, 1.0), (0.0, 0.0)])?;
    let out = two_qubit::two_qubit_gate_action(j, &path, &skewed, &plus, &aux)?;
    let (ac, bd) = ((skewed[0] * plus[0]).norm(), (skewed[1] * plus[1]).norm());
    let formula = 2.0 * ac * bd / (ac * ac + bd * bd);
    println!(
        "unbalanced input: concurrence {:.6}, 2|ac bd|/(|ac|^2+|bd|^2) = {formula:.6}",
        two_qubit::concurrence(&out)?
    );
    Ok(())
}
