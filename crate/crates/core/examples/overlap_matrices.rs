//! Overlap matrices between coherent-state frames for several spins, checked
//! against explicit state inner products.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use discrete_holonomy::{overlap, Direction, SpinJ};

fn main() -> discrete_holonomy::Result<()> {
    let a = Direction::new(0.0, 0.0)?;
    let b = Direction::new(FRAC_PI_2, FRAC_PI_3)?;
    for n in 1..=4 {
        let j = SpinJ::half_odd(n);
        let m = overlap::overlap_matrix(j, a, b);
        let brute = overlap::overlap_bruteforce(j, a, b);
        let err = (m.matrix - brute).iter().map(|z| z.norm()).fold(0.0, f64::max);
        println!("j = {j}: kappa = {:.6}, proportional = {}, |closed - brute| = {err:.1e}", m.kappa, m.proportional);
        println!("  R = {:.6}, S = {:.6}", m.matrix[(0, 0)], m.matrix[(0, 1)]);
    }
    Ok(())
}
