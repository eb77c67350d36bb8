//! Compiles arbitrary SU(2) targets through a z-y-z split into three
//! measurement cycles, for several spins.

use discrete_holonomy::synthesis;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> discrete_holonomy::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=3 {
        let mut worst: f64 = 1.0;
        let mut vertices = 0;
        for _ in 0..20 {
            let (a, b, g) = (rng.random_range(-3.0..3.0), rng.random_range(0.0..3.1), rng.random_range(-3.0..3.0));
            let target = synthesis::zyz_compose(a, b, g);
            let seq = synthesis::compile_su2(n, &target)?;
            worst = worst.min(synthesis::fidelity_up_to_phase(&seq.composed_unitary, &target));
            vertices = vertices.max(seq.vertices().len());
        }
        println!("n = {n}: worst fidelity {worst:.15} over 20 targets, at most {vertices} vertices");
    }
    Ok(())
}
