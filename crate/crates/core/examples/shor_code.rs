//! Shor-code logical overlaps under collective rotations, and single-qubit
//! error correction in a rotated frame.

use discrete_holonomy::qec::{self, Pauli};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> discrete_holonomy::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        let (a, b) = (qec::random_direction(&mut rng), qec::random_direction(&mut rng));
        let m = qec::shor_overlap_elements(a, b, true);
        let u = qec::shor_unitarity_check(a, b)?;
        println!(
            "conditions {:.1e}, 9-qubit deviation {:.1e}, kappa {:.4}, defect {:.1e}",
            qec::shor_condition_violation(&m.closed_form),
            m.deviation().unwrap_or(f64::NAN),
            u.kappa,
            u.defect
        );
    }
    let d = qec::random_direction(&mut rng);
    let logical = qec::random_qubit(&mut rng);
    for err in [None, Some((0, Pauli::X)), Some((4, Pauli::Y)), Some((8, Pauli::Z))] {
        let c = qec::shor_correct(d, &logical, err)?;
        println!("error {err:?}: syndrome {:?}, fidelity {:.12}", c.syndrome, c.fidelity);
    }
    Ok(())
}
