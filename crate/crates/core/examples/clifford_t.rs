//! Measurement sequences for T, S and H at j = 3/2, next to the tabulated
//! n = 1 angles.

use discrete_holonomy::synthesis::{self, CliffordGate, CliffordTable};

fn main() -> discrete_holonomy::Result<()> {
    for gate in [CliffordGate::T, CliffordGate::S, CliffordGate::H] {
        for table in [CliffordTable::Compiled, CliffordTable::Printed] {
            let seq = synthesis::synth_clifford_t(1, gate, table)?;
            let to_gate = synthesis::fidelity_up_to_phase(&seq.composed_unitary, &gate.matrix());
            let to_dagger = synthesis::fidelity_up_to_phase(&seq.composed_unitary, &gate.matrix().adjoint());
            println!("{gate:?} ({table:?}): fidelity to gate {to_gate:.6}, to its inverse {to_dagger:.6}");
            for v in seq.vertices() {
                println!("    ({:.10}, {:.10})", v.theta(), v.phi());
            }
        }
    }
    Ok(())
}
