//! Three-qubit bit-flip code in a rotated frame, then a noisy measurement
//! cycle on the encoded register.

use std::f64::consts::{FRAC_PI_2, PI};

use discrete_holonomy::holonomy::MeasurementPath;
use discrete_holonomy::qec::{self, ErrorFrame};
use discrete_holonomy::{Direction, Vec2, C64};

fn main() -> discrete_holonomy::Result<()> {
    let logical = Vec2::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8));
    let d = Direction::new(1.1, 0.4)?;
    for frame in [ErrorFrame::Rotated, ErrorFrame::Lab] {
        for err in [None, Some(0), Some(1), Some(2)] {
            let branches = qec::bitflip_branches(d, &logical, err, frame)?;
            let summary: Vec<String> = branches
                .iter()
                .map(|b| format!("{:?} p={:.3} F={:.6}", b.syndrome, b.probability, b.fidelity))
                .collect();
            println!("{frame:?} error {err:?}: {}", summary.join("; "));
        }
    }
    let path = MeasurementPath::from_angles(&[(0.0, 0.0), (FRAC_PI_2, PI), (FRAC_PI_2, 0.26), (0.0, 0.0)])?;
    let report = qec::bitflip_pipeline(&path, &logical, &[(1, 0), (2, 2)])?;
    println!(
        "pipeline: survival {:.6} (analytic {:.6}), final fidelity {:.12}",
        report.survival, report.analytic_survival, report.fidelity
    );
    Ok(())
}
