use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fs;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use super::envelope::{complex, direction, float, floats, matrix, OutputEnvelope};
use super::{
    BitflipArgs, CliError, GateKind, OverlapArgs, ShorArgs, SimulateArgs, StrategyArg, SynthArgs, ZenoArgs, ZenoAxis,
};
use crate::holonomy::{self, MeasurementPath};
use crate::overlap;
use crate::qec;
use crate::sim::{self, SimConfig, Strategy};
use crate::spin::{Direction, SpinJ, Vec2, C64};
use crate::synthesis::{self, Axis, CliffordGate, CliffordTable, SynthesizedSequence};
use crate::two_qubit::{self, AuxPair};

type CmdResult = Result<OutputEnvelope, CliError>;

fn parse_j(text: &str) -> Result<SpinJ, CliError> {
    text.parse::<SpinJ>().map_err(CliError::from)
}

fn params(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn dir(p: (f64, f64)) -> Result<Direction, CliError> {
    Direction::new(p.0, p.1).map_err(CliError::from)
}

pub fn cmd_overlap(args: &OverlapArgs) -> CmdResult {
    let j = parse_j(&args.j)?;
    let (a, b) = (dir(args.a)?, dir(args.b)?);
    let rs = overlap::rs_coefficients(j, a, b);
    let m = match args.xi {
        None => overlap::overlap_matrix(j, a, b),
        Some(xi) => {
            let aux = AuxPair::from_real_xi(xi)?;
            two_qubit::two_qubit_overlap(j, a, b, &aux)?
        }
    };
    let mut p = params(vec![("j", json!(j.to_string())), ("a", direction(a)), ("b", direction(b))]);
    if let Some(xi) = args.xi {
        p.insert("xi".into(), float(xi));
    }
    let results = json!({
        "matrix": matrix(&m.matrix),
        "kappa": float(m.kappa),
        "unitary": matrix(&m.unitary),
        "proportional": m.proportional,
        "r": complex(rs.r),
        "s": complex(rs.s),
    });
    Ok(OutputEnvelope::new("overlap", p, results))
}

fn sequence_json(seq: &SynthesizedSequence) -> Value {
    let segments: Vec<Value> = seq
        .segments
        .iter()
        .map(|s| {
            json!({
                "axis": s.axis.to_string(),
                "angle": float(s.angle),
                "target_phase": float(s.target_phase),
                "varphi": float(s.root.varphi),
                "root_index": s.root.index,
                "candidates": floats(&s.root.candidates),
                "vertices": s.path.vertices().iter().map(|d| direction(*d)).collect::<Vec<_>>(),
                "holonomy": matrix(&s.holonomy),
            })
        })
        .collect();
    let solved: Vec<f64> = seq.segments.iter().map(|s| s.root.varphi).collect();
    json!({
        "vertices": seq.vertices().into_iter().map(direction).collect::<Vec<_>>(),
        "segments": segments,
        "solved_angles": floats(&solved),
        "predicted_unitary": matrix(&seq.predicted_unitary),
        "composed_unitary": matrix(&seq.composed_unitary),
        "recomposition_fidelity": float(seq.recomposition_fidelity),
    })
}

pub fn cmd_synth(args: &SynthArgs) -> CmdResult {
    let j = parse_j(&args.j)?;
    let n = j.require_gate_valid()?;
    let table = match (args.printed_table, args.alternate_h) {
        (false, _) => CliffordTable::Compiled,
        (true, false) => CliffordTable::Printed,
        (true, true) => CliffordTable::PrintedAlternateH,
    };
    let need_angle = || args.angle.ok_or_else(|| CliError::usage("--angle is required for rotation gates"));
    let (name, seq) = match args.gate {
        GateKind::T => ("T", synthesis::synth_clifford_t(n, CliffordGate::T, table)?),
        GateKind::S => ("S", synthesis::synth_clifford_t(n, CliffordGate::S, table)?),
        GateKind::H => ("H", synthesis::synth_clifford_t(n, CliffordGate::H, table)?),
        GateKind::Rx => ("rx", synthesis::synth_rotation(n, Axis::X, need_angle()?)?),
        GateKind::Ry => ("ry", synthesis::synth_rotation(n, Axis::Y, need_angle()?)?),
        GateKind::Rz => ("rz", synthesis::synth_rotation(n, Axis::Z, need_angle()?)?),
        GateKind::Su2 => {
            let (a, b, g) = args.euler.ok_or_else(|| CliError::usage("--euler is required for su2"))?;
            ("su2", synthesis::compile_su2(n, &synthesis::zyz_compose(a, b, g))?)
        }
    };
    let table_name = match table {
        CliffordTable::Compiled => "compiled",
        CliffordTable::Printed => "printed",
        CliffordTable::PrintedAlternateH => "printed-alternate-h",
    };
    let mut p = params(vec![("gate", json!(name)), ("j", json!(j.to_string())), ("table", json!(table_name))]);
    if let Some(a) = args.angle {
        p.insert("angle".into(), float(a));
    }
    if let Some((a, b, g)) = args.euler {
        p.insert("euler".into(), floats(&[a, b, g]));
    }
    Ok(OutputEnvelope::new("synth", p, sequence_json(&seq)))
}

/// Base cycles of the dense-measurement sweep.
pub fn zeno_base_path(axis: ZenoAxis, phi: f64) -> Result<MeasurementPath, CliError> {
    let angles = match axis {
        ZenoAxis::Z => [(0.0, 0.0), (FRAC_PI_2, 0.0), (FRAC_PI_2, phi), (0.0, 0.0)],
        ZenoAxis::X => [(0.0, 0.0), (FRAC_PI_2, PI), (phi, FRAC_PI_2), (0.0, 0.0)],
    };
    let vertices = angles.iter().map(|&(t, p)| Direction::from_any_polar(t, p)).collect::<crate::Result<Vec<_>>>()?;
    Ok(MeasurementPath::new(vertices)?)
}

pub fn cmd_zeno(args: &ZenoArgs) -> CmdResult {
    let j = parse_j(&args.j)?;
    if args.steps.is_empty() || args.steps.contains(&0) {
        return Err(CliError::usage("--steps needs positive integers"));
    }
    let base = zeno_base_path(args.axis, args.phi)?;
    let rows = holonomy::zeno_sweep(j, &base, &holonomy::default_input(), &args.steps)?;
    if let Some(path) = &args.out {
        let mut w = csv::Writer::from_path(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        let io = |e: csv::Error| CliError::usage(format!("{}: {e}", path.display()));
        w.write_record(["N", "relative_phase", "survival_probability", "max_offdiag"]).map_err(io)?;
        for r in &rows {
            w.write_record([
                r.steps_per_leg.to_string(),
                super::envelope::format_float(r.relative_phase),
                super::envelope::format_float(r.survival_probability),
                super::envelope::format_float(r.max_offdiag),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    }
    let axis = match args.axis {
        ZenoAxis::X => "x",
        ZenoAxis::Z => "z",
    };
    let p = params(vec![
        ("j", json!(j.to_string())),
        ("phi", float(args.phi)),
        ("axis", json!(axis)),
        ("steps", json!(args.steps)),
    ]);
    let table: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "N": r.steps_per_leg,
                "relative_phase": float(r.relative_phase),
                "survival_probability": float(r.survival_probability),
                "max_offdiag": float(r.max_offdiag),
            })
        })
        .collect();
    let predicted = match args.axis {
        ZenoAxis::Z => float(holonomy::zeno_predicted_phase(j, args.phi)),
        ZenoAxis::X => Value::Null,
    };
    let results = json!({
        "base_path": base.vertices().iter().map(|d| direction(*d)).collect::<Vec<_>>(),
        "predicted_phase": predicted,
        "rows": table,
    });
    Ok(OutputEnvelope::new("zeno", p, results))
}

pub fn cmd_simulate(args: &SimulateArgs) -> CmdResult {
    let j = parse_j(&args.j)?;
    let text = fs::read_to_string(&args.path).map_err(|e| CliError::usage(format!("{}: {e}", args.path.display())))?;
    let path = MeasurementPath::parse(&text)
        .map_err(|e| CliError::usage(format!("{}:{}: {}", args.path.display(), e.line, e.message)))?;
    let input = match args.input {
        None => Vec2::new(C64::from(FRAC_1_SQRT_2), C64::from(FRAC_1_SQRT_2)),
        Some((a, b)) => Vec2::new(C64::from(a), C64::from(b)),
    };
    let strategy = match args.strategy {
        StrategyArg::Postselect => Strategy::Postselect,
        StrategyArg::Restart => Strategy::Restart,
    };
    let cfg = SimConfig::new(args.shots, args.seed, strategy, args.max_restarts)?;
    let stats = sim::run_sequence(j, &path, &input, &cfg)?;
    let h = holonomy::holonomy(j, &path)?;
    let p = params(vec![
        ("path", json!(args.path.display().to_string())),
        ("j", json!(j.to_string())),
        ("shots", json!(args.shots)),
        ("seed", json!(args.seed)),
        ("strategy", json!(format!("{strategy:?}").to_lowercase())),
        ("max_restarts", json!(args.max_restarts)),
        ("input", json!([complex(input[0]), complex(input[1])])),
    ]);
    let results = json!({
        "successes": stats.successes,
        "total_attempts": stats.total_attempts,
        "empirical_success_rate": float(stats.empirical_success_rate),
        "mean_restarts": float(stats.mean_restarts),
        "exhausted_restarts": stats.exhausted_restarts,
        "final_fidelity": stats.final_fidelity.map(float).unwrap_or(Value::Null),
        "analytic_survival": float(stats.analytic_survival),
        "holonomy": matrix(&h.unitary),
    });
    Ok(OutputEnvelope::new("simulate", p, results))
}

pub fn cmd_qec_bitflip(args: &BitflipArgs) -> CmdResult {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let cases: Vec<(Direction, Vec2)> = match args.random {
        None => vec![(dir(args.direction)?, Vec2::new(C64::from(0.6), C64::from(0.8)))],
        Some(count) => (0..count).map(|_| (qec::random_direction(&mut rng), qec::random_qubit(&mut rng))).collect(),
    };
    let frame = if args.lab_frame { qec::ErrorFrame::Lab } else { qec::ErrorFrame::Rotated };
    let mut rows = Vec::new();
    let mut min_fidelity = f64::INFINITY;
    for (d, logical) in &cases {
        for error in [None, Some(0), Some(1), Some(2)] {
            let branches = qec::bitflip_branches(*d, logical, error, frame)?;
            let mean: f64 = branches.iter().map(|b| b.probability * b.fidelity).sum();
            min_fidelity = min_fidelity.min(mean);
            let branch_json: Vec<Value> = branches
                .iter()
                .map(|b| {
                    json!({
                        "syndrome": [b.syndrome.0, b.syndrome.1],
                        "probability": float(b.probability),
                        "fidelity": float(b.fidelity),
                    })
                })
                .collect();
            rows.push(json!({
                "direction": direction(*d),
                "error_qubit": error,
                "branches": branch_json,
                "fidelity": float(mean),
            }));
        }
    }
    let p = params(vec![
        ("direction", floats(&[args.direction.0, args.direction.1])),
        ("random", json!(args.random)),
        ("seed", json!(args.seed)),
        ("frame", json!(if args.lab_frame { "lab" } else { "rotated" })),
    ]);
    let results = json!({ "rows": rows, "min_fidelity": float(min_fidelity) });
    Ok(OutputEnvelope::new("qec bitflip-demo", p, results))
}

pub fn cmd_qec_shor(args: &ShorArgs) -> CmdResult {
    if args.samples == 0 {
        return Err(CliError::usage("--samples must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut max_violation: f64 = 0.0;
    let mut max_defect: f64 = 0.0;
    let mut max_direct: f64 = 0.0;
    for k in 0..args.samples {
        let (a, b) = (qec::random_direction(&mut rng), qec::random_direction(&mut rng));
        let e = qec::shor_overlap_elements(a, b, k < args.direct);
        max_violation = max_violation.max(qec::shor_condition_violation(&e.closed_form));
        if let Some(dev) = e.deviation() {
            max_direct = max_direct.max(dev);
        }
        max_defect = max_defect.max(qec::shor_unitarity_check(a, b)?.defect);
    }
    let p = params(vec![
        ("samples", json!(args.samples)),
        ("seed", json!(args.seed)),
        ("direct", json!(args.direct.min(args.samples))),
    ]);
    let results = json!({
        "max_condition_violation": float(max_violation),
        "max_proportionality_defect": float(max_defect),
        "max_direct_deviation": float(max_direct),
    });
    Ok(OutputEnvelope::new("qec shor-verify", p, results))
}
