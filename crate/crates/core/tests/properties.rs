mod common;

use std::f64::consts::{PI, TAU};

use discrete_holonomy::angle::wrap_pi;
use discrete_holonomy::cli::envelope::{floats, OutputEnvelope};
use discrete_holonomy::holonomy::{self, MeasurementPath};
use discrete_holonomy::synthesis::{self, Axis};
use discrete_holonomy::two_qubit::{self, AuxPair};
use discrete_holonomy::{overlap, qec, Direction, Mat2, SpinJ, Vec2, C64};
use proptest::prelude::*;

use common::*;

fn direction() -> impl Strategy<Value = Direction> {
    (-1.0f64..1.0, 0.0f64..TAU).prop_map(|(z, p)| Direction::new(z.acos(), p).unwrap())
}

/// Directions kept inside one hemisphere so no leg is close to antipodal.
fn northern() -> impl Strategy<Value = Direction> {
    (0.0f64..1.3, 0.0f64..TAU).prop_map(|(t, p)| Direction::new(t, p).unwrap())
}

fn qubit() -> impl Strategy<Value = Vec2> {
    prop::array::uniform4(-1.0f64..1.0)
        .prop_filter("nonzero", |a| a.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|a| {
            let v = Vec2::new(C64::new(a[0], a[1]), C64::new(a[2], a[3]));
            v / C64::from(v.norm())
        })
}

fn cycle() -> impl Strategy<Value = MeasurementPath> {
    prop::collection::vec(northern(), 2..6).prop_map(|mut v| {
        v.push(v[0]);
        MeasurementPath::new(v).unwrap()
    })
}

fn spin() -> impl Strategy<Value = SpinJ> {
    (1u32..=4).prop_map(SpinJ::half_odd)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_overlap_matches_state_products(j in spin(), a in direction(), b in direction()) {
        let m = overlap::overlap_matrix(j, a, b);
        prop_assert!(max_diff(&m.matrix, &overlap_ref(j, a, b)) < 1e-12);
    }

    #[test]
    fn overlap_is_proportional_to_unitary(j in spin(), a in direction(), b in direction()) {
        let m = overlap::overlap_matrix(j, a, b).matrix;
        let w = (m.adjoint() * m)[(0, 0)].re;
        prop_assert!(max_diff(&(m.adjoint() * m), &(Mat2::identity() * C64::from(w))) < 1e-12);
    }

    #[test]
    fn reversed_cycle_gives_inverse(j in spin(), path in cycle()) {
        let fwd = holonomy::holonomy(j, &path).unwrap().unitary;
        let back = holonomy::holonomy(j, &path.reversed()).unwrap().unitary;
        prop_assert!(max_diff(&back, &fwd.adjoint()) < 1e-9);
    }

    #[test]
    fn holonomy_matches_frame_oracle(path in cycle()) {
        let j = SpinJ::half_odd(1);
        let u = holonomy::holonomy(j, &path).unwrap().unitary;
        prop_assert!(max_diff(&u, &polar_ref(&cycle_product(j, path.vertices()))) < 1e-9);
    }

    #[test]
    fn survival_is_input_independent(j in spin(), path in cycle(), a in qubit(), b in qubit()) {
        let h = holonomy::holonomy(j, &path).unwrap();
        prop_assert!((h.survival_probability(&a) - h.survival_probability(&b)).abs() < 1e-12);
    }

    #[test]
    fn concatenated_cycles_compose(j in spin(), p in cycle(), q in cycle()) {
        // Join q onto p through a shared base point.
        let mut v = p.vertices().to_vec();
        v.extend(q.vertices().iter().copied());
        v.push(p.start());
        let joined = MeasurementPath::new(v).unwrap();
        let bridge = MeasurementPath::new(vec![p.start(), q.start(), p.start()]).unwrap();
        let mut v2 = q.vertices().to_vec();
        v2.push(p.start());
        v2.insert(0, p.start());
        let inner = MeasurementPath::new(v2).unwrap();
        let lhs = holonomy::holonomy(j, &joined).unwrap().unitary;
        let rhs = holonomy::holonomy(j, &inner).unwrap().unitary * holonomy::holonomy(j, &p).unwrap().unitary;
        prop_assert!(max_diff(&lhs, &rhs) < 1e-9);
        prop_assert!(max_diff(&holonomy::holonomy(j, &bridge).unwrap().unitary, &Mat2::identity()) < 1e-9);
    }

    #[test]
    fn back_and_forth_is_trivial(j in spin(), a in direction(), b in direction()) {
        prop_assume!(a.unit_vector().dot(&b.unit_vector()) > -0.99);
        let path = MeasurementPath::new(vec![a, b, a]).unwrap();
        let u = holonomy::holonomy(j, &path).unwrap().unitary;
        prop_assert!(max_diff(&u, &Mat2::identity()) < 1e-9);
    }

    #[test]
    fn relative_phase_is_odd(n in 1u32..5, v in 0.0f64..TAU) {
        let diff = wrap_pi(synthesis::relative_phase(n, -v) + synthesis::relative_phase(n, v));
        prop_assert!(diff.abs() < 1e-9);
    }

    #[test]
    fn solver_roots_hit_target(n in 1u32..4, target in -3.1f64..3.1) {
        let roots = synthesis::solve_subspace_angle(n, target);
        prop_assert!(!roots.is_empty());
        for v in roots {
            prop_assert!(wrap_pi(synthesis::relative_phase(n, v) - target).abs() < 1e-9);
        }
    }

    #[test]
    fn rotations_compile(axis in prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)], angle in -PI..PI, n in 1u32..3) {
        let seq = synthesis::synth_rotation(n, axis, angle).unwrap();
        let oracle = polar_ref(&cycle_product(SpinJ::half_odd(n), &seq.vertices()));
        prop_assert!(fidelity(&oracle, &synthesis::rotation_matrix(axis, angle)) > 1.0 - 1e-9);
    }

    #[test]
    fn zyz_round_trip(a in -PI..PI, b in 0.0..PI, g in -PI..PI) {
        let u = synthesis::zyz_compose(a, b, g);
        let (a2, b2, g2) = synthesis::zyz_decompose(&u).unwrap();
        prop_assert!(fidelity(&synthesis::zyz_compose(a2, b2, g2), &u) > 1.0 - 1e-12);
    }

    #[test]
    fn unit_xi_reduces_to_single_qubit(a in direction(), b in direction()) {
        let j = SpinJ::half_odd(1);
        let two = two_qubit::two_qubit_overlap(j, a, b, &AuxPair::from_real_xi(1.0).unwrap()).unwrap();
        prop_assert!(max_diff(&two.matrix, &overlap::overlap_matrix(j, a, b).matrix) < 1e-12);
    }

    #[test]
    fn shor_block_conditions(a in direction(), b in direction()) {
        let m = qec::shor_overlap_closed_form(a, b);
        prop_assert!(qec::shor_condition_violation(&m) < 1e-12);
        prop_assert!(qec::shor_unitarity_check(a, b).unwrap().defect < 1e-12);
    }

    #[test]
    fn bitflip_corrects_rotated_flips(d in direction(), logical in qubit(), q in 0usize..3) {
        let out = qec::bitflip_encode_and_correct(d, &logical, Some(q)).unwrap();
        prop_assert!(out.fidelity > 1.0 - 1e-12);
    }

    #[test]
    fn path_text_round_trip(path in cycle()) {
        let back = MeasurementPath::parse(&path.to_text()).unwrap();
        prop_assert_eq!(back.len(), path.len());
        for (x, y) in back.vertices().iter().zip(path.vertices()) {
            prop_assert!(x.same_label(*y, 1e-15));
        }
    }

    #[test]
    fn envelope_floats_round_trip(xs in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, 0..8)) {
        let env = OutputEnvelope::new("t", Default::default(), floats(&xs));
        prop_assert_eq!(OutputEnvelope::from_json(&env.to_json()).unwrap(), env);
    }
}
