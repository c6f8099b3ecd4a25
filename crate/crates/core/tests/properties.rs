mod common;

use std::f64::consts::PI;

use chainwalk::format::sig17;
use chainwalk::matchgate::{
    coin_to_params, pair_number_operator, param_matrix, single_qubit_u, CircuitGate, GateKind, MatchgateCircuit,
    MatchgateParams,
};
use chainwalk::numerics::{hermitian_exp, matrices_equal_up_to_global_phase, ComplexMatrix, Mat2, C64};
use chainwalk::qasm_emit::{compose, decompose_m, emit_qasm, parse_applications, EmitOptions};
use chainwalk::scalar_walk::{staggered_step, Coin, SwapPhase};
use chainwalk::spin_chain::build_hamiltonian;
use proptest::prelude::*;

fn angle() -> impl Strategy<Value = f64> {
    -PI..PI
}

fn mat2() -> impl Strategy<Value = Mat2> {
    (angle(), angle(), angle(), angle()).prop_map(|(t, p, l, g)| single_qubit_u(t, p, l).scale(C64::from_polar(1.0, g)))
}

fn complex_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), rows * cols).prop_map(move |v| {
        ComplexMatrix::from_row_major(rows, cols, v.into_iter().map(|(r, i)| C64::new(r, i)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(a in complex_matrix(2, 2), b in complex_matrix(1, 2), c in complex_matrix(2, 3)) {
        let left = a.kron(&b).kron(&c);
        let right = a.kron(&b.kron(&c));
        prop_assert!(left.max_abs_diff(&right).unwrap() < 1e-15);
    }

    #[test]
    fn kron_mixed_product(a in mat2(), b in mat2(), c in mat2(), d in mat2()) {
        let (a, b, c, d) = (a.to_matrix(), b.to_matrix(), c.to_matrix(), d.to_matrix());
        let lhs = a.kron(&b).matmul(&c.kron(&d)).unwrap();
        let rhs = a.matmul(&c).unwrap().kron(&b.matmul(&d).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-14);
    }

    #[test]
    fn exp_is_unitary_and_a_group(seed in any::<u64>(), t1 in -3.0..3.0f64, t2 in -3.0..3.0f64) {
        let mut rng = common::rng(seed);
        let h = build_hamiltonian(&common::hamiltonian(&mut rng, 3)).unwrap();
        let u1 = hermitian_exp(&h, t1).unwrap();
        let u2 = hermitian_exp(&h, t2).unwrap();
        let u12 = hermitian_exp(&h, t1 + t2).unwrap();
        prop_assert!(u1.unitarity_defect() < 1e-10);
        prop_assert!(u1.matmul(&u2).unwrap().max_abs_diff(&u12).unwrap() < 1e-10);
    }

    #[test]
    fn coin_compilation_reproduces_modified_coin(m in mat2()) {
        let coin = Coin::new(m).unwrap();
        let c = coin_to_params(&coin);
        prop_assert!((c.alpha.norm() - 1.0).abs() < 1e-12);
        let want = coin.modified().scale(c.alpha);
        prop_assert!(c.params.u_block().max_abs_diff(&want) < 1e-10);
        prop_assert!(c.params.is_finite());
    }

    #[test]
    fn coin_compilation_at_poles(a in angle(), b in angle(), anti in any::<bool>()) {
        // Diagonal or antidiagonal coins put u00 or u10 at zero.
        let (za, zb, z0) = (C64::from_polar(1.0, a), C64::from_polar(1.0, b), C64::new(0.0, 0.0));
        let m = if anti { Mat2::new(z0, za, zb, z0) } else { Mat2::new(za, z0, z0, zb) };
        let coin = Coin::new(m).unwrap();
        let c = coin_to_params(&coin);
        prop_assert!(c.params.u_block().max_abs_diff(&coin.modified().scale(c.alpha)) < 1e-10);
    }

    #[test]
    fn param_gate_commutes_with_pair_number(t in angle(), p in angle(), l in angle()) {
        let m = param_matrix(&MatchgateParams::new(t, p, l));
        let n = pair_number_operator();
        let comm = m.matmul(&n).unwrap().sub(&n.matmul(&m).unwrap()).unwrap();
        prop_assert!(comm.max_abs() < 1e-15);
    }

    #[test]
    fn decomposition_matches_param_matrix(t in angle(), p in angle(), l in angle()) {
        let params = MatchgateParams::new(t, p, l);
        let m = matrices_equal_up_to_global_phase(&compose(&decompose_m(&params)), &param_matrix(&params), 1e-10).unwrap();
        prop_assert!(m.equal, "deviation {}", m.deviation);
        // The listing reproduces the gate exactly, not only up to phase.
        prop_assert!((m.phase.unwrap() - C64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn emission_is_deterministic_and_angles_round_trip(ps in prop::collection::vec((angle(), angle(), angle()), 1..12)) {
        let mut c = MatchgateCircuit::new(5);
        for (k, (t, p, l)) in ps.iter().enumerate() {
            c.push(CircuitGate::new(GateKind::Param(MatchgateParams::new(*t, *p, *l)), k % 4)).unwrap();
        }
        let a = emit_qasm(&c, &EmitOptions::default()).unwrap();
        let b = emit_qasm(&c, &EmitOptions::default()).unwrap();
        prop_assert_eq!(&a, &b);
        let parsed = parse_applications(&a).unwrap();
        prop_assert_eq!(parsed.len(), ps.len());
        for (app, (t, p, l)) in parsed.iter().zip(&ps) {
            prop_assert_eq!(app.params.theta.to_bits(), t.to_bits());
            prop_assert_eq!(app.params.phi.to_bits(), p.to_bits());
            prop_assert_eq!(app.params.lambda.to_bits(), l.to_bits());
        }
    }

    #[test]
    fn sig17_parses_back_exactly(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let back: f64 = sig17(x).parse().unwrap();
        prop_assert_eq!(back.to_bits(), if x == 0.0 { 0.0f64.to_bits() } else { x.to_bits() });
    }

    #[test]
    fn staggered_step_preserves_norm(seed in any::<u64>(), half in 1usize..20, phase in angle()) {
        let mut rng = common::rng(seed);
        let mut s = common::chain_state(&mut rng, 2 * half);
        let coin = common::coin(&mut rng);
        let sp = SwapPhase::new(C64::from_polar(1.0, phase)).unwrap();
        for _ in 0..25 {
            s = staggered_step(&s, &coin, sp).unwrap();
        }
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
    }
}
