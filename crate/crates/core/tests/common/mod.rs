#![allow(dead_code)]

use std::f64::consts::PI;

use chainwalk::matchgate::{single_qubit_u, CircuitGate, GateKind, MatchgateCircuit, MatchgatePair, MatchgateParams};
use chainwalk::numerics::{Mat2, C64};
use chainwalk::scalar_walk::{ChainState, Coin};
use chainwalk::spin_chain::HamiltonianParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn angle(rng: &mut impl Rng) -> f64 {
    rng.random_range(-PI..PI)
}

pub fn params(rng: &mut impl Rng) -> MatchgateParams {
    MatchgateParams::new(angle(rng), angle(rng), angle(rng))
}

/// Haar-ish random 2x2 unitary with a random global phase.
pub fn unitary2(rng: &mut impl Rng) -> Mat2 {
    let u = single_qubit_u(angle(rng), angle(rng), angle(rng));
    u.scale(C64::from_polar(1.0, angle(rng)))
}

pub fn coin(rng: &mut impl Rng) -> Coin {
    Coin::new(unitary2(rng)).unwrap()
}

/// Diagonal `v` with `det v = det u`.
pub fn conserving_pair(rng: &mut impl Rng) -> MatchgatePair {
    let (a, b) = (angle(rng), angle(rng));
    let v = Mat2::new(C64::from_polar(1.0, a), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::from_polar(1.0, b));
    let u = single_qubit_u(angle(rng), angle(rng), angle(rng)).scale(C64::from_polar(1.0, (a + b) / 2.0));
    MatchgatePair::new(v, u).unwrap()
}

/// Random circuit of number-conserving gates, mixing both gate kinds.
pub fn conserving_circuit(rng: &mut impl Rng, d: usize, gates: usize) -> MatchgateCircuit {
    let mut c = MatchgateCircuit::new(d);
    for _ in 0..gates {
        let q = rng.random_range(0..d - 1);
        let kind = if rng.random_bool(0.5) {
            GateKind::Param(params(rng))
        } else {
            GateKind::General(conserving_pair(rng))
        };
        c.push(CircuitGate::new(kind, q)).unwrap();
    }
    c
}

pub fn chain_state(rng: &mut impl Rng, d: usize) -> ChainState {
    let raw: Vec<C64> = (0..d)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let n = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    ChainState::new(raw.into_iter().map(|a| a / n).collect()).unwrap()
}

pub fn hamiltonian(rng: &mut impl Rng, d: usize) -> HamiltonianParams {
    let mut draw = |n: usize| -> Vec<f64> { (0..n).map(|_| rng.sample(StandardNormal)).collect() };
    let lambda = draw(d - 1);
    let chi = draw(d - 1);
    let mu = draw(d);
    HamiltonianParams::new(lambda, chi, mu).unwrap()
}
