//! Nearest-neighbour matchgates and the staggered-walk circuit.
//!
//! A matchgate is a 4x4 unitary with a 2x2 block `v` on `{|00⟩, |11⟩}` and a
//! 2x2 block `u` on `{|01⟩, |10⟩}`, `det v = det u`. When `v` is diagonal
//! the gate conserves the number of 1-bits and, on the single-excitation
//! sector, acts on two neighbouring nodes exactly as `u`.
//!
//! Local basis: a gate on the pair `(q, q+1)` is written in the basis
//! `|b_{q+1} b_q⟩`, i.e. row/column index `2·b_{q+1} + b_q`. Node `q`
//! (excitation on qubit `q`) is therefore `|01⟩`, the first vector of the
//! `u` block, and node `q+1` is `|10⟩`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::serialize_sig17;
use crate::numerics::{ComplexMatrix, Mat2, C64, DEFAULT_TOL, ONE, ZERO};
use crate::scalar_walk::Coin;

/// Tolerance used by [`classify_gate`].
pub const CLASSIFY_TOL: f64 = 1e-8;

/// Unit-determinant single-qubit rotation
/// `U(θ,φ,λ) = [[e^{-i(φ+λ)/2} cos θ/2, -e^{-i(φ-λ)/2} sin θ/2],
///              [e^{ i(φ-λ)/2} sin θ/2,  e^{ i(φ+λ)/2} cos θ/2]]`.
///
/// It has unit determinant and differs from OpenQASM's `u3` by the global
/// phase `e^{-i(φ+λ)/2}`.
pub fn single_qubit_u(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    let sum = (phi + lambda) / 2.0;
    let diff = (phi - lambda) / 2.0;
    Mat2::new(
        C64::from_polar(c, -sum),
        -C64::from_polar(s, -diff),
        C64::from_polar(s, diff),
        C64::from_polar(c, sum),
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatchgateParams {
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
}

impl MatchgateParams {
    pub const fn new(theta: f64, phi: f64, lambda: f64) -> Self {
        MatchgateParams { theta, phi, lambda }
    }

    /// `M(-π/2, 0, 0)`: the modified Hadamard coin.
    pub const HADAMARD_COIN: MatchgateParams =
        MatchgateParams::new(-std::f64::consts::FRAC_PI_2, 0.0, 0.0);

    /// `M(π, π, 0)`: the `iX` swap.
    pub const I_SWAP: MatchgateParams =
        MatchgateParams::new(std::f64::consts::PI, std::f64::consts::PI, 0.0);

    pub fn u_block(&self) -> Mat2 {
        single_qubit_u(self.theta, self.phi, self.lambda)
    }

    pub fn is_finite(&self) -> bool {
        self.theta.is_finite() && self.phi.is_finite() && self.lambda.is_finite()
    }
}

/// The `(v, u)` block pair of a general matchgate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatchgatePair {
    v: Mat2,
    u: Mat2,
}

impl MatchgatePair {
    pub fn new(v: Mat2, u: Mat2) -> Result<Self> {
        for m in [&v, &u] {
            let deviation = m.unitarity_defect();
            if deviation > DEFAULT_TOL {
                return Err(Error::NotUnitary { deviation });
            }
        }
        let mismatch = (v.det() - u.det()).norm();
        if mismatch > DEFAULT_TOL {
            return Err(Error::Determinant { mismatch });
        }
        Ok(MatchgatePair { v, u })
    }

    pub fn v(&self) -> Mat2 {
        self.v
    }

    pub fn u(&self) -> Mat2 {
        self.u
    }

    pub fn conserves_number(&self) -> bool {
        self.v.0[0][1].norm() <= DEFAULT_TOL && self.v.0[1][0].norm() <= DEFAULT_TOL
    }
}

fn layout(v: &Mat2, u: &Mat2) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = v.0[0][0];
    m[(0, 3)] = v.0[0][1];
    m[(3, 0)] = v.0[1][0];
    m[(3, 3)] = v.0[1][1];
    m[(1, 1)] = u.0[0][0];
    m[(1, 2)] = u.0[0][1];
    m[(2, 1)] = u.0[1][0];
    m[(2, 2)] = u.0[1][1];
    m
}

/// The 4x4 matchgate with `v` on the outer corners and `u` in the middle.
pub fn matchgate_matrix(g: &MatchgatePair) -> ComplexMatrix {
    layout(&g.v, &g.u)
}

/// `M(θ, φ, λ)`: identity on `{|00⟩, |11⟩}` and [`single_qubit_u`] inside.
pub fn param_matrix(p: &MatchgateParams) -> ComplexMatrix {
    layout(&Mat2::IDENTITY, &p.u_block())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateClass {
    /// Matchgate with diagonal `v`: conserves the excitation number.
    NumberConserving,
    /// Matchgate with off-diagonal `v`: conserves only parity.
    Parity,
    NotMatchgate,
}

pub fn classify_gate(m: &ComplexMatrix) -> Result<GateClass> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::Dimension(format!(
            "expected a 4x4 gate, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let deviation = m.unitarity_defect();
    if deviation > CLASSIFY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let even = |i: usize| i == 0 || i == 3;
    for r in 0..4 {
        for c in 0..4 {
            if even(r) != even(c) && m[(r, c)].norm() > CLASSIFY_TOL {
                return Ok(GateClass::NotMatchgate);
            }
        }
    }
    let v = Mat2::new(m[(0, 0)], m[(0, 3)], m[(3, 0)], m[(3, 3)]);
    let u = Mat2::new(m[(1, 1)], m[(1, 2)], m[(2, 1)], m[(2, 2)]);
    if (v.det() - u.det()).norm() > CLASSIFY_TOL {
        return Ok(GateClass::NotMatchgate);
    }
    if v.0[0][1].norm() <= CLASSIFY_TOL && v.0[1][0].norm() <= CLASSIFY_TOL {
        Ok(GateClass::NumberConserving)
    } else {
        Ok(GateClass::Parity)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    Param(MatchgateParams),
    General(MatchgatePair),
}

impl GateKind {
    pub fn matrix(&self) -> ComplexMatrix {
        match self {
            GateKind::Param(p) => param_matrix(p),
            GateKind::General(g) => matchgate_matrix(g),
        }
    }

    /// `(v, u)` blocks.
    pub fn blocks(&self) -> (Mat2, Mat2) {
        match self {
            GateKind::Param(p) => (Mat2::IDENTITY, p.u_block()),
            GateKind::General(g) => (g.v, g.u),
        }
    }

    pub fn conserves_number(&self) -> bool {
        match self {
            GateKind::Param(_) => true,
            GateKind::General(g) => g.conserves_number(),
        }
    }
}

/// A matchgate on the adjacent pair `(q, q+1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircuitGate {
    pub kind: GateKind,
    pub q: usize,
}

impl CircuitGate {
    pub fn new(kind: GateKind, q: usize) -> Self {
        CircuitGate { kind, q }
    }

    /// Builds a gate from an explicit qubit pair, which must be `(q, q+1)`.
    pub fn on_pair(kind: GateKind, first: usize, second: usize) -> Result<Self> {
        if second != first + 1 {
            return Err(Error::NotAdjacent { first, second });
        }
        Ok(CircuitGate { kind, q: first })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MatchgateCircuit {
    width: usize,
    gates: Vec<CircuitGate>,
}

impl MatchgateCircuit {
    pub fn new(width: usize) -> Self {
        MatchgateCircuit {
            width,
            gates: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[CircuitGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: CircuitGate) -> Result<()> {
        if gate.q + 1 >= self.width {
            return Err(Error::Index(format!(
                "pair ({}, {}) outside a {}-qubit register",
                gate.q,
                gate.q + 1,
                self.width
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn with_gate(mut self, kind: GateKind, q: usize) -> Result<Self> {
        self.push(CircuitGate::new(kind, q))?;
        Ok(self)
    }

    /// Appends every gate of `other` (same width).
    pub fn extend(&mut self, other: &MatchgateCircuit) -> Result<()> {
        if other.width != self.width {
            return Err(Error::Dimension(format!(
                "cannot append a {}-qubit circuit to a {}-qubit one",
                other.width, self.width
            )));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub(crate) fn gates_mut(&mut self) -> &mut [CircuitGate] {
        &mut self.gates
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&WireCircuit::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: WireCircuit = serde_json::from_str(text)?;
        wire.try_into()
    }
}

/// Result of compiling a coin into an `M(θ, φ, λ)` gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinCompilation {
    pub params: MatchgateParams,
    /// Unit phase with `det(α·C·X) = 1`; the gate's `u` block is `α·C·X`.
    pub alpha: C64,
}

/// Compiles `C' = C·X` into three angles, after rescaling it to unit
/// determinant.
///
/// `α` is the square root of `1/det C'` with argument in `(-π/2, π/2]`.
/// Angles are canonicalised with `cos θ/2 ≥ 0`, `(φ-λ)/2 ∈ (-π/2, π/2]`,
/// and `λ = 0` whenever only one of `φ ± λ` is determined.
pub fn coin_to_params(coin: &Coin) -> CoinCompilation {
    const POLE: f64 = 1e-12;
    let c_prime = coin.modified();

    let det_arg = c_prime.det().arg();
    let mut alpha = C64::from_polar(1.0, -det_arg / 2.0);
    if alpha.arg() <= -std::f64::consts::FRAC_PI_2 + POLE {
        alpha = -alpha;
    }
    let u = c_prime.scale(alpha);
    let (u00, u10) = (u.0[0][0], u.0[1][0]);

    // (sum, diff) = ((φ+λ)/2, (φ-λ)/2); half = θ/2.
    let in_range = |a: f64| a > -std::f64::consts::FRAC_PI_2 + POLE && a <= std::f64::consts::FRAC_PI_2 + POLE;
    let signed_diff = |z: C64| -> (f64, f64) {
        if in_range(z.arg()) {
            (z.arg(), 1.0)
        } else {
            ((-z).arg(), -1.0)
        }
    };

    let (half, sum, diff) = if u10.norm() <= POLE {
        (0.0, -u00.arg(), -u00.arg())
    } else if u00.norm() <= POLE {
        let (diff, sign) = signed_diff(u10);
        (sign * std::f64::consts::FRAC_PI_2, diff, diff)
    } else {
        let (diff, sign) = signed_diff(u10);
        let half = sign * u10.norm().atan2(u00.norm());
        (half, -u00.arg(), diff)
    };

    CoinCompilation {
        params: MatchgateParams::new(2.0 * half, sum + diff, sum - diff),
        alpha,
    }
}

/// Gates for one staggered-walk step on `d` qubits: the compiled coin on
/// `(0,1), (2,3), …` followed by `M(π, π, 0)` on `(1,2), (3,4), …`.
pub fn walk_step_circuit(d: usize, coin: &Coin) -> Result<MatchgateCircuit> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::Dimension(format!(
            "the walk circuit needs an even number of qubits (at least 2), got {d}"
        )));
    }
    let coin_gate = GateKind::Param(coin_to_params(coin).params);
    let swap = GateKind::Param(MatchgateParams::I_SWAP);
    let mut circuit = MatchgateCircuit::new(d);
    for q in (0..d).step_by(2) {
        circuit.push(CircuitGate::new(coin_gate, q))?;
    }
    for q in (1..d - 1).step_by(2) {
        circuit.push(CircuitGate::new(swap, q))?;
    }
    Ok(circuit)
}

pub fn build_staggered_walk_circuit(d: usize, coin: &Coin, steps: usize) -> Result<MatchgateCircuit> {
    let step = walk_step_circuit(d, coin)?;
    let mut circuit = MatchgateCircuit::new(d);
    for _ in 0..steps {
        circuit.extend(&step)?;
    }
    Ok(circuit)
}

// JSON wire format.

#[derive(Serialize, Deserialize)]
struct WireCircuit {
    width: usize,
    gates: Vec<WireGate>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum WireGate {
    #[serde(rename = "paramM")]
    Param {
        #[serde(serialize_with = "serialize_sig17")]
        theta: f64,
        #[serde(serialize_with = "serialize_sig17")]
        phi: f64,
        #[serde(serialize_with = "serialize_sig17")]
        lambda: f64,
        q: usize,
    },
    #[serde(rename = "generalM")]
    General {
        v: WireMat2,
        u: WireMat2,
        q: usize,
    },
}

/// Row-major `[[re, im], …]` entries of a 2x2 block.
#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct WireMat2(Vec<WireComplex>);

#[derive(Serialize, Deserialize)]
struct WireComplex(
    #[serde(serialize_with = "serialize_sig17")] f64,
    #[serde(serialize_with = "serialize_sig17")] f64,
);

impl From<&Mat2> for WireMat2 {
    fn from(m: &Mat2) -> Self {
        WireMat2(
            m.0.iter()
                .flatten()
                .map(|z| WireComplex(z.re, z.im))
                .collect(),
        )
    }
}

impl TryFrom<WireMat2> for Mat2 {
    type Error = Error;

    fn try_from(w: WireMat2) -> Result<Mat2> {
        if w.0.len() != 4 {
            return Err(Error::Dimension(format!(
                "a 2x2 block needs 4 entries, got {}",
                w.0.len()
            )));
        }
        let z: Vec<C64> = w.0.iter().map(|c| C64::new(c.0, c.1)).collect();
        Ok(Mat2::new(z[0], z[1], z[2], z[3]))
    }
}

impl From<&MatchgateCircuit> for WireCircuit {
    fn from(c: &MatchgateCircuit) -> Self {
        let gates = c
            .gates
            .iter()
            .map(|g| match &g.kind {
                GateKind::Param(p) => WireGate::Param {
                    theta: p.theta,
                    phi: p.phi,
                    lambda: p.lambda,
                    q: g.q,
                },
                GateKind::General(pair) => WireGate::General {
                    v: (&pair.v).into(),
                    u: (&pair.u).into(),
                    q: g.q,
                },
            })
            .collect();
        WireCircuit {
            width: c.width,
            gates,
        }
    }
}

impl TryFrom<WireCircuit> for MatchgateCircuit {
    type Error = Error;

    fn try_from(w: WireCircuit) -> Result<Self> {
        let mut circuit = MatchgateCircuit::new(w.width);
        for g in w.gates {
            let gate = match g {
                WireGate::Param { theta, phi, lambda, q } => {
                    let p = MatchgateParams::new(theta, phi, lambda);
                    if !p.is_finite() {
                        return Err(Error::Invalid("gate angles must be finite".into()));
                    }
                    CircuitGate::new(GateKind::Param(p), q)
                }
                WireGate::General { v, u, q } => {
                    let pair = MatchgatePair::new(v.try_into()?, u.try_into()?)?;
                    CircuitGate::new(GateKind::General(pair), q)
                }
            };
            circuit.push(gate)?;
        }
        Ok(circuit)
    }
}

/// The two-qubit number operator `diag(0, 1, 1, 2)`.
pub fn pair_number_operator() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[ZERO, ONE, ONE, ONE + ONE])
}
