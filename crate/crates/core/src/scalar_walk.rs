//! Discrete-time quantum walks on a scalar chain of `d` nodes.
//!
//! Two engines live here:
//!
//! * the **coined** walk on `n` sites with a two-level coin (`d = 2n`),
//!   which supports periodic and reflecting ends;
//! * the **staggered** walk on `d` nodes, one step of which applies the
//!   modified coin `C' = C·X` to every pair `(0,1), (2,3), …` and then the
//!   phased swap `swap_phase·X` to every pair `(1,2), (3,4), …`.
//!
//! The two are tied together by the flat labelling `|c⟩|k⟩ ↔ |2k + c⟩`
//! ([`coined_to_staggered`]). With that labelling a reflecting coined step
//! with coin `X·C·X` is exactly one staggered step with coin `C`; coins that
//! commute with `X` (identity, balanced) map to themselves.
//!
//! The staggered engine is the reference dynamics that the qubit-chain
//! matchgate circuit reproduces. The circuit's swap gate is `iX` rather than
//! `X`, so matched comparisons run the scalar engine with
//! [`SwapPhase::I`].

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::{serialize_sig17_matrix, sig17};
use crate::numerics::{self, ComplexMatrix, Mat2, C64, DEFAULT_TOL, I, ONE, ZERO};

const MAX_DENSE_NODES: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoinPreset {
    Hadamard,
    Balanced,
    Identity,
}

impl CoinPreset {
    pub fn name(self) -> &'static str {
        match self {
            CoinPreset::Hadamard => "hadamard",
            CoinPreset::Balanced => "balanced",
            CoinPreset::Identity => "identity",
        }
    }
}

impl FromStr for CoinPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hadamard" | "h" => Ok(CoinPreset::Hadamard),
            "balanced" | "b" => Ok(CoinPreset::Balanced),
            "identity" | "i" => Ok(CoinPreset::Identity),
            other => Err(Error::Invalid(format!("unknown coin preset `{other}`"))),
        }
    }
}

/// A 2x2 unitary coin toss operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coin {
    matrix: Mat2,
    preset: Option<CoinPreset>,
}

impl Coin {
    pub fn new(matrix: Mat2) -> Result<Self> {
        let deviation = matrix.unitarity_defect();
        if deviation > DEFAULT_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Coin {
            matrix,
            preset: None,
        })
    }

    pub fn preset(preset: CoinPreset) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let matrix = match preset {
            CoinPreset::Hadamard => Mat2::real(s, s, s, -s),
            CoinPreset::Balanced => Mat2::new(s.into(), I * s, I * s, s.into()),
            CoinPreset::Identity => Mat2::IDENTITY,
        };
        Coin {
            matrix,
            preset: Some(preset),
        }
    }

    pub fn hadamard() -> Self {
        Coin::preset(CoinPreset::Hadamard)
    }

    pub fn balanced() -> Self {
        Coin::preset(CoinPreset::Balanced)
    }

    pub fn identity() -> Self {
        Coin::preset(CoinPreset::Identity)
    }

    pub fn matrix(&self) -> Mat2 {
        self.matrix
    }

    pub fn preset_tag(&self) -> Option<CoinPreset> {
        self.preset
    }

    /// `C' = C·X`: the coin with the first-partition swap absorbed.
    pub fn modified(&self) -> Mat2 {
        self.matrix * Mat2::PAULI_X
    }

    /// `X·C·X`, the coin a reflecting coined walk needs to reproduce the
    /// staggered walk driven by `self`.
    pub fn conjugated_by_x(&self) -> Coin {
        Coin {
            matrix: Mat2::PAULI_X * self.matrix * Mat2::PAULI_X,
            preset: None,
        }
    }
}

impl fmt::Display for Coin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.preset {
            Some(p) => f.write_str(p.name()),
            None => f.write_str("custom"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Boundary {
    #[default]
    Reflecting,
    Periodic,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "reflecting" => Ok(Boundary::Reflecting),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(Error::Invalid(format!("unknown boundary `{other}`"))),
        }
    }
}

/// Unit-modulus factor attached to each second-partition swap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwapPhase(C64);

impl SwapPhase {
    pub const ONE: SwapPhase = SwapPhase(ONE);
    /// Matches the circuit's `iX` swap gate.
    pub const I: SwapPhase = SwapPhase(I);

    pub fn new(phase: C64) -> Result<Self> {
        if (phase.norm() - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::Invalid(format!(
                "swap phase must have unit modulus, got |{phase}| = {}",
                phase.norm()
            )));
        }
        Ok(SwapPhase(phase))
    }

    pub fn value(self) -> C64 {
        self.0
    }
}

impl Default for SwapPhase {
    fn default() -> Self {
        SwapPhase::ONE
    }
}

/// Wavefunction over the `d` nodes of a scalar chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainState {
    amplitudes: Vec<C64>,
}

impl ChainState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::Dimension(format!(
                "a chain needs at least 2 nodes, got {}",
                amplitudes.len()
            )));
        }
        let n = numerics::norm(&amplitudes);
        if (n - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::Invalid(format!("state is not normalized (norm {n})")));
        }
        Ok(ChainState { amplitudes })
    }

    /// The basis state `|node⟩`.
    pub fn basis(d: usize, node: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Dimension(format!("a chain needs at least 2 nodes, got {d}")));
        }
        if node >= d {
            return Err(Error::Index(format!("node {node} outside a chain of {d} nodes")));
        }
        let mut amplitudes = vec![ZERO; d];
        amplitudes[node] = ONE;
        Ok(ChainState { amplitudes })
    }

    pub(crate) fn from_raw(amplitudes: Vec<C64>) -> Self {
        ChainState { amplitudes }
    }

    pub fn nodes(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        numerics::norm(&self.amplitudes)
    }
}

/// `|c⟩|k⟩ ↦ 2k + c`.
pub fn coined_to_staggered(coin: usize, site: usize, n: usize) -> Result<usize> {
    if coin > 1 || site >= n {
        return Err(Error::Index(format!(
            "(c={coin}, k={site}) outside a coined walk with {n} sites"
        )));
    }
    Ok(2 * site + coin)
}

/// Inverse of [`coined_to_staggered`]: returns `(c, k)`.
pub fn staggered_to_coined(node: usize, n: usize) -> Result<(usize, usize)> {
    if node >= 2 * n {
        return Err(Error::Index(format!(
            "node {node} outside a chain of {} nodes",
            2 * n
        )));
    }
    Ok((node % 2, node / 2))
}

/// State of a coined walk, stored coin-major: index `c·n + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinedState {
    sites: usize,
    amplitudes: Vec<C64>,
}

impl CoinedState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() || amplitudes.len() % 2 != 0 {
            return Err(Error::Dimension(format!(
                "a coined state needs an even, non-zero dimension, got {}",
                amplitudes.len()
            )));
        }
        Ok(CoinedState {
            sites: amplitudes.len() / 2,
            amplitudes,
        })
    }

    pub fn basis(coin: usize, site: usize, n: usize) -> Result<Self> {
        coined_to_staggered(coin, site, n)?;
        let mut amplitudes = vec![ZERO; 2 * n];
        amplitudes[coin * n + site] = ONE;
        Ok(CoinedState {
            sites: n,
            amplitudes,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn amplitude(&self, coin: usize, site: usize) -> C64 {
        self.amplitudes[coin * self.sites + site]
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Relabels onto the flat chain via `|c⟩|k⟩ ↦ |2k + c⟩`.
    pub fn to_chain(&self) -> ChainState {
        let n = self.sites;
        let mut flat = vec![ZERO; 2 * n];
        for c in 0..2 {
            for k in 0..n {
                flat[2 * k + c] = self.amplitudes[c * n + k];
            }
        }
        ChainState::from_raw(flat)
    }

    pub fn from_chain(state: &ChainState) -> Result<Self> {
        let d = state.nodes();
        if d % 2 != 0 {
            return Err(Error::Dimension(format!(
                "a chain of {d} nodes has no coined form"
            )));
        }
        let n = d / 2;
        let mut amplitudes = vec![ZERO; d];
        for (node, &a) in state.amplitudes().iter().enumerate() {
            let (c, k) = (node % 2, node / 2);
            amplitudes[c * n + k] = a;
        }
        Ok(CoinedState {
            sites: n,
            amplitudes,
        })
    }
}

/// One coined step: coin toss on every site, then the conditional shift
/// (`|0⟩` moves to `k+1`, `|1⟩` to `k-1`).
///
/// With a reflecting boundary the walker at an end keeps its site and its
/// coin flips: `|0⟩|n-1⟩ → |1⟩|n-1⟩`, `|1⟩|0⟩ → |0⟩|0⟩`.
pub fn coined_step(state: &CoinedState, coin: &Coin, boundary: Boundary) -> CoinedState {
    let n = state.sites;
    let c = coin.matrix();
    let (up, down) = state.amplitudes.split_at(n);
    let mut tossed0 = Vec::with_capacity(n);
    let mut tossed1 = Vec::with_capacity(n);
    for (&a0, &a1) in up.iter().zip(down) {
        let (b0, b1) = c.apply(a0, a1);
        tossed0.push(b0);
        tossed1.push(b1);
    }

    let mut out = vec![ZERO; 2 * n];
    for k in 0..n {
        match boundary {
            Boundary::Periodic => {
                out[(k + 1) % n] += tossed0[k];
                out[n + (k + n - 1) % n] += tossed1[k];
            }
            Boundary::Reflecting => {
                if k + 1 < n {
                    out[k + 1] += tossed0[k];
                } else {
                    out[n + k] += tossed0[k];
                }
                if k > 0 {
                    out[n + k - 1] += tossed1[k];
                } else {
                    out[k] += tossed1[k];
                }
            }
        }
    }
    CoinedState {
        sites: n,
        amplitudes: out,
    }
}

fn require_even(d: usize) -> Result<()> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::Dimension(format!(
            "staggered stepping needs an even number of nodes (at least 2), got {d}"
        )));
    }
    Ok(())
}

/// In-place staggered step on a raw amplitude slice of even length.
pub(crate) fn staggered_step_in_place(amps: &mut [C64], c_prime: &Mat2, swap_phase: C64) {
    for pair in amps.chunks_exact_mut(2) {
        let (a, b) = c_prime.apply(pair[0], pair[1]);
        pair[0] = a;
        pair[1] = b;
    }
    let d = amps.len();
    let mut j = 1;
    while j + 1 < d {
        let (a, b) = (amps[j], amps[j + 1]);
        amps[j] = swap_phase * b;
        amps[j + 1] = swap_phase * a;
        j += 2;
    }
}

/// One staggered step: `C'` on pairs `(0,1), (2,3), …`, then
/// `swap_phase·X` on pairs `(1,2), (3,4), …`. Nodes `0` and `d-1` are not
/// touched by the second stage.
pub fn staggered_step(state: &ChainState, coin: &Coin, swap_phase: SwapPhase) -> Result<ChainState> {
    require_even(state.nodes())?;
    let mut amps = state.amplitudes.clone();
    staggered_step_in_place(&mut amps, &coin.modified(), swap_phase.value());
    Ok(ChainState::from_raw(amps))
}

/// Column-sparse form of one staggered step: column `j` holds the (at most
/// two) nonzero `(row, value)` entries of `W_s |j⟩`.
pub(crate) fn staggered_columns(d: usize, c_prime: &Mat2, swap_phase: C64) -> Vec<[(usize, C64); 2]> {
    let after_swap = |node: usize| -> (usize, C64) {
        if node == 0 || node == d - 1 {
            (node, ONE)
        } else if node % 2 == 1 {
            (node + 1, swap_phase)
        } else {
            (node - 1, swap_phase)
        }
    };
    (0..d)
        .map(|j| {
            let base = j - j % 2;
            let pos = j % 2;
            let (r0, f0) = after_swap(base);
            let (r1, f1) = after_swap(base + 1);
            [
                (r0, f0 * c_prime.0[0][pos]),
                (r1, f1 * c_prime.0[1][pos]),
            ]
        })
        .collect()
}

/// Everything needed to run a walk.
#[derive(Clone, Debug)]
pub struct WalkConfig {
    pub nodes: usize,
    pub coin: Coin,
    pub boundary: Boundary,
    pub swap_phase: SwapPhase,
    pub start: ChainState,
}

impl WalkConfig {
    /// Reflecting staggered walk with `swap_phase = 1`, starting at `node`.
    pub fn new(nodes: usize, coin: Coin, start_node: usize) -> Result<Self> {
        Ok(WalkConfig {
            nodes,
            coin,
            boundary: Boundary::Reflecting,
            swap_phase: SwapPhase::ONE,
            start: ChainState::basis(nodes, start_node)?,
        })
    }

    pub fn with_swap_phase(mut self, swap_phase: SwapPhase) -> Self {
        self.swap_phase = swap_phase;
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn validate(&self) -> Result<()> {
        require_even(self.nodes)?;
        if self.start.nodes() != self.nodes {
            return Err(Error::Dimension(format!(
                "start state has {} nodes, config has {}",
                self.start.nodes(),
                self.nodes
            )));
        }
        Ok(())
    }
}

/// Dense `d x d` matrix of one staggered step.
pub fn staggered_unitary(config: &WalkConfig) -> Result<ComplexMatrix> {
    let d = config.nodes;
    require_even(d)?;
    if d > MAX_DENSE_NODES {
        return Err(Error::Scale {
            requested: d,
            limit: MAX_DENSE_NODES,
        });
    }
    let mut w = ComplexMatrix::zeros(d, d);
    let columns = staggered_columns(d, &config.coin.modified(), config.swap_phase.value());
    for (j, entries) in columns.iter().enumerate() {
        for &(r, v) in entries {
            w[(r, j)] += v;
        }
    }
    Ok(w)
}

/// Per-step node probabilities; row 0 is the start state.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityRecords {
    #[serde(serialize_with = "serialize_sig17_matrix")]
    rows: Vec<Vec<f64>>,
}

impl ProbabilityRecords {
    pub fn new() -> Self {
        ProbabilityRecords { rows: Vec::new() }
    }

    pub fn push(&mut self, probabilities: Vec<f64>) {
        self.rows.push(probabilities);
    }

    pub fn steps(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn last(&self) -> Option<&[f64]> {
        self.rows.last().map(Vec::as_slice)
    }

    /// `step,node,probability` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,node,probability\n");
        for (step, row) in self.rows.iter().enumerate() {
            for (node, &p) in row.iter().enumerate() {
                out.push_str(&format!("{step},{node},{}\n", sig17(p)));
            }
        }
        out
    }

    /// A JSON array of per-step arrays.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

impl Default for ProbabilityRecords {
    fn default() -> Self {
        ProbabilityRecords::new()
    }
}

#[derive(Clone, Debug)]
pub struct Evolution {
    pub state: ChainState,
    pub records: Option<ProbabilityRecords>,
}

/// Runs `steps` walk steps. Reflecting configs use the staggered engine,
/// periodic ones the coined engine (on the flat `2k + c` labelling).
pub fn evolve(config: &WalkConfig, steps: usize, record: bool) -> Result<Evolution> {
    config.validate()?;
    let mut records = record.then(ProbabilityRecords::new);
    if let Some(r) = records.as_mut() {
        r.push(config.start.probabilities());
    }

    let state = match config.boundary {
        Boundary::Reflecting => {
            let c_prime = config.coin.modified();
            let phase = config.swap_phase.value();
            let mut amps = config.start.amplitudes.clone();
            for _ in 0..steps {
                staggered_step_in_place(&mut amps, &c_prime, phase);
                if let Some(r) = records.as_mut() {
                    r.push(amps.iter().map(|a| a.norm_sqr()).collect());
                }
            }
            ChainState::from_raw(amps)
        }
        Boundary::Periodic => {
            let mut coined = CoinedState::from_chain(&config.start)?;
            for _ in 0..steps {
                coined = coined_step(&coined, &config.coin, Boundary::Periodic);
                if let Some(r) = records.as_mut() {
                    r.push(coined.to_chain().probabilities());
                }
            }
            coined.to_chain()
        }
    };
    Ok(Evolution { state, records })
}
