//! Single-excitation subspace backend: `d` amplitudes instead of `2^d`.
//!
//! A number-conserving matchgate on `(j, j+1)` maps `(a_j, a_{j+1})` by its
//! `u` block and multiplies every other amplitude by `v₀₀`. The `v₀₀`
//! factors are folded into one global scalar, so each gate costs O(1).

use crate::error::{Error, Result};
use crate::matchgate::MatchgateCircuit;
use crate::numerics::{Mat2, C64, ONE};
use crate::scalar_walk::ChainState;

#[derive(Clone, Copy, Debug)]
struct SubspaceOp {
    q: usize,
    /// `u / v₀₀`
    block: Mat2,
    v00: C64,
}

/// A circuit checked for number conservation and lowered to 2x2 updates.
#[derive(Clone, Debug)]
pub struct SubspaceProgram {
    width: usize,
    ops: Vec<SubspaceOp>,
}

impl SubspaceProgram {
    pub fn compile(circuit: &MatchgateCircuit) -> Result<Self> {
        let ops = circuit
            .gates()
            .iter()
            .enumerate()
            .map(|(gate_index, gate)| {
                if !gate.kind.conserves_number() {
                    return Err(Error::Sector { gate_index });
                }
                let (v, u) = gate.kind.blocks();
                let v00 = v.0[0][0];
                let block = if v00 == ONE { u } else { u.scale(v00.inv()) };
                Ok(SubspaceOp {
                    q: gate.q,
                    block,
                    v00,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SubspaceProgram {
            width: circuit.width(),
            ops,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn apply(&self, state: &mut SubspaceState) -> Result<()> {
        if state.amplitudes.len() != self.width {
            return Err(Error::Dimension(format!(
                "program acts on {} nodes, state has {}",
                self.width,
                state.amplitudes.len()
            )));
        }
        let amps = &mut state.amplitudes;
        for op in &self.ops {
            let (a, b) = op.block.apply(amps[op.q], amps[op.q + 1]);
            amps[op.q] = a;
            amps[op.q + 1] = b;
            if op.v00 != ONE {
                state.phase *= op.v00;
            }
        }
        Ok(())
    }
}

/// Node amplitudes with a lazily applied global phase.
#[derive(Clone, Debug)]
pub struct SubspaceState {
    amplitudes: Vec<C64>,
    phase: C64,
}

impl SubspaceState {
    pub fn new(start: &ChainState) -> Self {
        SubspaceState {
            amplitudes: start.amplitudes().to_vec(),
            phase: ONE,
        }
    }

    pub fn nodes(&self) -> usize {
        self.amplitudes.len()
    }

    /// Probabilities do not depend on the pending phase.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn global_phase(&self) -> C64 {
        self.phase
    }

    pub fn to_chain_state(&self) -> ChainState {
        let amps = if self.phase == ONE {
            self.amplitudes.clone()
        } else {
            self.amplitudes.iter().map(|a| a * self.phase).collect()
        };
        ChainState::from_raw(amps)
    }
}

pub fn run_subspace(circuit: &MatchgateCircuit, start: &ChainState) -> Result<ChainState> {
    if circuit.width() != start.nodes() {
        return Err(Error::Dimension(format!(
            "circuit acts on {} qubits, state has {} nodes",
            circuit.width(),
            start.nodes()
        )));
    }
    let program = SubspaceProgram::compile(circuit)?;
    let mut state = SubspaceState::new(start);
    program.apply(&mut state)?;
    Ok(state.to_chain_state())
}
