//! The walk on `l = ⌈log₂ d⌉` qubits.
//!
//! Node `k` is the `l`-bit basis state `|k⟩` (MSB first). The step unitary
//! is the `d x d` staggered step padded with identity on indices `k ≥ d`.
//! It is stored column-sparse (every column of the staggered step has at
//! most two nonzeros), so large `d` stays cheap.

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, C64, ONE, ZERO};
use crate::scalar_walk::{staggered_columns, ChainState, WalkConfig};

/// Largest `l` for which [`ContractedModel::dense_unitary`] is allowed.
pub const MAX_DENSE_QUBITS: usize = 12;

#[derive(Clone, Debug)]
pub struct ContractedModel {
    qubits: usize,
    nodes: usize,
    columns: Vec<[(usize, C64); 2]>,
}

/// `⌈log₂ d⌉` for `d ≥ 2`.
pub fn contracted_width(d: usize) -> usize {
    (usize::BITS - (d - 1).leading_zeros()) as usize
}

pub fn build_contracted(config: &WalkConfig) -> Result<ContractedModel> {
    config.validate()?;
    let d = config.nodes;
    let l = contracted_width(d);
    let mut columns = staggered_columns(d, &config.coin.modified(), config.swap_phase.value());
    columns.extend((d..1 << l).map(|k| [(k, ONE), (k, ZERO)]));
    Ok(ContractedModel {
        qubits: l,
        nodes: d,
        columns,
    })
}

impl ContractedModel {
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn is_live(&self, index: usize) -> bool {
        index < self.nodes
    }

    pub fn pad_mask(&self) -> Vec<bool> {
        (0..self.dim()).map(|i| self.is_live(i)).collect()
    }

    /// `l`-bit label of a register index, MSB first.
    pub fn label(&self, index: usize) -> String {
        format!("{index:0width$b}", width = self.qubits)
    }

    pub fn dense_unitary(&self) -> Result<ComplexMatrix> {
        if self.qubits > MAX_DENSE_QUBITS {
            return Err(Error::Scale {
                requested: self.qubits,
                limit: MAX_DENSE_QUBITS,
            });
        }
        let mut u = ComplexMatrix::zeros(self.dim(), self.dim());
        for (j, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                u[(r, j)] += v;
            }
        }
        Ok(u)
    }

    /// Loads a chain state into the `2^l` register (pad amplitudes zero).
    pub fn prepare(&self, start: &ChainState) -> Result<Vec<C64>> {
        if start.nodes() != self.nodes {
            return Err(Error::Dimension(format!(
                "state has {} nodes, model has {}",
                start.nodes(),
                self.nodes
            )));
        }
        let mut reg = vec![ZERO; self.dim()];
        reg[..self.nodes].copy_from_slice(start.amplitudes());
        Ok(reg)
    }

    pub fn step(&self, register: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; register.len()];
        for (col, &a) in self.columns.iter().zip(register) {
            if a == ZERO {
                continue;
            }
            for &(r, v) in col {
                out[r] += v * a;
            }
        }
        out
    }

    pub fn run(&self, start: &ChainState, steps: usize) -> Result<Vec<C64>> {
        let mut reg = self.prepare(start)?;
        for _ in 0..steps {
            reg = self.step(&reg);
        }
        Ok(reg)
    }

    /// Measurement distribution restricted to live indices (node order).
    pub fn distribution(&self, register: &[C64]) -> Vec<f64> {
        register[..self.nodes].iter().map(|a| a.norm_sqr()).collect()
    }
}
