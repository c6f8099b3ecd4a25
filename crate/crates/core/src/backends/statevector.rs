//! Full `2^d` statevector simulation: the desk-scale ground truth.

use crate::error::{Error, Result};
use crate::matchgate::MatchgateCircuit;
use crate::numerics::{self, ComplexMatrix, C64, DEFAULT_TOL, ONE, ZERO};

/// Memory guard for the statevector backend.
pub const MAX_QUBITS: usize = 14;

/// Amplitudes over the `2^d` computational basis states, qubit 0 being the
/// most significant bit of the index.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitState {
    qubits: usize,
    amplitudes: Vec<C64>,
}

fn check_width(d: usize) -> Result<()> {
    if d > MAX_QUBITS {
        return Err(Error::Scale {
            requested: d,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

impl QubitState {
    pub fn new(qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_width(qubits)?;
        if amplitudes.len() != 1 << qubits {
            return Err(Error::Dimension(format!(
                "{qubits} qubits need {} amplitudes, got {}",
                1usize << qubits,
                amplitudes.len()
            )));
        }
        let n = numerics::norm(&amplitudes);
        if (n - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::Invalid(format!("state is not normalized (norm {n})")));
        }
        Ok(QubitState { qubits, amplitudes })
    }

    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        check_width(qubits)?;
        if index >= 1 << qubits {
            return Err(Error::Index(format!(
                "basis index {index} outside a {qubits}-qubit register"
            )));
        }
        let mut amplitudes = vec![ZERO; 1 << qubits];
        amplitudes[index] = ONE;
        Ok(QubitState { qubits, amplitudes })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        numerics::norm(&self.amplitudes)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

type Gate4 = [[C64; 4]; 4];

fn to_gate4(m: &ComplexMatrix) -> Gate4 {
    let mut g = [[ZERO; 4]; 4];
    for (r, row) in g.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = m[(r, c)];
        }
    }
    g
}

/// Applies a 4x4 gate to qubits `(q, q+1)` of a `d`-qubit register. The
/// gate's local index is `2·b_{q+1} + b_q`.
pub(crate) fn apply_pair_gate(amps: &mut [C64], d: usize, q: usize, g: &Gate4) {
    let bit_q = 1usize << (d - 1 - q);
    let bit_next = 1usize << (d - 2 - q);
    let mask = bit_q | bit_next;
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        let idx = [base, base | bit_q, base | bit_next, base | mask];
        let input = idx.map(|i| amps[i]);
        for (r, &i) in idx.iter().enumerate() {
            amps[i] = g[r][0] * input[0] + g[r][1] * input[1] + g[r][2] * input[2] + g[r][3] * input[3];
        }
    }
}

/// Applies every gate in order, in place.
pub(crate) fn apply_circuit(amps: &mut [C64], circuit: &MatchgateCircuit) {
    let d = circuit.width();
    for gate in circuit.gates() {
        let g = to_gate4(&gate.kind.matrix());
        apply_pair_gate(amps, d, gate.q, &g);
    }
}

pub fn run_statevector(circuit: &MatchgateCircuit, start: &QubitState) -> Result<QubitState> {
    check_width(circuit.width())?;
    if circuit.width() != start.qubits {
        return Err(Error::Dimension(format!(
            "circuit acts on {} qubits, state has {}",
            circuit.width(),
            start.qubits
        )));
    }
    let mut amps = start.amplitudes.clone();
    apply_circuit(&mut amps, circuit);
    Ok(QubitState {
        qubits: start.qubits,
        amplitudes: amps,
    })
}

/// Dense `2^d x 2^d` unitary of a circuit, column by column.
pub fn circuit_unitary(circuit: &MatchgateCircuit) -> Result<ComplexMatrix> {
    const LIMIT: usize = 10;
    let d = circuit.width();
    if d > LIMIT {
        return Err(Error::Scale {
            requested: d,
            limit: LIMIT,
        });
    }
    let dim = 1usize << d;
    let mut u = ComplexMatrix::zeros(dim, dim);
    let gates: Vec<(usize, Gate4)> = circuit
        .gates()
        .iter()
        .map(|g| (g.q, to_gate4(&g.kind.matrix())))
        .collect();
    for col in 0..dim {
        let mut v = vec![ZERO; dim];
        v[col] = ONE;
        for (q, g) in &gates {
            apply_pair_gate(&mut v, d, *q, g);
        }
        for (row, x) in v.into_iter().enumerate() {
            u[(row, col)] = x;
        }
    }
    Ok(u)
}
