//! The XY-type spin-chain Hamiltonian, the excitation-number operator and the
//! single-excitation embedding of the scalar chain into a qubit register.
//!
//! Conventions: qubit 0 is the most significant bit of a basis index and
//! `σz|0⟩ = +|0⟩`, so the number operator counts 1-bits. Node `k` of the
//! scalar chain is the basis string with a single 1 at position `k`, i.e.
//! index `1 << (d - 1 - k)`.

use serde::{Deserialize, Serialize};

use crate::backends::QubitState;
use crate::error::{Error, Result};
use crate::numerics::{pauli, ComplexMatrix, C64, ZERO};
use crate::scalar_walk::ChainState;

/// Largest register for which dense `2^d x 2^d` operators are built.
pub const MAX_DENSE_QUBITS: usize = 14;

/// Sector leakage tolerated by [`EmbeddingMap::project`].
pub const LEAK_TOL: f64 = 1e-10;

/// Couplings `λ_j`, `χ_j` (length `d-1`) and fields `μ_k` (length `d`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianParams {
    pub lambda: Vec<f64>,
    pub chi: Vec<f64>,
    pub mu: Vec<f64>,
}

impl HamiltonianParams {
    pub fn new(lambda: Vec<f64>, chi: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        let p = HamiltonianParams { lambda, chi, mu };
        p.validate()?;
        Ok(p)
    }

    pub fn zeros(d: usize) -> Self {
        let bonds = d.saturating_sub(1);
        HamiltonianParams {
            lambda: vec![0.0; bonds],
            chi: vec![0.0; bonds],
            mu: vec![0.0; d],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: HamiltonianParams = serde_json::from_str(text)?;
        p.validate()?;
        Ok(p)
    }

    pub fn nodes(&self) -> usize {
        self.mu.len()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.mu.len();
        if d == 0 {
            return Err(Error::Dimension("at least one site is required".into()));
        }
        if self.lambda.len() != d - 1 || self.chi.len() != d - 1 {
            return Err(Error::Dimension(format!(
                "{d} sites need {} couplings, got lambda={} chi={}",
                d - 1,
                self.lambda.len(),
                self.chi.len()
            )));
        }
        Ok(())
    }
}

fn check_scale(d: usize) -> Result<()> {
    if d > MAX_DENSE_QUBITS {
        return Err(Error::Scale {
            requested: d,
            limit: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

/// Kronecker string with `ops[k]` on site `k` and identity elsewhere.
fn site_string(d: usize, ops: &[(usize, &ComplexMatrix)]) -> ComplexMatrix {
    let id = pauli::identity();
    (0..d).fold(ComplexMatrix::identity(1), |acc, site| {
        let op = ops
            .iter()
            .find(|(s, _)| *s == site)
            .map_or(&id, |(_, m)| *m);
        acc.kron(op)
    })
}

/// The full `2^d x 2^d` Hamiltonian, assembled from Pauli strings.
pub fn build_hamiltonian(p: &HamiltonianParams) -> Result<ComplexMatrix> {
    p.validate()?;
    let d = p.nodes();
    check_scale(d)?;
    let (x, y, z) = (pauli::x(), pauli::y(), pauli::z());
    let dim = 1usize << d;
    let mut h = ComplexMatrix::zeros(dim, dim);

    for j in 0..d - 1 {
        let half_lambda = C64::new(p.lambda[j] / 2.0, 0.0);
        let half_chi = C64::new(p.chi[j] / 2.0, 0.0);
        if half_lambda != ZERO {
            let xx = site_string(d, &[(j, &x), (j + 1, &x)]);
            let yy = site_string(d, &[(j, &y), (j + 1, &y)]);
            h = h.add(&xx.add(&yy)?.scale(half_lambda))?;
        }
        if half_chi != ZERO {
            let yx = site_string(d, &[(j, &y), (j + 1, &x)]);
            let xy = site_string(d, &[(j, &x), (j + 1, &y)]);
            h = h.add(&yx.sub(&xy)?.scale(half_chi))?;
        }
    }
    for k in 0..d {
        if p.mu[k] != 0.0 {
            let zk = site_string(d, &[(k, &z)]);
            h = h.add(&zk.scale(C64::new(p.mu[k], 0.0)))?;
        }
    }
    Ok(h)
}

/// `N = Σ_k (1 - σz_k)/2`: diagonal, with the popcount of each basis index.
pub fn number_operator(d: usize) -> Result<ComplexMatrix> {
    check_scale(d)?;
    let diag: Vec<C64> = (0..1usize << d)
        .map(|s| C64::new(s.count_ones() as f64, 0.0))
        .collect();
    Ok(ComplexMatrix::from_diagonal(&diag))
}

/// `max |ab - ba|`.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "commutator needs equal square matrices, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    ab.max_abs_diff(&ba)
}

/// The Hamiltonian restricted to the single-excitation sector, in the node
/// basis: tridiagonal with `h[k][k+1] = λ_k + iχ_k` and
/// `h[k][k] = Σ_j μ_j - 2μ_k`.
pub fn restricted_hamiltonian_block(p: &HamiltonianParams) -> Result<ComplexMatrix> {
    p.validate()?;
    let d = p.nodes();
    let total: f64 = p.mu.iter().sum();
    let mut h = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        h[(k, k)] = C64::new(total - 2.0 * p.mu[k], 0.0);
    }
    for k in 0..d - 1 {
        let coupling = C64::new(p.lambda[k], p.chi[k]);
        h[(k, k + 1)] = coupling;
        h[(k + 1, k)] = coupling.conj();
    }
    Ok(h)
}

/// The map `|k⟩ ↦ |0…0 1 0…0⟩` (single 1 at position `k`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbeddingMap {
    d: usize,
}

impl EmbeddingMap {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Dimension(format!("a chain needs at least 2 nodes, got {d}")));
        }
        check_scale(d)?;
        Ok(EmbeddingMap { d })
    }

    pub fn nodes(&self) -> usize {
        self.d
    }

    /// Basis index of node `k`.
    pub fn basis_index(&self, node: usize) -> usize {
        1 << (self.d - 1 - node)
    }

    /// Indices of the whole sector, in node order.
    pub fn sector_indices(&self) -> Vec<usize> {
        (0..self.d).map(|k| self.basis_index(k)).collect()
    }

    pub fn embed(&self, state: &ChainState) -> Result<QubitState> {
        if state.nodes() != self.d {
            return Err(Error::Dimension(format!(
                "state has {} nodes, map has {}",
                state.nodes(),
                self.d
            )));
        }
        let mut amps = vec![ZERO; 1 << self.d];
        for (k, &a) in state.amplitudes().iter().enumerate() {
            amps[self.basis_index(k)] = a;
        }
        QubitState::new(self.d, amps)
    }

    /// Norm of the part of `state` outside the single-excitation sector.
    pub fn leaked_norm(&self, state: &QubitState) -> f64 {
        state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(i, _)| i.count_ones() != 1)
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn project(&self, state: &QubitState) -> Result<ChainState> {
        if state.qubits() != self.d {
            return Err(Error::Dimension(format!(
                "register has {} qubits, map has {}",
                state.qubits(),
                self.d
            )));
        }
        let leaked_norm = self.leaked_norm(state);
        if leaked_norm > LEAK_TOL {
            return Err(Error::SectorLeak { leaked_norm });
        }
        let amps = (0..self.d)
            .map(|k| state.amplitudes()[self.basis_index(k)])
            .collect();
        Ok(ChainState::from_raw(amps))
    }
}

pub fn embed(state: &ChainState) -> Result<QubitState> {
    EmbeddingMap::new(state.nodes())?.embed(state)
}

pub fn project(state: &QubitState) -> Result<ChainState> {
    EmbeddingMap::new(state.qubits())?.project(state)
}
