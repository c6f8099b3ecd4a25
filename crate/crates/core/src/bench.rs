//! Wall-clock timing of walk steps.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::backends::statevector::{apply_circuit, QubitState};
use crate::backends::subspace::{SubspaceProgram, SubspaceState};
use crate::error::{Error, Result};
use crate::format::{serialize_sig17, serialize_sig17_opt, sig17};
use crate::matchgate::walk_step_circuit;
use crate::scalar_walk::{ChainState, Coin};
use crate::spin_chain::embed;

/// Runs shorter than this are flagged as unreliable.
pub const MIN_RELIABLE: Duration = Duration::from_millis(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchBackend {
    Subspace,
    Statevector,
}

impl BenchBackend {
    pub fn name(self) -> &'static str {
        match self {
            BenchBackend::Subspace => "subspace",
            BenchBackend::Statevector => "statevector",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchRow {
    pub backend: BenchBackend,
    pub d: usize,
    pub steps: usize,
    #[serde(serialize_with = "serialize_sig17")]
    pub total_seconds: f64,
    /// `None` when `steps == 0`.
    #[serde(serialize_with = "serialize_sig17_opt")]
    pub seconds_per_step: Option<f64>,
    pub reliable: bool,
}

fn row(backend: BenchBackend, d: usize, steps: usize, best: Duration) -> BenchRow {
    BenchRow {
        backend,
        d,
        steps,
        total_seconds: best.as_secs_f64(),
        seconds_per_step: (steps > 0).then(|| best.as_secs_f64() / steps as f64),
        reliable: steps > 0 && best >= MIN_RELIABLE,
    }
}

/// Best-of-`reps` time for `steps` subspace walk steps on `d` nodes.
pub fn time_subspace(d: usize, coin: &Coin, steps: usize, reps: usize) -> Result<BenchRow> {
    let program = SubspaceProgram::compile(&walk_step_circuit(d, coin)?)?;
    let start = ChainState::basis(d, d / 2)?;
    let mut best = Duration::MAX;
    for _ in 0..reps.max(1) {
        let mut state = SubspaceState::new(&start);
        let t0 = Instant::now();
        for _ in 0..steps {
            program.apply(&mut state)?;
        }
        best = best.min(t0.elapsed());
        std::hint::black_box(state.probabilities().first().copied());
    }
    Ok(row(BenchBackend::Subspace, d, steps, best))
}

/// Best-of-`reps` time for `steps` statevector walk steps on `d` qubits.
pub fn time_statevector(d: usize, coin: &Coin, steps: usize, reps: usize) -> Result<BenchRow> {
    let circuit = walk_step_circuit(d, coin)?;
    let start = embed(&ChainState::basis(d, d / 2)?)?;
    let mut best = Duration::MAX;
    for _ in 0..reps.max(1) {
        let mut state: QubitState = start.clone();
        let t0 = Instant::now();
        for _ in 0..steps {
            apply_circuit(state.amplitudes_mut(), &circuit);
        }
        best = best.min(t0.elapsed());
        std::hint::black_box(state.amplitudes().first().copied());
    }
    Ok(row(BenchBackend::Statevector, d, steps, best))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Invalid("a slope needs at least two points".into()));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::Invalid("log-log fit needs positive values".into()));
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Invalid("all x values coincide".into()));
    }
    Ok(sxy / sxx)
}

/// Slope of seconds-per-step against `d` over the reliable rows of one
/// backend.
pub fn scaling_slope(rows: &[BenchRow], backend: BenchBackend) -> Result<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.backend == backend && r.reliable)
        .filter_map(|r| r.seconds_per_step.map(|s| (r.d as f64, s)))
        .collect();
    loglog_slope(&pts)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("backend,d,steps,total_seconds,seconds_per_step,reliable\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.backend.name(),
            r.d,
            r.steps,
            sig17(r.total_seconds),
            r.seconds_per_step.map(sig17).unwrap_or_default(),
            r.reliable
        ));
    }
    out
}
