//! Cross-validation of all backends on one walk.
//!
//! Every leg starts from the same node and is stepped in lockstep, so only
//! one step's worth of state per leg is held at a time.

use serde::Serialize;

use super::contracted::build_contracted;
use super::statevector::{apply_circuit, QubitState};
use super::subspace::{SubspaceProgram, SubspaceState};
use crate::error::Result;
use crate::format::{serialize_sig17, serialize_sig17_opt, sig17};
use crate::matchgate::{walk_step_circuit, GateKind};
use crate::numerics::{self, equal_up_to_global_phase, C64};
use crate::scalar_walk::{staggered_step_in_place, Coin, SwapPhase, WalkConfig};
use crate::spin_chain::EmbeddingMap;

/// Largest `d` that gets a statevector leg.
pub const STATEVECTOR_LEG_LIMIT: usize = 12;

/// Angle offset used by [`CrossValidationOptions::inject_fault`].
pub const FAULT_OFFSET: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct CrossValidationOptions {
    pub nodes: usize,
    pub coin: Coin,
    pub steps: usize,
    pub tolerance: f64,
    /// Defaults to `d / 2`.
    pub start_node: Option<usize>,
    /// Perturbs `θ` of the first gate of the compiled step circuit.
    pub inject_fault: bool,
}

impl CrossValidationOptions {
    pub fn new(nodes: usize, coin: Coin, steps: usize, tolerance: f64) -> Self {
        CrossValidationOptions {
            nodes,
            coin,
            steps,
            tolerance,
            start_node: None,
            inject_fault: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LegReport {
    pub pair: String,
    pub metric: &'static str,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serialize_sig17_opt")]
    pub max_prob_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serialize_sig17_opt")]
    pub max_amp_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serialize_sig17_opt")]
    pub max_leaked_norm: Option<f64>,
    pub pass: bool,
}

impl LegReport {
    /// The deviation this leg was judged on.
    pub fn deviation(&self) -> f64 {
        self.max_prob_deviation
            .or(self.max_amp_deviation)
            .or(self.max_leaked_norm)
            .unwrap_or(0.0)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrossValidationReport {
    pub schema_version: u32,
    pub d: usize,
    pub steps: usize,
    pub start_node: usize,
    #[serde(serialize_with = "serialize_sig17")]
    pub tolerance: f64,
    pub fault_injected: bool,
    pub legs: Vec<LegReport>,
    pub skipped: Vec<String>,
    pub pass: bool,
}

impl CrossValidationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn leg(&self, pair: &str, metric: &str) -> Option<&LegReport> {
        self.legs.iter().find(|l| l.pair == pair && l.metric == metric)
    }

    /// One line per leg, for terminals.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for leg in &self.legs {
            out.push_str(&format!(
                "{:<5} {:<24} {:<13} {}\n",
                if leg.pass { "pass" } else { "FAIL" },
                leg.pair,
                leg.metric,
                sig17(leg.deviation())
            ));
        }
        for s in &self.skipped {
            out.push_str(&format!("skip  {s}\n"));
        }
        out
    }
}

#[derive(Default)]
struct Tracker {
    value: f64,
}

impl Tracker {
    fn update(&mut self, x: f64) {
        // NaN must stick so a broken leg cannot pass.
        if x.is_nan() || x > self.value {
            self.value = x;
        }
    }
}

pub fn cross_validate(opts: &CrossValidationOptions) -> Result<CrossValidationReport> {
    let d = opts.nodes;
    let start_node = opts.start_node.unwrap_or(d / 2);
    let config = WalkConfig::new(d, opts.coin, start_node)?.with_swap_phase(SwapPhase::I);
    config.validate()?;

    let mut step_circuit = walk_step_circuit(d, &opts.coin)?;
    if opts.inject_fault {
        if let Some(g) = step_circuit.gates_mut().first_mut() {
            if let GateKind::Param(p) = &mut g.kind {
                p.theta += FAULT_OFFSET;
            }
        }
    }
    let program = SubspaceProgram::compile(&step_circuit)?;
    let contracted = build_contracted(&config)?;

    let mut skipped = Vec::new();
    let embedding = if d <= STATEVECTOR_LEG_LIMIT {
        Some(EmbeddingMap::new(d)?)
    } else {
        skipped.push(format!(
            "statevector: d = {d} exceeds the statevector leg limit of {STATEVECTOR_LEG_LIMIT}"
        ));
        None
    };

    let c_prime = opts.coin.modified();
    let mut scalar: Vec<C64> = config.start.amplitudes().to_vec();
    let mut sub = SubspaceState::new(&config.start);
    let mut reg = contracted.prepare(&config.start)?;
    let mut full: Option<QubitState> = match &embedding {
        Some(e) => Some(e.embed(&config.start)?),
        None => None,
    };

    let mut prob = [
        ("scalar/subspace", Tracker::default()),
        ("scalar/contracted", Tracker::default()),
        ("subspace/contracted", Tracker::default()),
        ("scalar/statevector", Tracker::default()),
        ("subspace/statevector", Tracker::default()),
        ("statevector/contracted", Tracker::default()),
    ];
    let mut amp_scalar_sub = Tracker::default();
    let mut amp_scalar_contracted = Tracker::default();
    let mut amp_sub_sv = Tracker::default();
    let mut leak = Tracker::default();

    for step in 0..=opts.steps {
        if step > 0 {
            staggered_step_in_place(&mut scalar, &c_prime, SwapPhase::I.value());
            program.apply(&mut sub)?;
            reg = contracted.step(&reg);
            if let Some(state) = full.as_mut() {
                apply_circuit(state.amplitudes_mut(), &step_circuit);
            }
        }

        let p_scalar: Vec<f64> = scalar.iter().map(|a| a.norm_sqr()).collect();
        let p_sub = sub.probabilities();
        let p_con = contracted.distribution(&reg);
        prob[0].1.update(numerics::max_abs_diff_real(&p_scalar, &p_sub));
        prob[1].1.update(numerics::max_abs_diff_real(&p_scalar, &p_con));
        prob[2].1.update(numerics::max_abs_diff_real(&p_sub, &p_con));

        let sub_amps = sub.to_chain_state();
        amp_scalar_sub.update(
            equal_up_to_global_phase(&scalar, sub_amps.amplitudes(), opts.tolerance)?.deviation,
        );
        amp_scalar_contracted.update(numerics::max_abs_diff(&scalar, &reg[..d]));

        if let (Some(e), Some(state)) = (&embedding, &full) {
            leak.update(e.leaked_norm(state));
            let sector: Vec<C64> = e
                .sector_indices()
                .into_iter()
                .map(|i| state.amplitudes()[i])
                .collect();
            let p_sv: Vec<f64> = sector.iter().map(|a| a.norm_sqr()).collect();
            prob[3].1.update(numerics::max_abs_diff_real(&p_scalar, &p_sv));
            prob[4].1.update(numerics::max_abs_diff_real(&p_sub, &p_sv));
            prob[5].1.update(numerics::max_abs_diff_real(&p_sv, &p_con));
            amp_sub_sv.update(numerics::max_abs_diff(sub_amps.amplitudes(), &sector));
        }
    }

    let tol = opts.tolerance;
    let judge = |x: f64| x <= tol;
    let has_sv = embedding.is_some();
    let mut legs = Vec::new();
    for (i, (pair, t)) in prob.iter().enumerate() {
        if i >= 3 && !has_sv {
            continue;
        }
        legs.push(LegReport {
            pair: (*pair).to_string(),
            metric: "probability",
            max_prob_deviation: Some(t.value),
            max_amp_deviation: None,
            max_leaked_norm: None,
            pass: judge(t.value),
        });
    }
    let amp_leg = |pair: &str, t: &Tracker| LegReport {
        pair: pair.to_string(),
        metric: "amplitude",
        max_prob_deviation: None,
        max_amp_deviation: Some(t.value),
        max_leaked_norm: None,
        pass: judge(t.value),
    };
    legs.push(amp_leg("scalar/subspace", &amp_scalar_sub));
    legs.push(amp_leg("scalar/contracted", &amp_scalar_contracted));
    if has_sv {
        legs.push(amp_leg("subspace/statevector", &amp_sub_sv));
        legs.push(LegReport {
            pair: "statevector".to_string(),
            metric: "sectorLeakage",
            max_prob_deviation: None,
            max_amp_deviation: None,
            max_leaked_norm: Some(leak.value),
            pass: judge(leak.value),
        });
    }

    let pass = legs.iter().all(|l| l.pass);
    log::info!("cross-validation d={d} steps={} pass={pass}", opts.steps);
    Ok(CrossValidationReport {
        schema_version: 1,
        d,
        steps: opts.steps,
        start_node,
        tolerance: tol,
        fault_injected: opts.inject_fault,
        legs,
        skipped,
        pass,
    })
}
