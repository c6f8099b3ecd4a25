//! Seeded multinomial sampling of a measurement distribution.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

const NEGATIVE_TOL: f64 = 1e-12;
const SUM_TOL: f64 = 1e-9;

/// How outcome indices are written out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutcomeLabels {
    /// Decimal node index.
    #[default]
    Node,
    /// Binary string of the given width, MSB first.
    Bits(usize),
}

impl OutcomeLabels {
    pub fn format(self, index: usize) -> String {
        match self {
            OutcomeLabels::Node => index.to_string(),
            OutcomeLabels::Bits(width) => format!("{index:0width$b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotHistogram {
    counts: BTreeMap<usize, u64>,
    shots: u64,
    seed: u64,
    labels: OutcomeLabels,
}

impl ShotHistogram {
    /// Outcome index → count; outcomes never drawn are absent.
    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn count(&self, outcome: usize) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn labels(&self) -> OutcomeLabels {
        self.labels
    }

    pub fn with_labels(mut self, labels: OutcomeLabels) -> Self {
        self.labels = labels;
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("outcome,count\n");
        for (&k, &n) in &self.counts {
            out.push_str(&format!("{},{n}\n", self.labels.format(k)));
        }
        out
    }
}

struct LabelledCounts<'a>(&'a ShotHistogram);

impl Serialize for LabelledCounts<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let h = self.0;
        let mut map = s.serialize_map(Some(h.counts.len()))?;
        for (&k, n) in &h.counts {
            map.serialize_entry(&h.labels.format(k), n)?;
        }
        map.end()
    }
}

impl Serialize for ShotHistogram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ShotHistogram", 3)?;
        st.serialize_field("shots", &self.shots)?;
        st.serialize_field("seed", &self.seed)?;
        st.serialize_field("counts", &LabelledCounts(self))?;
        st.end()
    }
}

fn check_distribution(p: &[f64]) -> Result<()> {
    let mut sum = 0.0;
    for (i, &x) in p.iter().enumerate() {
        if !x.is_finite() || x < -NEGATIVE_TOL {
            return Err(Error::Distribution(format!("entry {i} is {x}")));
        }
        sum += x;
    }
    if (sum - 1.0).abs() > SUM_TOL {
        return Err(Error::Distribution(format!("probabilities sum to {sum}")));
    }
    Ok(())
}

/// Draws `shots` outcomes. Identical inputs and seed give identical counts.
pub fn sample(probabilities: &[f64], shots: u64, seed: u64) -> Result<ShotHistogram> {
    check_distribution(probabilities)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    let mut remaining = shots;
    let mut mass = 1.0_f64;
    for (i, &p) in probabilities.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let p = p.max(0.0);
        let n = if i + 1 == probabilities.len() || p >= mass {
            remaining
        } else if p == 0.0 {
            0
        } else {
            Binomial::new(remaining, (p / mass).min(1.0))
                .map_err(|e| Error::Distribution(e.to_string()))?
                .sample(&mut rng)
        };
        if n > 0 {
            counts.insert(i, n);
        }
        remaining -= n;
        mass -= p;
    }
    Ok(ShotHistogram {
        counts,
        shots,
        seed,
        labels: OutcomeLabels::Node,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass() {
        let mut p = vec![0.0; 8];
        p[3] = 1.0;
        let h = sample(&p, 100, 7).unwrap();
        assert_eq!(h.counts().len(), 1);
        assert_eq!(h.count(3), 100);
    }

    #[test]
    fn zero_shots() {
        let h = sample(&[0.5, 0.5], 0, 1).unwrap();
        assert!(h.counts().is_empty());
        assert_eq!(h.shots(), 0);
    }

    #[test]
    fn uniform_pair_within_four_sigma() {
        let h = sample(&[0.5, 0.5], 1_000_000, 2024).unwrap();
        let sigma = (1e6_f64 * 0.25).sqrt();
        for k in 0..2 {
            assert!((h.count(k) as f64 - 5e5).abs() < 4.0 * sigma);
        }
        assert_eq!(h.count(0) + h.count(1), 1_000_000);
    }

    #[test]
    fn deterministic_per_seed() {
        let p = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(sample(&p, 5000, 9).unwrap(), sample(&p, 5000, 9).unwrap());
    }

    #[test]
    fn rejects_bad_distributions() {
        assert!(matches!(sample(&[1.1, -0.1], 10, 0), Err(Error::Distribution(_))));
        assert!(matches!(sample(&[0.3, 0.3], 10, 0), Err(Error::Distribution(_))));
        // Roundoff-level negatives are tolerated.
        assert!(sample(&[1.0, -1e-14], 10, 0).is_ok());
    }

    #[test]
    fn json_uses_labels() {
        let h = sample(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0], 4, 0)
            .unwrap()
            .with_labels(OutcomeLabels::Bits(3));
        assert_eq!(
            serde_json::to_string(&h).unwrap(),
            r#"{"shots":4,"seed":0,"counts":{"101":4}}"#
        );
        assert_eq!(h.to_csv(), "outcome,count\n101,4\n");
    }
}
