//! Reproducible number rendering shared by the CSV, JSON and QASM writers.

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Renders `x` with 17 significant digits (`{:.16e}`), which round-trips
/// every finite `f64` exactly. Exact zero is written as `0`.
pub fn sig17(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// `serialize_with` adapter that writes a JSON number using [`sig17`].
pub fn serialize_sig17<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return Err(S::Error::custom(format!("cannot serialize non-finite value {x}")));
    }
    RawValue::from_string(sig17(*x))
        .map_err(S::Error::custom)?
        .serialize(s)
}

/// Like [`serialize_sig17`], writing `null` for `None` and non-finite values.
pub fn serialize_sig17_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) if v.is_finite() => serialize_sig17(v, s),
        _ => s.serialize_none(),
    }
}

pub fn serialize_sig17_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    Sig17Slice(xs).serialize(s)
}

pub fn serialize_sig17_matrix<S: Serializer>(rows: &[Vec<f64>], s: S) -> Result<S::Ok, S::Error> {
    let wrapped: Vec<Sig17Slice<'_>> = rows.iter().map(|r| Sig17Slice(r)).collect();
    wrapped.serialize(s)
}

pub(crate) struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_sig17(&self.0, s)
    }
}

pub(crate) struct Sig17Slice<'a>(pub &'a [f64]);

impl Serialize for Sig17Slice<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|&x| Sig17(x)))
    }
}
