//! Deterministic number and path formatting for CSV output: 12 significant
//! digits, scientific notation, locale-independent.

use beamroute_core::scenario::NodeId;

/// Formats with 12 significant digits in scientific notation. Negative zero
/// collapses to zero so identical values always print identically.
pub fn sig12(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// Formats an optional value; absent values print as the empty field.
pub fn sig12_opt(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}

/// Node ids joined by `-`, e.g. `0-3-5-11`.
pub fn path_string(nodes: &[NodeId]) -> String {
    let mut out = String::new();
    for (k, id) in nodes.iter().enumerate() {
        if k > 0 {
            out.push('-');
        }
        out.push_str(&id.to_string());
    }
    out
}

/// dB value to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// dBm value to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Watts to dBm.
pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}
