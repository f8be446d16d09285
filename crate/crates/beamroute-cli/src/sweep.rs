//! Parameter sweeps producing deterministic CSV, one row per swept value.
//!
//! Sweeping the amplification power or the active element count never moves
//! the route (hop weights depend only on the passive surfaces), so those
//! sweeps route once and re-evaluate rates. Sweeping the passive element
//! count changes every hop weight and re-routes per value.

use beamroute_core::analysis::RateReport;
use beamroute_core::routing::{
    route_hybrid, route_passive_only, HybridRoute, PassiveRoute, RoutingError,
};
use beamroute_core::scenario::{Scenario, ScenarioError};
use std::fmt::Write as _;
use std::path::PathBuf;
use thiserror::Error;

use crate::format::{dbm_to_watts, path_string, sig12, sig12_opt};
use crate::schema::split_elements;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepVariable {
    /// Amplification power budget, values in dBm.
    Pf,
    /// Active-surface element count.
    N,
    /// Passive-surface element count.
    M,
}

/// A sweep job: which variable, the ordered values, and the file endpoints.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub scenario: PathBuf,
    pub output: PathBuf,
}

#[derive(Debug, Error, PartialEq)]
pub enum SweepError {
    #[error("sweep values must be non-empty")]
    EmptyValues,
    #[error("sweep values must be strictly increasing (at position {0})")]
    NotIncreasing(usize),
    #[error("element-count sweep values must be positive integers (got {0})")]
    NotACount(f64),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

/// Checks value-list invariants for the given variable.
pub fn validate_values(variable: SweepVariable, values: &[f64]) -> Result<(), SweepError> {
    if values.is_empty() {
        return Err(SweepError::EmptyValues);
    }
    for (k, pair) in values.windows(2).enumerate() {
        if pair[1] <= pair[0] || !pair[1].is_finite() {
            return Err(SweepError::NotIncreasing(k + 1));
        }
    }
    if matches!(variable, SweepVariable::N | SweepVariable::M) {
        for &v in values {
            if v < 1.0 || v.fract() != 0.0 || !v.is_finite() {
                return Err(SweepError::NotACount(v));
            }
        }
    }
    Ok(())
}

pub const SWEEP_HEADER: &str = "value,r_act,r_pas,selected,path,error";

fn route_pair(
    scenario: &Scenario,
) -> (Option<HybridRoute>, Option<PassiveRoute>, Vec<&'static str>) {
    let mut flags = Vec::new();
    let hybrid = match route_hybrid(scenario) {
        Ok(r) => Some(r),
        Err(RoutingError::NoPath) => {
            flags.push("no-hybrid-route");
            None
        }
        Err(_) => {
            flags.push("hybrid-routing-failed");
            None
        }
    };
    let passive = match route_passive_only(scenario) {
        Ok(r) => Some(r),
        Err(RoutingError::NoPath) => {
            flags.push("no-passive-route");
            None
        }
        Err(_) => {
            flags.push("passive-routing-failed");
            None
        }
    };
    (hybrid, passive, flags)
}

fn row(
    value: f64,
    scenario: &Scenario,
    hybrid: &Option<HybridRoute>,
    passive: &Option<PassiveRoute>,
    flags: &[&'static str],
) -> String {
    let report = RateReport::from_paths(
        scenario,
        hybrid.as_ref().map(|h| &h.path),
        passive.as_ref().map(|p| &p.path),
    )
    .ok();
    let (r_act, r_pas, selected) = match &report {
        Some(rep) => (
            sig12_opt(rep.rate_active),
            sig12_opt(rep.rate_passive),
            if rep.select_active { "true" } else { "false" },
        ),
        None => (String::new(), String::new(), ""),
    };
    let path = hybrid
        .as_ref()
        .map(|h| path_string(&h.path.full_route(scenario)))
        .unwrap_or_default();
    format!(
        "{},{},{},{},{},{}",
        sig12(value),
        r_act,
        r_pas,
        selected,
        path,
        flags.join(";")
    )
}

/// Evaluates one swept value into its CSV row. Rows are independent of each
/// other; [`sweep_csv`] assembles them in input order.
pub fn sweep_row(
    scenario: &Scenario,
    variable: SweepVariable,
    value: f64,
) -> Result<String, SweepError> {
    match variable {
        SweepVariable::Pf => {
            let adjusted = scenario.with_amp_power_w(dbm_to_watts(value))?;
            let (hybrid, passive, flags) = route_pair(&adjusted);
            Ok(row(value, &adjusted, &hybrid, &passive, &flags))
        }
        SweepVariable::N => {
            let (h, v) = split_elements(value as usize);
            let adjusted = scenario.with_active_elements(h, v)?;
            let (hybrid, passive, flags) = route_pair(&adjusted);
            Ok(row(value, &adjusted, &hybrid, &passive, &flags))
        }
        SweepVariable::M => {
            let (h, v) = split_elements(value as usize);
            let adjusted = scenario.with_passive_elements(h, v)?;
            let (hybrid, passive, flags) = route_pair(&adjusted);
            Ok(row(value, &adjusted, &hybrid, &passive, &flags))
        }
    }
}

/// Full sweep as CSV text (header plus one row per value, input order).
/// Byte-identical across runs for identical inputs.
pub fn sweep_csv(
    scenario: &Scenario,
    variable: SweepVariable,
    values: &[f64],
) -> Result<String, SweepError> {
    validate_values(variable, values)?;
    let mut out = String::new();
    let _ = writeln!(out, "{SWEEP_HEADER}");
    match variable {
        // the route is independent of P_F and N; route once and re-rate
        SweepVariable::Pf | SweepVariable::N => {
            let (hybrid, passive, flags) = route_pair(scenario);
            for &value in values {
                let adjusted = match variable {
                    SweepVariable::Pf => scenario.with_amp_power_w(dbm_to_watts(value))?,
                    SweepVariable::N => {
                        let (h, v) = split_elements(value as usize);
                        scenario.with_active_elements(h, v)?
                    }
                    SweepVariable::M => unreachable!(),
                };
                let _ = writeln!(out, "{}", row(value, &adjusted, &hybrid, &passive, &flags));
            }
        }
        // hop weights depend on M: rebuild the graphs per value
        SweepVariable::M => {
            for &value in values {
                let _ = writeln!(out, "{}", sweep_row(scenario, variable, value)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_validation() {
        assert_eq!(
            validate_values(SweepVariable::Pf, &[]),
            Err(SweepError::EmptyValues)
        );
        assert_eq!(
            validate_values(SweepVariable::Pf, &[1.0, 1.0]),
            Err(SweepError::NotIncreasing(1))
        );
        assert_eq!(
            validate_values(SweepVariable::N, &[4.0, 4.5]),
            Err(SweepError::NotACount(4.5))
        );
        assert!(validate_values(SweepVariable::Pf, &[-10.0, 0.0, 10.0]).is_ok());
        assert!(validate_values(SweepVariable::M, &[100.0, 400.0]).is_ok());
    }
}
