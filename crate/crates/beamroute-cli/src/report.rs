//! Route evaluation and rendering: human-readable text, the per-hop CSV
//! table, and the one-row rate report.

use beamroute_core::analysis::{AnalysisError, RateReport};
use beamroute_core::beamforming::RoutePath;
use beamroute_core::routing::{
    edge_weight, route_hybrid, route_passive_only, HybridRoute, PassiveRoute, RoutingError,
};
use beamroute_core::scenario::Scenario;
use std::fmt::Write as _;
use thiserror::Error;

use crate::format::{path_string, sig12, sig12_opt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RouteMode {
    Passive,
    Hybrid,
    Auto,
}

#[derive(Debug, Error)]
pub enum ReportError {
    /// No route of the requested kind exists (CLI exit code 2).
    #[error("no feasible route")]
    NoFeasibleRoute,
    #[error(transparent)]
    Routing(RoutingError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

impl From<RoutingError> for ReportError {
    fn from(e: RoutingError) -> Self {
        match e {
            RoutingError::NoPath => ReportError::NoFeasibleRoute,
            other => ReportError::Routing(other),
        }
    }
}

/// Routes of both families plus the combined rate report.
#[derive(Debug, Clone)]
pub struct RouteComputation {
    pub hybrid: Option<HybridRoute>,
    pub passive: Option<PassiveRoute>,
    pub report: RateReport,
}

/// Runs the requested routing mode. `Auto` computes both families and keeps
/// whichever exist; it fails only when neither does.
pub fn compute_routes(
    scenario: &Scenario,
    mode: RouteMode,
) -> Result<RouteComputation, ReportError> {
    let want_hybrid = matches!(mode, RouteMode::Hybrid | RouteMode::Auto);
    let want_passive = matches!(mode, RouteMode::Passive | RouteMode::Auto);
    let hybrid = if want_hybrid {
        match route_hybrid(scenario) {
            Ok(route) => Some(route),
            Err(RoutingError::NoPath) if mode == RouteMode::Auto => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let passive = if want_passive {
        match route_passive_only(scenario) {
            Ok(route) => Some(route),
            Err(RoutingError::NoPath) if mode == RouteMode::Auto => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    if hybrid.is_none() && passive.is_none() {
        return Err(ReportError::NoFeasibleRoute);
    }
    let report = RateReport::from_paths(
        scenario,
        hybrid.as_ref().map(|h| &h.path),
        passive.as_ref().map(|p| &p.path),
    )?;
    Ok(RouteComputation {
        hybrid,
        passive,
        report,
    })
}

struct Hop {
    from: usize,
    to: usize,
    distance: f64,
    weight: f64,
}

fn hops(scenario: &Scenario, path: &RoutePath) -> Vec<Hop> {
    let full = path.full_route(scenario);
    full.windows(2)
        .map(|pair| {
            let distance = scenario.distance(pair[0], pair[1]).expect("routed path");
            let weight = edge_weight(
                distance,
                scenario.passive_elements(),
                scenario.rf().reference_gain,
            )
            .expect("validated scenario");
            Hop {
                from: pair[0],
                to: pair[1],
                distance,
                weight,
            }
        })
        .collect()
}

/// Human-readable route report.
pub fn render_text(scenario: &Scenario, computation: &RouteComputation) -> String {
    let mut out = String::new();
    let report = &computation.report;
    let _ = writeln!(
        out,
        "surfaces: {} total (active id {}), T={}, M={}, N={}",
        scenario.irs_count(),
        scenario.active_irs_id(),
        scenario.bs_antennas(),
        scenario.passive_elements(),
        scenario.active_elements(),
    );
    if scenario.is_los(scenario.bs_id(), scenario.user_id()) {
        let _ = writeln!(
            out,
            "warning: direct BS -> user LoS link declared; ignored for routing"
        );
    }
    if let Some(hybrid) = &computation.hybrid {
        let _ = writeln!(
            out,
            "\nhybrid route: {}",
            path_string(&hybrid.path.full_route(scenario))
        );
        for (k, hop) in hops(scenario, &hybrid.path).iter().enumerate() {
            let _ = writeln!(
                out,
                "  hop {}: {} -> {}  d={:.4} m  w={:+.6}",
                k + 1,
                hop.from,
                hop.to,
                hop.distance,
                hop.weight
            );
        }
        let _ = writeln!(
            out,
            "  cost bs->active={:.6}  cost active->user={:.6}",
            hybrid.cost_bs_to_active, hybrid.cost_active_to_user
        );
        let _ = writeln!(
            out,
            "  f_ba={}  f_au={}  eta_sq={}",
            sig12_opt(report.f_ba),
            sig12_opt(report.f_au),
            sig12_opt(report.eta_sq)
        );
        let _ = writeln!(
            out,
            "  snr={}  rate={} bps/Hz",
            sig12_opt(report.snr_active),
            sig12_opt(report.rate_active)
        );
    }
    if let Some(passive) = &computation.passive {
        let _ = writeln!(
            out,
            "\npassive route: {}",
            path_string(&passive.path.full_route(scenario))
        );
        for (k, hop) in hops(scenario, &passive.path).iter().enumerate() {
            let _ = writeln!(
                out,
                "  hop {}: {} -> {}  d={:.4} m  w={:+.6}",
                k + 1,
                hop.from,
                hop.to,
                hop.distance,
                hop.weight
            );
        }
        let _ = writeln!(out, "  cost={:.6}", passive.cost);
        let _ = writeln!(
            out,
            "  f_bu={}  snr={}  rate={} bps/Hz",
            sig12_opt(report.f_bu_passive),
            sig12_opt(report.snr_passive),
            sig12_opt(report.rate_passive)
        );
    }
    let _ = writeln!(
        out,
        "\nverdict: {}",
        if report.select_active {
            "active"
        } else {
            "passive"
        }
    );
    let _ = writeln!(out, "\n{}", RATE_REPORT_HEADER);
    let _ = writeln!(out, "{}", rate_report_csv_row(scenario, report));
    out
}

/// Column order of the one-row rate report.
pub const RATE_REPORT_HEADER: &str =
    "f_ba,f_au,f_bu,eta_sq,snr_active,snr_passive,rate_active,rate_passive,selected,path";

pub fn rate_report_csv_row(scenario: &Scenario, report: &RateReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        sig12_opt(report.f_ba),
        sig12_opt(report.f_au),
        sig12_opt(report.f_bu_passive),
        sig12_opt(report.eta_sq),
        sig12_opt(report.snr_active),
        sig12_opt(report.snr_passive),
        sig12_opt(report.rate_active),
        sig12_opt(report.rate_passive),
        if report.select_active {
            "active"
        } else {
            "passive"
        },
        path_string(&report.chosen_path.full_route(scenario)),
    )
}

/// Column order of the per-hop route table.
pub const HOP_TABLE_HEADER: &str =
    "mode,hop,from,to,distance_m,weight,total_cost,f_ba,f_au,f_bu,snr,rate_bps_hz";

/// Per-hop CSV covering every computed route, deterministic byte-for-byte.
pub fn hop_table_csv(scenario: &Scenario, computation: &RouteComputation) -> String {
    let report = &computation.report;
    let mut out = String::new();
    let _ = writeln!(out, "{HOP_TABLE_HEADER}");
    if let Some(hybrid) = &computation.hybrid {
        let total = hybrid.cost_bs_to_active + hybrid.cost_active_to_user;
        for (k, hop) in hops(scenario, &hybrid.path).iter().enumerate() {
            let _ = writeln!(
                out,
                "hybrid,{},{},{},{},{},{},{},{},,{},{}",
                k + 1,
                hop.from,
                hop.to,
                sig12(hop.distance),
                sig12(hop.weight),
                sig12(total),
                sig12_opt(report.f_ba),
                sig12_opt(report.f_au),
                sig12_opt(report.snr_active),
                sig12_opt(report.rate_active),
            );
        }
    }
    if let Some(passive) = &computation.passive {
        for (k, hop) in hops(scenario, &passive.path).iter().enumerate() {
            let _ = writeln!(
                out,
                "passive,{},{},{},{},{},{},,,{},{},{}",
                k + 1,
                hop.from,
                hop.to,
                sig12(hop.distance),
                sig12(hop.weight),
                sig12(passive.cost),
                sig12_opt(report.f_bu_passive),
                sig12_opt(report.snr_passive),
                sig12_opt(report.rate_passive),
            );
        }
    }
    out
}
