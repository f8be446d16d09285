//! Closed-form channel power gains, SNRs, rates, and the rules deciding
//! whether the amplifying surface should join the route.
//!
//! Gains here follow the per-element convention: the N-fold factor carried by
//! the active surface's receive steering norm is kept out of `f_ba`/`f_au`,
//! so the SNR and amplification formulas hold with an explicit N.

use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::beamforming::RoutePath;
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisError {
    /// Operation requires a path through the active surface.
    HybridPathRequired,
    /// Operation requires a passive-only path.
    PassivePathRequired,
    /// A parameter that must be strictly positive was not.
    NonPositiveInput(&'static str),
    /// No route was supplied at all.
    NoRoute,
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::HybridPathRequired => {
                write!(f, "path does not cross the active surface")
            }
            AnalysisError::PassivePathRequired => write!(f, "path crosses the active surface"),
            AnalysisError::NonPositiveInput(name) => {
                write!(f, "parameter {name} must be strictly positive")
            }
            AnalysisError::NoRoute => write!(f, "no route available"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AnalysisError {}

fn hop_distances_bs_to_active(
    scenario: &Scenario,
    path: &RoutePath,
) -> Result<impl Iterator<Item = f64>, AnalysisError> {
    let active_idx = path
        .active_index()
        .ok_or(AnalysisError::HybridPathRequired)?;
    let nodes = path.nodes();
    let mut hops = alloc::vec::Vec::with_capacity(active_idx + 1);
    let mut prev = scenario.bs_id();
    for &id in &nodes[..=active_idx] {
        hops.push(scenario.distance(prev, id).expect("validated path"));
        prev = id;
    }
    Ok(hops.into_iter())
}

/// End-to-end per-element power gain of the BS -> active-surface sub-path:
/// M^(2 mu - 2) T beta^mu / (d_{0,a_1}^2 * prod of inter-surface hop
/// distances squared), with mu the 1-based position of the active surface.
pub fn f_ba_closed(scenario: &Scenario, path: &RoutePath) -> Result<f64, AnalysisError> {
    let active_idx = path
        .active_index()
        .ok_or(AnalysisError::HybridPathRequired)?;
    let mu = (active_idx + 1) as i32;
    let m = scenario.passive_elements() as f64;
    let t = scenario.bs_antennas() as f64;
    let beta = scenario.rf().reference_gain;
    let mut gain = m.powi(2 * mu - 2) * t * beta.powi(mu);
    for d in hop_distances_bs_to_active(scenario, path)? {
        gain /= d * d;
    }
    Ok(gain)
}

/// End-to-end per-element power gain of the active-surface -> user sub-path.
/// When the active surface is last on the path this reduces to the direct
/// hop gain beta / d^2 (the general formula would double-count that hop).
pub fn f_au_closed(scenario: &Scenario, path: &RoutePath) -> Result<f64, AnalysisError> {
    let active_idx = path
        .active_index()
        .ok_or(AnalysisError::HybridPathRequired)?;
    let nodes = path.nodes();
    let beta = scenario.rf().reference_gain;
    let last = nodes.len() - 1;
    if active_idx == last {
        let d = scenario
            .distance(nodes[last], scenario.user_id())
            .expect("validated path");
        return Ok(beta / (d * d));
    }
    let m = scenario.passive_elements() as f64;
    let k = nodes.len() as i32;
    let mu = (active_idx + 1) as i32;
    let mut gain = m.powi(2 * (k - mu)) * beta.powi(k - mu + 1);
    let mut prev = nodes[active_idx];
    for &id in &nodes[active_idx + 1..] {
        let d = scenario.distance(prev, id).expect("validated path");
        gain /= d * d;
        prev = id;
    }
    let d_last = scenario
        .distance(nodes[last], scenario.user_id())
        .expect("validated path");
    Ok(gain / (d_last * d_last))
}

/// Squared amplification factor at the optimum:
/// eta^2 = P_F / (N (P_B f_BA + sigma_F^2)).
pub fn eta_closed(scenario: &Scenario, f_ba: f64) -> f64 {
    debug_assert!(f_ba >= 0.0);
    let rf = scenario.rf();
    let n = scenario.active_elements() as f64;
    rf.amp_power_w / (n * (rf.tx_power_w * f_ba + rf.noise_amp_w))
}

/// Maximum SNR of a hybrid route:
/// gamma = P_B N f_AU f_BA / (f_AU sigma_F^2 + sigma^2 (P_B f_BA + sigma_F^2) / P_F).
pub fn snr_active_closed(scenario: &Scenario, f_ba: f64, f_au: f64) -> f64 {
    let rf = scenario.rf();
    let n = scenario.active_elements() as f64;
    let numerator = rf.tx_power_w * n * f_au * f_ba;
    let denominator = f_au * rf.noise_amp_w
        + rf.noise_user_w * (rf.tx_power_w * f_ba + rf.noise_amp_w) / rf.amp_power_w;
    numerator / denominator
}

/// Maximum channel power gain of a passive-only route:
/// T M^(2K) beta^(K+1) / prod of all hop distances squared.
pub fn f_bu_closed(scenario: &Scenario, path: &RoutePath) -> Result<f64, AnalysisError> {
    if path.is_hybrid() {
        return Err(AnalysisError::PassivePathRequired);
    }
    let nodes = path.nodes();
    let m = scenario.passive_elements() as f64;
    let t = scenario.bs_antennas() as f64;
    let beta = scenario.rf().reference_gain;
    let k = nodes.len() as i32;
    let mut gain = t * m.powi(2 * k) * beta.powi(k + 1);
    let mut prev = scenario.bs_id();
    for &id in nodes {
        let d = scenario.distance(prev, id).expect("validated path");
        gain /= d * d;
        prev = id;
    }
    let d_last = scenario
        .distance(prev, scenario.user_id())
        .expect("validated path");
    Ok(gain / (d_last * d_last))
}

/// Maximum SNR of a passive-only route: gamma = P_B f_BU / sigma^2.
pub fn snr_passive_closed(scenario: &Scenario, f_bu: f64) -> f64 {
    let rf = scenario.rf();
    rf.tx_power_w * f_bu / rf.noise_user_w
}

/// Achievable rate in bits/s/Hz for a given SNR.
pub fn rate_bps_hz(snr: f64) -> f64 {
    (1.0 + snr).log2()
}

fn require_positive(name: &'static str, value: f64) -> Result<(), AnalysisError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(AnalysisError::NonPositiveInput(name))
    }
}

/// Selection rule: the amplifying surface should join the route iff
/// N / sigma_F^2 >= f_BU / (f_BA sigma^2)
///              + P_B f_BU / (P_F f_AU sigma_F^2)
///              + f_BU / (P_F f_BA f_AU).
/// Equality selects the active route.
#[allow(clippy::too_many_arguments)]
pub fn should_select_active(
    active_elements: usize,
    noise_amp_w: f64,
    noise_user_w: f64,
    tx_power_w: f64,
    amp_power_w: f64,
    f_ba: f64,
    f_au: f64,
    f_bu: f64,
) -> Result<bool, AnalysisError> {
    if active_elements == 0 {
        return Err(AnalysisError::NonPositiveInput("N"));
    }
    require_positive("sigmaF2", noise_amp_w)?;
    require_positive("sigma2", noise_user_w)?;
    require_positive("P_B", tx_power_w)?;
    require_positive("P_F", amp_power_w)?;
    require_positive("f_BA", f_ba)?;
    require_positive("f_AU", f_au)?;
    require_positive("f_BU", f_bu)?;
    let lhs = active_elements as f64 / noise_amp_w;
    let rhs = f_bu / (f_ba * noise_user_w)
        + tx_power_w * f_bu / (amp_power_w * f_au * noise_amp_w)
        + f_bu / (amp_power_w * f_ba * f_au);
    Ok(lhs >= rhs)
}

/// Smallest amplification power budget for which the active route wins:
/// P_F >= f_BU sigma^2 (P_B f_BA + sigma_F^2) / (f_AU (N f_BA sigma^2 - f_BU sigma_F^2)).
/// Returns `None` when N f_BA sigma^2 <= f_BU sigma_F^2, in which case no
/// finite budget suffices.
pub fn min_amplification_power(
    active_elements: usize,
    f_ba: f64,
    f_au: f64,
    f_bu: f64,
    noise_user_w: f64,
    noise_amp_w: f64,
    tx_power_w: f64,
) -> Option<f64> {
    let n = active_elements as f64;
    let margin = n * f_ba * noise_user_w - f_bu * noise_amp_w;
    if margin <= 0.0 {
        return None;
    }
    Some(f_bu * noise_user_w * (tx_power_w * f_ba + noise_amp_w) / (f_au * margin))
}

/// Smallest element count for which the active route wins at the given
/// amplification power budget (ceiling of the real threshold, at least 1).
pub fn min_active_elements(
    amp_power_w: f64,
    f_ba: f64,
    f_au: f64,
    f_bu: f64,
    noise_user_w: f64,
    noise_amp_w: f64,
    tx_power_w: f64,
) -> usize {
    let threshold = f_bu * noise_amp_w / (f_ba * noise_user_w)
        + tx_power_w * f_bu / (amp_power_w * f_au)
        + f_bu * noise_amp_w / (amp_power_w * f_ba * f_au);
    let n = threshold.ceil();
    if n < 1.0 {
        1
    } else {
        n as usize
    }
}

/// Combined comparison of both route families: gains, SNRs, rates, and the
/// selection verdict. Absent sides correspond to infeasible routes.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub f_ba: Option<f64>,
    pub f_au: Option<f64>,
    pub f_bu_passive: Option<f64>,
    pub eta_sq: Option<f64>,
    pub snr_active: Option<f64>,
    pub snr_passive: Option<f64>,
    pub rate_active: Option<f64>,
    pub rate_passive: Option<f64>,
    pub select_active: bool,
    pub chosen_path: RoutePath,
}

impl RateReport {
    /// Evaluates both candidate paths (either may be absent) and decides
    /// which route to use. Selection at exact SNR equality favours the
    /// active route.
    pub fn from_paths(
        scenario: &Scenario,
        hybrid: Option<&RoutePath>,
        passive: Option<&RoutePath>,
    ) -> Result<RateReport, AnalysisError> {
        let hybrid_eval = match hybrid {
            Some(path) => {
                let f_ba = f_ba_closed(scenario, path)?;
                let f_au = f_au_closed(scenario, path)?;
                let snr = snr_active_closed(scenario, f_ba, f_au);
                Some((path, f_ba, f_au, eta_closed(scenario, f_ba), snr))
            }
            None => None,
        };
        let passive_eval = match passive {
            Some(path) => {
                let f_bu = f_bu_closed(scenario, path)?;
                let snr = snr_passive_closed(scenario, f_bu);
                Some((path, f_bu, snr))
            }
            None => None,
        };
        let select_active = match (&hybrid_eval, &passive_eval) {
            (Some((_, _, _, _, snr_act)), Some((_, _, snr_pas))) => snr_act >= snr_pas,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => return Err(AnalysisError::NoRoute),
        };
        let chosen_path = if select_active {
            hybrid_eval.as_ref().map(|e| e.0).expect("hybrid selected")
        } else {
            passive_eval
                .as_ref()
                .map(|e| e.0)
                .expect("passive selected")
        }
        .clone();
        Ok(RateReport {
            f_ba: hybrid_eval.as_ref().map(|e| e.1),
            f_au: hybrid_eval.as_ref().map(|e| e.2),
            eta_sq: hybrid_eval.as_ref().map(|e| e.3),
            snr_active: hybrid_eval.as_ref().map(|e| e.4),
            rate_active: hybrid_eval.as_ref().map(|e| rate_bps_hz(e.4)),
            f_bu_passive: passive_eval.as_ref().map(|e| e.1),
            snr_passive: passive_eval.as_ref().map(|e| e.2),
            rate_passive: passive_eval.as_ref().map(|e| rate_bps_hz(e.2)),
            select_active,
            chosen_path,
        })
    }
}
