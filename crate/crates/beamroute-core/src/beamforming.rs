//! Optimal per-surface phase alignment, MRT precoding, and the amplification
//! factor for a given multi-reflection path, plus brute-force SNR evaluators
//! that compute the full cascaded matrix products. The brute-force routines
//! are deliberately naive; they are the ground truth the closed forms in
//! [`crate::analysis`] are checked against.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::channel::{
    channel_matrix, receive_steering, transmit_steering, ChannelError, ComplexMatrix,
};
use crate::scenario::{NodeId, NodeKind, Scenario, ScenarioError};

/// Ordered multi-reflection path: the sequence of surface ids between the
/// base station and the user. Construction validates the feasibility
/// constraints: all entries distinct surfaces, LoS on every hop, and LoS on
/// both terminal links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutePath {
    nodes: Vec<NodeId>,
    active_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PathError {
    Empty,
    NotASurface(NodeId),
    RepeatedNode(NodeId),
    MissingLos(NodeId, NodeId),
    Scenario(ScenarioError),
}

impl fmt::Display for PathError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathError::Empty => write!(f, "path must contain at least one surface"),
            PathError::NotASurface(id) => write!(f, "node {id} is not a reflecting surface"),
            PathError::RepeatedNode(id) => write!(f, "node {id} appears twice in the path"),
            PathError::MissingLos(i, j) => write!(f, "hop {i} -> {j} has no LoS link"),
            PathError::Scenario(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PathError {}

impl From<ScenarioError> for PathError {
    fn from(e: ScenarioError) -> Self {
        PathError::Scenario(e)
    }
}

impl RoutePath {
    pub fn new(scenario: &Scenario, nodes: Vec<NodeId>) -> Result<Self, PathError> {
        if nodes.is_empty() {
            return Err(PathError::Empty);
        }
        let mut active_index = None;
        for (k, &id) in nodes.iter().enumerate() {
            let spec = scenario.node(id)?;
            if !spec.kind.is_irs() {
                return Err(PathError::NotASurface(id));
            }
            if nodes[..k].contains(&id) {
                return Err(PathError::RepeatedNode(id));
            }
            if spec.kind == NodeKind::ActiveIrs {
                active_index = Some(k);
            }
        }
        let mut hops = Vec::with_capacity(nodes.len() + 1);
        hops.push((scenario.bs_id(), nodes[0]));
        hops.extend(nodes.windows(2).map(|w| (w[0], w[1])));
        hops.push((nodes[nodes.len() - 1], scenario.user_id()));
        for (i, j) in hops {
            if !scenario.is_los(i, j) {
                return Err(PathError::MissingLos(i, j));
            }
        }
        Ok(RoutePath {
            nodes,
            active_index,
        })
    }

    /// Surface ids in hop order (base station and user excluded).
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Zero-based position of the active surface within [`Self::nodes`],
    /// absent for passive-only paths.
    pub fn active_index(&self) -> Option<usize> {
        self.active_index
    }

    pub fn is_hybrid(&self) -> bool {
        self.active_index.is_some()
    }

    /// Number of surfaces on the path.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() // unreachable: construction rejects empty paths
    }

    /// The full node sequence including the terminals.
    pub fn full_route(&self, scenario: &Scenario) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len() + 2);
        out.push(scenario.bs_id());
        out.extend_from_slice(&self.nodes);
        out.push(scenario.user_id());
        out
    }
}

/// Beamforming state for one path: a phase vector per surface (aligned with
/// the path order), the unit-norm BS precoder, and the common amplification
/// factor when the path crosses the active surface.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingSolution {
    per_irs_phases: Vec<Vec<f64>>,
    bs_precoder: ComplexMatrix,
    amplification: Option<f64>,
}

impl BeamformingSolution {
    pub fn per_irs_phases(&self) -> &[Vec<f64>] {
        &self.per_irs_phases
    }

    /// Unit-norm precoder, T x 1.
    pub fn bs_precoder(&self) -> &ComplexMatrix {
        &self.bs_precoder
    }

    /// Common amplification factor eta (hybrid paths only).
    pub fn amplification(&self) -> Option<f64> {
        self.amplification
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BeamformingError {
    /// Solution phase vectors do not match the path surfaces.
    PhaseShapeMismatch,
    /// The precoder is not T x 1.
    PrecoderShapeMismatch,
    /// Operation requires a passive-only path.
    PassivePathRequired,
    /// Operation requires a path through the active surface.
    HybridPathRequired,
    /// Hybrid evaluation without an amplification factor.
    MissingAmplification,
    Channel(ChannelError),
}

impl fmt::Display for BeamformingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BeamformingError::PhaseShapeMismatch => {
                write!(f, "phase vectors do not match the path surfaces")
            }
            BeamformingError::PrecoderShapeMismatch => write!(f, "precoder must be T x 1"),
            BeamformingError::PassivePathRequired => {
                write!(f, "operation requires a passive-only path")
            }
            BeamformingError::HybridPathRequired => {
                write!(f, "operation requires a path through the active surface")
            }
            BeamformingError::MissingAmplification => {
                write!(f, "solution lacks an amplification factor")
            }
            BeamformingError::Channel(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for BeamformingError {}

impl From<ChannelError> for BeamformingError {
    fn from(e: ChannelError) -> Self {
        BeamformingError::Channel(e)
    }
}

fn wrap_phase(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let r = x % two_pi;
    let r = if r < 0.0 { r + two_pi } else { r };
    // a tiny negative input can round up to exactly 2*pi
    if r >= two_pi {
        0.0
    } else {
        r
    }
}

/// Cascaded channel from the BS antennas to the elements of `path.nodes()[upto]`,
/// with reflection phases applied at every earlier surface on the path.
fn bs_cascade(
    scenario: &Scenario,
    path: &RoutePath,
    phases: &[Vec<f64>],
    upto: usize,
) -> Result<ComplexMatrix, BeamformingError> {
    let nodes = path.nodes();
    let mut g = channel_matrix(scenario, scenario.bs_id(), nodes[0])?;
    for k in 1..=upto {
        let reflect = ComplexMatrix::diagonal_phases(&phases[k - 1]);
        g = channel_matrix(scenario, nodes[k - 1], nodes[k])?
            .mul(&reflect)
            .mul(&g);
    }
    Ok(g)
}

/// Cascaded row channel from the active surface's elements to the user,
/// 1 x N, with reflection phases applied at every surface after the active
/// one. Empty product convention: when the active surface is last, this is
/// the direct surface -> user row.
fn active_to_user_row(
    scenario: &Scenario,
    path: &RoutePath,
    phases: &[Vec<f64>],
    active_idx: usize,
) -> Result<ComplexMatrix, BeamformingError> {
    let nodes = path.nodes();
    let last = nodes.len() - 1;
    if active_idx == last {
        return Ok(channel_matrix(scenario, nodes[last], scenario.user_id())?);
    }
    let mut t = channel_matrix(scenario, nodes[active_idx], nodes[active_idx + 1])?;
    for k in (active_idx + 2)..=last {
        let reflect = ComplexMatrix::diagonal_phases(&phases[k - 1]);
        t = channel_matrix(scenario, nodes[k - 1], nodes[k])?
            .mul(&reflect)
            .mul(&t);
    }
    let reflect_last = ComplexMatrix::diagonal_phases(&phases[last]);
    Ok(channel_matrix(scenario, nodes[last], scenario.user_id())?
        .mul(&reflect_last)
        .mul(&t))
}

fn check_solution_shape(
    scenario: &Scenario,
    path: &RoutePath,
    sol: &BeamformingSolution,
) -> Result<(), BeamformingError> {
    if sol.per_irs_phases.len() != path.len() {
        return Err(BeamformingError::PhaseShapeMismatch);
    }
    for (&id, phases) in path.nodes().iter().zip(&sol.per_irs_phases) {
        let count = scenario
            .element_count(id)
            .map_err(|e| BeamformingError::Channel(ChannelError::Scenario(e)))?;
        if phases.len() != count {
            return Err(BeamformingError::PhaseShapeMismatch);
        }
    }
    if sol.bs_precoder.rows() != scenario.bs_antennas() || sol.bs_precoder.cols() != 1 {
        return Err(BeamformingError::PrecoderShapeMismatch);
    }
    Ok(())
}

impl BeamformingSolution {
    /// Solution with caller-supplied phase vectors: MRT precoding towards the
    /// first hop and, on hybrid paths, the amplification factor that makes
    /// the power constraint tight under those phases. This is the
    /// conditional optimum for fixed phases, which makes it the right
    /// baseline for randomized dominance checks.
    pub fn with_phases(
        scenario: &Scenario,
        path: &RoutePath,
        per_irs_phases: Vec<Vec<f64>>,
    ) -> Result<Self, BeamformingError> {
        let a_t = transmit_steering(scenario, scenario.bs_id(), path.nodes()[0])?;
        let bs_precoder = a_t.scale(Complex64::new(1.0 / a_t.frobenius_norm_sq().sqrt(), 0.0));
        let mut sol = BeamformingSolution {
            per_irs_phases,
            bs_precoder,
            amplification: None,
        };
        check_solution_shape(scenario, path, &sol)?;
        if let Some(active_idx) = path.active_index() {
            let rf = scenario.rf();
            let g_ba = bs_cascade(scenario, path, &sol.per_irs_phases, active_idx)?;
            let phi = ComplexMatrix::diagonal_phases(&sol.per_irs_phases[active_idx]);
            let incident = phi.mul(&g_ba.mul(&sol.bs_precoder));
            let drive = rf.tx_power_w * incident.frobenius_norm_sq()
                + rf.noise_amp_w * phi.frobenius_norm_sq();
            sol.amplification = Some((rf.amp_power_w / drive).sqrt());
        }
        Ok(sol)
    }
}

/// Optimal joint beamforming for a given path: each surface aligns its
/// outgoing steering phase against the incoming one element-by-element, the
/// BS applies MRT towards the first hop, and the active surface exhausts its
/// amplification power budget.
pub fn optimal_beamforming(
    scenario: &Scenario,
    path: &RoutePath,
) -> Result<BeamformingSolution, BeamformingError> {
    let nodes = path.nodes();
    let mut per_irs_phases = Vec::with_capacity(nodes.len());
    for (k, &id) in nodes.iter().enumerate() {
        let prev = if k == 0 {
            scenario.bs_id()
        } else {
            nodes[k - 1]
        };
        let next = if k + 1 == nodes.len() {
            scenario.user_id()
        } else {
            nodes[k + 1]
        };
        let a_t = transmit_steering(scenario, id, next)?;
        let a_r = receive_steering(scenario, id, prev)?;
        let phases = a_t
            .entries()
            .iter()
            .zip(a_r.entries())
            .map(|(t, r)| wrap_phase(t.arg() - r.arg()))
            .collect();
        per_irs_phases.push(phases);
    }
    BeamformingSolution::with_phases(scenario, path, per_irs_phases)
}

/// Received SNR of a passive-only path by explicit evaluation of the full
/// cascaded matrix product.
pub fn snr_passive_bruteforce(
    scenario: &Scenario,
    path: &RoutePath,
    sol: &BeamformingSolution,
) -> Result<f64, BeamformingError> {
    if path.is_hybrid() {
        return Err(BeamformingError::PassivePathRequired);
    }
    check_solution_shape(scenario, path, sol)?;
    let nodes = path.nodes();
    let last = nodes.len() - 1;
    let cascade = bs_cascade(scenario, path, &sol.per_irs_phases, last)?;
    let reflect_last = ComplexMatrix::diagonal_phases(&sol.per_irs_phases[last]);
    let g_bu = channel_matrix(scenario, nodes[last], scenario.user_id())?
        .mul(&reflect_last)
        .mul(&cascade);
    let received = g_bu.mul(&sol.bs_precoder);
    let rf = scenario.rf();
    Ok(rf.tx_power_w * received.get(0, 0).norm_sqr() / rf.noise_user_w)
}

/// Received SNR of a hybrid path by explicit evaluation: amplified signal
/// power over amplified noise plus receiver noise.
pub fn snr_active_bruteforce(
    scenario: &Scenario,
    path: &RoutePath,
    sol: &BeamformingSolution,
) -> Result<f64, BeamformingError> {
    let active_idx = path
        .active_index()
        .ok_or(BeamformingError::HybridPathRequired)?;
    check_solution_shape(scenario, path, sol)?;
    let eta = sol
        .amplification
        .ok_or(BeamformingError::MissingAmplification)?;
    let rf = scenario.rf();
    let g_ba = bs_cascade(scenario, path, &sol.per_irs_phases, active_idx)?;
    let g_au = active_to_user_row(scenario, path, &sol.per_irs_phases, active_idx)?;
    let amp = ComplexMatrix::diagonal_phases(&sol.per_irs_phases[active_idx])
        .scale(Complex64::new(eta, 0.0));
    let row = g_au.mul(&amp);
    let signal = row.mul(&g_ba).mul(&sol.bs_precoder);
    let numerator = rf.tx_power_w * signal.get(0, 0).norm_sqr();
    let denominator = row.frobenius_norm_sq() * rf.noise_amp_w + rf.noise_user_w;
    Ok(numerator / denominator)
}

/// Amplification power drawn by the active surface under the given solution:
/// eta^2 (P_B |Phi G_BA w_B|^2 + sigma_F^2 |Phi I_N|^2). Equals the budget
/// P_F at the optimal solution.
pub fn amplification_power_used(
    scenario: &Scenario,
    path: &RoutePath,
    sol: &BeamformingSolution,
) -> Result<f64, BeamformingError> {
    let active_idx = path
        .active_index()
        .ok_or(BeamformingError::HybridPathRequired)?;
    check_solution_shape(scenario, path, sol)?;
    let eta = sol
        .amplification
        .ok_or(BeamformingError::MissingAmplification)?;
    let rf = scenario.rf();
    let g_ba = bs_cascade(scenario, path, &sol.per_irs_phases, active_idx)?;
    let phi = ComplexMatrix::diagonal_phases(&sol.per_irs_phases[active_idx]);
    let incident = phi.mul(&g_ba.mul(&sol.bs_precoder));
    Ok(eta
        * eta
        * (rf.tx_power_w * incident.frobenius_norm_sq() + rf.noise_amp_w * phi.frobenius_norm_sq()))
}
