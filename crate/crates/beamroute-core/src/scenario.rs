//! Immutable world model: nodes, LoS adjacency, RF constants, and the
//! geometric primitives (distances, link angles) everything else builds on.
//!
//! Unit system: all lengths in meters, all powers in watts, all gains as
//! linear power ratios. dB/dBm exist only at the file boundary (see the
//! companion crate).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float; // float math via libm when built without `std`

/// Node index into the scenario. The base station is always `0`, the user is
/// always the largest id, reflecting surfaces occupy `1..=J`.
pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Bs,
    PassiveIrs,
    ActiveIrs,
    User,
}

impl NodeKind {
    pub fn is_irs(self) -> bool {
        matches!(self, NodeKind::PassiveIrs | NodeKind::ActiveIrs)
    }
}

/// Antenna/element layout of a node. The element count is always derived
/// from the layout, never stored separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayGeometry {
    /// Uniform linear array along the +x axis (base station).
    Linear { antennas: usize },
    /// Uniform rectangular array; `horizontal` is the slow-varying factor of
    /// the steering tensor product.
    Rectangular { horizontal: usize, vertical: usize },
    /// Single antenna (user).
    Single,
}

impl ArrayGeometry {
    pub fn element_count(&self) -> usize {
        match *self {
            ArrayGeometry::Linear { antennas } => antennas,
            ArrayGeometry::Rectangular {
                horizontal,
                vertical,
            } => horizontal * vertical,
            ArrayGeometry::Single => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    pub id: NodeId,
    pub kind: NodeKind,
    /// Position in meters.
    pub position: [f64; 3],
    pub array: ArrayGeometry,
}

/// RF constants shared by every link in the scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct RfConstants {
    /// Carrier wavelength, meters.
    pub wavelength_m: f64,
    /// Array element spacing, meters.
    pub element_spacing_m: f64,
    /// Reference channel power gain at 1 m distance, linear ratio.
    pub reference_gain: f64,
    /// Receiver noise power at the user, watts.
    pub noise_user_w: f64,
    /// Amplification noise power at the active surface, watts.
    pub noise_amp_w: f64,
    /// Transmit power budget at the base station, watts.
    pub tx_power_w: f64,
    /// Amplification power budget at the active surface, watts.
    pub amp_power_w: f64,
}

/// Azimuth/elevation pair in radians. Elevation is measured from the +z
/// axis (`0..=pi`), azimuth in the x-y plane from +x (`-pi..=pi`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkAngles {
    pub azimuth: f64,
    pub elevation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioError {
    Empty,
    DuplicateId(NodeId),
    MissingId(NodeId),
    BsCount(usize),
    UserCount(usize),
    ActiveIrsCount(usize),
    BsNotIdZero(NodeId),
    UserNotLastId(NodeId),
    InteriorNotIrs(NodeId),
    ArrayMismatch(NodeId),
    EmptyArray(NodeId),
    PassiveDimsMismatch(NodeId),
    NonPositiveRf(&'static str),
    CoincidentNodes(NodeId, NodeId),
    LosSelfLoop(NodeId),
    LosUnknownNode(NodeId),
    UnknownNode(NodeId),
    SameNode(NodeId),
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ScenarioError::Empty => write!(f, "scenario has no nodes"),
            ScenarioError::DuplicateId(id) => write!(f, "node id {id} appears more than once"),
            ScenarioError::MissingId(id) => write!(f, "node id {id} is missing"),
            ScenarioError::BsCount(n) => write!(f, "expected exactly one base station, found {n}"),
            ScenarioError::UserCount(n) => write!(f, "expected exactly one user, found {n}"),
            ScenarioError::ActiveIrsCount(n) => {
                write!(f, "expected exactly one active surface, found {n}")
            }
            ScenarioError::BsNotIdZero(id) => write!(f, "base station must have id 0, found {id}"),
            ScenarioError::UserNotLastId(id) => {
                write!(f, "user must have the largest id, found {id}")
            }
            ScenarioError::InteriorNotIrs(id) => {
                write!(f, "node {id} must be a reflecting surface")
            }
            ScenarioError::ArrayMismatch(id) => {
                write!(
                    f,
                    "node {id} has an array layout inconsistent with its kind"
                )
            }
            ScenarioError::EmptyArray(id) => write!(f, "node {id} has zero array elements"),
            ScenarioError::PassiveDimsMismatch(id) => {
                write!(
                    f,
                    "passive surface {id} differs in element layout from the others"
                )
            }
            ScenarioError::NonPositiveRf(name) => {
                write!(f, "RF constant {name} must be strictly positive and finite")
            }
            ScenarioError::CoincidentNodes(i, j) => {
                write!(f, "nodes {i} and {j} share the same position")
            }
            ScenarioError::LosSelfLoop(id) => write!(f, "LoS entry connects node {id} to itself"),
            ScenarioError::LosUnknownNode(id) => {
                write!(f, "LoS entry references unknown node {id}")
            }
            ScenarioError::UnknownNode(id) => write!(f, "unknown node id {id}"),
            ScenarioError::SameNode(id) => {
                write!(f, "operation requires two distinct nodes, got {id} twice")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ScenarioError {}

/// Immutable world description. Construct with [`Scenario::new`]; all
/// geometry and constants are validated once and never mutated, so the value
/// is safe to share read-only across workers.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    nodes: Vec<NodeSpec>,
    /// Row-major n*n symmetric adjacency, false on the diagonal.
    los: Vec<bool>,
    rf: RfConstants,
    active: NodeId,
}

/// Runs every structural check and returns all violations (empty when valid).
/// `Scenario::new` fails fast on the first of these.
pub fn validate(
    nodes: &[NodeSpec],
    los_pairs: &[(NodeId, NodeId)],
    rf: &RfConstants,
) -> Vec<ScenarioError> {
    let mut errs = Vec::new();
    if nodes.is_empty() {
        errs.push(ScenarioError::Empty);
        return errs;
    }
    let n = nodes.len();

    // id coverage: 0..n each exactly once
    let mut seen = vec![0usize; n];
    for node in nodes {
        if node.id >= n {
            // out-of-range id; the coverage scan below reports the gap
            continue;
        }
        seen[node.id] += 1;
    }
    for (id, &count) in seen.iter().enumerate() {
        if count == 0 {
            errs.push(ScenarioError::MissingId(id));
        } else if count > 1 {
            errs.push(ScenarioError::DuplicateId(id));
        }
    }

    // kind placement
    let bs_count = nodes.iter().filter(|s| s.kind == NodeKind::Bs).count();
    let user_count = nodes.iter().filter(|s| s.kind == NodeKind::User).count();
    let active_count = nodes
        .iter()
        .filter(|s| s.kind == NodeKind::ActiveIrs)
        .count();
    if bs_count != 1 {
        errs.push(ScenarioError::BsCount(bs_count));
    }
    if user_count != 1 {
        errs.push(ScenarioError::UserCount(user_count));
    }
    if active_count != 1 {
        errs.push(ScenarioError::ActiveIrsCount(active_count));
    }
    for node in nodes {
        match node.kind {
            NodeKind::Bs if node.id != 0 => errs.push(ScenarioError::BsNotIdZero(node.id)),
            NodeKind::User if node.id != n - 1 => errs.push(ScenarioError::UserNotLastId(node.id)),
            NodeKind::PassiveIrs | NodeKind::ActiveIrs if node.id == 0 || node.id == n - 1 => {
                errs.push(ScenarioError::InteriorNotIrs(node.id))
            }
            _ => {}
        }
    }

    // array layouts
    let mut passive_dims: Option<(usize, usize)> = None;
    for node in nodes {
        let ok = matches!(
            (node.kind, node.array),
            (NodeKind::Bs, ArrayGeometry::Linear { .. })
                | (NodeKind::PassiveIrs, ArrayGeometry::Rectangular { .. })
                | (NodeKind::ActiveIrs, ArrayGeometry::Rectangular { .. })
                | (NodeKind::User, ArrayGeometry::Single)
        );
        if !ok {
            errs.push(ScenarioError::ArrayMismatch(node.id));
            continue;
        }
        if node.array.element_count() == 0 {
            errs.push(ScenarioError::EmptyArray(node.id));
        }
        if node.kind == NodeKind::PassiveIrs {
            if let ArrayGeometry::Rectangular {
                horizontal,
                vertical,
            } = node.array
            {
                match passive_dims {
                    None => passive_dims = Some((horizontal, vertical)),
                    Some(dims) if dims != (horizontal, vertical) => {
                        errs.push(ScenarioError::PassiveDimsMismatch(node.id))
                    }
                    Some(_) => {}
                }
            }
        }
    }

    // RF constants
    for (name, value) in [
        ("lambda", rf.wavelength_m),
        ("d_I", rf.element_spacing_m),
        ("beta", rf.reference_gain),
        ("sigma2", rf.noise_user_w),
        ("sigmaF2", rf.noise_amp_w),
        ("P_B", rf.tx_power_w),
        ("P_F", rf.amp_power_w),
    ] {
        if !(value.is_finite() && value > 0.0) {
            errs.push(ScenarioError::NonPositiveRf(name));
        }
    }

    // coincident positions
    for a in 0..nodes.len() {
        for b in (a + 1)..nodes.len() {
            if nodes[a].position == nodes[b].position {
                errs.push(ScenarioError::CoincidentNodes(nodes[a].id, nodes[b].id));
            }
        }
    }

    // LoS pairs
    for &(i, j) in los_pairs {
        if i == j {
            errs.push(ScenarioError::LosSelfLoop(i));
            continue;
        }
        for id in [i, j] {
            if id >= n {
                errs.push(ScenarioError::LosUnknownNode(id));
            }
        }
    }

    errs
}

impl Scenario {
    /// Builds a validated scenario. `los_pairs` lists undirected LoS links;
    /// symmetry is applied automatically.
    pub fn new(
        mut nodes: Vec<NodeSpec>,
        los_pairs: &[(NodeId, NodeId)],
        rf: RfConstants,
    ) -> Result<Self, ScenarioError> {
        if let Some(err) = validate(&nodes, los_pairs, &rf).into_iter().next() {
            return Err(err);
        }
        nodes.sort_by_key(|s| s.id);
        let n = nodes.len();
        let mut los = vec![false; n * n];
        for &(i, j) in los_pairs {
            los[i * n + j] = true;
            los[j * n + i] = true;
        }
        let active = nodes
            .iter()
            .find(|s| s.kind == NodeKind::ActiveIrs)
            .map(|s| s.id)
            .expect("validated: exactly one active surface");
        Ok(Scenario {
            nodes,
            los,
            rf,
            active,
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of reflecting surfaces J (active one included).
    pub fn irs_count(&self) -> usize {
        self.nodes.len() - 2
    }

    pub fn nodes(&self) -> &[NodeSpec] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Result<&NodeSpec, ScenarioError> {
        self.nodes.get(id).ok_or(ScenarioError::UnknownNode(id))
    }

    pub fn rf(&self) -> &RfConstants {
        &self.rf
    }

    pub fn bs_id(&self) -> NodeId {
        0
    }

    pub fn user_id(&self) -> NodeId {
        self.nodes.len() - 1
    }

    pub fn active_irs_id(&self) -> NodeId {
        self.active
    }

    pub fn irs_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        1..self.user_id()
    }

    pub fn passive_irs_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        let active = self.active;
        self.irs_ids().filter(move |&id| id != active)
    }

    /// Element count U_j of node `j`.
    pub fn element_count(&self, id: NodeId) -> Result<usize, ScenarioError> {
        Ok(self.node(id)?.array.element_count())
    }

    /// BS antenna count T.
    pub fn bs_antennas(&self) -> usize {
        self.nodes[0].array.element_count()
    }

    /// Common per-surface element count M of the passive surfaces. Scenarios
    /// with no passive surface fall back to the active layout (M only enters
    /// route weights, which are then irrelevant).
    pub fn passive_elements(&self) -> usize {
        self.passive_irs_ids()
            .next()
            .map(|id| self.nodes[id].array.element_count())
            .unwrap_or_else(|| self.nodes[self.active].array.element_count())
    }

    /// Element count N of the active surface.
    pub fn active_elements(&self) -> usize {
        self.nodes[self.active].array.element_count()
    }

    pub fn is_los(&self, i: NodeId, j: NodeId) -> bool {
        let n = self.nodes.len();
        i < n && j < n && self.los[i * n + j]
    }

    /// Undirected LoS pairs with i < j, in deterministic order.
    pub fn los_pairs(&self) -> Vec<(NodeId, NodeId)> {
        let n = self.nodes.len();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.los[i * n + j] {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }

    /// Euclidean link distance d_{i,j}, meters. Symmetric.
    pub fn distance(&self, i: NodeId, j: NodeId) -> Result<f64, ScenarioError> {
        if i == j {
            return Err(ScenarioError::SameNode(i));
        }
        let a = self.node(i)?.position;
        let b = self.node(j)?.position;
        let dx = b[0] - a[0];
        let dy = b[1] - a[1];
        let dz = b[2] - a[2];
        Ok((dx * dx + dy * dy + dz * dz).sqrt())
    }

    /// Unit vector pointing from node `i` to node `j`.
    pub fn unit_direction(&self, i: NodeId, j: NodeId) -> Result<[f64; 3], ScenarioError> {
        let d = self.distance(i, j)?;
        let a = self.nodes[i].position;
        let b = self.nodes[j].position;
        Ok([(b[0] - a[0]) / d, (b[1] - a[1]) / d, (b[2] - a[2]) / d])
    }

    /// Angles of the direction from node `i` towards node `j`. This is the
    /// departure direction of link i->j at node i; the arrival direction at
    /// node j is `link_angles(j, i)` (the antipodal direction).
    pub fn link_angles(&self, i: NodeId, j: NodeId) -> Result<LinkAngles, ScenarioError> {
        let u = self.unit_direction(i, j)?;
        let elevation = u[2].clamp(-1.0, 1.0).acos();
        let azimuth = u[1].atan2(u[0]);
        Ok(LinkAngles { azimuth, elevation })
    }

    /// Copy of the scenario with every passive surface resized to the given
    /// rectangular layout.
    pub fn with_passive_elements(
        &self,
        horizontal: usize,
        vertical: usize,
    ) -> Result<Scenario, ScenarioError> {
        let mut nodes = self.nodes.clone();
        for node in &mut nodes {
            if node.kind == NodeKind::PassiveIrs {
                node.array = ArrayGeometry::Rectangular {
                    horizontal,
                    vertical,
                };
            }
        }
        Scenario::new(nodes, &self.los_pairs(), self.rf.clone())
    }

    /// Copy of the scenario with the active surface resized.
    pub fn with_active_elements(
        &self,
        horizontal: usize,
        vertical: usize,
    ) -> Result<Scenario, ScenarioError> {
        let mut nodes = self.nodes.clone();
        nodes[self.active].array = ArrayGeometry::Rectangular {
            horizontal,
            vertical,
        };
        Scenario::new(nodes, &self.los_pairs(), self.rf.clone())
    }

    /// Copy of the scenario with a different amplification power budget.
    pub fn with_amp_power_w(&self, amp_power_w: f64) -> Result<Scenario, ScenarioError> {
        let mut rf = self.rf.clone();
        rf.amp_power_w = amp_power_w;
        Scenario::new(self.nodes.clone(), &self.los_pairs(), rf)
    }
}
