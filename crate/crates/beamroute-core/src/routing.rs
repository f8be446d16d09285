//! Route selection over weighted LoS graphs.
//!
//! Each sub-path problem (BS -> active surface, active surface -> user, and
//! the passive-only BS -> user baseline) minimizes the same additive hop
//! cost ln(d / (M sqrt(beta))). Weights can be negative when hops are shorter
//! than M sqrt(beta); the graphs stay exactly solvable because the
//! monotone-distance edge rule makes them acyclic, so a single relaxation
//! pass in topological order is optimal. Ties resolve by fewest hops, then
//! lexicographically smallest node sequence.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::analysis::{
    f_au_closed, f_ba_closed, f_bu_closed, snr_active_closed, snr_passive_closed, AnalysisError,
};
use crate::beamforming::{PathError, RoutePath};
use crate::scenario::{NodeId, Scenario};

#[derive(Debug, Clone, PartialEq)]
pub enum RoutingError {
    NonPositiveInput(&'static str),
    UnknownVertex(NodeId),
    CyclicGraph,
    NoPath,
    /// The exhaustive oracle refuses instances with more than 12 surfaces.
    InstanceTooLarge(usize),
    Path(PathError),
    Analysis(AnalysisError),
}

impl fmt::Display for RoutingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoutingError::NonPositiveInput(name) => {
                write!(f, "parameter {name} must be strictly positive")
            }
            RoutingError::UnknownVertex(id) => write!(f, "vertex {id} is not in the graph"),
            RoutingError::CyclicGraph => write!(f, "graph contains a cycle"),
            RoutingError::NoPath => write!(f, "no feasible route"),
            RoutingError::InstanceTooLarge(n) => {
                write!(f, "exhaustive search refused: {n} surfaces (limit 12)")
            }
            RoutingError::Path(e) => write!(f, "{e}"),
            RoutingError::Analysis(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RoutingError {}

impl From<PathError> for RoutingError {
    fn from(e: PathError) -> Self {
        RoutingError::Path(e)
    }
}

impl From<AnalysisError> for RoutingError {
    fn from(e: AnalysisError) -> Self {
        RoutingError::Analysis(e)
    }
}

/// Hop weight W = ln(d / (M sqrt(beta))). Negative exactly when the hop is
/// shorter than M sqrt(beta).
pub fn edge_weight(
    distance: f64,
    passive_elements: usize,
    reference_gain: f64,
) -> Result<f64, RoutingError> {
    if !(distance > 0.0 && distance.is_finite()) {
        return Err(RoutingError::NonPositiveInput("distance"));
    }
    if passive_elements == 0 {
        return Err(RoutingError::NonPositiveInput("M"));
    }
    if !(reference_gain > 0.0 && reference_gain.is_finite()) {
        return Err(RoutingError::NonPositiveInput("beta"));
    }
    Ok((distance / (passive_elements as f64 * reference_gain.sqrt())).ln())
}

/// Directed weighted graph over scenario node ids. Construction through
/// [`build_subgraph`] guarantees acyclicity via the monotone-distance rule;
/// hand-built graphs (tests) are checked by the topological sort instead.
#[derive(Debug, Clone)]
pub struct RoutingGraph {
    vertices: Vec<NodeId>,
    adj: Vec<Vec<(usize, f64)>>,
    anchor: NodeId,
}

impl RoutingGraph {
    pub fn new(mut vertices: Vec<NodeId>, anchor: NodeId) -> Self {
        let mut seen = BTreeSet::new();
        vertices.retain(|&v| seen.insert(v));
        let n = vertices.len();
        RoutingGraph {
            vertices,
            adj: vec![Vec::new(); n],
            anchor,
        }
    }

    pub fn vertices(&self) -> &[NodeId] {
        &self.vertices
    }

    pub fn anchor(&self) -> NodeId {
        self.anchor
    }

    fn local(&self, id: NodeId) -> Option<usize> {
        self.vertices.iter().position(|&v| v == id)
    }

    pub fn add_edge(&mut self, from: NodeId, to: NodeId, weight: f64) -> Result<(), RoutingError> {
        let u = self.local(from).ok_or(RoutingError::UnknownVertex(from))?;
        let v = self.local(to).ok_or(RoutingError::UnknownVertex(to))?;
        self.adj[u].push((v, weight));
        Ok(())
    }

    /// Removes all `from -> to` edges; returns whether any existed.
    pub fn remove_edge(&mut self, from: NodeId, to: NodeId) -> bool {
        let (Some(u), Some(v)) = (self.local(from), self.local(to)) else {
            return false;
        };
        let before = self.adj[u].len();
        self.adj[u].retain(|&(target, _)| target != v);
        before != self.adj[u].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum()
    }

    /// All directed edges as (from, to, weight), deterministic order.
    pub fn edges(&self) -> Vec<(NodeId, NodeId, f64)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, targets) in self.adj.iter().enumerate() {
            for &(v, w) in targets {
                out.push((self.vertices[u], self.vertices[v], w));
            }
        }
        out
    }

    pub fn weight(&self, from: NodeId, to: NodeId) -> Option<f64> {
        let u = self.local(from)?;
        let v = self.local(to)?;
        self.adj[u]
            .iter()
            .find(|&&(target, _)| target == v)
            .map(|&(_, w)| w)
    }

    /// Kahn topological order over local indices; `Err(CyclicGraph)` when a
    /// cycle exists.
    pub fn topological_order(&self) -> Result<Vec<NodeId>, RoutingError> {
        Ok(self
            .topological_order_local()?
            .into_iter()
            .map(|u| self.vertices[u])
            .collect())
    }

    fn topological_order_local(&self) -> Result<Vec<usize>, RoutingError> {
        let n = self.vertices.len();
        let mut indegree = vec![0usize; n];
        for targets in &self.adj {
            for &(v, _) in targets {
                indegree[v] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&u| indegree[u] == 0).collect();
        let mut order = Vec::with_capacity(n);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            order.push(u);
            for &(v, _) in &self.adj[u] {
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    queue.push(v);
                }
            }
        }
        if order.len() != n {
            return Err(RoutingError::CyclicGraph);
        }
        Ok(order)
    }
}

/// A source-to-sink path with its accumulated cost (weights summed in hop
/// order, which keeps equal paths bit-identical across call sites).
#[derive(Debug, Clone, PartialEq)]
pub struct PathSolution {
    pub nodes: Vec<NodeId>,
    pub cost: f64,
}

/// `(cost, hops, lexicographic nodes)` candidate ordering, strict floats.
fn better(cost_a: f64, nodes_a: &[NodeId], cost_b: f64, nodes_b: &[NodeId]) -> bool {
    match cost_a.partial_cmp(&cost_b) {
        Some(Ordering::Less) => true,
        Some(Ordering::Greater) => false,
        _ => match nodes_a.len().cmp(&nodes_b.len()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => nodes_a < nodes_b,
        },
    }
}

fn dag_shortest(
    graph: &RoutingGraph,
    s_local: usize,
    t_local: usize,
    banned_nodes: &[bool],
    banned_edges: &BTreeSet<(usize, usize)>,
) -> Result<Option<PathSolution>, RoutingError> {
    let order = graph.topological_order_local()?;
    let n = graph.vertices.len();
    let mut best: Vec<Option<PathSolution>> = vec![None; n];
    best[s_local] = Some(PathSolution {
        nodes: vec![graph.vertices[s_local]],
        cost: 0.0,
    });
    for &u in &order {
        if banned_nodes[u] {
            continue;
        }
        let Some(current) = best[u].clone() else {
            continue;
        };
        for &(v, w) in &graph.adj[u] {
            if banned_nodes[v] || banned_edges.contains(&(u, v)) {
                continue;
            }
            let cost = current.cost + w;
            let replace = match &best[v] {
                None => true,
                Some(existing) => {
                    // candidate nodes = current.nodes + [v]; compare lazily
                    let mut nodes = current.nodes.clone();
                    nodes.push(graph.vertices[v]);
                    better(cost, &nodes, existing.cost, &existing.nodes)
                }
            };
            if replace {
                let mut nodes = current.nodes.clone();
                nodes.push(graph.vertices[v]);
                best[v] = Some(PathSolution { nodes, cost });
            }
        }
    }
    Ok(best[t_local].take())
}

/// Minimum-cost simple path from `s` to `t`, exact also with negative
/// weights (the graph must be acyclic). `Ok(None)` when `t` is unreachable.
pub fn shortest_simple_path(
    graph: &RoutingGraph,
    s: NodeId,
    t: NodeId,
) -> Result<Option<PathSolution>, RoutingError> {
    let s_local = graph.local(s).ok_or(RoutingError::UnknownVertex(s))?;
    let t_local = graph.local(t).ok_or(RoutingError::UnknownVertex(t))?;
    let banned = vec![false; graph.vertices.len()];
    dag_shortest(graph, s_local, t_local, &banned, &BTreeSet::new())
}

fn path_cost_along(graph: &RoutingGraph, nodes: &[NodeId]) -> f64 {
    let mut cost = 0.0;
    for hop in nodes.windows(2) {
        cost += graph
            .weight(hop[0], hop[1])
            .expect("edge exists along a found path");
    }
    cost
}

/// Up to `k` best simple paths in `(cost, hops, lex)` order (Yen's
/// algorithm on top of the DAG relaxation).
pub fn k_shortest_simple_paths(
    graph: &RoutingGraph,
    s: NodeId,
    t: NodeId,
    k: usize,
) -> Result<Vec<PathSolution>, RoutingError> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let Some(first) = shortest_simple_path(graph, s, t)? else {
        return Ok(Vec::new());
    };
    let t_local = graph.local(t).expect("checked above");
    let mut accepted = vec![first];
    let mut candidates: Vec<PathSolution> = Vec::new();
    while accepted.len() < k {
        let prev = accepted.last().expect("non-empty").clone();
        for i in 0..prev.nodes.len() - 1 {
            let root = &prev.nodes[..=i];
            let spur_local = graph.local(prev.nodes[i]).expect("path vertex");
            let mut banned_edges = BTreeSet::new();
            for p in &accepted {
                if p.nodes.len() > i + 1 && &p.nodes[..=i] == root {
                    let u = graph.local(p.nodes[i]).expect("path vertex");
                    let v = graph.local(p.nodes[i + 1]).expect("path vertex");
                    banned_edges.insert((u, v));
                }
            }
            let mut banned_nodes = vec![false; graph.vertices.len()];
            for &node in &root[..i] {
                banned_nodes[graph.local(node).expect("path vertex")] = true;
            }
            if let Some(spur) =
                dag_shortest(graph, spur_local, t_local, &banned_nodes, &banned_edges)?
            {
                let mut nodes = root.to_vec();
                nodes.extend_from_slice(&spur.nodes[1..]);
                if accepted.iter().any(|p| p.nodes == nodes)
                    || candidates.iter().any(|p| p.nodes == nodes)
                {
                    continue;
                }
                let cost = path_cost_along(graph, &nodes);
                candidates.push(PathSolution { nodes, cost });
            }
        }
        let Some(best_idx) = candidates
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                if better(a.cost, &a.nodes, b.cost, &b.nodes) {
                    Ordering::Less
                } else if better(b.cost, &b.nodes, a.cost, &a.nodes) {
                    Ordering::Greater
                } else {
                    Ordering::Equal
                }
            })
            .map(|(idx, _)| idx)
        else {
            break;
        };
        accepted.push(candidates.swap_remove(best_idx));
    }
    Ok(accepted)
}

/// Directed weighted subgraph for one sub-path problem. Vertices are the
/// source, the sink, and the allowed relay surfaces; an edge i -> j exists
/// when the pair has LoS and either j is the sink or j lies strictly farther
/// from the source than i does (which makes the graph acyclic).
pub fn build_subgraph(
    scenario: &Scenario,
    source: NodeId,
    sink: NodeId,
    allowed: &[NodeId],
) -> RoutingGraph {
    assert_ne!(source, sink, "source and sink must differ");
    let mut vertices = vec![source];
    let mut relays: Vec<NodeId> = allowed
        .iter()
        .copied()
        .filter(|&v| v != source && v != sink)
        .collect();
    relays.sort_unstable();
    relays.dedup();
    vertices.extend_from_slice(&relays);
    vertices.push(sink);

    let m = scenario.passive_elements();
    let beta = scenario.rf().reference_gain;
    let anchor_dist = |v: NodeId| -> f64 {
        if v == source {
            0.0
        } else {
            scenario
                .distance(v, source)
                .expect("precondition: valid node ids")
        }
    };

    let mut graph = RoutingGraph::new(vertices.clone(), source);
    for &i in &vertices {
        if i == sink {
            continue;
        }
        for &j in &vertices {
            if j == i || j == source {
                continue;
            }
            if !scenario.is_los(i, j) {
                continue;
            }
            if j == sink || anchor_dist(j) > anchor_dist(i) {
                let d = scenario.distance(i, j).expect("distinct valid ids");
                let w = edge_weight(d, m, beta).expect("validated scenario");
                graph.add_edge(i, j, w).expect("vertices present");
            }
        }
    }
    graph
}

/// One optimal sub-path: the relay surfaces strictly between the endpoints
/// (possibly none) and the summed hop cost including both terminal hops.
#[derive(Debug, Clone, PartialEq)]
pub struct SubPath {
    pub surfaces: Vec<NodeId>,
    pub cost: f64,
}

fn interior(solution: &PathSolution) -> Vec<NodeId> {
    solution.nodes[1..solution.nodes.len() - 1].to_vec()
}

/// Optimal BS -> active-surface sub-path (prefix of the hybrid route).
pub fn route_bs_to_active(scenario: &Scenario) -> Result<SubPath, RoutingError> {
    let allowed: Vec<NodeId> = scenario.passive_irs_ids().collect();
    let graph = build_subgraph(
        scenario,
        scenario.bs_id(),
        scenario.active_irs_id(),
        &allowed,
    );
    let solution = shortest_simple_path(&graph, scenario.bs_id(), scenario.active_irs_id())?
        .ok_or(RoutingError::NoPath)?;
    Ok(SubPath {
        surfaces: interior(&solution),
        cost: solution.cost,
    })
}

/// Optimal active-surface -> user sub-path (suffix of the hybrid route).
pub fn route_active_to_user(scenario: &Scenario) -> Result<SubPath, RoutingError> {
    let allowed: Vec<NodeId> = scenario.passive_irs_ids().collect();
    let graph = build_subgraph(
        scenario,
        scenario.active_irs_id(),
        scenario.user_id(),
        &allowed,
    );
    let solution = shortest_simple_path(&graph, scenario.active_irs_id(), scenario.user_id())?
        .ok_or(RoutingError::NoPath)?;
    Ok(SubPath {
        surfaces: interior(&solution),
        cost: solution.cost,
    })
}

/// Optimal passive-only route.
#[derive(Debug, Clone, PartialEq)]
pub struct PassiveRoute {
    pub path: RoutePath,
    /// Sum of hop weights over the whole route.
    pub cost: f64,
    /// True when the scenario declares a direct BS -> user LoS link; the
    /// router ignores that edge (a degenerate input for a reflection route).
    pub direct_link_ignored: bool,
}

/// Optimal route through the active surface.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridRoute {
    pub path: RoutePath,
    pub cost_bs_to_active: f64,
    pub cost_active_to_user: f64,
}

/// Best passive-only route: minimizes the summed hop cost over the graph
/// with the active surface excluded, which maximizes the passive route gain.
pub fn route_passive_only(scenario: &Scenario) -> Result<PassiveRoute, RoutingError> {
    let allowed: Vec<NodeId> = scenario.passive_irs_ids().collect();
    let bs = scenario.bs_id();
    let user = scenario.user_id();
    let mut graph = build_subgraph(scenario, bs, user, &allowed);
    let direct_link_ignored = graph.remove_edge(bs, user);
    let solution = shortest_simple_path(&graph, bs, user)?.ok_or(RoutingError::NoPath)?;
    let path = RoutePath::new(scenario, interior(&solution))?;
    Ok(PassiveRoute {
        path,
        cost: solution.cost,
        direct_link_ignored,
    })
}

fn hop_cost(scenario: &Scenario, from: NodeId, to: NodeId) -> f64 {
    let d = scenario.distance(from, to).expect("validated path");
    edge_weight(d, scenario.passive_elements(), scenario.rf().reference_gain)
        .expect("validated scenario")
}

/// Summed hop costs of the two segments of a hybrid path, computed directly
/// from scenario distances.
pub fn hybrid_segment_costs(scenario: &Scenario, path: &RoutePath) -> (f64, f64) {
    let active_idx = path.active_index().expect("hybrid path");
    let nodes = path.nodes();
    let mut cost_ba = 0.0;
    let mut prev = scenario.bs_id();
    for &id in &nodes[..=active_idx] {
        cost_ba += hop_cost(scenario, prev, id);
        prev = id;
    }
    let mut cost_au = 0.0;
    for &id in &nodes[active_idx + 1..] {
        cost_au += hop_cost(scenario, prev, id);
        prev = id;
    }
    cost_au += hop_cost(scenario, prev, scenario.user_id());
    (cost_ba, cost_au)
}

fn assemble_hybrid(
    scenario: &Scenario,
    prefix: &[NodeId],
    suffix: &[NodeId],
    cost_ba: f64,
    cost_au: f64,
) -> Result<HybridRoute, RoutingError> {
    let mut nodes = Vec::with_capacity(prefix.len() + 1 + suffix.len());
    nodes.extend_from_slice(prefix);
    nodes.push(scenario.active_irs_id());
    nodes.extend_from_slice(suffix);
    Ok(HybridRoute {
        path: RoutePath::new(scenario, nodes)?,
        cost_bs_to_active: cost_ba,
        cost_active_to_user: cost_au,
    })
}

/// Best route through the active surface. The two sub-paths are optimized
/// independently; when they share a relay surface the router enumerates
/// pairs drawn from the k best sub-paths of each side (k doubling up to 32)
/// and picks the disjoint pair with the highest SNR, falling back to the
/// exhaustive oracle if no disjoint pair emerges.
pub fn route_hybrid(scenario: &Scenario) -> Result<HybridRoute, RoutingError> {
    let bs = scenario.bs_id();
    let user = scenario.user_id();
    let ell = scenario.active_irs_id();
    let allowed: Vec<NodeId> = scenario.passive_irs_ids().collect();
    let graph_ba = build_subgraph(scenario, bs, ell, &allowed);
    let graph_au = build_subgraph(scenario, ell, user, &allowed);
    let best_ba = shortest_simple_path(&graph_ba, bs, ell)?.ok_or(RoutingError::NoPath)?;
    let best_au = shortest_simple_path(&graph_au, ell, user)?.ok_or(RoutingError::NoPath)?;
    let prefix = interior(&best_ba);
    let suffix = interior(&best_au);
    if prefix.iter().all(|id| !suffix.contains(id)) {
        return assemble_hybrid(scenario, &prefix, &suffix, best_ba.cost, best_au.cost);
    }

    // overlap fallback: best disjoint pair among the k best sub-paths
    let mut k = 2usize;
    loop {
        let list_ba = k_shortest_simple_paths(&graph_ba, bs, ell, k)?;
        let list_au = k_shortest_simple_paths(&graph_au, ell, user, k)?;
        let mut best: Option<(HybridRoute, f64)> = None;
        for pa in &list_ba {
            for pb in &list_au {
                let prefix = interior(pa);
                let suffix = interior(pb);
                if prefix.iter().any(|id| suffix.contains(id)) {
                    continue;
                }
                let candidate = assemble_hybrid(scenario, &prefix, &suffix, pa.cost, pb.cost)?;
                let f_ba = f_ba_closed(scenario, &candidate.path)?;
                let f_au = f_au_closed(scenario, &candidate.path)?;
                let snr = snr_active_closed(scenario, f_ba, f_au);
                let replace = match &best {
                    None => true,
                    Some((incumbent, best_snr)) => {
                        let cand_nodes = candidate.path.nodes();
                        let inc_nodes = incumbent.path.nodes();
                        snr > *best_snr
                            || (snr == *best_snr
                                && (cand_nodes.len() < inc_nodes.len()
                                    || (cand_nodes.len() == inc_nodes.len()
                                        && cand_nodes < inc_nodes)))
                    }
                };
                if replace {
                    best = Some((candidate, snr));
                }
            }
        }
        if let Some((route, _)) = best {
            return Ok(route);
        }
        let exhausted = list_ba.len() < k && list_au.len() < k;
        if k >= 32 || exhausted {
            break;
        }
        k *= 2;
    }

    let oracle = exhaustive_route_oracle(scenario, OracleMode::Hybrid)?;
    let (cost_ba, cost_au) = hybrid_segment_costs(scenario, &oracle.path);
    Ok(HybridRoute {
        path: oracle.path,
        cost_bs_to_active: cost_ba,
        cost_active_to_user: cost_au,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    PassiveOnly,
    Hybrid,
}

/// Globally optimal route found by brute force.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRoute {
    pub path: RoutePath,
    pub snr: f64,
}

/// Enumerates every feasible simple path (distinct surfaces, LoS on all
/// hops, terminals attached) and returns the SNR maximizer. Exponential;
/// refuses scenarios with more than 12 surfaces.
pub fn exhaustive_route_oracle(
    scenario: &Scenario,
    mode: OracleMode,
) -> Result<OracleRoute, RoutingError> {
    let j = scenario.irs_count();
    if j > 12 {
        return Err(RoutingError::InstanceTooLarge(j));
    }
    let ell = scenario.active_irs_id();
    let relays: Vec<NodeId> = match mode {
        OracleMode::PassiveOnly => scenario.passive_irs_ids().collect(),
        OracleMode::Hybrid => scenario.irs_ids().collect(),
    };
    let user = scenario.user_id();

    struct Search<'a> {
        scenario: &'a Scenario,
        relays: &'a [NodeId],
        mode: OracleMode,
        ell: NodeId,
        user: NodeId,
        stack: Vec<NodeId>,
        visited: Vec<bool>,
        best: Option<(f64, Vec<NodeId>)>,
    }

    impl Search<'_> {
        fn consider(&mut self) -> Result<(), RoutingError> {
            let last = *self.stack.last().expect("non-empty stack");
            if !self.scenario.is_los(last, self.user) {
                return Ok(());
            }
            if self.mode == OracleMode::Hybrid && !self.stack.contains(&self.ell) {
                return Ok(());
            }
            let path = RoutePath::new(self.scenario, self.stack.clone())?;
            let snr = match self.mode {
                OracleMode::PassiveOnly => {
                    snr_passive_closed(self.scenario, f_bu_closed(self.scenario, &path)?)
                }
                OracleMode::Hybrid => {
                    let f_ba = f_ba_closed(self.scenario, &path)?;
                    let f_au = f_au_closed(self.scenario, &path)?;
                    snr_active_closed(self.scenario, f_ba, f_au)
                }
            };
            let replace = match &self.best {
                None => true,
                Some((best_snr, best_nodes)) => {
                    snr > *best_snr
                        || (snr == *best_snr
                            && (self.stack.len() < best_nodes.len()
                                || (self.stack.len() == best_nodes.len()
                                    && self.stack < *best_nodes)))
                }
            };
            if replace {
                self.best = Some((snr, self.stack.clone()));
            }
            Ok(())
        }

        fn extend(&mut self) -> Result<(), RoutingError> {
            self.consider()?;
            let last = *self.stack.last().expect("non-empty stack");
            for idx in 0..self.relays.len() {
                let next = self.relays[idx];
                if self.visited[idx] || !self.scenario.is_los(last, next) {
                    continue;
                }
                self.visited[idx] = true;
                self.stack.push(next);
                self.extend()?;
                self.stack.pop();
                self.visited[idx] = false;
            }
            Ok(())
        }
    }

    let mut search = Search {
        scenario,
        relays: &relays,
        mode,
        ell,
        user,
        stack: Vec::new(),
        visited: vec![false; relays.len()],
        best: None,
    };
    for (idx, &first) in relays.iter().enumerate() {
        if !scenario.is_los(scenario.bs_id(), first) {
            continue;
        }
        search.visited[idx] = true;
        search.stack.push(first);
        search.extend()?;
        search.stack.pop();
        search.visited[idx] = false;
    }

    let (snr, nodes) = search.best.ok_or(RoutingError::NoPath)?;
    Ok(OracleRoute {
        path: RoutePath::new(scenario, nodes)?,
        snr,
    })
}
