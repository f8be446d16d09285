//! Scenario file format (JSON).
//!
//! Top-level keys:
//! - `rf`: `lambda_m`, optional `d_I_m` (defaults to half a wavelength),
//!   `beta_db`, `sigma2_dbm`, `sigmaF2_dbm`, `PB_dbm`, `PF_dbm`;
//! - `nodes`: array of `{id, kind, pos: [x, y, z], array}` where `kind` is
//!   one of `bs` / `passive_irs` / `active_irs` / `user` and `array` is
//!   `{"T": n}` for the base station, `{"M1": a, "M2": b}` or `{"M": m}`
//!   (perfect square) for passive surfaces, `{"N1": a, "N2": b}` or
//!   `{"N": n}` for the active surface, and omitted for the user;
//! - `los`: either a list of `[i, j]` id pairs (symmetry implied) or a full
//!   0/1 matrix (must be symmetric with a zero diagonal).
//!
//! dB/dBm quantities exist only in the file; everything becomes watts and
//! linear ratios on load.

use beamroute_core::scenario::{
    self, ArrayGeometry, NodeId, NodeKind, NodeSpec, RfConstants, Scenario, ScenarioError,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::{db_to_linear, dbm_to_watts, linear_to_db, watts_to_dbm};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub rf: RfSection,
    pub nodes: Vec<NodeEntry>,
    pub los: LosSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RfSection {
    pub lambda_m: f64,
    #[serde(rename = "d_I_m", skip_serializing_if = "Option::is_none", default)]
    pub d_i_m: Option<f64>,
    pub beta_db: f64,
    pub sigma2_dbm: f64,
    #[serde(rename = "sigmaF2_dbm")]
    pub sigma_f2_dbm: f64,
    #[serde(rename = "PB_dbm")]
    pub pb_dbm: f64,
    #[serde(rename = "PF_dbm")]
    pub pf_dbm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindTag {
    Bs,
    PassiveIrs,
    ActiveIrs,
    User,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeEntry {
    pub id: usize,
    pub kind: KindTag,
    pub pos: [f64; 3],
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub array: Option<ArraySection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArraySection {
    Linear {
        #[serde(rename = "T")]
        t: usize,
    },
    PassiveDims {
        #[serde(rename = "M1")]
        m1: usize,
        #[serde(rename = "M2")]
        m2: usize,
    },
    PassiveTotal {
        #[serde(rename = "M")]
        m: usize,
    },
    ActiveDims {
        #[serde(rename = "N1")]
        n1: usize,
        #[serde(rename = "N2")]
        n2: usize,
    },
    ActiveTotal {
        #[serde(rename = "N")]
        n: usize,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LosSection {
    Pairs(Vec<[usize; 2]>),
    Matrix(Vec<Vec<u8>>),
}

#[derive(Debug, Error, PartialEq)]
pub enum LoadError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("node {id}: array section does not match its kind")]
    ArrayKindMismatch { id: usize },
    #[error("node {id}: missing array section")]
    MissingArray { id: usize },
    #[error("node {id}: element count {count} is not a perfect square; state both factors")]
    NotASquare { id: usize, count: usize },
    #[error("LoS matrix must be {n} x {n} to cover all nodes")]
    LosMatrixShape { n: usize },
    #[error("LoS matrix entry ({i}, {j}) must be 0 or 1")]
    LosEntry { i: usize, j: usize },
    #[error("asymmetric LoS entry at ({i}, {j})")]
    AsymmetricLos { i: usize, j: usize },
    #[error("LoS matrix diagonal must be zero at node {i}")]
    LosDiagonal { i: usize },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

impl From<serde_json::Error> for LoadError {
    fn from(e: serde_json::Error) -> Self {
        LoadError::Parse(e.to_string())
    }
}

fn square_side(count: usize) -> Option<usize> {
    let side = (count as f64).sqrt().round() as usize;
    (side * side == count).then_some(side)
}

/// Splits a bare element count into a rectangular layout: the square root
/// for perfect squares, a single row otherwise. Power quantities and routing
/// depend only on the product, so the split never changes a reported value.
pub fn split_elements(count: usize) -> (usize, usize) {
    match square_side(count) {
        Some(side) => (side, side),
        None => (count, 1),
    }
}

fn convert_node(entry: &NodeEntry, errs: &mut Vec<LoadError>) -> Option<NodeSpec> {
    let kind = match entry.kind {
        KindTag::Bs => NodeKind::Bs,
        KindTag::PassiveIrs => NodeKind::PassiveIrs,
        KindTag::ActiveIrs => NodeKind::ActiveIrs,
        KindTag::User => NodeKind::User,
    };
    let array = match (entry.kind, &entry.array) {
        (KindTag::Bs, Some(ArraySection::Linear { t })) => ArrayGeometry::Linear { antennas: *t },
        (KindTag::PassiveIrs, Some(ArraySection::PassiveDims { m1, m2 })) => {
            ArrayGeometry::Rectangular {
                horizontal: *m1,
                vertical: *m2,
            }
        }
        (KindTag::PassiveIrs, Some(ArraySection::PassiveTotal { m })) => match square_side(*m) {
            Some(side) => ArrayGeometry::Rectangular {
                horizontal: side,
                vertical: side,
            },
            None => {
                errs.push(LoadError::NotASquare {
                    id: entry.id,
                    count: *m,
                });
                return None;
            }
        },
        (KindTag::ActiveIrs, Some(ArraySection::ActiveDims { n1, n2 })) => {
            ArrayGeometry::Rectangular {
                horizontal: *n1,
                vertical: *n2,
            }
        }
        (KindTag::ActiveIrs, Some(ArraySection::ActiveTotal { n })) => match square_side(*n) {
            Some(side) => ArrayGeometry::Rectangular {
                horizontal: side,
                vertical: side,
            },
            None => {
                errs.push(LoadError::NotASquare {
                    id: entry.id,
                    count: *n,
                });
                return None;
            }
        },
        (KindTag::User, None) => ArrayGeometry::Single,
        (_, None) => {
            errs.push(LoadError::MissingArray { id: entry.id });
            return None;
        }
        _ => {
            errs.push(LoadError::ArrayKindMismatch { id: entry.id });
            return None;
        }
    };
    Some(NodeSpec {
        id: entry.id,
        kind,
        position: entry.pos,
        array,
    })
}

fn convert_los(
    section: &LosSection,
    node_count: usize,
    errs: &mut Vec<LoadError>,
) -> Vec<(NodeId, NodeId)> {
    match section {
        LosSection::Pairs(pairs) => pairs.iter().map(|p| (p[0], p[1])).collect(),
        LosSection::Matrix(rows) => {
            let n = node_count;
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                errs.push(LoadError::LosMatrixShape { n });
                return Vec::new();
            }
            let mut pairs = Vec::new();
            for (i, row) in rows.iter().enumerate() {
                if row[i] != 0 {
                    errs.push(LoadError::LosDiagonal { i });
                }
                for (j, &entry) in row.iter().enumerate() {
                    if entry > 1 {
                        errs.push(LoadError::LosEntry { i, j });
                    }
                }
                for (j, &entry) in row.iter().enumerate().skip(i + 1) {
                    if entry != rows[j][i] {
                        errs.push(LoadError::AsymmetricLos { i, j });
                        continue;
                    }
                    if entry == 1 {
                        pairs.push((i, j));
                    }
                }
            }
            pairs
        }
    }
}

fn convert_rf(rf: &RfSection) -> RfConstants {
    RfConstants {
        wavelength_m: rf.lambda_m,
        element_spacing_m: rf.d_i_m.unwrap_or(rf.lambda_m / 2.0),
        reference_gain: db_to_linear(rf.beta_db),
        noise_user_w: dbm_to_watts(rf.sigma2_dbm),
        noise_amp_w: dbm_to_watts(rf.sigma_f2_dbm),
        tx_power_w: dbm_to_watts(rf.pb_dbm),
        amp_power_w: dbm_to_watts(rf.pf_dbm),
    }
}

/// Parses and fully validates a scenario file, failing on the first problem.
pub fn load_scenario(text: &str) -> Result<Scenario, LoadError> {
    let file: ScenarioFile = serde_json::from_str(text)?;
    let mut errs = Vec::new();
    let nodes: Vec<NodeSpec> = file
        .nodes
        .iter()
        .filter_map(|entry| convert_node(entry, &mut errs))
        .collect();
    let pairs = convert_los(&file.los, file.nodes.len(), &mut errs);
    if let Some(err) = errs.into_iter().next() {
        return Err(err);
    }
    Ok(Scenario::new(nodes, &pairs, convert_rf(&file.rf))?)
}

/// Runs every check and reports all diagnostics; empty means the file is
/// valid. Schema-level problems suppress the structural pass, which would
/// otherwise only echo them as missing-node noise.
pub fn validate_scenario_text(text: &str) -> Vec<String> {
    let file: ScenarioFile = match serde_json::from_str(text) {
        Ok(f) => f,
        Err(e) => return vec![LoadError::Parse(e.to_string()).to_string()],
    };
    let mut errs = Vec::new();
    let nodes: Vec<NodeSpec> = file
        .nodes
        .iter()
        .filter_map(|entry| convert_node(entry, &mut errs))
        .collect();
    let pairs = convert_los(&file.los, file.nodes.len(), &mut errs);
    let mut out: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
    if out.is_empty() {
        out.extend(
            scenario::validate(&nodes, &pairs, &convert_rf(&file.rf))
                .iter()
                .map(|e| e.to_string()),
        );
    }
    out
}

/// Rebuilds the file representation of a loaded scenario (dB/dBm at the
/// boundary, explicit array factors, LoS as sorted pairs).
pub fn scenario_to_file(scenario: &Scenario) -> ScenarioFile {
    let rf = scenario.rf();
    let nodes = scenario
        .nodes()
        .iter()
        .map(|node| {
            let array = match (node.kind, node.array) {
                (NodeKind::Bs, ArrayGeometry::Linear { antennas }) => {
                    Some(ArraySection::Linear { t: antennas })
                }
                (
                    NodeKind::PassiveIrs,
                    ArrayGeometry::Rectangular {
                        horizontal,
                        vertical,
                    },
                ) => Some(ArraySection::PassiveDims {
                    m1: horizontal,
                    m2: vertical,
                }),
                (
                    NodeKind::ActiveIrs,
                    ArrayGeometry::Rectangular {
                        horizontal,
                        vertical,
                    },
                ) => Some(ArraySection::ActiveDims {
                    n1: horizontal,
                    n2: vertical,
                }),
                _ => None,
            };
            NodeEntry {
                id: node.id,
                kind: match node.kind {
                    NodeKind::Bs => KindTag::Bs,
                    NodeKind::PassiveIrs => KindTag::PassiveIrs,
                    NodeKind::ActiveIrs => KindTag::ActiveIrs,
                    NodeKind::User => KindTag::User,
                },
                pos: node.position,
                array,
            }
        })
        .collect();
    ScenarioFile {
        rf: RfSection {
            lambda_m: rf.wavelength_m,
            d_i_m: Some(rf.element_spacing_m),
            beta_db: linear_to_db(rf.reference_gain),
            sigma2_dbm: watts_to_dbm(rf.noise_user_w),
            sigma_f2_dbm: watts_to_dbm(rf.noise_amp_w),
            pb_dbm: watts_to_dbm(rf.tx_power_w),
            pf_dbm: watts_to_dbm(rf.amp_power_w),
        },
        nodes,
        los: LosSection::Pairs(scenario.los_pairs().iter().map(|&(i, j)| [i, j]).collect()),
    }
}

/// Serializes a scenario back to JSON text.
pub fn serialize_scenario(scenario: &Scenario) -> String {
    serde_json::to_string_pretty(&scenario_to_file(scenario)).expect("schema types serialize")
}
