//! LoS channel synthesis: steering vectors, complex link gains, and the
//! rank-1 channel matrices between scenario nodes.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float; // float math via libm when built without `std`

use crate::scenario::{NodeId, NodeKind, Scenario, ScenarioError};

/// Dense row-major complex matrix. Dimensions here are tiny (a few thousand
/// entries at most), so all products are naive and allocation-per-op.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Column vector (n x 1) from entries.
    pub fn column(entries: Vec<Complex64>) -> Self {
        ComplexMatrix {
            rows: entries.len(),
            cols: 1,
            data: entries,
        }
    }

    /// Diagonal matrix diag(e^{j phi_1}, ..., e^{j phi_n}).
    pub fn diagonal_phases(phases: &[f64]) -> Self {
        let n = phases.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (k, &phi) in phases.iter().enumerate() {
            m.data[k * n + k] = Complex64::from_polar(1.0, phi);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c).conj();
            }
        }
        out
    }

    /// Matrix product; panics on a dimension mismatch (callers validate
    /// shapes at the operation boundary).
    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.get(k, c);
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e * factor).collect(),
        }
    }

    /// Squared Frobenius norm (for vectors: the squared Euclidean norm).
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|e| e.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelError {
    /// Steering vector or channel requested with a zero-element array.
    ZeroElements,
    /// Link gain requested for a non-positive distance.
    NonPositiveDistance,
    /// No LoS link between the two nodes.
    NotLos(NodeId, NodeId),
    /// The pair cannot form a transmit->receive link (e.g. user as
    /// transmitter or base station as receiver).
    UnsupportedDirection(NodeId, NodeId),
    Scenario(ScenarioError),
}

impl fmt::Display for ChannelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelError::ZeroElements => write!(f, "array must have at least one element"),
            ChannelError::NonPositiveDistance => {
                write!(f, "link distance must be strictly positive")
            }
            ChannelError::NotLos(i, j) => write!(f, "no LoS link between nodes {i} and {j}"),
            ChannelError::UnsupportedDirection(i, j) => {
                write!(f, "nodes {i} -> {j} cannot form a directed link")
            }
            ChannelError::Scenario(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ChannelError {}

impl From<ScenarioError> for ChannelError {
    fn from(e: ScenarioError) -> Self {
        ChannelError::Scenario(e)
    }
}

/// Base steering vector u(zeta, U) = [1, e^{-j pi zeta}, ..., e^{-j (U-1) pi zeta}].
pub fn steering_u(zeta: f64, elements: usize) -> Result<ComplexMatrix, ChannelError> {
    if elements == 0 {
        return Err(ChannelError::ZeroElements);
    }
    let entries = (0..elements)
        .map(|k| Complex64::from_polar(1.0, -(k as f64) * PI * zeta))
        .collect();
    Ok(ComplexMatrix::column(entries))
}

/// Rectangular-array steering vector: the tensor product of a horizontal
/// factor with phase slope (2 d_I / lambda) sin(elevation) cos(azimuth) and a
/// vertical factor with slope (2 d_I / lambda) cos(elevation). The horizontal
/// factor varies slowest in the flattened vector.
pub fn ura_steering(
    azimuth: f64,
    elevation: f64,
    dims: (usize, usize),
    element_spacing: f64,
    wavelength: f64,
) -> Result<ComplexMatrix, ChannelError> {
    let (horizontal, vertical) = dims;
    let scale = 2.0 * element_spacing / wavelength;
    let u1 = steering_u(scale * elevation.sin() * azimuth.cos(), horizontal)?;
    let u2 = steering_u(scale * elevation.cos(), vertical)?;
    let mut entries = Vec::with_capacity(horizontal * vertical);
    for a in 0..horizontal {
        for b in 0..vertical {
            entries.push(u1.get(a, 0) * u2.get(b, 0));
        }
    }
    Ok(ComplexMatrix::column(entries))
}

/// Linear-array steering vector for the angle between the array axis and the
/// propagation direction: u((2 d_I / lambda) cos(axis_angle), T).
pub fn ula_steering(
    axis_angle: f64,
    antennas: usize,
    element_spacing: f64,
    wavelength: f64,
) -> Result<ComplexMatrix, ChannelError> {
    steering_u(
        2.0 * element_spacing / wavelength * axis_angle.cos(),
        antennas,
    )
}

/// Complex link gain h = (sqrt(beta) / d) e^{-j 2 pi d / lambda}.
pub fn link_gain(
    distance: f64,
    reference_gain: f64,
    wavelength: f64,
) -> Result<Complex64, ChannelError> {
    if distance <= 0.0 || !distance.is_finite() {
        return Err(ChannelError::NonPositiveDistance);
    }
    Ok(Complex64::from_polar(
        reference_gain.sqrt() / distance,
        -2.0 * PI * distance / wavelength,
    ))
}

/// Transmit steering vector of node `i` towards node `j` (column, U_i x 1).
/// The base station is a linear array along +x, so it responds to the
/// direction cosine along that axis; surfaces use the rectangular model.
pub(crate) fn transmit_steering(
    scenario: &Scenario,
    i: NodeId,
    j: NodeId,
) -> Result<ComplexMatrix, ChannelError> {
    let rf = scenario.rf();
    let node = scenario.node(i)?;
    match node.kind {
        NodeKind::Bs => {
            let u = scenario.unit_direction(i, j)?;
            let axis_angle = u[0].clamp(-1.0, 1.0).acos();
            ula_steering(
                axis_angle,
                node.array.element_count(),
                rf.element_spacing_m,
                rf.wavelength_m,
            )
        }
        NodeKind::PassiveIrs | NodeKind::ActiveIrs => {
            let angles = scenario.link_angles(i, j)?;
            ura_steering(
                angles.azimuth,
                angles.elevation,
                rect_dims(scenario, i)?,
                rf.element_spacing_m,
                rf.wavelength_m,
            )
        }
        NodeKind::User => Err(ChannelError::UnsupportedDirection(i, j)),
    }
}

/// Receive steering vector at node `j` for a signal arriving from node `i`
/// (column, U_j x 1). The single-antenna user collapses to the scalar 1.
pub(crate) fn receive_steering(
    scenario: &Scenario,
    j: NodeId,
    i: NodeId,
) -> Result<ComplexMatrix, ChannelError> {
    let rf = scenario.rf();
    match scenario.node(j)?.kind {
        NodeKind::PassiveIrs | NodeKind::ActiveIrs => {
            // arrival direction at j is the direction from j back to i
            let angles = scenario.link_angles(j, i)?;
            ura_steering(
                angles.azimuth,
                angles.elevation,
                rect_dims(scenario, j)?,
                rf.element_spacing_m,
                rf.wavelength_m,
            )
        }
        NodeKind::User => Ok(ComplexMatrix::column(vec![Complex64::new(1.0, 0.0)])),
        NodeKind::Bs => Err(ChannelError::UnsupportedDirection(i, j)),
    }
}

fn rect_dims(scenario: &Scenario, id: NodeId) -> Result<(usize, usize), ChannelError> {
    match scenario.node(id)?.array {
        crate::scenario::ArrayGeometry::Rectangular {
            horizontal,
            vertical,
        } => Ok((horizontal, vertical)),
        _ => Err(ChannelError::UnsupportedDirection(id, id)),
    }
}

/// Full channel matrix H_{i,j} = h_{i,j} a_r a_t^H of a LoS link (U_j x U_i).
/// Rank one by construction; the user side collapses the receive factor to
/// the scalar 1 so BS/surface -> user channels come out as 1 x U_i rows.
pub fn channel_matrix(
    scenario: &Scenario,
    i: NodeId,
    j: NodeId,
) -> Result<ComplexMatrix, ChannelError> {
    scenario.node(i)?;
    scenario.node(j)?;
    if i == j {
        return Err(ChannelError::UnsupportedDirection(i, j));
    }
    if !scenario.is_los(i, j) {
        return Err(ChannelError::NotLos(i, j));
    }
    let rf = scenario.rf();
    let h = link_gain(scenario.distance(i, j)?, rf.reference_gain, rf.wavelength_m)?;
    let a_t = transmit_steering(scenario, i, j)?;
    let a_r = receive_steering(scenario, j, i)?;
    Ok(a_r.mul(&a_t.hermitian()).scale(h))
}
