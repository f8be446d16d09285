//! Deterministic link-level model and routing engine for multi-hop beam
//! reflection across a field of reflecting surfaces, one of which can amplify.
//!
//! The crate synthesizes line-of-sight channels from node geometry, computes
//! the optimal reflect-beamforming (phase alignment, MRT precoding, and the
//! amplification factor) in closed form, and selects optimal multi-reflection
//! routes by shortest-path search on a weighted acyclic graph. Everything is
//! pure computation over an immutable [`scenario::Scenario`]; file formats and
//! the command-line front end live in the companion `beamroute-cli` crate.
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature for embedded or sandboxed targets.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analysis;
pub mod beamforming;
pub mod channel;
pub mod routing;
pub mod scenario;

pub use analysis::RateReport;
pub use beamforming::{BeamformingSolution, RoutePath};
pub use channel::ComplexMatrix;
pub use routing::{HybridRoute, PassiveRoute, RoutingGraph};
pub use scenario::{NodeId, NodeKind, NodeSpec, RfConstants, Scenario};
