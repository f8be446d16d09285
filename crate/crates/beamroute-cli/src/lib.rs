//! File formats, CSV rendering, and sweep evaluation for the `beamroute`
//! command-line tool. Everything here is IO and presentation; the models and
//! routing live in `beamroute-core`.

pub mod format;
pub mod report;
pub mod schema;
pub mod sweep;
