//! File formats, the persistent trace cache, the acceptance suite and the
//! command-line front end for `flowpoly-core`.

pub mod cache;
pub mod cli;
pub mod formats;
pub mod suite;
pub mod svg;
