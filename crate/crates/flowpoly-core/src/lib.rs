//! Flow polynomials of generalised Petersen graphs G(nk,k).
//!
//! The polynomials are built from the transfer matrix of the Potts model at
//! v = −Q, decomposed into blocks labelled by the number of links ℓ and an
//! irreducible representation λ of S_ℓ acting on the link labels. Each block
//! trace is reconstructed exactly by modular evaluation and interpolation.
//! The crate also carries the numerical side: certified roots, dominant
//! eigenvalues and the Beraha–Kahane–Weiss limiting sets.

pub mod appendix;
pub mod assemble;
pub mod combinatorics;
pub mod error;
pub mod field;
pub mod graph;
pub mod irrep;
pub mod partition;
pub mod perm;
pub mod poly;
pub mod roots;
pub mod spectra;
pub mod structure;
pub mod trace;
pub mod transfer;

pub use error::{Error, Result};
pub use poly::{IntPoly, RatPoly};
