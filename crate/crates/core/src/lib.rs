//! Exact localization computations for Hamiltonian actions of rank-one groups:
//! the invariant Riemann-Roch number from fixed-point data, the Riemann-Roch
//! number of the reduced space from residues, and a brute-force oracle.

pub mod cli;
pub mod cohomology;
pub mod error;
pub mod exactnum;
pub mod fixedpoint;
pub mod laurent;
pub mod lefschetz;
pub mod oracle;
pub mod reduction;
pub mod report;

pub use error::{Error, Result};
