//! Continuous-time quantum walks on circulants, paths, hypercubes and
//! bunkbed graphs: spectra, instantaneous and limiting average
//! distributions, and mixing checks.
//!
//! The Hamiltonian is the raw adjacency matrix with `hbar = 1`.

pub mod cli;
pub mod ensembles;
pub mod error;
pub mod graphs;
pub mod mixing;
pub mod spectra;
pub mod walk;

pub use error::{Error, Result};
pub use graphs::{Graph, Symbol};
pub use spectra::{spectrum_for, Spectrum};
pub use walk::Distribution;
