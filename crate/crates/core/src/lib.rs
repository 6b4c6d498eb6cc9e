//! Simulator for the resonance fluorescence of a laser-driven
//! J=1/2 to J'=1/2 atom in a magnetic field: reduced Bloch dynamics of the
//! two pi transitions, steady states, two-time correlations by the quantum
//! regression formula, power and quadrature spectra, quantum-beat and
//! interference analytics, and squeezing measures. All rates and frequencies
//! are in units of the total decay rate gamma.

pub mod analytics;
pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod numerics;
pub mod spectra;

pub use error::{Error, Result};
pub use model::PhysParams;
