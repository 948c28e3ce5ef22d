//! Frequency-domain toolkit for continuous linear quantum detectors.
//!
//! Computes susceptibilities and noise spectral densities of linear bosonic
//! detectors, audits them against the Heisenberg-type uncertainty relation and
//! the quantum-limit equalities, and applies the machinery to dispersive qubit
//! readout and to mechanical sideband-asymmetry measurements.
//!
//! Everything is evaluated pointwise on an explicit [`FrequencyGrid`]. With the
//! default `parallel` feature the per-frequency work is spread over rayon's
//! thread pool; without it the same code runs sequentially.
//!
//! Conventions: Fourier transforms use `f(ω) = ∫dt e^{iωt} f(t)`, spectra are
//! double-sided, and ħ is read from [`UnitConvention`] (default 1).

pub mod apps;
pub mod cavity;
pub mod cli;
pub mod constraints;
mod error;
pub mod grid;
pub mod netsolve;
pub mod par;
pub mod params;

pub use error::{Error, Result};
pub use grid::{make_symmetric_grid, reflect, ComplexSpectrum, FrequencyGrid};
pub use num_complex::Complex64;
pub use params::{CavityParams, CouplingSpec, CouplingVariant, MechOscillator, Occupation, UnitConvention};
