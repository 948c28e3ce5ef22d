//! Dispersive qubit readout and mechanical sideband asymmetry.

mod mech;
mod qubit;

pub use mech::{
    asymmetry_window, check_optomech_stability, modified_mech_susceptibility, optical_damping, output_terms,
    sideband_asymmetry, thermal_force_spectrum, total_output_spectrum, trapezoid, AsymmetryResult, OutputTerms,
};
pub use qubit::{optimal_angle, qubit_rates, QubitReadoutResult};
