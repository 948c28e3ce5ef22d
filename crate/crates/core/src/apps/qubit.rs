use serde::Serialize;

use crate::cavity::CavityPoint;
use crate::{CavityParams, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitReadoutResult {
    /// `1 / [2 s_zz(0)]`
    pub gamma_meas: f64,
    /// `(2/ħ²) S̄_FF(0)`
    pub gamma_phi: f64,
    /// `Γ_φ / Γ_meas`, at least 1.
    pub ratio: f64,
    pub theta_opt: f64,
}

/// Measurement and dephasing rates from the zero-frequency cavity spectra.
pub fn qubit_rates(params: &CavityParams) -> Result<QubitReadoutResult> {
    let (sin, cos) = params.theta().sin_cos();
    let overlap = params.delta() * cos - params.gamma() * sin;
    if overlap.abs() <= 1e-12 * params.gamma().hypot(params.delta()) {
        return Err(Error::DegenerateReadout);
    }
    let p = CavityPoint::at(params, 0.0);
    let gamma_meas = 0.5 / p.norm_s_zz();
    let gamma_phi = 2.0 * p.s_ff / (params.hbar() * params.hbar());
    Ok(QubitReadoutResult {
        gamma_meas,
        gamma_phi,
        ratio: gamma_phi / gamma_meas,
        theta_opt: optimal_angle(params.gamma(), params.delta())?,
    })
}

/// Homodyne angle minimizing `Γ_φ/Γ_meas`: `−arctan(γ/Δ)`, or `π/2` on resonance.
/// The ratio is π-periodic in θ, so `θ_opt + π` is equally optimal.
pub fn optimal_angle(gamma: f64, delta: f64) -> Result<f64> {
    if !gamma.is_finite() || !delta.is_finite() {
        return Err(Error::InvalidArgument("gamma and delta must be finite".into()));
    }
    if gamma == 0.0 && delta == 0.0 {
        return Err(Error::InvalidArgument("optimal angle undefined for gamma = delta = 0".into()));
    }
    if delta == 0.0 {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    Ok(-(gamma / delta).atan())
}
