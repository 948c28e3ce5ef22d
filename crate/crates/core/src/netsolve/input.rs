//! Stationary Gaussian states of the incoming field, stored as second moments.
//!
//! For one input port the sideband vector `e(ω) = [c(ω), c†(−ω)]` has
//! `⟨e(ω) e†(ω')⟩ = 2π δ(ω−ω') P(ω)`. Quadratures `x = (c + c†)/√2`,
//! `y = (c − c†)/(√2 i)` then have spectral matrix `Q = U P U†`.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A real function of |ω|: constant, or linearly interpolated from a table
/// (clamped outside it). Even in ω by construction, which is what pairs the
/// ±ω sidebands of a two-mode squeezed state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    Constant(f64),
    Table { abs_omega: Vec<f64>, values: Vec<f64> },
}

impl Profile {
    pub fn table(abs_omega: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if abs_omega.is_empty() || abs_omega.len() != values.len() {
            return Err(Error::InvalidArgument("profile table needs matching, non-empty columns".into()));
        }
        if abs_omega[0] < 0.0 || abs_omega.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("profile frequencies must be >= 0 and increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("profile values must be finite".into()));
        }
        Ok(Profile::Table { abs_omega, values })
    }

    pub fn at(&self, omega: f64) -> f64 {
        match self {
            Profile::Constant(v) => *v,
            Profile::Table { abs_omega, values } => {
                let w = omega.abs();
                let k = abs_omega.partition_point(|&p| p <= w);
                if k == 0 {
                    values[0]
                } else if k == abs_omega.len() {
                    values[k - 1]
                } else {
                    let t = (w - abs_omega[k - 1]) / (abs_omega[k] - abs_omega[k - 1]);
                    values[k - 1] + t * (values[k] - values[k - 1])
                }
            }
        }
    }

    fn min_value(&self) -> f64 {
        match self {
            Profile::Constant(v) => *v,
            Profile::Table { values, .. } => values.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    fn all_finite(&self) -> bool {
        match self {
            Profile::Constant(v) => v.is_finite(),
            Profile::Table { values, .. } => values.iter().all(|v| v.is_finite()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InputState {
    Vacuum,
    Thermal { n_th: Profile },
    /// Pure two-mode squeezed vacuum with squeeze factor `r` and phase `phi`.
    Squeezed { r: Profile, phi: Profile },
}

impl InputState {
    pub fn thermal(n_th: f64) -> Result<Self> {
        let s = InputState::Thermal { n_th: Profile::Constant(n_th) };
        s.validate()?;
        Ok(s)
    }

    pub fn squeezed(r: f64, phi: f64) -> Result<Self> {
        let s = InputState::Squeezed { r: Profile::Constant(r), phi: Profile::Constant(phi) };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            InputState::Vacuum => Ok(()),
            InputState::Thermal { n_th } => {
                if n_th.all_finite() && n_th.min_value() >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument("thermal occupation must be finite and >= 0".into()))
                }
            }
            InputState::Squeezed { r, phi } => {
                if r.all_finite() && phi.all_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument("squeeze parameters must be finite".into()))
                }
            }
        }
    }

    /// True for states with a rank-one sideband matrix.
    pub fn is_pure(&self) -> bool {
        !matches!(self, InputState::Thermal { .. })
    }

    /// `P(ω)` in the `[c(ω), c†(−ω)]` basis.
    pub fn sideband_matrix(&self, omega: f64) -> Matrix2<Complex64> {
        let re = |v: f64| Complex64::new(v, 0.0);
        match self {
            InputState::Vacuum => Matrix2::new(re(1.0), re(0.0), re(0.0), re(0.0)),
            InputState::Thermal { n_th } => {
                let n = n_th.at(omega);
                Matrix2::new(re(n + 1.0), re(0.0), re(0.0), re(n))
            }
            InputState::Squeezed { r, phi } => {
                // c(ω) = cosh r·v(ω) − e^{iφ} sinh r·v†(−ω), r and φ even in ω
                let (r, phi) = (r.at(omega), phi.at(omega));
                let w0 = re(r.cosh());
                let w1 = -Complex64::from_polar(r.sinh(), -phi);
                Matrix2::new(w0 * w0.conj(), w0 * w1.conj(), w1 * w0.conj(), w1 * w1.conj())
            }
        }
    }

    /// Quadrature spectral matrix `Q(ω)` for `(x, y)` of one port.
    pub fn quadrature_matrix(&self, omega: f64) -> Matrix2<Complex64> {
        let u = sideband_to_quadrature();
        u * self.sideband_matrix(omega) * u.adjoint()
    }
}

fn sideband_to_quadrature() -> Matrix2<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix2::new(
        Complex64::new(s, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(0.0, -s),
        Complex64::new(0.0, s),
    )
}
