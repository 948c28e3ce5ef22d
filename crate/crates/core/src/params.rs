//! Physical parameters: units, cavity detector, coupling, mechanical oscillator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Values of ħ and k_B. Every ħ in the crate is read from here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitConvention {
    hbar: f64,
    k_b: f64,
}

impl UnitConvention {
    pub fn new(hbar: f64, k_b: f64) -> Result<Self> {
        positive("hbar", hbar)?;
        positive("k_b", k_b)?;
        Ok(Self { hbar, k_b })
    }

    /// SI values of ħ and k_B.
    pub fn si() -> Self {
        Self { hbar: 1.054_571_817e-34, k_b: 1.380_649e-23 }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn k_b(&self) -> f64 {
        self.k_b
    }
}

impl Default for UnitConvention {
    fn default() -> Self {
        Self { hbar: 1.0, k_b: 1.0 }
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidArgument(format!("{name} must be finite, got {v}")))
    }
}

/// How the system couples to the cavity photon number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CouplingVariant {
    /// Dispersive qubit: `g = g0² / (ωl − ω01)`.
    Qubit { g0: f64, omega_01: f64, omega_l: f64 },
    /// Optomechanical: `g = ωr / L` per unit displacement.
    Mechanical { omega_r: f64, length: f64 },
    Direct { g: f64 },
}

/// Bare coupling plus the mean intracavity photon number used to linearize it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingSpec {
    variant: CouplingVariant,
    n_cav_mean: f64,
}

impl CouplingSpec {
    pub fn new(variant: CouplingVariant, n_cav_mean: f64) -> Result<Self> {
        positive("n_cav_mean", n_cav_mean)?;
        match variant {
            CouplingVariant::Qubit { g0, omega_01, omega_l } => {
                finite("g0", g0)?;
                finite("omega_01", omega_01)?;
                finite("omega_l", omega_l)?;
                if omega_l == omega_01 {
                    return Err(Error::InvalidArgument(
                        "dispersive coupling needs omega_l != omega_01".into(),
                    ));
                }
            }
            CouplingVariant::Mechanical { omega_r, length } => {
                finite("omega_r", omega_r)?;
                positive("length", length)?;
            }
            CouplingVariant::Direct { g } => {
                finite("g", g)?;
            }
        }
        Ok(Self { variant, n_cav_mean })
    }

    pub fn variant(&self) -> CouplingVariant {
        self.variant
    }

    pub fn n_cav_mean(&self) -> f64 {
        self.n_cav_mean
    }

    /// Bare rate `g` multiplying the photon number in `F = ħ g n_cav`.
    pub fn bare_rate(&self) -> f64 {
        match self.variant {
            CouplingVariant::Qubit { g0, omega_01, omega_l } => g0 * g0 / (omega_l - omega_01),
            CouplingVariant::Mechanical { omega_r, length } => omega_r / length,
            CouplingVariant::Direct { g } => g,
        }
    }

    /// Linearized rate `ḡ = g·sqrt(2 n_cav)`.
    pub fn gbar(&self) -> f64 {
        self.bare_rate() * (2.0 * self.n_cav_mean).sqrt()
    }
}

/// One-sided cavity with homodyne readout.
///
/// `theta` is kept as given; every formula is periodic in it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    gamma: f64,
    delta: f64,
    gbar: f64,
    theta: f64,
    units: UnitConvention,
}

impl CavityParams {
    pub fn new(gamma: f64, delta: f64, gbar: f64, theta: f64) -> Result<Self> {
        Ok(Self {
            gamma: positive("gamma", gamma)?,
            delta: finite("delta", delta)?,
            gbar: positive("gbar", gbar)?,
            theta: finite("theta", theta)?,
            units: UnitConvention::default(),
        })
    }

    /// Takes `ḡ` from a [`CouplingSpec`]; a negative bare rate flips the sign of
    /// F, which is absorbed into the homodyne angle.
    pub fn from_coupling(gamma: f64, delta: f64, coupling: &CouplingSpec, theta: f64) -> Result<Self> {
        let gbar = coupling.gbar();
        if gbar < 0.0 {
            Self::new(gamma, delta, -gbar, theta + std::f64::consts::PI)
        } else {
            Self::new(gamma, delta, gbar, theta)
        }
    }

    pub fn with_units(mut self, units: UnitConvention) -> Self {
        self.units = units;
        self
    }

    pub fn with_delta(self, delta: f64) -> Result<Self> {
        Ok(Self { delta: finite("delta", delta)?, ..self })
    }

    pub fn with_theta(self, theta: f64) -> Result<Self> {
        Ok(Self { theta: finite("theta", theta)?, ..self })
    }

    pub fn with_gbar(self, gbar: f64) -> Result<Self> {
        Ok(Self { gbar: positive("gbar", gbar)?, ..self })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gbar(&self) -> f64 {
        self.gbar
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn units(&self) -> UnitConvention {
        self.units
    }

    pub fn hbar(&self) -> f64 {
        self.units.hbar
    }
}

/// Thermal state of the oscillator, given either directly or via temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Occupation {
    Mean(f64),
    Temperature(f64),
}

/// Viscously damped mechanical oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechOscillator {
    omega_m: f64,
    gamma_m: f64,
    mass: f64,
    occupation: Occupation,
    n_mean: f64,
}

impl MechOscillator {
    pub fn new(omega_m: f64, gamma_m: f64, mass: f64, occupation: Occupation, units: UnitConvention) -> Result<Self> {
        positive("omega_m", omega_m)?;
        positive("gamma_m", gamma_m)?;
        positive("mass", mass)?;
        let n_mean = match occupation {
            Occupation::Mean(n) => {
                if !(n >= 0.0 && n.is_finite()) {
                    return Err(Error::InvalidArgument(format!("occupation must be >= 0, got {n}")));
                }
                n
            }
            Occupation::Temperature(t) => {
                positive("temperature", t)?;
                1.0 / (units.hbar * omega_m / (units.k_b * t)).exp_m1()
            }
        };
        Ok(Self { omega_m, gamma_m, mass, occupation, n_mean })
    }

    /// Shorthand for `ħ = k_B = 1` and a given mean occupation.
    pub fn with_occupation(omega_m: f64, gamma_m: f64, mass: f64, n_mean: f64) -> Result<Self> {
        Self::new(omega_m, gamma_m, mass, Occupation::Mean(n_mean), UnitConvention::default())
    }

    pub fn omega_m(&self) -> f64 {
        self.omega_m
    }

    pub fn gamma_m(&self) -> f64 {
        self.gamma_m
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn occupation(&self) -> Occupation {
        self.occupation
    }

    /// Mean phonon number ⟨n⟩ (computed once from the temperature if needed).
    pub fn n_mean(&self) -> f64 {
        self.n_mean
    }

    /// Bare susceptibility `1 / [m(ω_m² − ω² − iγ_m ω)]`.
    pub fn bare_susceptibility(&self, omega: f64) -> Complex64 {
        Complex64::new(self.mass * (self.omega_m * self.omega_m - omega * omega), -self.mass * self.gamma_m * omega).inv()
    }
}
