//! Closed-form susceptibilities and spectra of the detuned one-sided cavity
//! read out by homodyne detection, with `F = ħḡ(a + a†)` and
//! `Z = cosθ X_out + sinθ Y_out`. All spectra are for vacuum input.

use num_complex::Complex64;

use crate::{CavityParams, ComplexSpectrum, Error, FrequencyGrid, Result};

/// χ_ZF, χ_FF, χ_ZZ, χ_FZ on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SusceptibilitySet {
    pub chi_zf: ComplexSpectrum,
    pub chi_ff: ComplexSpectrum,
    pub chi_zz: ComplexSpectrum,
    pub chi_fz: ComplexSpectrum,
}

impl SusceptibilitySet {
    pub fn grid(&self) -> &FrequencyGrid {
        self.chi_zf.grid()
    }

    /// Checks `|χ_ZZ|, |χ_FZ| <= rel_tol·|χ_ZF|` pointwise (simultaneous measurability).
    pub fn check_measurability(&self, rel_tol: f64) -> Result<()> {
        for (i, (omega, zf)) in self.chi_zf.iter().enumerate() {
            let zz = self.chi_zz[i].norm();
            let fz = self.chi_fz[i].norm();
            let bound = rel_tol * zf.norm();
            if zz > bound || fz > bound {
                return Err(Error::InvalidDetector { omega, chi_zz: zz, chi_fz: fz });
            }
        }
        Ok(())
    }
}

/// Spectra S_ZZ, S_ZF, S_FF; symmetrized or not as flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectraSet {
    pub s_zz: ComplexSpectrum,
    pub s_zf: ComplexSpectrum,
    pub s_ff: ComplexSpectrum,
    pub symmetrized: bool,
}

impl SpectraSet {
    pub fn grid(&self) -> &FrequencyGrid {
        self.s_zz.grid()
    }

    /// Symmetrized auto-spectra must be real and non-negative.
    pub fn check_symmetrized_invariants(&self, imag_tol: f64) -> Result<()> {
        if !self.symmetrized {
            return Ok(());
        }
        for (name, s) in [("S_ZZ", &self.s_zz), ("S_FF", &self.s_ff)] {
            for (omega, v) in s.iter() {
                if v.im.abs() > imag_tol || v.re < -imag_tol {
                    return Err(Error::InvalidArgument(format!(
                        "symmetrized {name} not real non-negative at omega = {omega}: {v}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Spectra of the normalized output `z = Z/χ_ZF`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedSpectra {
    pub s_zz: ComplexSpectrum,
    pub s_zf: ComplexSpectrum,
    pub s_ff: ComplexSpectrum,
}

/// Closed-form values at a single frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityPoint {
    pub chi_zf: Complex64,
    pub chi_ff: Complex64,
    pub s_zz: f64,
    pub s_zf: Complex64,
    pub s_ff: f64,
}

impl CavityPoint {
    pub fn at(params: &CavityParams, omega: f64) -> Self {
        let (g, d, gb, hbar) = (params.gamma(), params.delta(), params.gbar(), params.hbar());
        let (sin, cos) = params.theta().sin_cos();
        let den = response_denominator(params, Complex64::new(omega, 0.0));
        let iw_minus_g = Complex64::new(-g, omega);
        let sqrt_g = g.sqrt();

        let chi_zf = -2.0 * gb * sqrt_g * (d * cos + iw_minus_g * sin) / den;
        let chi_ff = Complex64::new(2.0 * hbar * gb * gb * d, 0.0) / den;
        let s_zf = hbar * gb * sqrt_g * (d * sin - iw_minus_g * cos) / den;
        let lorentz = ((omega - d).powi(2) + g * g) * ((omega + d).powi(2) + g * g);
        let s_ff = 2.0 * hbar * hbar * gb * gb * g * (g * g + d * d + omega * omega) / lorentz;

        Self { chi_zf, chi_ff, s_zz: 0.5, s_zf, s_ff }
    }

    /// `s_zz = S̄_ZZ/|χ_ZF|²`.
    pub fn norm_s_zz(&self) -> f64 {
        self.s_zz / self.chi_zf.norm_sqr()
    }

    /// `s_zF = S̄_ZF/χ_ZF`.
    pub fn norm_s_zf(&self) -> Complex64 {
        self.s_zf / self.chi_zf
    }
}

/// `(ω − Δ + iγ)(ω + Δ + iγ)` evaluated at complex `omega`.
pub fn response_denominator(params: &CavityParams, omega: Complex64) -> Complex64 {
    let ig = Complex64::new(0.0, params.gamma());
    (omega - params.delta() + ig) * (omega + params.delta() + ig)
}

/// Poles of the cavity response, `±Δ − iγ`.
pub fn pole_locations(params: &CavityParams) -> [Complex64; 2] {
    [Complex64::new(params.delta(), -params.gamma()), Complex64::new(-params.delta(), -params.gamma())]
}

pub fn cavity_susceptibilities(params: &CavityParams, grid: &FrequencyGrid) -> SusceptibilitySet {
    let points = crate::par::map_indexed(grid.len(), Default::default(), |i| CavityPoint::at(params, grid[i]));
    let chi_zf = ComplexSpectrum::new(grid.clone(), points.iter().map(|p| p.chi_zf).collect()).expect("grid length");
    let chi_ff = ComplexSpectrum::new(grid.clone(), points.iter().map(|p| p.chi_ff).collect()).expect("grid length");
    SusceptibilitySet { chi_zf, chi_ff, chi_zz: ComplexSpectrum::zeros(grid), chi_fz: ComplexSpectrum::zeros(grid) }
}

/// Symmetrized double-sided spectra for vacuum input.
pub fn cavity_spectra(params: &CavityParams, grid: &FrequencyGrid) -> SpectraSet {
    let points = crate::par::map_indexed(grid.len(), Default::default(), |i| CavityPoint::at(params, grid[i]));
    let s_zf = ComplexSpectrum::new(grid.clone(), points.iter().map(|p| p.s_zf).collect()).expect("grid length");
    let s_ff = ComplexSpectrum::new(grid.clone(), points.iter().map(|p| Complex64::new(p.s_ff, 0.0)).collect())
        .expect("grid length");
    SpectraSet { s_zz: ComplexSpectrum::constant(grid, Complex64::new(0.5, 0.0)), s_zf, s_ff, symmetrized: true }
}

/// Below this |χ_ZF| the normalization `Z/χ_ZF` is rejected.
pub const SINGULAR_CHI_ZF: f64 = 1e-300;

pub fn normalize(spectra: &SpectraSet, susc: &SusceptibilitySet) -> Result<NormalizedSpectra> {
    let chi = &susc.chi_zf;
    spectra.grid().require_same(chi.grid())?;
    if let Some((omega, _)) = chi.iter().find(|(_, c)| c.norm() < SINGULAR_CHI_ZF) {
        return Err(Error::SingularNormalization { omega });
    }
    Ok(NormalizedSpectra {
        s_zz: spectra.s_zz.zip_with(chi, |s, c| s / c.norm_sqr())?,
        s_zf: spectra.s_zf.zip_with(chi, |s, c| s / c)?,
        s_ff: spectra.s_ff.clone(),
    })
}
