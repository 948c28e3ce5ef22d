use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cavity::{cavity_spectra, cavity_susceptibilities, normalize, CavityPoint};
use crate::{par, CavityParams, ComplexSpectrum, Error, FrequencyGrid, MechOscillator, Result};

/// `χ_qq = χ⁰/(1 − χ⁰ χ_FF)`.
pub fn modified_mech_susceptibility(osc: &MechOscillator, chi_ff: &ComplexSpectrum) -> Result<ComplexSpectrum> {
    let mut values = Vec::with_capacity(chi_ff.len());
    for (omega, cff) in chi_ff.iter() {
        let bare = osc.bare_susceptibility(omega);
        let loop_gain = bare * cff;
        let den = Complex64::new(1.0, 0.0) - loop_gain;
        if den.norm() < 1e-12 * loop_gain.norm() {
            return Err(Error::Instability(format!("optical spring cancels the restoring force at omega = {omega}")));
        }
        values.push(bare / den);
    }
    ComplexSpectrum::new(chi_ff.grid().clone(), values)
}

/// Viscous-damping Langevin force `ħ(2⟨n⟩+1) m γ_m |ω|`, whose bare response
/// gives `S̄_qq(ω_m) = ħ(2⟨n⟩+1) Im χ⁰(ω_m)`.
pub fn thermal_force_spectrum(osc: &MechOscillator, hbar: f64, omega: f64) -> f64 {
    hbar * (2.0 * osc.n_mean() + 1.0) * osc.mass() * osc.gamma_m() * omega.abs()
}

/// Extra mechanical damping `Im χ_FF(ω_m)/(m ω_m)`; negative means anti-damping.
pub fn optical_damping(params: &CavityParams, osc: &MechOscillator) -> f64 {
    CavityPoint::at(params, osc.omega_m()).chi_ff.im / (osc.mass() * osc.omega_m())
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Rejects parameters for which the coupled oscillator-cavity system has a
/// pole on or above the real axis.
pub fn check_optomech_stability(params: &CavityParams, osc: &MechOscillator) -> Result<()> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let (m, wm, gm) = (osc.mass(), osc.omega_m(), osc.gamma_m());
    let (g, d) = (params.gamma(), params.delta());
    // ascending powers of ω
    let mech = [c(m * wm * wm, 0.0), c(0.0, -m * gm), c(-m, 0.0)];
    let cavity = [c(-g * g - d * d, 0.0), c(0.0, 2.0 * g), c(1.0, 0.0)];
    let mut p = poly_mul(&mech, &cavity);
    p[0] -= 2.0 * params.hbar() * params.gbar() * params.gbar() * d;
    let lead = p[4];
    let companion = DMatrix::from_fn(4, 4, |i, j| {
        if j == 3 {
            -p[i] / lead
        } else if i == j + 1 {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    let roots = companion
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Instability("pole search did not converge".into()))?;
    match roots.iter().find(|r| r.im >= 0.0 || !r.im.is_finite()) {
        Some(r) => Err(Error::Instability(format!("mechanical pole at omega = {} {:+}i is not damped", r.re, r.im))),
        None => Ok(()),
    }
}

/// The three contributions to the total normalized output spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputTerms {
    pub chi_qq: ComplexSpectrum,
    /// `s_zz`
    pub imprecision: ComplexSpectrum,
    /// `2 Re[χ_qq* s_zF]`
    pub correlation: ComplexSpectrum,
    /// `|χ_qq|² (S̄_FF + S̄_FthFth)`
    pub position: ComplexSpectrum,
}

impl OutputTerms {
    pub fn total(&self) -> ComplexSpectrum {
        self.imprecision
            .add(&self.correlation)
            .and_then(|s| s.add(&self.position))
            .expect("terms share a grid")
    }
}

pub fn output_terms(params: &CavityParams, osc: &MechOscillator, grid: &FrequencyGrid) -> Result<OutputTerms> {
    check_optomech_stability(params, osc)?;
    let susc = cavity_susceptibilities(params, grid);
    let spectra = cavity_spectra(params, grid);
    let norm = normalize(&spectra, &susc)?;
    let chi_qq = modified_mech_susceptibility(osc, &susc.chi_ff)?;
    let hbar = params.hbar();
    let correlation = chi_qq.zip_with(&norm.s_zf, |x, s| Complex64::new(2.0 * (x.conj() * s).re, 0.0))?;
    let mut position = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let force = spectra.s_ff[i].re + thermal_force_spectrum(osc, hbar, grid[i]);
        position.push(Complex64::new(chi_qq[i].norm_sqr() * force, 0.0));
    }
    Ok(OutputTerms {
        position: ComplexSpectrum::new(grid.clone(), position)?,
        chi_qq,
        imprecision: norm.s_zz,
        correlation,
    })
}

/// `S̄_zz^tot = s_zz + 2 Re[χ_qq* s_zF] + S̄_qq`, real-valued.
pub fn total_output_spectrum(params: &CavityParams, osc: &MechOscillator, grid: &FrequencyGrid) -> Result<ComplexSpectrum> {
    Ok(output_terms(params, osc, grid)?.total())
}

pub fn trapezoid(grid: &FrequencyGrid, values: &[f64]) -> f64 {
    grid.points().windows(2).zip(values.windows(2)).map(|(w, v)| 0.5 * (w[1] - w[0]) * (v[0] + v[1])).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetryResult {
    /// Total output at Δ = −ω_m.
    pub spectrum_red: ComplexSpectrum,
    /// Total output at Δ = +ω_m.
    pub spectrum_blue: ComplexSpectrum,
    pub area_red: f64,
    pub area_blue: f64,
    /// `area_blue / area_red`, approaching `(⟨n⟩+1)/⟨n⟩`; infinite for `⟨n⟩ = 0`.
    pub ratio: f64,
    pub warnings: Vec<String>,
}

/// Grid covering `ω_m ± 10 γ_eff`, with `γ_eff` the wider of the two
/// detuned linewidths.
pub fn asymmetry_window(template: &CavityParams, osc: &MechOscillator, n_points: usize) -> Result<FrequencyGrid> {
    let red = template.with_delta(-osc.omega_m())?;
    let gamma_eff = osc.gamma_m() + optical_damping(&red, osc).abs();
    FrequencyGrid::linspace(osc.omega_m() - 10.0 * gamma_eff, osc.omega_m() + 10.0 * gamma_eff, n_points)
}

/// Runs the total output spectrum at `Δ = ∓ω_m` and compares the sideband
/// areas above the imprecision background.
pub fn sideband_asymmetry(template: &CavityParams, osc: &MechOscillator, grid: &FrequencyGrid) -> Result<AsymmetryResult> {
    let red = template.with_delta(-osc.omega_m())?;
    let blue = template.with_delta(osc.omega_m())?;
    let mut warnings = Vec::new();
    if template.gamma() >= 0.1 * osc.omega_m() {
        warnings.push(format!(
            "gamma/omega_m = {:.3e}: outside the resolved-sideband regime, the area ratio is not (n+1)/n",
            template.gamma() / osc.omega_m()
        ));
    }
    let (r, b) = par::join(|| output_terms(&red, osc, grid), || output_terms(&blue, osc, grid));
    let (r, b) = (r?, b?);
    let area = |t: &OutputTerms| {
        let peak: Vec<f64> = (0..grid.len()).map(|i| t.correlation[i].re + t.position[i].re).collect();
        trapezoid(grid, &peak)
    };
    let (area_red, area_blue) = (area(&r), area(&b));
    let ratio = if osc.n_mean() == 0.0 || area_red <= 0.0 { f64::INFINITY } else { area_blue / area_red };
    Ok(AsymmetryResult { spectrum_red: r.total(), spectrum_blue: b.total(), area_red, area_blue, ratio, warnings })
}
