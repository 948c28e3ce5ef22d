//! Residuals and margins of the detector-noise constraints.
//!
//! Every check returns a [`Residual`]: the per-frequency value together with
//! the magnitude of the largest term that went into it. Comparisons are made
//! against `tol·scale`, since the ħ²/4-type terms span many decades across a
//! parameter sweep.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cavity::{normalize, NormalizedSpectra, SpectraSet, SusceptibilitySet};
use crate::netsolve::{self, LinearNetwork};
use crate::{ComplexSpectrum, Error, FrequencyGrid, Result};

/// Relative tolerance for equality checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative bound on `|χ_ZZ|, |χ_FZ|` against `|χ_ZF|` for a valid detector.
pub const MEASURABILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub values: Vec<f64>,
    pub scales: Vec<f64>,
}

impl Residual {
    /// `|value| <= tol·scale` at every point.
    pub fn within(&self, tol: f64) -> bool {
        self.values.iter().zip(&self.scales).all(|(v, s)| v.abs() <= tol * s)
    }

    /// Largest `|value|/scale` (0 where the scale vanishes with the value).
    pub fn max_relative(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.scales)
            .map(|(v, s)| if *s == 0.0 { if *v == 0.0 { 0.0 } else { f64::INFINITY } } else { v.abs() / s })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    QuantumLimited,
    AboveLimit,
    Violation,
}

impl Verdict {
    pub fn classify(gap: f64, scale: f64, tol: f64) -> Self {
        if gap.abs() <= tol * scale {
            Verdict::QuantumLimited
        } else if gap > 0.0 {
            Verdict::AboveLimit
        } else {
            Verdict::Violation
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::QuantumLimited => "quantum_limited",
            Verdict::AboveLimit => "above_limit",
            Verdict::Violation => "violation",
        }
    }
}

/// Both sign branches of the uncertainty relation:
/// `S̄_ZZ S̄_FF − |S̄_ZF|² − (ħ²/4)|χ_ZF|² ∓ ħ Im[S̄_ZF* χ_ZF − χ_FF S̄_ZZ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyBranches {
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
    pub scales: Vec<f64>,
}

pub fn uncertainty_branches(
    spectra: &SpectraSet,
    susc: &SusceptibilitySet,
    hbar: f64,
) -> Result<UncertaintyBranches> {
    if !spectra.symmetrized {
        return Err(Error::InvalidArgument("uncertainty relation needs symmetrized spectra".into()));
    }
    spectra.grid().require_same(susc.grid())?;
    susc.check_measurability(MEASURABILITY_TOL)?;
    let n = spectra.grid().len();
    let mut out = UncertaintyBranches { plus: Vec::with_capacity(n), minus: Vec::with_capacity(n), scales: Vec::with_capacity(n) };
    for i in 0..n {
        let (szz, szf, sff) = (spectra.s_zz[i], spectra.s_zf[i], spectra.s_ff[i]);
        let (czf, cff) = (susc.chi_zf[i], susc.chi_ff[i]);
        let product = (szz * sff).re;
        let cross = szf.norm_sqr();
        let response = 0.25 * hbar * hbar * czf.norm_sqr();
        let twist = hbar * (szf.conj() * czf - cff * szz).im;
        let base = product - cross - response;
        out.plus.push(base - twist);
        out.minus.push(base + twist);
        out.scales.push(product.abs().max(cross).max(response).max(twist.abs()));
    }
    Ok(out)
}

/// `S̄_ZZ S̄_FF − |S̄_ZF|² − (ħ²/4)|χ_ZF|² − ħ|Im[S̄_ZF* χ_ZF − χ_FF S̄_ZZ]|`,
/// taken as the tighter of the two sign branches.
pub fn uncertainty_gap(spectra: &SpectraSet, susc: &SusceptibilitySet, hbar: f64) -> Result<Residual> {
    let b = uncertainty_branches(spectra, susc, hbar)?;
    let values = b.plus.iter().zip(&b.minus).map(|(p, m)| p.min(*m)).collect();
    Ok(Residual { values, scales: b.scales })
}

/// Quantum-limit equalities on normalized spectra:
/// `r1 = s_zz S̄_FF − |s_zF|² − ħ²/4`, `r2 = Im s_zF + Im χ_FF · s_zz`.
pub fn quantum_limit_residuals(
    norm: &NormalizedSpectra,
    chi_ff: &ComplexSpectrum,
    hbar: f64,
) -> Result<(Residual, Residual)> {
    norm.s_zz.grid().require_same(chi_ff.grid())?;
    let n = chi_ff.len();
    let mut r1 = Residual { values: Vec::with_capacity(n), scales: Vec::with_capacity(n) };
    let mut r2 = Residual { values: Vec::with_capacity(n), scales: Vec::with_capacity(n) };
    for i in 0..n {
        let szz = norm.s_zz[i].re;
        let sff = norm.s_ff[i].re;
        let szf = norm.s_zf[i];
        let product = szz * sff;
        r1.values.push(product - szf.norm_sqr() - 0.25 * hbar * hbar);
        r1.scales.push(product.abs().max(0.25 * hbar * hbar));
        r2.values.push(szf.im + chi_ff[i].im * szz);
        r2.scales.push(chi_ff[i].im.abs() * szz + hbar);
    }
    Ok((r1, r2))
}

/// Unnormalized equalities: `S̄_ZZ S̄_FF − |S̄_ZF|² − (ħ²/4)|χ_ZF|²` and
/// `Im[S̄_ZF* χ_ZF − χ_FF S̄_ZZ]`.
pub fn unnormalized_residuals(
    spectra: &SpectraSet,
    susc: &SusceptibilitySet,
    hbar: f64,
) -> Result<(Residual, Residual)> {
    let b = uncertainty_branches(spectra, susc, hbar)?;
    let n = b.plus.len();
    let mut r1 = Residual { values: Vec::with_capacity(n), scales: b.scales.clone() };
    let mut r2 = Residual { values: Vec::with_capacity(n), scales: b.scales.iter().map(|s| s / hbar).collect() };
    for i in 0..n {
        r1.values.push(0.5 * (b.plus[i] + b.minus[i]));
        r2.values.push((b.minus[i] - b.plus[i]) / (2.0 * hbar));
    }
    Ok((r1, r2))
}

/// Determinant of the `2N×2N` spectral matrix of `(Z_1, F_1, …, Z_N, F_N)`
/// per frequency; zero certifies the multi-port quantum limit. Scale is the
/// product of the diagonal entries (Hadamard bound).
pub fn mimo_quantum_limit(matrices: &[DMatrix<Complex64>]) -> Result<Residual> {
    let mut out = Residual { values: Vec::with_capacity(matrices.len()), scales: Vec::with_capacity(matrices.len()) };
    for (k, m) in matrices.iter().enumerate() {
        if !m.is_square() || m.nrows() == 0 || m.nrows() % 2 != 0 {
            return Err(Error::InvalidMatrix(format!("block {k} is {:?}, expected 2N×2N", m.shape())));
        }
        let magnitude = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let asym = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if asym > 1e-12 * magnitude.max(1.0) || m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix(format!("block {k} is not Hermitian (max |M − M†| = {asym:e})")));
        }
        if let Some(d) = (0..m.nrows()).map(|i| m[(i, i)].re).find(|d| *d < -1e-12 * magnitude) {
            return Err(Error::InvalidMatrix(format!("block {k} has negative diagonal entry {d}")));
        }
        out.values.push(m.clone().determinant().re);
        out.scales.push((0..m.nrows()).map(|i| m[(i, i)].re.abs()).product());
    }
    Ok(out)
}

/// `S̄_FF(ω) − ħ|Im χ_FF(ω)|`, scaled by `S̄_FF`.
pub fn backaction_margin(s_ff_sym: &ComplexSpectrum, chi_ff: &ComplexSpectrum, hbar: f64) -> Result<Residual> {
    s_ff_sym.grid().require_same(chi_ff.grid())?;
    let values = s_ff_sym.values().iter().zip(chi_ff.values()).map(|(s, c)| s.re - hbar * c.im.abs()).collect();
    let scales = s_ff_sym.values().iter().zip(chi_ff.values()).map(|(s, c)| s.re.abs().max(hbar * c.im.abs())).collect();
    Ok(Residual { values, scales })
}

/// Per-frequency audit of a detector network.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub grid: FrequencyGrid,
    pub tol: f64,
    pub uncertainty_gap: Residual,
    pub product_residual: Residual,
    pub phase_residual: Residual,
    pub kubo_residual: Residual,
    pub backaction_margin: Residual,
    pub verdict: Vec<Verdict>,
}

impl ConstraintReport {
    pub fn has_violation(&self) -> bool {
        self.verdict.contains(&Verdict::Violation)
    }

    pub fn all_quantum_limited(&self) -> bool {
        self.verdict.iter().all(|v| *v == Verdict::QuantumLimited)
    }
}

/// Runs every single-port check on `net` over a symmetric `grid`.
pub fn audit(net: &LinearNetwork, grid: &FrequencyGrid, tol: f64) -> Result<ConstraintReport> {
    let hbar = net.units().hbar();
    let susc = netsolve::solve_susceptibilities(net, grid)?;
    let unsym = netsolve::solve_unsym_spectra(net, grid)?;
    let sym = netsolve::symmetrize(&unsym)?;
    let gap = uncertainty_gap(&sym, &susc, hbar)?;
    let norm = normalize(&sym, &susc)?;
    let (product, phase) = quantum_limit_residuals(&norm, &susc.chi_ff, hbar)?;
    let kubo = netsolve::kubo_check(&unsym.s_ff, &susc.chi_ff, hbar)?;
    let kubo = Residual {
        values: kubo.re(),
        scales: (0..grid.len()).map(|i| netsolve::kubo_scale(&unsym.s_ff, &susc.chi_ff, hbar, i)).collect(),
    };
    let margin = backaction_margin(&sym.s_ff, &susc.chi_ff, hbar)?;
    let verdict = gap.values.iter().zip(&gap.scales).map(|(g, s)| Verdict::classify(*g, *s, tol)).collect();
    Ok(ConstraintReport {
        grid: grid.clone(),
        tol,
        uncertainty_gap: gap,
        product_residual: product,
        phase_residual: phase,
        kubo_residual: kubo,
        backaction_margin: margin,
        verdict,
    })
}
