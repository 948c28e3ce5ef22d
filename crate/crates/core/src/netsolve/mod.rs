//! Generic frequency-domain input-output engine.
//!
//! Builds susceptibilities from the causal commutator structure of the network
//! and unsymmetrized spectra from propagating the input second moments. The two
//! routes share only the transfer matrices, which makes the relation
//! `χ_AB − χ*_BA = (i/ħ)[S_AB(ω) − S_BA(−ω)]` a non-trivial consistency check.

mod input;
mod network;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use input::{InputState, Profile};
pub use network::{
    complex_to_quadrature, Dynamics, LinearNetwork, MultiPortNetwork, Observable, Quadrature, Site, Term,
};

use crate::cavity::{SpectraSet, SusceptibilitySet};
use crate::par::{self, Strategy};
use crate::{CavityParams, ComplexSpectrum, FrequencyGrid, Result};

/// One-sided cavity: `ȧ = −(γ − iΔ)a + √(2γ) c_in`, `c_out = c_in − √(2γ) a`,
/// `F = ħḡ(a + a†)`, `Z = cosθ X_out + sinθ Y_out`, vacuum input.
pub fn build_one_sided_cavity(params: &CavityParams) -> LinearNetwork {
    let one = |z: Complex64| DMatrix::from_element(1, 1, z);
    let root = (2.0 * params.gamma()).sqrt();
    let dynamics = Dynamics::passive(
        &one(Complex64::new(-params.gamma(), params.delta())),
        &one(Complex64::new(root, 0.0)),
        &one(Complex64::new(-root, 0.0)),
        &one(Complex64::new(1.0, 0.0)),
    )
    .expect("1x1 blocks are consistent");
    // ħḡ(a + a†) = √2·ħḡ·X
    let f = Observable::rotated(Site::Mode(0), 0.0, std::f64::consts::SQRT_2 * params.hbar() * params.gbar());
    let z = Observable::output_homodyne(0, params.theta());
    LinearNetwork::new(dynamics, vec![InputState::Vacuum], z, f, params.units())
        .expect("gamma > 0 keeps the cavity stable")
}

pub fn solve_susceptibilities(net: &LinearNetwork, grid: &FrequencyGrid) -> Result<SusceptibilitySet> {
    solve_susceptibilities_with(net, grid, Strategy::default())
}

pub fn solve_susceptibilities_with(
    net: &LinearNetwork,
    grid: &FrequencyGrid,
    strategy: Strategy,
) -> Result<SusceptibilitySet> {
    let engine = &net.engine;
    let z = engine.reduce(net.z())?;
    let f = engine.reduce(net.f())?;
    let rows = par::map_indexed(grid.len(), strategy, |i| {
        let point = engine.at(grid[i]);
        [
            engine.susceptibility(&point, &z, &f),
            engine.susceptibility(&point, &f, &f),
            engine.susceptibility(&point, &z, &z),
            engine.susceptibility(&point, &f, &z),
        ]
    });
    let column = |k: usize| ComplexSpectrum::new(grid.clone(), rows.iter().map(|r| r[k]).collect());
    Ok(SusceptibilitySet { chi_zf: column(0)?, chi_ff: column(1)?, chi_zz: column(2)?, chi_fz: column(3)? })
}

/// Response of any observable pair, e.g. for checking `χ_{Z_k Z_l} = 0`.
pub fn solve_pair_susceptibility(
    net: &MultiPortNetwork,
    x: &Observable,
    p: &Observable,
    grid: &FrequencyGrid,
) -> Result<ComplexSpectrum> {
    let engine = &net.engine;
    let xr = engine.reduce(x)?;
    let pr = engine.reduce(p)?;
    let values = par::map_indexed(grid.len(), Strategy::default(), |i| {
        engine.susceptibility(&engine.at(grid[i]), &xr, &pr)
    });
    ComplexSpectrum::new(grid.clone(), values)
}

pub fn solve_unsym_spectra(net: &LinearNetwork, grid: &FrequencyGrid) -> Result<SpectraSet> {
    solve_unsym_spectra_with(net, grid, Strategy::default())
}

pub fn solve_unsym_spectra_with(net: &LinearNetwork, grid: &FrequencyGrid, strategy: Strategy) -> Result<SpectraSet> {
    grid.require_symmetric()?;
    let engine = &net.engine;
    let z = engine.reduce(net.z())?;
    let f = engine.reduce(net.f())?;
    let rows = par::map_indexed(grid.len(), strategy, |i| {
        let point = engine.at(grid[i]);
        let rz = engine.response_row(&point, &z);
        let rf = engine.response_row(&point, &f);
        [engine.spectrum(&point, &rz, &rz), engine.spectrum(&point, &rz, &rf), engine.spectrum(&point, &rf, &rf)]
    });
    let column = |k: usize| ComplexSpectrum::new(grid.clone(), rows.iter().map(|r| r[k]).collect());
    Ok(SpectraSet { s_zz: column(0)?, s_zf: column(1)?, s_ff: column(2)?, symmetrized: false })
}

/// Unsymmetrized spectral matrix `⟨A_j(ω) A_k†(ω')⟩` over `Z_1, F_1, …, Z_N, F_N`.
pub fn solve_spectral_matrix(net: &MultiPortNetwork, grid: &FrequencyGrid) -> Result<Vec<DMatrix<Complex64>>> {
    let engine = &net.engine;
    let reduced = net.ordered_observables().iter().map(|o| engine.reduce(o)).collect::<Result<Vec<_>>>()?;
    Ok(par::map_indexed(grid.len(), Strategy::default(), |i| {
        let point = engine.at(grid[i]);
        let rows: Vec<_> = reduced.iter().map(|r| engine.response_row(&point, r)).collect();
        DMatrix::from_fn(rows.len(), rows.len(), |j, k| engine.spectrum(&point, &rows[j], &rows[k]))
    }))
}

/// `S̄_AB(ω) = [S_AB(ω) + S_BA(−ω)]/2`, using `S_FZ = S_ZF*`.
pub fn symmetrize(spectra: &SpectraSet) -> Result<SpectraSet> {
    if spectra.symmetrized {
        return Ok(spectra.clone());
    }
    let even = |s: &ComplexSpectrum| -> Result<ComplexSpectrum> {
        s.zip_with(&s.reflect()?, |a, b| 0.5 * (a + b))
    };
    let s_zf = spectra.s_zf.zip_with(&spectra.s_zf.reflect()?, |a, b| 0.5 * (a + b.conj()))?;
    Ok(SpectraSet { s_zz: even(&spectra.s_zz)?, s_zf, s_ff: even(&spectra.s_ff)?, symmetrized: true })
}

/// `Im χ_FF(ω) − [S_FF(ω) − S_FF(−ω)]/(2ħ)`.
pub fn kubo_check(s_ff_unsym: &ComplexSpectrum, chi_ff: &ComplexSpectrum, hbar: f64) -> Result<ComplexSpectrum> {
    let reflected = s_ff_unsym.reflect()?;
    let dissipative = s_ff_unsym.zip_with(&reflected, |a, b| (a - b) / (2.0 * hbar))?;
    chi_ff.zip_with(&dissipative, |chi, d| Complex64::new(chi.im, 0.0) - d)
}

/// Scale against which [`kubo_check`] residuals are compared at grid index `i`.
pub fn kubo_scale(s_ff_unsym: &ComplexSpectrum, chi_ff: &ComplexSpectrum, hbar: f64, i: usize) -> f64 {
    let j = s_ff_unsym.grid().mirror_index(i);
    chi_ff[i].im.abs().max(s_ff_unsym[i].norm() / (2.0 * hbar)).max(s_ff_unsym[j].norm() / (2.0 * hbar))
}
