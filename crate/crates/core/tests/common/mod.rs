//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::f64::consts::{PI, SQRT_2};

use detnoise::netsolve::{Dynamics, InputState, LinearNetwork, Observable, Site};
use detnoise::{CavityParams, Complex64, UnitConvention};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// γ ∈ [0.1, 10], Δ ∈ [−10, 10], ḡ ∈ [0.1, 5], θ ∈ [0, 2π).
pub fn random_params(rng: &mut impl Rng) -> CavityParams {
    CavityParams::new(rng.gen_range(0.1..10.0), rng.gen_range(-10.0..10.0), rng.gen_range(0.1..5.0), rng.gen_range(0.0..2.0 * PI))
        .unwrap()
}

/// Cavity quantities derived in the sideband operator picture, independent
/// of the quadrature engine and of the library closed forms.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub chi_zf: Complex64,
    pub chi_ff: Complex64,
    pub sbar_zz: f64,
    pub sbar_zf: Complex64,
    pub sbar_ff: f64,
    /// unsymmetrized `S_FF(ω)`
    pub s_ff: f64,
}

pub fn oracle(p: &CavityParams, omega: f64) -> Oracle {
    let (g, d, gb, h, th) = (p.gamma(), p.delta(), p.gbar(), p.hbar(), p.theta());
    let i = c(0.0, 1.0);
    // a(ω) = r(ω) c(ω), c_out(ω) = t(ω) c(ω)
    let r = |w: f64| (2.0 * g).sqrt() / c(g, -(d + w));
    let t = |w: f64| c(-g, -(w + d)) / c(g, -(w + d));
    // vacuum: S_AB(ω) = α_A(ω) α_B(ω)*, with α the coefficient of c(ω)
    let alpha_z = |w: f64| Complex64::from_polar(1.0, -th) * t(w) / SQRT_2;
    let alpha_f = |w: f64| h * gb * r(w);
    let s = |a: &dyn Fn(f64) -> Complex64, b: &dyn Fn(f64) -> Complex64, w: f64| a(w) * b(w).conj();
    let sym = |a: &dyn Fn(f64) -> Complex64, b: &dyn Fn(f64) -> Complex64| 0.5 * (s(a, b, omega) + s(b, a, -omega));

    // response to H' = −u F: ⟨a⟩ = iḡu/(γ − i(Δ+ω)), ⟨a†⟩(ω) = −iḡu/(γ + i(Δ−ω))
    let a_resp = i * gb / c(g, -(d + omega));
    let adag_resp = -i * gb / c(g, d - omega);
    let out_resp = -(2.0 * g).sqrt() * a_resp;
    let out_dag_resp = -(2.0 * g).sqrt() * adag_resp;
    let chi_zf = (Complex64::from_polar(1.0, -th) * out_resp + Complex64::from_polar(1.0, th) * out_dag_resp) / SQRT_2;
    let chi_ff = h * gb * (a_resp + adag_resp);

    Oracle {
        chi_zf,
        chi_ff,
        sbar_zz: sym(&alpha_z, &alpha_z).re,
        sbar_zf: sym(&alpha_z, &alpha_f),
        sbar_ff: sym(&alpha_f, &alpha_f).re,
        s_ff: s(&alpha_f, &alpha_f, omega).re,
    }
}

pub fn rel_close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm())
}

fn random_hermitian(rng: &mut impl Rng, n: usize) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    (&m + m.adjoint()) * c(0.5, 0.0)
}

/// Two coupled modes, two ports, random Hermitian Hamiltonian and full-rank
/// port couplings (hence stable). Z reads port 0 at a random angle; F is a
/// random mix of mode quadratures.
pub fn random_two_mode_network(rng: &mut impl Rng, input: InputState) -> LinearNetwork {
    let h = random_hermitian(rng, 2) * c(3.0, 0.0);
    let l = loop {
        let l = DMatrix::from_fn(2, 2, |_, _| c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)));
        if l.clone().determinant().norm() > 0.3 {
            break l;
        }
    };
    let dynamics = Dynamics::from_hamiltonian(&h, &l).unwrap();
    let z = Observable::output_homodyne(0, rng.gen_range(0.0..2.0 * PI));
    let f = Observable::rotated(Site::Mode(0), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.5..2.0))
        .plus(&Observable::rotated(Site::Mode(1), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.5..2.0)));
    LinearNetwork::new(dynamics, vec![input.clone(), input], z, f, UnitConvention::default()).unwrap()
}

/// Argmin of `f` over `[0, π)`: dense scan, then golden-section refinement
/// between the neighbours of the best sample. Non-finite values count as +∞.
pub fn sweep_argmin(f: impl Fn(f64) -> f64, samples: usize) -> f64 {
    let step = PI / samples as f64;
    let eval = |t: f64| {
        let v = f(t);
        if v.is_finite() { v } else { f64::INFINITY }
    };
    let best = (0..samples).map(|k| k as f64 * step).min_by(|a, b| eval(*a).total_cmp(&eval(*b))).unwrap();
    let (mut lo, mut hi) = (best - step, best + step);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-10 {
        let (m1, m2) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
        if eval(m1) < eval(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

/// Distance between two angles modulo π.
pub fn angle_gap_mod_pi(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// Weak-coupling resolved-sideband setup with optical damping `1e-3 γ_m`.
pub fn weak_optomech(n: f64) -> (CavityParams, detnoise::MechOscillator) {
    let (omega_m, gamma, gamma_m, mass) = (1.0f64, 1e-2f64, 1e-4f64, 1.0f64);
    let gamma_opt = 1e-3 * gamma_m;
    let gbar = (gamma_opt * mass * omega_m * gamma).sqrt();
    (
        CavityParams::new(gamma, omega_m, gbar, 0.3).unwrap(),
        detnoise::MechOscillator::with_occupation(omega_m, gamma_m, mass, n).unwrap(),
    )
}
