//! Linear bosonic networks in the real quadrature basis.
//!
//! Internal modes are stacked as `s = (x_1, y_1, …, x_n, y_n)` and each of the
//! `m` field ports contributes an incoming `(x, y)` pair `u` at x = 0⁻ and an
//! outgoing pair `v` at x = 0⁺:
//!
//! ```text
//! ṡ = A s + B u,      v = C s + D u
//! ```
//!
//! Observables are real linear combinations of mode, incoming and outgoing
//! quadratures.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::InputState;
use crate::{Error, Result, UnitConvention};

/// Canonical commutator block: `[x, y] = i` gives `[q_j, q_k] = i Ω_jk`.
pub(crate) fn symplectic(pairs: usize) -> DMatrix<f64> {
    let mut om = DMatrix::zeros(2 * pairs, 2 * pairs);
    for k in 0..pairs {
        om[(2 * k, 2 * k + 1)] = 1.0;
        om[(2 * k + 1, 2 * k)] = -1.0;
    }
    om
}

/// Real `2r×2c` image of a complex `r×c` matrix acting on `a = (x + iy)/√2`.
pub fn complex_to_quadrature(m: &DMatrix<Complex64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(2 * m.nrows(), 2 * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            out[(2 * i, 2 * j)] = z.re;
            out[(2 * i, 2 * j + 1)] = -z.im;
            out[(2 * i + 1, 2 * j)] = z.im;
            out[(2 * i + 1, 2 * j + 1)] = z.re;
        }
    }
    out
}

/// First-order dynamics `(A, B, C, D)` of a network.
#[derive(Debug, Clone, PartialEq)]
pub struct Dynamics {
    drift: DMatrix<f64>,
    input: DMatrix<f64>,
    output: DMatrix<f64>,
    feedthrough: DMatrix<f64>,
}

impl Dynamics {
    pub fn from_quadrature(
        drift: DMatrix<f64>,
        input: DMatrix<f64>,
        output: DMatrix<f64>,
        feedthrough: DMatrix<f64>,
    ) -> Result<Self> {
        let s = drift.nrows();
        let u = input.ncols();
        let ok = drift.is_square()
            && s.is_multiple_of(2)
            && u.is_multiple_of(2)
            && input.nrows() == s
            && output.nrows() == u
            && output.ncols() == s
            && feedthrough.shape() == (u, u);
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "inconsistent dimensions: A {:?}, B {:?}, C {:?}, D {:?}",
                drift.shape(),
                input.shape(),
                output.shape(),
                feedthrough.shape()
            )));
        }
        if [&drift, &input, &output, &feedthrough].iter().any(|m| m.iter().any(|v| !v.is_finite())) {
            return Err(Error::InvalidArgument("network matrices must be finite".into()));
        }
        Ok(Self { drift, input, output, feedthrough })
    }

    /// Passive network given by complex mode matrices:
    /// `ȧ = drift·a + input_coupling·c_in`, `c_out = feedthrough·c_in + output_coupling·a`.
    pub fn passive(
        drift: &DMatrix<Complex64>,
        input_coupling: &DMatrix<Complex64>,
        output_coupling: &DMatrix<Complex64>,
        feedthrough: &DMatrix<Complex64>,
    ) -> Result<Self> {
        Self::from_quadrature(
            complex_to_quadrature(drift),
            complex_to_quadrature(input_coupling),
            complex_to_quadrature(output_coupling),
            complex_to_quadrature(feedthrough),
        )
    }

    /// Network from a mode Hamiltonian `H` (Hermitian, in units of ħ) and
    /// port couplings `L` (one row per port): `ȧ = (−iH − ½L†L) a − L† c_in`,
    /// `c_out = c_in + L a`.
    pub fn from_hamiltonian(hamiltonian: &DMatrix<Complex64>, couplings: &DMatrix<Complex64>) -> Result<Self> {
        let n = hamiltonian.nrows();
        if !hamiltonian.is_square() || couplings.ncols() != n {
            return Err(Error::InvalidArgument("H must be n×n and L must have n columns".into()));
        }
        let herm_err = (hamiltonian - hamiltonian.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm_err > 1e-12 * hamiltonian.iter().map(|z| z.norm()).fold(1.0, f64::max) {
            return Err(Error::InvalidArgument("mode Hamiltonian is not Hermitian".into()));
        }
        let ldag = couplings.adjoint();
        let drift = hamiltonian * Complex64::new(0.0, -1.0) - (&ldag * couplings) * Complex64::new(0.5, 0.0);
        let m = couplings.nrows();
        Self::passive(&drift, &(-ldag), couplings, &DMatrix::identity(m, m))
    }

    pub fn n_modes(&self) -> usize {
        self.drift.nrows() / 2
    }

    pub fn n_ports(&self) -> usize {
        self.input.ncols() / 2
    }

    pub fn drift(&self) -> &DMatrix<f64> {
        &self.drift
    }

    pub fn input(&self) -> &DMatrix<f64> {
        &self.input
    }

    pub fn output(&self) -> &DMatrix<f64> {
        &self.output
    }

    pub fn feedthrough(&self) -> &DMatrix<f64> {
        &self.feedthrough
    }

    pub fn drift_eigenvalues(&self) -> Vec<Complex64> {
        self.drift.complex_eigenvalues().iter().copied().collect()
    }

    /// Every drift eigenvalue must have a strictly negative real part.
    pub fn check_stable(&self) -> Result<()> {
        match self.drift_eigenvalues().into_iter().find(|ev| ev.re.is_nan() || ev.re >= 0.0) {
            Some(ev) => Err(Error::Unstable(format!("drift eigenvalue {ev} has non-negative real part"))),
            None => Ok(()),
        }
    }

    /// Block-diagonal union of independent networks.
    pub fn block_diagonal(parts: &[&Dynamics]) -> Result<Self> {
        let s: usize = parts.iter().map(|d| d.drift.nrows()).sum();
        let u: usize = parts.iter().map(|d| d.input.ncols()).sum();
        let mut a = DMatrix::zeros(s, s);
        let mut b = DMatrix::zeros(s, u);
        let mut c = DMatrix::zeros(u, s);
        let mut d = DMatrix::zeros(u, u);
        let (mut so, mut uo) = (0, 0);
        for p in parts {
            let (ps, pu) = (p.drift.nrows(), p.input.ncols());
            a.view_mut((so, so), (ps, ps)).copy_from(&p.drift);
            b.view_mut((so, uo), (ps, pu)).copy_from(&p.input);
            c.view_mut((uo, so), (pu, ps)).copy_from(&p.output);
            d.view_mut((uo, uo), (pu, pu)).copy_from(&p.feedthrough);
            so += ps;
            uo += pu;
        }
        Self::from_quadrature(a, b, c, d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    Mode(usize),
    Input(usize),
    Output(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub site: Site,
    pub quadrature: Quadrature,
    pub coeff: f64,
}

/// Hermitian observable: real combination of quadratures.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Observable {
    terms: Vec<Term>,
}

impl Observable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(mut self, site: Site, quadrature: Quadrature, coeff: f64) -> Self {
        self.terms.push(Term { site, quadrature, coeff });
        self
    }

    /// `scale·(cos φ x + sin φ y)` of a site.
    pub fn rotated(site: Site, angle: f64, scale: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new().term(site, Quadrature::X, scale * c).term(site, Quadrature::Y, scale * s)
    }

    /// Homodyne readout `cosθ X_out + sinθ Y_out` of an output port.
    pub fn output_homodyne(port: usize, theta: f64) -> Self {
        Self::rotated(Site::Output(port), theta, 1.0)
    }

    pub fn plus(mut self, other: &Observable) -> Self {
        self.terms.extend_from_slice(&other.terms);
        self
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// True when the observable only reads outgoing fields.
    pub fn is_output_only(&self) -> bool {
        self.terms.iter().all(|t| matches!(t.site, Site::Output(_)))
    }

    fn shifted(&self, mode_offset: usize, port_offset: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                site: match t.site {
                    Site::Mode(k) => Site::Mode(k + mode_offset),
                    Site::Input(p) => Site::Input(p + port_offset),
                    Site::Output(p) => Site::Output(p + port_offset),
                },
                ..*t
            })
            .collect();
        Self { terms }
    }

    fn check_sites(&self, n_modes: usize, n_ports: usize) -> Result<()> {
        for t in &self.terms {
            let ok = match t.site {
                Site::Mode(k) => k < n_modes,
                Site::Input(p) | Site::Output(p) => p < n_ports,
            };
            if !ok || !t.coeff.is_finite() {
                return Err(Error::InvalidArgument(format!("observable term {t:?} out of range")));
            }
        }
        Ok(())
    }

    /// Dense rows over (modes, inputs, outputs).
    fn dense(&self, n_modes: usize, n_ports: usize) -> (DVector<f64>, DVector<f64>, DVector<f64>) {
        let mut s = DVector::zeros(2 * n_modes);
        let mut u = DVector::zeros(2 * n_ports);
        let mut v = DVector::zeros(2 * n_ports);
        for t in &self.terms {
            let q = match t.quadrature {
                Quadrature::X => 0,
                Quadrature::Y => 1,
            };
            match t.site {
                Site::Mode(k) => s[2 * k + q] += t.coeff,
                Site::Input(p) => u[2 * p + q] += t.coeff,
                Site::Output(p) => v[2 * p + q] += t.coeff,
            }
        }
        (s, u, v)
    }
}

/// Observable reduced onto (mode, incoming) quadratures, plus the drive it
/// exerts on the modes when used as a perturbation `H_int = −q·O`.
#[derive(Debug, Clone)]
pub(crate) struct Reduced {
    modes: DVector<f64>,
    inputs: DVector<f64>,
    drive: DVector<f64>,
}

/// Network dynamics + input state, ready to evaluate any pair of observables.
#[derive(Debug, Clone)]
pub(crate) struct Engine {
    dynamics: Dynamics,
    inputs: Vec<InputState>,
    hbar: f64,
    omega_ports: DMatrix<f64>,
}

/// Per-frequency workspace: `(A + iω)⁻¹` and the input spectral matrix.
pub(crate) struct FrequencyPoint {
    resolvent: DMatrix<Complex64>,
    input_spectrum: DMatrix<Complex64>,
}

impl Engine {
    pub(crate) fn new(dynamics: Dynamics, inputs: Vec<InputState>, units: UnitConvention) -> Result<Self> {
        if inputs.len() != dynamics.n_ports() {
            return Err(Error::InvalidArgument(format!(
                "{} input states for {} ports",
                inputs.len(),
                dynamics.n_ports()
            )));
        }
        for s in &inputs {
            s.validate()?;
        }
        dynamics.check_stable()?;
        let omega_ports = symplectic(dynamics.n_ports());
        Ok(Self { dynamics, inputs, hbar: units.hbar(), omega_ports })
    }

    pub(crate) fn dynamics(&self) -> &Dynamics {
        &self.dynamics
    }

    pub(crate) fn inputs(&self) -> &[InputState] {
        &self.inputs
    }

    pub(crate) fn hbar(&self) -> f64 {
        self.hbar
    }

    pub(crate) fn reduce(&self, obs: &Observable) -> Result<Reduced> {
        let d = &self.dynamics;
        obs.check_sites(d.n_modes(), d.n_ports())?;
        let (s, u, v) = obs.dense(d.n_modes(), d.n_ports());
        let modes = s + d.output.transpose() * &v;
        let inputs = u + d.feedthrough.transpose() * &v;
        let drive = symplectic(d.n_modes()) * &modes + &d.input * (&self.omega_ports * &inputs);
        Ok(Reduced { modes, inputs, drive })
    }

    pub(crate) fn at(&self, omega: f64) -> FrequencyPoint {
        let a = &self.dynamics.drift;
        let n = a.nrows();
        let shifted = DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(a[(i, j)], if i == j { omega } else { 0.0 })
        });
        // stability keeps A + iω invertible for real ω
        let resolvent = shifted.try_inverse().expect("stable drift has no real-axis poles");
        let m = self.inputs.len();
        let mut input_spectrum = DMatrix::zeros(2 * m, 2 * m);
        for (p, state) in self.inputs.iter().enumerate() {
            let q = state.quadrature_matrix(omega);
            for i in 0..2 {
                for j in 0..2 {
                    input_spectrum[(2 * p + i, 2 * p + j)] = q[(i, j)];
                }
            }
        }
        FrequencyPoint { resolvent, input_spectrum }
    }

    /// Row mapping incoming quadratures to the observable: `O(ω) = R(ω)·u(ω)`.
    pub(crate) fn response_row(&self, point: &FrequencyPoint, obs: &Reduced) -> DVector<Complex64> {
        let modes = obs.modes.map(|v| Complex64::new(v, 0.0));
        let b = self.dynamics.input.map(|v| Complex64::new(v, 0.0));
        // (−iω − A)⁻¹ = −(A + iω)⁻¹
        let through_modes = -(b.transpose() * point.resolvent.transpose() * modes);
        through_modes + obs.inputs.map(|v| Complex64::new(v, 0.0))
    }

    /// Unsymmetrized `S_AB(ω) = R_A Q R_B†`.
    pub(crate) fn spectrum(&self, point: &FrequencyPoint, a: &DVector<Complex64>, b: &DVector<Complex64>) -> Complex64 {
        (a.transpose() * &point.input_spectrum * b.conjugate())[(0, 0)]
    }

    /// Causal response `χ_XP(ω) = (i/ħ)∫₀^∞ dτ e^{iωτ} ⟨[X(τ), P(0)]⟩`.
    ///
    /// For τ > 0 the commutator only goes through the modes; the
    /// equal-time field part contributes with Θ(0) = ½.
    pub(crate) fn susceptibility(&self, point: &FrequencyPoint, x: &Reduced, p: &Reduced) -> Complex64 {
        let xm = x.modes.map(|v| Complex64::new(v, 0.0));
        let drive = p.drive.map(|v| Complex64::new(v, 0.0));
        let through_modes = (xm.transpose() * &point.resolvent * drive)[(0, 0)];
        let contact = x.inputs.dot(&(&self.omega_ports * &p.inputs));
        (through_modes - 0.5 * contact) / self.hbar
    }
}

/// Single-input single-output detector: dynamics, input state per port, and
/// the observables `F` (couples to the system) and `Z` (measured).
#[derive(Debug, Clone)]
pub struct LinearNetwork {
    pub(crate) engine: Engine,
    z: Observable,
    f: Observable,
}

impl LinearNetwork {
    pub fn new(
        dynamics: Dynamics,
        inputs: Vec<InputState>,
        z: Observable,
        f: Observable,
        units: UnitConvention,
    ) -> Result<Self> {
        let engine = Engine::new(dynamics, inputs, units)?;
        engine.reduce(&z)?;
        engine.reduce(&f)?;
        Ok(Self { engine, z, f })
    }

    /// Same network with every port fed by `state`.
    pub fn with_input_state(&self, state: InputState) -> Result<Self> {
        let inputs = vec![state; self.engine.dynamics.n_ports()];
        Self::new(self.engine.dynamics.clone(), inputs, self.z.clone(), self.f.clone(), self.units())
    }

    pub fn dynamics(&self) -> &Dynamics {
        self.engine.dynamics()
    }

    pub fn input_states(&self) -> &[InputState] {
        self.engine.inputs()
    }

    pub fn z(&self) -> &Observable {
        &self.z
    }

    pub fn f(&self) -> &Observable {
        &self.f
    }

    pub fn units(&self) -> UnitConvention {
        UnitConvention::new(self.engine.hbar(), 1.0).expect("validated")
    }

    /// Joins independent detectors into one network with N (Z, F) pairs.
    pub fn combine(parts: &[&LinearNetwork]) -> Result<MultiPortNetwork> {
        let first = parts.first().ok_or_else(|| Error::InvalidArgument("nothing to combine".into()))?;
        let hbar = first.engine.hbar();
        if parts.iter().any(|p| p.engine.hbar() != hbar) {
            return Err(Error::InvalidArgument("combined networks must share ħ".into()));
        }
        let dyns: Vec<&Dynamics> = parts.iter().map(|p| p.dynamics()).collect();
        let dynamics = Dynamics::block_diagonal(&dyns)?;
        let mut inputs = Vec::new();
        let mut pairs = Vec::new();
        let (mut mo, mut po) = (0, 0);
        for p in parts {
            inputs.extend_from_slice(p.input_states());
            pairs.push((p.z.shifted(mo, po), p.f.shifted(mo, po)));
            mo += p.dynamics().n_modes();
            po += p.dynamics().n_ports();
        }
        MultiPortNetwork::new(dynamics, inputs, pairs, first.units())
    }
}

/// Detector with N readout pairs `(Z_k, F_k)`.
#[derive(Debug, Clone)]
pub struct MultiPortNetwork {
    pub(crate) engine: Engine,
    pairs: Vec<(Observable, Observable)>,
}

impl MultiPortNetwork {
    pub fn new(
        dynamics: Dynamics,
        inputs: Vec<InputState>,
        pairs: Vec<(Observable, Observable)>,
        units: UnitConvention,
    ) -> Result<Self> {
        let engine = Engine::new(dynamics, inputs, units)?;
        for (z, f) in &pairs {
            engine.reduce(z)?;
            engine.reduce(f)?;
        }
        Ok(Self { engine, pairs })
    }

    pub fn pairs(&self) -> &[(Observable, Observable)] {
        &self.pairs
    }

    /// Observables in the order `Z_1, F_1, …, Z_N, F_N`.
    pub fn ordered_observables(&self) -> Vec<Observable> {
        self.pairs.iter().flat_map(|(z, f)| [z.clone(), f.clone()]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadrature_image_of_complex_scalar() {
        let m = DMatrix::from_element(1, 1, c(-2.0, 0.5));
        let q = complex_to_quadrature(&m);
        assert_eq!(q, DMatrix::from_row_slice(2, 2, &[-2.0, -0.5, 0.5, -2.0]));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let err = Dynamics::from_quadrature(
            DMatrix::zeros(2, 2),
            DMatrix::zeros(2, 4),
            DMatrix::zeros(2, 2),
            DMatrix::zeros(2, 2),
        );
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn marginal_network_is_unstable() {
        // lossless detuned mode: eigenvalues ±iΔ
        let d = Dynamics::passive(
            &DMatrix::from_element(1, 1, c(0.0, 1.0)),
            &DMatrix::from_element(1, 1, c(0.0, 0.0)),
            &DMatrix::from_element(1, 1, c(0.0, 0.0)),
            &DMatrix::from_element(1, 1, c(1.0, 0.0)),
        )
        .unwrap();
        assert!(matches!(d.check_stable(), Err(Error::Unstable(_))));
    }

    #[test]
    fn hamiltonian_network_matches_cavity_form() {
        let gamma = 0.8f64;
        let delta = -0.3;
        let h = DMatrix::from_element(1, 1, c(-delta, 0.0));
        let l = DMatrix::from_element(1, 1, c(-(2.0 * gamma).sqrt(), 0.0));
        let d = Dynamics::from_hamiltonian(&h, &l).unwrap();
        let direct = Dynamics::passive(
            &DMatrix::from_element(1, 1, c(-gamma, delta)),
            &DMatrix::from_element(1, 1, c((2.0 * gamma).sqrt(), 0.0)),
            &DMatrix::from_element(1, 1, c(-(2.0 * gamma).sqrt(), 0.0)),
            &DMatrix::from_element(1, 1, c(1.0, 0.0)),
        )
        .unwrap();
        assert!((d.drift() - direct.drift()).amax() < 1e-15);
        assert!((d.input() - direct.input()).amax() < 1e-15);
        assert!((d.output() - direct.output()).amax() < 1e-15);
    }

    #[test]
    fn observable_sites_are_checked() {
        let d = Dynamics::from_hamiltonian(
            &DMatrix::from_element(1, 1, c(0.0, 0.0)),
            &DMatrix::from_element(1, 1, c(1.0, 0.0)),
        )
        .unwrap();
        let bad = Observable::output_homodyne(3, 0.0);
        let r = LinearNetwork::new(
            d,
            vec![InputState::Vacuum],
            bad,
            Observable::rotated(Site::Mode(0), 0.0, 1.0),
            UnitConvention::default(),
        );
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }
}
