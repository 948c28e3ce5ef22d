use std::fs;

use num_complex::Complex64;
use nalgebra::DMatrix;

use super::config::{Command, InputSpec, RunConfig};
use super::output::{Document, Summary, Table};
use super::CliError;
use crate::apps::{asymmetry_window, optical_damping, qubit_rates, sideband_asymmetry};
use crate::cavity::{cavity_spectra, cavity_susceptibilities, normalize, SpectraSet, SusceptibilitySet};
use crate::constraints::{audit, mimo_quantum_limit, Verdict, DEFAULT_TOL};
use crate::netsolve::{self, build_one_sided_cavity};

/// What a command produced, plus the exit code it asks for.
pub struct Outcome {
    pub document: Document,
    pub exit_code: i32,
    pub notes: Vec<String>,
}

impl Outcome {
    fn ok(document: Document) -> Self {
        Self { document, exit_code: 0, notes: Vec::new() }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Spectra => spectra(cfg),
        Command::Check => check(cfg),
        Command::Qubit => qubit(cfg),
        Command::Mech => mech(cfg),
        Command::MimoCheck => mimo_check(cfg),
    }
}

fn solve(cfg: &RunConfig) -> Result<(SusceptibilitySet, SpectraSet), CliError> {
    let params = cfg.cavity()?;
    let grid = cfg.grid()?;
    if cfg.input == InputSpec::Vacuum {
        return Ok((cavity_susceptibilities(&params, &grid), cavity_spectra(&params, &grid)));
    }
    let net = build_one_sided_cavity(&params).with_input_state(cfg.input.to_state()?)?;
    let susc = netsolve::solve_susceptibilities(&net, &grid)?;
    let sym = netsolve::symmetrize(&netsolve::solve_unsym_spectra(&net, &grid)?)?;
    Ok((susc, sym))
}

fn spectra(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (susc, sym) = solve(cfg)?;
    let norm = normalize(&sym, &susc)?;
    let grid = susc.grid();
    let rows: Vec<usize> = (0..grid.len()).filter(|&i| !cfg.single_sided || grid[i] >= 0.0).collect();
    let k = if cfg.single_sided { 2.0 } else { 1.0 };
    let col = |f: &dyn Fn(usize) -> f64| rows.iter().map(|&i| f(i)).collect::<Vec<_>>();
    let table = Table::new()
        .num("omega", col(&|i| grid[i]))
        .num("chi_zf_re", col(&|i| susc.chi_zf[i].re))
        .num("chi_zf_im", col(&|i| susc.chi_zf[i].im))
        .num("chi_ff_re", col(&|i| susc.chi_ff[i].re))
        .num("chi_ff_im", col(&|i| susc.chi_ff[i].im))
        .num("sbar_zz", col(&|i| k * sym.s_zz[i].re))
        .num("sbar_zf_re", col(&|i| k * sym.s_zf[i].re))
        .num("sbar_zf_im", col(&|i| k * sym.s_zf[i].im))
        .num("sbar_ff", col(&|i| k * sym.s_ff[i].re))
        .num("s_zz", col(&|i| k * norm.s_zz[i].re))
        .num("s_zf_re", col(&|i| k * norm.s_zf[i].re))
        .num("s_zf_im", col(&|i| k * norm.s_zf[i].im));
    Ok(Outcome::ok(Document { summary: None, table: Some(table) }))
}

fn check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let net = build_one_sided_cavity(&cfg.cavity()?).with_input_state(cfg.input.to_state()?)?;
    let grid = cfg.grid()?;
    let r = audit(&net, &grid, DEFAULT_TOL)?;
    let table = Table::new()
        .num("omega", grid.points().iter().copied())
        .num("uncertainty_gap", r.uncertainty_gap.values.iter().copied())
        .num("gap_scale", r.uncertainty_gap.scales.iter().copied())
        .num("product_residual", r.product_residual.values.iter().copied())
        .num("phase_residual", r.phase_residual.values.iter().copied())
        .num("kubo_residual", r.kubo_residual.values.iter().copied())
        .num("backaction_margin", r.backaction_margin.values.iter().copied())
        .text("verdict", r.verdict.iter().map(|v| v.as_str().to_string()));
    let violations = r.verdict.iter().filter(|v| **v == Verdict::Violation).count();
    let mut out = Outcome::ok(Document { summary: None, table: Some(table) });
    if violations > 0 {
        out.exit_code = 3;
        out.notes.push(format!("violation: uncertainty relation broken at {violations} frequencies"));
    }
    Ok(out)
}

fn qubit(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let r = qubit_rates(&cfg.cavity()?)?;
    let summary = Summary::new()
        .num("gamma_meas", r.gamma_meas)
        .num("gamma_phi", r.gamma_phi)
        .num("ratio", r.ratio)
        .num("theta_opt", r.theta_opt);
    Ok(Outcome::ok(Document { summary: Some(summary), table: None }))
}

fn mech(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.require_window()?;
    let template = cfg.cavity()?;
    let osc = cfg.oscillator()?;
    let grid = asymmetry_window(&template, &osc, cfg.n_window)?;
    let r = sideband_asymmetry(&template, &osc, &grid)?;
    let n = osc.n_mean();
    let damping = |d: f64| template.with_delta(d).map(|p| osc.gamma_m() + optical_damping(&p, &osc));
    let summary = Summary::new()
        .num("n_occ", n)
        .num("gamma_eff_red", damping(-osc.omega_m())?)
        .num("gamma_eff_blue", damping(osc.omega_m())?)
        .num("area_red", r.area_red)
        .num("area_blue", r.area_blue)
        .num("ratio", r.ratio)
        .num("ratio_expected", if n == 0.0 { f64::INFINITY } else { (n + 1.0) / n });
    let table = Table::new()
        .num("omega", grid.points().iter().copied())
        .num("s_tot_red", r.spectrum_red.re())
        .num("s_tot_blue", r.spectrum_blue.re());
    let mut out = Outcome::ok(Document { summary: Some(summary), table: Some(table) });
    out.notes = r.warnings.iter().map(|w| format!("warning: {w}")).collect();
    Ok(out)
}

/// One block per line: `omega`, then the `2N×2N` entries row-major as
/// `re,im` pairs. Lines starting with `#` are skipped.
pub fn parse_matrix_file(text: &str) -> Result<(Vec<f64>, Vec<DMatrix<Complex64>>), CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut omegas = Vec::new();
    let mut mats = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Config(format!("matrix file: {e}")))?;
        let nums = rec
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Config(format!("matrix file record {}: {e}", line + 1)))?;
        let cells = nums.len().saturating_sub(1) / 2;
        let dim = (cells as f64).sqrt().round() as usize;
        if nums.len() < 2 || nums.len().is_multiple_of(2) || dim * dim != cells || !dim.is_multiple_of(2) || dim == 0 {
            return Err(CliError::Config(format!(
                "matrix file record {}: {} numbers do not form omega plus a 2N×2N complex block",
                line + 1,
                nums.len()
            )));
        }
        if let Some(first) = mats.first() {
            let first: &DMatrix<Complex64> = first;
            if first.nrows() != dim {
                return Err(CliError::Config(format!("matrix file record {}: block size changes", line + 1)));
            }
        }
        omegas.push(nums[0]);
        mats.push(DMatrix::from_fn(dim, dim, |i, j| {
            let k = 1 + 2 * (i * dim + j);
            Complex64::new(nums[k], nums[k + 1])
        }));
    }
    if mats.is_empty() {
        return Err(CliError::Config("matrix file holds no blocks".into()));
    }
    Ok((omegas, mats))
}

fn mimo_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let path = cfg.matrix_file.as_ref().ok_or_else(|| CliError::Config("mimo-check needs --matrix-file".into()))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let (omegas, mats) = parse_matrix_file(&text)?;
    let det = mimo_quantum_limit(&mats)?;
    let verdicts: Vec<Verdict> =
        det.values.iter().zip(&det.scales).map(|(d, s)| Verdict::classify(*d, *s, DEFAULT_TOL)).collect();
    let table = Table::new()
        .num("omega", omegas)
        .num("determinant", det.values.iter().copied())
        .num("scale", det.scales.iter().copied())
        .text("verdict", verdicts.iter().map(|v| v.as_str().to_string()));
    let mut out = Outcome::ok(Document { summary: None, table: Some(table) });
    let bad = verdicts.iter().filter(|v| **v == Verdict::Violation).count();
    if bad > 0 {
        out.exit_code = 3;
        out.notes.push(format!("violation: negative determinant in {bad} blocks"));
    }
    Ok(out)
}
