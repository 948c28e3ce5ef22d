//! Acceptance gate: ten criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the report.

mod common;

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use common::{angle_gap_mod_pi, random_params, random_two_mode_network, rng, sweep_argmin, weak_optomech};
use detnoise::apps::{asymmetry_window, optimal_angle, qubit_rates, sideband_asymmetry};
use detnoise::cavity::{cavity_spectra, cavity_susceptibilities, normalize, CavityPoint};
use detnoise::cli::{Command, Format, InputSpec, RunConfig};
use detnoise::constraints::{mimo_quantum_limit, quantum_limit_residuals, uncertainty_gap, DEFAULT_TOL};
use detnoise::netsolve::{
    build_one_sided_cavity, kubo_check, kubo_scale, solve_pair_susceptibility, solve_spectral_matrix,
    solve_susceptibilities, solve_unsym_spectra, symmetrize, InputState, LinearNetwork,
};
use detnoise::{make_symmetric_grid, CavityParams, Complex64, FrequencyGrid};
use rand::Rng;
use tempfile::TempDir;

const TOL: f64 = 1e-9;
const SWEEP_SEED: u64 = 2024;
const DRAWS: usize = 100;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn grid() -> FrequencyGrid {
    make_symmetric_grid(20.0, 64).unwrap()
}

fn sweep() -> Vec<CavityParams> {
    let mut r = rng(SWEEP_SEED);
    (0..DRAWS).map(|_| random_params(&mut r)).collect()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 { 0.0 } else { (a - b).norm() / s }
}

fn within_budget(elapsed: Duration, budget: Duration) -> bool {
    elapsed <= budget
}

fn quantum_limit_equalities() -> Outcome {
    let start = Instant::now();
    let g = grid();
    let (mut worst1, mut worst2) = (0.0f64, 0.0f64);
    for p in sweep() {
        let susc = cavity_susceptibilities(&p, &g);
        let norm = normalize(&cavity_spectra(&p, &g), &susc).unwrap();
        let (r1, r2) = quantum_limit_residuals(&norm, &susc.chi_ff, p.hbar()).unwrap();
        for i in 0..g.len() {
            let s_zz = norm.s_zz[i].re;
            worst1 = worst1.max(r1.values[i].abs() / (s_zz * norm.s_ff[i].re));
            worst2 = worst2.max(r2.values[i].abs() / (susc.chi_ff[i].im.abs() * s_zz + p.hbar()));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst1 <= TOL && worst2 <= TOL && within_budget(elapsed, Duration::from_secs(1)),
        format!("max |r1|/scale {worst1:.2e}, max |r2|/scale {worst2:.2e}, {elapsed:.2?}"),
    )
}

fn uncertainty_relation() -> Outcome {
    let start = Instant::now();
    let g = grid();
    let mut worst_vac = 0.0f64;
    let mut positive = true;
    let mut monotone = true;
    for p in sweep() {
        let gap = uncertainty_gap(&cavity_spectra(&p, &g), &cavity_susceptibilities(&p, &g), p.hbar()).unwrap();
        worst_vac = worst_vac.max(gap.max_relative());
        let mut last = gap.values.clone();
        for n in [0.5, 1.0, 2.0] {
            let net = build_one_sided_cavity(&p).with_input_state(InputState::thermal(n).unwrap()).unwrap();
            let susc = solve_susceptibilities(&net, &g).unwrap();
            let sym = symmetrize(&solve_unsym_spectra(&net, &g).unwrap()).unwrap();
            let gap = uncertainty_gap(&sym, &susc, p.hbar()).unwrap();
            positive &= gap.values.iter().zip(&gap.scales).all(|(v, s)| *v > TOL * s);
            monotone &= gap.values.iter().zip(&last).all(|(v, l)| v > l);
            last = gap.values;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst_vac <= TOL && positive && monotone && within_budget(elapsed, Duration::from_secs(1)),
        format!("vacuum max |gap|/scale {worst_vac:.2e}, thermal positive {positive}, monotone {monotone}, {elapsed:.2?}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let g = grid();
    let mut worst = 0.0f64;
    let mut measurable = 0.0f64;
    for p in sweep() {
        let net = build_one_sided_cavity(&p);
        let (cs, cp) = (cavity_susceptibilities(&p, &g), cavity_spectra(&p, &g));
        let es = solve_susceptibilities(&net, &g).unwrap();
        let ep = symmetrize(&solve_unsym_spectra(&net, &g).unwrap()).unwrap();
        for i in 0..g.len() {
            for (a, b) in [
                (cs.chi_zf[i], es.chi_zf[i]),
                (cs.chi_ff[i], es.chi_ff[i]),
                (cp.s_zz[i], ep.s_zz[i]),
                (cp.s_zf[i], ep.s_zf[i]),
                (cp.s_ff[i], ep.s_ff[i]),
            ] {
                worst = worst.max(rel(a, b));
            }
            measurable = measurable.max(es.chi_zz[i].norm().max(es.chi_fz[i].norm()) / es.chi_zf[i].norm());
        }
    }
    outcome(worst <= TOL && measurable <= TOL, format!("max relative difference {worst:.2e}, max |χ_ZZ|,|χ_FZ| / |χ_ZF| {measurable:.2e}"))
}

fn kubo_formula() -> Outcome {
    let g = grid();
    let worst_of = |net: &LinearNetwork| {
        let hbar = net.units().hbar();
        let chi = solve_susceptibilities(net, &g).unwrap().chi_ff;
        let s = solve_unsym_spectra(net, &g).unwrap().s_ff;
        let r = kubo_check(&s, &chi, hbar).unwrap();
        (0..g.len()).map(|i| r[i].re.abs() / kubo_scale(&s, &chi, hbar, i)).fold(0.0, f64::max)
    };
    let cavity = sweep().iter().map(|p| worst_of(&build_one_sided_cavity(p))).fold(0.0, f64::max);
    let two_mode = worst_of(&random_two_mode_network(&mut rng(SWEEP_SEED + 4), InputState::Vacuum));
    outcome(cavity <= TOL && two_mode <= TOL, format!("cavity max residual {cavity:.2e}, two-mode network {two_mode:.2e}"))
}

fn qubit_readout() -> Outcome {
    let r = qubit_rates(&CavityParams::new(2.0, 0.0, 1.0, PI / 2.0).unwrap()).unwrap();
    let exact = (r.gamma_meas - 2.0).abs() <= TOL && (r.gamma_phi - 2.0).abs() <= TOL && (r.ratio - 1.0).abs() <= TOL;
    let mut rr = rng(SWEEP_SEED + 5);
    let mut worst_angle = 0.0f64;
    let mut min_ratio = f64::INFINITY;
    for _ in 0..20 {
        let p = CavityParams::new(rr.gen_range(0.1..10.0), rr.gen_range(-10.0..10.0), rr.gen_range(0.1..5.0), 0.0).unwrap();
        let ratio_at = |t: f64| qubit_rates(&p.with_theta(t).unwrap()).map_or(f64::INFINITY, |r| r.ratio);
        for k in 0..10_000 {
            min_ratio = min_ratio.min(ratio_at(k as f64 * PI / 10_000.0));
        }
        let found = sweep_argmin(ratio_at, 10_000);
        worst_angle = worst_angle.max(angle_gap_mod_pi(found, optimal_angle(p.gamma(), p.delta()).unwrap()));
    }
    outcome(
        exact && worst_angle <= 1e-6 && min_ratio >= 1.0 - 1e-12,
        format!(
            "Γ_meas {:.12}, Γ_φ {:.12}, ratio {:.12}; worst θ_opt error {worst_angle:.2e} rad; min ratio {min_ratio:.15}",
            r.gamma_meas, r.gamma_phi, r.ratio
        ),
    )
}

fn sideband_correlation() -> Outcome {
    let omega_m = 1.0;
    let mut worst_c = 0.0f64;
    let mut worst_chi = 0.0f64;
    for ratio in [1e-2, 1e-3] {
        let gamma = ratio * omega_m;
        let gbar = 0.05;
        for sign in [1.0, -1.0] {
            let p = CavityParams::new(gamma, sign * omega_m, gbar, 0.4).unwrap();
            let g = FrequencyGrid::new(vec![omega_m]).unwrap();
            let norm = normalize(&cavity_spectra(&p, &g), &cavity_susceptibilities(&p, &g)).unwrap();
            let err = (norm.s_zf[0] - Complex64::new(0.0, sign * p.hbar() / 2.0)).norm();
            worst_c = worst_c.max(err / (p.hbar() / 2.0 * ratio));
            if ratio == 1e-3 {
                let approx = -sign * p.hbar() * gbar * gbar / gamma;
                worst_chi = worst_chi.max((CavityPoint::at(&p, omega_m).chi_ff.im / approx - 1.0).abs());
            }
        }
    }
    outcome(worst_c <= 5.0 && worst_chi <= 0.01, format!("max C = {worst_c:.3} (≤ 5), Im χ_FF(ω_m) relative error {worst_chi:.2e}"))
}

fn sideband_asymmetry_ratio() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut at_two = f64::NAN;
    for n in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let (p, osc) = weak_optomech(n);
        let grid = asymmetry_window(&p, &osc, 2001).unwrap();
        let r = sideband_asymmetry(&p, &osc, &grid).unwrap();
        let expected = (n + 1.0) / n;
        worst = worst.max((r.ratio / expected - 1.0).abs());
        if n == 2.0 {
            at_two = r.ratio;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 0.02 && (at_two / 1.5 - 1.0).abs() <= 0.02 && within_budget(elapsed, Duration::from_secs(2)),
        format!("max relative deviation from (n+1)/n {worst:.2e}, n=2 ratio {at_two:.5}, {elapsed:.2?}"),
    )
}

fn mimo_determinant() -> Outcome {
    let g = grid();
    let mut r = rng(SWEEP_SEED + 8);
    let (a, b) = (build_one_sided_cavity(&random_params(&mut r)), build_one_sided_cavity(&random_params(&mut r)));
    let hot = b.with_input_state(InputState::thermal(1.0).unwrap()).unwrap();
    let det = |parts: &[&LinearNetwork]| {
        mimo_quantum_limit(&solve_spectral_matrix(&LinearNetwork::combine(parts).unwrap(), &g).unwrap()).unwrap()
    };
    let single = det(&[&a]);
    let pair = det(&[&a, &b]);
    let thermal_single = det(&[&hot]);
    let thermal_pair = det(&[&a, &hot]);
    let positive = |d: &detnoise::constraints::Residual| d.values.iter().zip(&d.scales).all(|(v, s)| *v > DEFAULT_TOL * s);
    outcome(
        single.within(DEFAULT_TOL) && pair.within(DEFAULT_TOL) && positive(&thermal_single) && thermal_pair.within(DEFAULT_TOL),
        format!(
            "N=1 vacuum max |det|/scale {:.2e}, N=2 vacuum {:.2e}, thermal block min det/scale {:.2e}",
            single.max_relative(),
            pair.max_relative(),
            thermal_single.values.iter().zip(&thermal_single.scales).map(|(v, s)| v / s).fold(f64::INFINITY, f64::min)
        ),
    )
}

fn simultaneous_measurability() -> Outcome {
    let g = grid();
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut check = |chi_zz: Complex64, chi_fz: Complex64, chi_zf: Complex64| {
        worst = worst.max(chi_zz.norm().max(chi_fz.norm()) / chi_zf.norm());
    };
    for p in sweep() {
        let s = solve_susceptibilities(&build_one_sided_cavity(&p), &g).unwrap();
        (0..g.len()).for_each(|i| check(s.chi_zz[i], s.chi_fz[i], s.chi_zf[i]));
        count += 1;
    }
    let mut r = rng(SWEEP_SEED + 9);
    let mut nets = Vec::new();
    for _ in 0..20 {
        let net = random_two_mode_network(&mut r, InputState::Vacuum);
        let s = solve_susceptibilities(&net, &g).unwrap();
        (0..g.len()).for_each(|i| check(s.chi_zz[i], s.chi_fz[i], s.chi_zf[i]));
        nets.push(net);
        count += 1;
    }
    let multi = LinearNetwork::combine(&[&nets[0], &nets[1]]).unwrap();
    let obs = multi.ordered_observables();
    for (z, f) in [(0, 1), (2, 3)] {
        let chi = |a: usize, b: usize| solve_pair_susceptibility(&multi, &obs[a], &obs[b], &g).unwrap();
        let (zf, zz, fz) = (chi(z, f), chi(z, z), chi(f, z));
        (0..g.len()).for_each(|i| check(zz[i], fz[i], zf[i]));
        // readouts of different detectors commute as well
        let cross = chi(0, 2);
        (0..g.len()).for_each(|i| check(cross[i], Complex64::new(0.0, 0.0), zf[i]));
    }
    count += 1;
    outcome(worst <= 1e-12, format!("{count} networks, max |χ_ZZ|,|χ_FZ| / |χ_ZF| {worst:.2e}"))
}

fn random_config(r: &mut impl Rng, dir: &std::path::Path) -> RunConfig {
    let commands = [Command::Spectra, Command::Check, Command::Qubit, Command::Mech, Command::MimoCheck];
    let input = match r.gen_range(0..3) {
        0 => InputSpec::Vacuum,
        1 => InputSpec::Thermal(r.gen_range(0.0..10.0)),
        _ => InputSpec::Squeezed { r: r.gen_range(-2.0..2.0), phi: r.gen_range(-7.0..7.0) },
    };
    let path = |r: &mut dyn rand::RngCore, name: &str| -> Option<PathBuf> {
        if r.gen_bool(0.5) { Some(dir.join(name)) } else { None }
    };
    RunConfig {
        command: commands[r.gen_range(0..commands.len())],
        gamma: r.gen_range(0.1..10.0),
        delta: r.gen_range(-10.0..10.0),
        gbar: r.gen_range(0.1..5.0),
        theta: r.gen_range(-7.0..7.0),
        hbar: r.gen_range(1e-3..10.0),
        omega_max: r.gen_range(0.1..100.0),
        n_half: r.gen_range(1..1000),
        input,
        omega_m: r.gen_range(0.1..10.0),
        gamma_m: r.gen_range(1e-6..1.0),
        mass: r.gen_range(0.1..10.0),
        n_occ: r.gen_range(0.0..20.0),
        n_window: r.gen_range(2..5000),
        format: if r.gen_bool(0.5) { Format::Json } else { Format::Csv },
        output: path(r, "out file.csv"),
        spectra_output: path(r, "spectra.csv"),
        single_sided: r.gen_bool(0.5),
        matrix_file: path(r, "m.csv"),
    }
}

fn cli_determinism() -> Outcome {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let spectra_out = dir.path().join("spectra");
    let invocations: Vec<Vec<String>> = [
        "spectra --gamma 2 --delta 0 --gbar 1 --theta 1.5707963 --omega-max 5 --n-half 100 --format csv",
        "spectra --gamma 0.7 --delta -1.2 --gbar 0.4 --theta 0.3 --input squeezed:0.5,1 --format json",
        "check --gamma 1.3 --delta 0.8 --gbar 0.6 --theta 2 --input thermal:1 --n-half 64",
        "qubit --gamma 2 --delta 0.5 --gbar 1 --theta 0.2 --format json",
        "mech --gamma 0.01 --gbar 3e-5 --omega-m 1 --gamma-m 1e-4 --n-occ 2",
    ]
    .iter()
    .map(|s| s.split(' ').map(String::from).collect())
    .collect();
    let mut identical = true;
    for args in &invocations {
        let mut runs = Vec::new();
        for _ in 0..2 {
            let status = Process::new(env!("CARGO_BIN_EXE_detnoise"))
                .args(args)
                .arg("--output")
                .arg(&out)
                .arg("--spectra-output")
                .arg(&spectra_out)
                .status()
                .unwrap();
            identical &= status.success();
            let spectra = if args[0] == "mech" { fs::read(&spectra_out).unwrap() } else { Vec::new() };
            runs.push((fs::read(&out).unwrap(), spectra));
        }
        identical &= runs[0] == runs[1];
    }
    let mut r = rng(SWEEP_SEED + 10);
    let mut round_trips = 0;
    for _ in 0..50 {
        let cfg = random_config(&mut r, dir.path());
        if RunConfig::from_args(cfg.to_args()).map(|back| back == cfg).unwrap_or(false) {
            round_trips += 1;
        }
    }
    outcome(
        identical && round_trips == 50,
        format!("{} invocations byte-identical: {identical}; round-trip {round_trips}/50", invocations.len()),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("quantum-limit equalities", quantum_limit_equalities),
        ("uncertainty relation", uncertainty_relation),
        ("engine vs closed forms", oracle_equivalence),
        ("Kubo formula", kubo_formula),
        ("qubit readout", qubit_readout),
        ("sideband correlation", sideband_correlation),
        ("sideband asymmetry", sideband_asymmetry_ratio),
        ("MIMO determinant", mimo_determinant),
        ("simultaneous measurability", simultaneous_measurability),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("criterion {:>2} {} {name}: {}", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
