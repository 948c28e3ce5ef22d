use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::netsolve::InputState;
use crate::{CavityParams, Error, MechOscillator, Result, UnitConvention};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Susceptibilities and spectra of the homodyne cavity detector
    Spectra,
    /// Constraint audit; exits 3 on any violation
    Check,
    /// Dispersive qubit readout rates
    Qubit,
    /// Mechanical output spectra and sideband asymmetry
    Mech,
    /// Determinant check of spectral matrices read from --matrix-file
    MimoCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// `vacuum`, `thermal:N` or `squeezed:R,PHI`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "String")]
pub enum InputSpec {
    Vacuum,
    Thermal(f64),
    Squeezed { r: f64, phi: f64 },
}

impl InputSpec {
    pub fn to_state(self) -> Result<InputState> {
        match self {
            InputSpec::Vacuum => Ok(InputState::Vacuum),
            InputSpec::Thermal(n) => InputState::thermal(n),
            InputSpec::Squeezed { r, phi } => InputState::squeezed(r, phi),
        }
    }
}

impl FromStr for InputSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
        match s.split_once(':') {
            None if s == "vacuum" => Ok(InputSpec::Vacuum),
            Some(("thermal", n)) => Ok(InputSpec::Thermal(num(n)?)),
            Some(("squeezed", rest)) => {
                let (r, phi) = rest.split_once(',').ok_or("squeezed input is squeezed:R,PHI")?;
                Ok(InputSpec::Squeezed { r: num(r)?, phi: num(phi)? })
            }
            _ => Err(format!("unknown input {s:?}; expected vacuum, thermal:N or squeezed:R,PHI")),
        }
    }
}

impl fmt::Display for InputSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputSpec::Vacuum => write!(f, "vacuum"),
            InputSpec::Thermal(n) => write!(f, "thermal:{n}"),
            InputSpec::Squeezed { r, phi } => write!(f, "squeezed:{r},{phi}"),
        }
    }
}

impl From<InputSpec> for String {
    fn from(s: InputSpec) -> String {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Parser, Serialize)]
#[command(name = "detnoise", version, about = "Noise spectra and quantum constraints of linear detectors")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,

    /// Cavity decay rate γ
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Laser detuning Δ (ignored by `mech`, which runs at ±ω_m)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    /// Linearized coupling ḡ
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub gbar: f64,
    /// Homodyne angle θ in radians
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub hbar: f64,

    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub omega_max: f64,
    /// Points per half grid; the grid has 2·n_half + 1 points
    #[arg(long, default_value_t = 100)]
    pub n_half: usize,

    #[arg(long, default_value = "vacuum", allow_hyphen_values = true)]
    pub input: InputSpec,

    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega_m: f64,
    #[arg(long, default_value_t = 1e-4, allow_negative_numbers = true)]
    pub gamma_m: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mass: f64,
    /// Mean phonon occupation ⟨n⟩
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub n_occ: f64,
    /// Points in the `mech` window ω_m ± 10 γ_eff
    #[arg(long, default_value_t = 2001)]
    pub n_window: usize,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// CSV file for the two `mech` spectra (JSON output always includes them)
    #[arg(long)]
    pub spectra_output: Option<PathBuf>,
    /// Export `spectra` as single-sided (ω ≥ 0, doubled)
    #[arg(long)]
    pub single_sided: bool,
    /// Input for `mimo-check`
    #[arg(long)]
    pub matrix_file: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args<I, T>(args: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        Self::try_parse_from(args)
    }

    /// Canonical invocation (program name first) that parses back to `self`.
    pub fn to_args(&self) -> Vec<String> {
        let cmd = self.command.to_possible_value().expect("no skipped variants");
        let fmt = self.format.to_possible_value().expect("no skipped variants");
        let mut a = vec!["detnoise".to_string(), cmd.get_name().to_string()];
        let mut push = |k: &str, v: String| a.push(format!("--{k}={v}"));
        push("gamma", self.gamma.to_string());
        push("delta", self.delta.to_string());
        push("gbar", self.gbar.to_string());
        push("theta", self.theta.to_string());
        push("hbar", self.hbar.to_string());
        push("omega-max", self.omega_max.to_string());
        push("n-half", self.n_half.to_string());
        push("input", self.input.to_string());
        push("omega-m", self.omega_m.to_string());
        push("gamma-m", self.gamma_m.to_string());
        push("mass", self.mass.to_string());
        push("n-occ", self.n_occ.to_string());
        push("n-window", self.n_window.to_string());
        push("format", fmt.get_name().to_string());
        if let Some(p) = &self.output {
            push("output", p.display().to_string());
        }
        if let Some(p) = &self.spectra_output {
            push("spectra-output", p.display().to_string());
        }
        if let Some(p) = &self.matrix_file {
            push("matrix-file", p.display().to_string());
        }
        if self.single_sided {
            a.push("--single-sided".into());
        }
        a
    }

    pub fn units(&self) -> Result<UnitConvention> {
        UnitConvention::new(self.hbar, 1.0)
    }

    pub fn cavity(&self) -> Result<CavityParams> {
        Ok(CavityParams::new(self.gamma, self.delta, self.gbar, self.theta)?.with_units(self.units()?))
    }

    pub fn oscillator(&self) -> Result<MechOscillator> {
        MechOscillator::with_occupation(self.omega_m, self.gamma_m, self.mass, self.n_occ)
    }

    pub fn grid(&self) -> Result<crate::FrequencyGrid> {
        crate::make_symmetric_grid(self.omega_max, self.n_half)
    }

    pub fn require_window(&self) -> Result<()> {
        if self.n_window < 2 {
            return Err(Error::InvalidArgument("n-window must be at least 2".into()));
        }
        Ok(())
    }
}
