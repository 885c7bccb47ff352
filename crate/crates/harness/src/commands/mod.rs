//! Subcommand implementations and the plumbing they share.

pub mod compare;
pub mod painleve;
pub mod regions;
pub mod rh_check;
pub mod simulate;

use std::fs;
use std::path::{Path, PathBuf};

use boussinesq_core::initial::{paper_gb, paper_mb};
use boussinesq_core::painleve::PainleveError;
use boussinesq_core::spectral::{
    integrate, suggest_dt, FieldState, PeriodicGrid, SpectralError, StepperConfig, System,
};

use crate::config::{parse_config, Builtin, InitialData, RunConfig};
use crate::error::HarnessError;

/// Settings common to every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Context {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub quiet: bool,
}

impl Context {
    pub fn load_config(&self) -> Result<RunConfig, HarnessError> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| HarnessError::Config("this command needs --config <path>".into()))?;
        let text = fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        parse_config(&text).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    /// `--out` wins over the configured directory.
    pub fn out_dir(&self, configured: Option<&Path>) -> PathBuf {
        self.out
            .clone()
            .or_else(|| configured.map(Path::to_path_buf))
            .unwrap_or_else(|| PathBuf::from("bqlab-out"))
    }

    pub fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    pub fn print(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            print!("{}", msg.as_ref());
        }
    }
}

pub(crate) fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, HarnessError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

/// 17 significant digits.
pub(crate) fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub(crate) fn solver(e: SpectralError) -> HarnessError {
    HarnessError::Solver(e.to_string())
}

pub(crate) fn painleve_error(e: PainleveError) -> HarnessError {
    match e {
        PainleveError::Pole { .. } | PainleveError::PVanished { .. } => HarnessError::Pole(e.to_string()),
        PainleveError::WindowEmpty { .. } => HarnessError::EmptyWindow(e.to_string()),
        PainleveError::InvalidInput(_) => HarnessError::Config(e.to_string()),
        _ => HarnessError::Solver(e.to_string()),
    }
}

pub(crate) fn system_tag(system: System) -> &'static str {
    match system {
        System::Mb => "mb",
        System::Gb => "gb",
    }
}

pub(crate) fn initial_state(
    grid: PeriodicGrid,
    system: System,
    initial: &InitialData,
) -> Result<FieldState, HarnessError> {
    match initial {
        InitialData::Builtin(Builtin::PaperMb) => paper_mb(grid),
        InitialData::Builtin(Builtin::PaperGb) => paper_gb(grid),
        InitialData::Builtin(Builtin::Zero) => Ok(FieldState::zeros(grid, system)),
        InitialData::Expressions { a, b } => {
            FieldState::from_fn(grid, system, |x| a.eval(x), |x| b.eval(x))
        }
    }
    .map_err(|e| HarnessError::Config(format!("initial data: {e}")))
}

/// Snapshots at each of `times`, advancing one trajectory.
pub(crate) fn run_to_times(
    ctx: &Context,
    init: FieldState,
    times: &[f64],
    dt: Option<f64>,
    dealias: bool,
) -> Result<Vec<FieldState>, HarnessError> {
    let dt = dt.unwrap_or_else(|| suggest_dt(init.grid(), init.system()));
    let mut state = init;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let mut cfg = StepperConfig::new(dt, t);
        cfg.dealias = dealias;
        state = integrate(&state, &cfg).map_err(solver)?;
        ctx.note(format!("{} t={t}", state.system()));
        out.push(state.clone());
    }
    Ok(out)
}

/// File-name form of a time: `100`, `0.5`.
pub(crate) fn time_tag(t: f64) -> String {
    format!("{t}")
}
