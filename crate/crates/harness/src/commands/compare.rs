use std::fmt::Write as _;

use boussinesq_core::asymptotics::{
    classify_region, error_band, eval_gb_painleve, eval_mb_painleve, gb_error_band, painleve_variable,
    RegionConstants, RegionLabel,
};
use boussinesq_core::painleve::{
    clarkson_mcleod_from_seed, extract_from_simulation, project_onto_piv, IkParams, PainleveSolution,
    PivParams,
};
use boussinesq_core::spectral::{FieldState, System};

use super::{
    initial_state, num, painleve_error, run_to_times, system_tag, time_tag, write_file, Context,
};
use crate::config::{Builtin, InitialData, PainleveSource, RunConfig};
use crate::error::HarnessError;

/// Extra `|y|` kept around the window so interpolation stencils fit.
const MARGIN: f64 = 0.25;
const SEED_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub x: f64,
    pub t: f64,
    pub y: f64,
    pub sim: Vec<f64>,
    pub asym: Vec<f64>,
    pub err: Vec<f64>,
    pub region: RegionLabel,
    pub order: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSummary {
    pub t: f64,
    /// Max error per field over the window.
    pub max_err: Vec<f64>,
    /// Printed order at `x = 0`.
    pub order: f64,
    pub rows: usize,
    pub skipped: usize,
}

fn field_names(system: System) -> &'static [&'static str] {
    match system {
        System::Mb => &["p", "q"],
        System::Gb => &["u"],
    }
}

/// Comparison rows for one snapshot; rows whose asymptotic value cannot be
/// evaluated are counted and dropped.
pub fn compare_snapshot(
    snap: &FieldState,
    sol: &PainleveSolution,
    y_max: f64,
    rc: &RegionConstants,
) -> Result<(Vec<ComparisonRow>, usize), HarnessError> {
    let t = snap.t();
    let grid = snap.grid();
    let mut rows = Vec::new();
    let mut skipped = 0;
    for j in 0..grid.len() {
        let x = grid.x(j);
        let y = painleve_variable(x, t);
        if y.abs() > y_max {
            continue;
        }
        let region = classify_region(x, t, rc).map_err(|e| HarnessError::Solver(e.to_string()))?;
        let (sim, asym, order) = match snap.system() {
            System::Mb => {
                let Ok((p, q)) = eval_mb_painleve(x, t, sol) else {
                    skipped += 1;
                    continue;
                };
                (
                    vec![snap.field_a()[j], snap.field_b()[j]],
                    vec![p, q],
                    error_band(region, x, t),
                )
            }
            System::Gb => {
                let Ok(u) = eval_gb_painleve(x, t, sol) else {
                    skipped += 1;
                    continue;
                };
                (vec![snap.field_a()[j]], vec![u], gb_error_band(t))
            }
        };
        if !asym.iter().all(|v| v.is_finite()) {
            skipped += 1;
            continue;
        }
        let err = sim.iter().zip(&asym).map(|(s, a)| (s - a).abs()).collect();
        rows.push(ComparisonRow {
            x,
            t,
            y,
            sim,
            asym,
            err,
            region,
            order,
        });
    }
    Ok((rows, skipped))
}

pub fn rows_csv(system: System, rows: &[ComparisonRow]) -> String {
    let names = field_names(system);
    let mut out = String::from("x,t,y");
    for kind in ["sim", "asym", "err"] {
        for n in names {
            let _ = write!(out, ",{n}_{kind}");
        }
    }
    out.push_str(",region,order\n");
    for r in rows {
        let _ = write!(out, "{},{},{}", num(r.x), num(r.t), num(r.y));
        for v in r.sim.iter().chain(&r.asym).chain(&r.err) {
            let _ = write!(out, ",{}", num(*v));
        }
        let _ = writeln!(out, ",{},{}", r.region, num(r.order));
    }
    out
}

/// Initial data of the MB run that maps onto a GB configuration, for the
/// snapshot-based sources.
fn companion_mb(cfg: &RunConfig) -> Result<InitialData, HarnessError> {
    match &cfg.initial {
        InitialData::Builtin(Builtin::PaperGb) => Ok(InitialData::Builtin(Builtin::PaperMb)),
        InitialData::Builtin(Builtin::Zero) => Ok(InitialData::Builtin(Builtin::Zero)),
        _ => Err(HarnessError::Config(
            "a GB comparison from expression data needs compare.source = seed".into(),
        )),
    }
}

/// `P` for the comparison, per the configured source.
fn painleve_source(
    ctx: &Context,
    cfg: &RunConfig,
    snaps: &[FieldState],
) -> Result<PainleveSolution, HarnessError> {
    let reach = cfg.compare.y_max + MARGIN;
    let snapshot_based = |ctx: &Context| -> Result<FieldState, HarnessError> {
        let last = snaps.last().expect("output times are non-empty");
        if cfg.system == System::Mb {
            return Ok(last.clone());
        }
        // A GB run has no (p, q); rerun the MB data that maps onto it.
        let companion = companion_mb(cfg)?;
        ctx.note("running the companion MB simulation for the Painleve source");
        let init = initial_state(cfg.grid, System::Mb, &companion)?;
        let mb = run_to_times(ctx, init, &[last.t()], cfg.dt, cfg.dealias)?;
        Ok(mb.into_iter().next().expect("one output time"))
    };
    match cfg.compare.source {
        PainleveSource::Extract => {
            let mb = snapshot_based(ctx)?;
            extract_from_simulation(&mb, reach).map_err(painleve_error)
        }
        PainleveSource::Projection => {
            let mb = snapshot_based(ctx)?;
            Ok(project_onto_piv(&mb, reach).map_err(painleve_error)?.solution)
        }
        PainleveSource::Seed { a, arg_s, y_seed } => {
            let ik = IkParams::new(a, arg_s, PivParams::default()).map_err(painleve_error)?;
            let seeded =
                clarkson_mcleod_from_seed(&ik, y_seed, reach + MARGIN, SEED_TOL).map_err(painleve_error)?;
            Ok(seeded.solution)
        }
    }
}

pub fn summary_csv(system: System, summary: &[TimeSummary]) -> String {
    let names = field_names(system);
    let mut out = String::from("t");
    for n in names {
        let _ = write!(out, ",max_{n}_err");
    }
    let last = names[names.len() - 1];
    let _ = writeln!(out, ",order,{last}_err_ratio,order_ratio,rows,skipped");
    for (i, s) in summary.iter().enumerate() {
        let _ = write!(out, "{}", num(s.t));
        for e in &s.max_err {
            let _ = write!(out, ",{}", num(*e));
        }
        let _ = write!(out, ",{}", num(s.order));
        match i.checked_sub(1).map(|k| &summary[k]) {
            Some(prev) => {
                let last = s.max_err.len() - 1;
                let _ = write!(
                    out,
                    ",{},{}",
                    num(prev.max_err[last] / s.max_err[last]),
                    num(prev.order / s.order)
                );
            }
            None => out.push_str(",,"),
        }
        let _ = writeln!(out, ",{},{}", s.rows, s.skipped);
    }
    out
}

fn gnuplot_script(system: System, times: &[f64], y_max: f64) -> String {
    let tag = system_tag(system);
    let reach = y_max.max(3.0);
    let mut out = String::new();
    let _ = writeln!(out, "# simulated (solid) vs leading-order asymptotics (dashed) against y");
    let _ = writeln!(out, "set datafile separator ','");
    let _ = writeln!(out, "set terminal png size 900,600");
    let _ = writeln!(out, "set xlabel 'y'");
    let _ = writeln!(out, "set xrange [{}:{}]", -reach, reach);
    let _ = writeln!(out, "set key outside");
    let names = field_names(system);
    for (f, name) in names.iter().enumerate() {
        let sim_col = 4 + f;
        let asym_col = 4 + names.len() + f;
        let _ = writeln!(out, "set output '{tag}_compare_{name}.png'");
        let _ = writeln!(out, "set ylabel '{name}'");
        let mut parts = Vec::new();
        for (i, t) in times.iter().enumerate() {
            let file = format!("{tag}_compare_t{}.csv", time_tag(*t));
            let lc = i + 1;
            parts.push(format!(
                "'{file}' every ::1 using 3:{sim_col} with lines lc {lc} dt 1 title '{name} sim t={t}'"
            ));
            parts.push(format!(
                "'{file}' every ::1 using 3:{asym_col} with lines lc {lc} dt 2 title '{name} asym t={t}'"
            ));
        }
        let _ = writeln!(out, "plot {}", parts.join(", \\\n     "));
    }
    let _ = writeln!(out, "set output");
    out
}

pub fn cmd_compare(ctx: &Context) -> Result<(), HarnessError> {
    let cfg = ctx.load_config()?;
    if cfg.system == System::Gb && !matches!(cfg.compare.source, PainleveSource::Seed { .. }) {
        companion_mb(&cfg)?;
    }
    let dir = ctx.out_dir(Some(&cfg.out_dir));
    let init = initial_state(cfg.grid, cfg.system, &cfg.initial)?;
    let snaps = run_to_times(ctx, init, &cfg.times, cfg.dt, cfg.dealias)?;
    let sol = painleve_source(ctx, &cfg, &snaps)?;
    let tag = system_tag(cfg.system);

    let mut summary = Vec::new();
    for snap in &snaps {
        let (rows, skipped) = compare_snapshot(snap, &sol, cfg.compare.y_max, &cfg.regions)?;
        if rows.is_empty() {
            return Err(HarnessError::EmptyWindow(format!(
                "no comparison rows with |y| <= {} at t={}",
                cfg.compare.y_max,
                snap.t()
            )));
        }
        let nf = rows[0].err.len();
        let max_err = (0..nf)
            .map(|f| rows.iter().fold(0f64, |m, r| m.max(r.err[f])))
            .collect();
        let order = match cfg.system {
            System::Mb => error_band(RegionLabel::Painleve, 0.0, snap.t()),
            System::Gb => gb_error_band(snap.t()),
        };
        let name = format!("{tag}_compare_t{}.csv", time_tag(snap.t()));
        write_file(&dir, &name, &rows_csv(cfg.system, &rows))?;
        if skipped > 0 {
            ctx.note(format!("t={}: skipped {skipped} rows where P could not be evaluated", snap.t()));
        }
        summary.push(TimeSummary {
            t: snap.t(),
            max_err,
            order,
            rows: rows.len(),
            skipped,
        });
    }
    let table = summary_csv(cfg.system, &summary);
    write_file(&dir, &format!("{tag}_summary.csv"), &table)?;
    write_file(&dir, &format!("{tag}_compare.gp"), &gnuplot_script(cfg.system, &cfg.times, cfg.compare.y_max))?;
    ctx.print(table);
    Ok(())
}
