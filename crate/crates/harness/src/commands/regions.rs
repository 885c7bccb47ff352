use std::fmt::Write as _;

use boussinesq_core::asymptotics::{classify_region, RegionConstants, RegionLabel};

use super::{num, write_file, Context};
use crate::error::HarnessError;

/// Relative offset for the probes on either side of a boundary.
const PROBE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RegionsArgs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    /// Explicit times; replaces the log-spaced samples when non-empty.
    pub times: Vec<f64>,
}

impl Default for RegionsArgs {
    fn default() -> Self {
        let d = RegionConstants::default();
        Self {
            c1: d.c1,
            c2: d.c2,
            c3: d.c3,
            t_min: 1.0,
            t_max: 1000.0,
            samples: 200,
            times: Vec::new(),
        }
    }
}

impl RegionsArgs {
    pub fn constants(&self) -> Result<RegionConstants, HarnessError> {
        RegionConstants::new(self.c1, self.c2, self.c3).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn time_samples(&self) -> Result<Vec<f64>, HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if !self.times.is_empty() {
            if self.times.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
                return bad("--times must be positive".into());
            }
            return Ok(self.times.clone());
        }
        if !(self.t_min > 0.0 && self.t_max.is_finite() && self.t_max > self.t_min) {
            return bad(format!(
                "need 0 < --t-min < --t-max, got {} and {}",
                self.t_min, self.t_max
            ));
        }
        if !(2..=100_000).contains(&self.samples) {
            return bad(format!("--samples must lie in 2..=100000, got {}", self.samples));
        }
        let (a, b) = (self.t_min.ln(), self.t_max.ln());
        let n = self.samples - 1;
        Ok((0..=n)
            .map(|i| match i {
                0 => self.t_min,
                _ if i == n => self.t_max,
                _ => (a + (b - a) * i as f64 / n as f64).exp(),
            })
            .collect())
    }
}

/// Label from the printed inequalities, written out independently of the
/// classifier.
fn expected(ax: f64, t: f64, rc: &RegionConstants) -> RegionLabel {
    if ax < rc.c1 * t.sqrt() {
        RegionLabel::Painleve
    } else if ax <= rc.c2 * t.powf(0.75) {
        RegionLabel::TransitionI
    } else if ax <= rc.c3 * t {
        RegionLabel::TransitionII
    } else {
        RegionLabel::Dispersive
    }
}

/// Probes both signs of `x` on and beside every boundary; returns the
/// number of disagreements.
pub fn consistency_failures(times: &[f64], rc: &RegionConstants) -> usize {
    let mut bad = 0;
    for &t in times {
        for b in rc.boundaries(t) {
            for x in [b * (1.0 - PROBE), b, b * (1.0 + PROBE)] {
                for sx in [x, -x] {
                    match classify_region(sx, t, rc) {
                        Ok(l) if l == expected(x, t, rc) => {}
                        _ => bad += 1,
                    }
                }
            }
        }
    }
    bad
}

pub fn boundaries_csv(times: &[f64], rc: &RegionConstants) -> String {
    let mut out = String::from("t,x1,x2,x3\n");
    for &t in times {
        let [a, b, c] = rc.boundaries(t);
        let _ = writeln!(out, "{},{},{},{}", num(t), num(a), num(b), num(c));
    }
    out
}

fn gnuplot_script() -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# region boundaries in the upper half (x, t)-plane");
    let _ = writeln!(out, "set datafile separator ','");
    let _ = writeln!(out, "set terminal png size 900,600");
    let _ = writeln!(out, "set output 'regions.png'");
    let _ = writeln!(out, "set xlabel 'x'");
    let _ = writeln!(out, "set ylabel 't'");
    let _ = writeln!(out, "set key outside");
    let _ = writeln!(
        out,
        "plot 'regions.csv' every ::1 using 2:1 with lines lc 1 title 'x = c1 t^(1/2)', \\\n     \
         'regions.csv' every ::1 using (-$2):1 with lines lc 1 notitle, \\\n     \
         'regions.csv' every ::1 using 3:1 with lines lc 2 title 'x = c2 t^(3/4)', \\\n     \
         'regions.csv' every ::1 using (-$3):1 with lines lc 2 notitle, \\\n     \
         'regions.csv' every ::1 using 4:1 with lines lc 3 title 'x = c3 t', \\\n     \
         'regions.csv' every ::1 using (-$4):1 with lines lc 3 notitle"
    );
    let _ = writeln!(out, "set output");
    out
}

pub fn cmd_regions(ctx: &Context, args: &RegionsArgs) -> Result<(), HarnessError> {
    let rc = args.constants()?;
    let times = args.time_samples()?;
    let dir = ctx.out_dir(None);
    let csv = boundaries_csv(&times, &rc);
    write_file(&dir, "regions.csv", &csv)?;
    write_file(&dir, "regions.gp", &gnuplot_script())?;
    if !args.times.is_empty() {
        ctx.print(&csv);
    }
    let bad = consistency_failures(&times, &rc);
    if bad > 0 {
        return Err(HarnessError::SuiteFailure(format!(
            "{bad} boundary probes disagree with classify_region"
        )));
    }
    ctx.note(format!("{} times, boundary probes consistent", times.len()));
    Ok(())
}
