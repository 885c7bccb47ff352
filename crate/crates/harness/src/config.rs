//! Line-oriented run configuration:
//!
//! ```text
//! # comment
//! run.system      = mb            # mb | gb
//! initial.builtin = paper-mb      # paper-mb | paper-gb | zero
//! initial.a       = -exp(-x^2/20)/10   # instead of a builtin: both fields
//! initial.b       =  exp(-x^2/20)/10
//! grid.L          = 800           # half-length, domain [-L, L)
//! grid.N          = 16384
//! stepping.dt     = auto          # or a number
//! stepping.dealias = true
//! output.times    = 100, 300
//! output.dir      = out
//! compare.y_max   = 2
//! compare.source  = extract       # extract | projection | seed
//! compare.seed_a  = 0.05          # seed source only
//! compare.seed_arg_s = 0
//! compare.seed_y  = -40
//! regions.c1 = 2
//! regions.c2 = 1
//! regions.c3 = 0.25
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use boussinesq_core::asymptotics::RegionConstants;
use boussinesq_core::spectral::{PeriodicGrid, System};

use crate::expr::{parse_expr, Expr};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line, 0 when the problem is not tied to a line.
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.msg)
        } else {
            write!(f, "line {}: {}", self.line, self.msg)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    PaperMb,
    PaperGb,
    Zero,
}

impl Builtin {
    pub fn name(&self) -> &'static str {
        match self {
            Builtin::PaperMb => "paper-mb",
            Builtin::PaperGb => "paper-gb",
            Builtin::Zero => "zero",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Builtin(Builtin),
    Expressions { a: Expr, b: Expr },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PainleveSource {
    /// Pointwise inversion of the `q` formula at the last output time.
    Extract,
    /// Least-squares fit of a transcendent to the last MB snapshot.
    Projection,
    /// Solution seeded from the oscillatory asymptotics.
    Seed { a: f64, arg_s: f64, y_seed: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareSpec {
    pub y_max: f64,
    pub source: PainleveSource,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: System,
    pub initial: InitialData,
    pub grid: PeriodicGrid,
    /// `None` selects the suggested step.
    pub dt: Option<f64>,
    pub dealias: bool,
    pub times: Vec<f64>,
    pub compare: CompareSpec,
    pub regions: RegionConstants,
    pub out_dir: PathBuf,
}

/// One `key = value` line.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub section: String,
    pub key: String,
    pub value: String,
}

const KEYS: &[&str] = &[
    "run.system",
    "initial.builtin",
    "initial.a",
    "initial.b",
    "grid.L",
    "grid.N",
    "stepping.dt",
    "stepping.dealias",
    "output.times",
    "output.dir",
    "compare.y_max",
    "compare.source",
    "compare.seed_a",
    "compare.seed_arg_s",
    "compare.seed_y",
    "regions.c1",
    "regions.c2",
    "regions.c3",
];

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Splits the text into entries; checks syntax only.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| ConfigError { line, msg };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected 'section.key = value', got '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let (section, name) = key
            .split_once('.')
            .ok_or_else(|| err(format!("key '{key}' needs a section prefix")))?;
        if !is_name(section) || !is_name(name) {
            return Err(err(format!("malformed key '{key}'")));
        }
        if value.is_empty() {
            return Err(err(format!("empty value for '{key}'")));
        }
        out.push(Entry {
            line,
            section: section.to_string(),
            key: name.to_string(),
            value: value.to_string(),
        });
    }
    Ok(out)
}

struct Table {
    map: BTreeMap<String, (usize, String)>,
}

impl Table {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.map.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn number(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some((line, v)) => parse_number(v).map_err(|msg| ConfigError {
                line,
                msg: format!("{key}: {msg}"),
            }),
        }
    }
}

fn parse_number(v: &str) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("not a number: '{v}'"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("not finite: '{v}'"))
    }
}

fn at(line: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        msg: msg.into(),
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut map = BTreeMap::new();
    for e in parse_entries(text)? {
        let key = format!("{}.{}", e.section, e.key);
        if !KEYS.contains(&key.as_str()) {
            return Err(at(e.line, format!("unknown key '{key}'")));
        }
        if let Some((first, _)) = map.insert(key.clone(), (e.line, e.value)) {
            return Err(at(e.line, format!("duplicate key '{key}' (first on line {first})")));
        }
    }
    let t = Table { map };

    let system = match t.get("run.system") {
        None => return Err(at(0, "missing run.system")),
        Some((_, "mb")) => System::Mb,
        Some((_, "gb")) => System::Gb,
        Some((line, v)) => return Err(at(line, format!("run.system must be mb or gb, got '{v}'"))),
    };

    let initial = match (t.get("initial.builtin"), t.get("initial.a"), t.get("initial.b")) {
        (Some((line, name)), None, None) => {
            let b = match name {
                "paper-mb" => Builtin::PaperMb,
                "paper-gb" => Builtin::PaperGb,
                "zero" => Builtin::Zero,
                _ => return Err(at(line, format!("unknown builtin '{name}'"))),
            };
            let fits = matches!(
                (b, system),
                (Builtin::Zero, _) | (Builtin::PaperMb, System::Mb) | (Builtin::PaperGb, System::Gb)
            );
            if !fits {
                return Err(at(line, format!("builtin '{name}' does not match run.system")));
            }
            InitialData::Builtin(b)
        }
        (None, Some((la, a)), Some((lb, b))) => {
            let a = parse_expr(a).map_err(|e| at(la, format!("initial.a {e}")))?;
            let b = parse_expr(b).map_err(|e| at(lb, format!("initial.b {e}")))?;
            InitialData::Expressions { a, b }
        }
        (None, None, None) => return Err(at(0, "missing initial.builtin or initial.a/initial.b")),
        (Some((line, _)), _, _) => {
            return Err(at(line, "initial.builtin excludes initial.a/initial.b"))
        }
        (None, Some((line, _)), None) | (None, None, Some((line, _))) => {
            return Err(at(line, "initial.a and initial.b must be given together"))
        }
    };

    let half_length = t.number("grid.L", 800.0)?;
    let n = match t.get("grid.N") {
        None => 16384,
        Some((line, v)) => v
            .parse::<usize>()
            .map_err(|_| at(line, format!("grid.N must be a positive integer, got '{v}'")))?,
    };
    let grid = PeriodicGrid::new(half_length, n).map_err(|e| {
        at(t.get("grid.N").or(t.get("grid.L")).map_or(0, |g| g.0), e.to_string())
    })?;

    let dt = match t.get("stepping.dt") {
        None | Some((_, "auto")) => None,
        Some((line, v)) => {
            let dt = parse_number(v).map_err(|m| at(line, format!("stepping.dt: {m}")))?;
            if !(dt > 0.0) {
                return Err(at(line, "stepping.dt must be positive"));
            }
            Some(dt)
        }
    };
    let dealias = match t.get("stepping.dealias") {
        None | Some((_, "true")) => true,
        Some((_, "false")) => false,
        Some((line, v)) => return Err(at(line, format!("stepping.dealias must be true or false, got '{v}'"))),
    };

    let times = match t.get("output.times") {
        None => return Err(at(0, "missing output.times")),
        Some((line, v)) => {
            let times = v
                .split(',')
                .map(|s| parse_number(s.trim()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|m| at(line, format!("output.times: {m}")))?;
            if times.iter().any(|&x| !(x > 0.0)) {
                return Err(at(line, "output.times must be positive"));
            }
            if times.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(at(line, "output.times must be strictly increasing"));
            }
            times
        }
    };

    let y_max = t.number("compare.y_max", 2.0)?;
    if !(y_max > 0.0) {
        return Err(at(t.get("compare.y_max").map_or(0, |g| g.0), "compare.y_max must be positive"));
    }
    let source = match t.get("compare.source") {
        None | Some((_, "extract")) => PainleveSource::Extract,
        Some((_, "projection")) => PainleveSource::Projection,
        Some((line, "seed")) => {
            let a = t.number("compare.seed_a", 0.0)?;
            if !(a >= 0.0) {
                return Err(at(line, "compare.seed_a must be non-negative"));
            }
            let y_seed = t.number("compare.seed_y", -40.0)?;
            if !(y_seed <= -20.0) {
                return Err(at(line, "compare.seed_y must be <= -20"));
            }
            PainleveSource::Seed {
                a,
                arg_s: t.number("compare.seed_arg_s", 0.0)?,
                y_seed,
            }
        }
        Some((line, v)) => {
            return Err(at(line, format!("compare.source must be extract, projection or seed, got '{v}'")))
        }
    };

    let d = RegionConstants::default();
    let regions = RegionConstants::new(
        t.number("regions.c1", d.c1)?,
        t.number("regions.c2", d.c2)?,
        t.number("regions.c3", d.c3)?,
    )
    .map_err(|e| at(0, e.to_string()))?;

    let out_dir = PathBuf::from(t.get("output.dir").map_or("bqlab-out", |g| g.1));

    Ok(RunConfig {
        system,
        initial,
        grid,
        dt,
        dealias,
        times,
        compare: CompareSpec { y_max, source },
        regions,
        out_dir,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "run.system = mb\ninitial.builtin = paper-mb\noutput.times = 100, 300\n";

    #[test]
    fn defaults() {
        let c = parse_config(BASIC).unwrap();
        assert_eq!(c.grid.len(), 16384);
        assert_eq!(c.grid.half_length(), 800.0);
        assert_eq!(c.dt, None);
        assert!(c.dealias);
        assert_eq!(c.times, vec![100.0, 300.0]);
        assert_eq!(c.compare.source, PainleveSource::Extract);
        assert_eq!(c.regions, RegionConstants::default());
    }

    #[test]
    fn comments_and_expressions() {
        let text = "# header\nrun.system = gb  # trailing\ninitial.a = exp(-x^2)\ninitial.b = 0\n\
                    grid.N = 64\ngrid.L = 10\noutput.times = 1\ncompare.source = seed\ncompare.seed_a = 0.1\n";
        let c = parse_config(text).unwrap();
        match c.initial {
            InitialData::Expressions { a, .. } => assert_eq!(a.eval(0.0), 1.0),
            _ => panic!(),
        }
        assert_eq!(
            c.compare.source,
            PainleveSource::Seed { a: 0.1, arg_s: 0.0, y_seed: -40.0 }
        );
    }

    #[test]
    fn errors_point_at_lines() {
        let e = parse_config("run.system = mb\nbogus line\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_config("run.system = mb\nrun.system = gb\n").unwrap_err();
        assert!(e.msg.contains("duplicate"));
        let e = parse_config("run.system = mb\ninitial.builtin = paper-gb\noutput.times = 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_config(&BASIC.replace("100, 300", "300, 100")).unwrap_err();
        assert!(e.msg.contains("increasing"));
        assert!(parse_config(&format!("{BASIC}grid.N = 1000\n")).is_err());
        assert!(parse_config(&format!("{BASIC}compare.y_max = 0\n")).is_err());
        assert!(parse_config(&format!("{BASIC}nosection = 1\n")).is_err());
        assert!(parse_config(&format!("{BASIC}initial.a = x\n")).is_err());
        assert!(parse_config(&format!("{BASIC}stepping.dt = nan\n")).is_err());
    }
}
