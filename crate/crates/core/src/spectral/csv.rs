//! Field snapshots as text:
//!
//! ```text
//! # system=MB t=100 L=800 N=16384
//! x,field_a,field_b
//! -8.0000000000000000e2,...
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{FieldState, PeriodicGrid, SpectralError, System};

#[derive(Debug, Error, PartialEq)]
pub enum FieldCsvError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing preamble line '# system=.. t=.. L=.. N=..'")]
    MissingPreamble,
    #[error("expected {expected} data rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row}: x={x} does not match the grid node {expected}")]
    GridMismatch { row: usize, x: f64, expected: f64 },
    #[error(transparent)]
    State(#[from] SpectralError),
}

pub fn write_field_csv(state: &FieldState) -> String {
    let g = state.grid();
    let mut out = String::with_capacity(80 * g.len());
    let _ = writeln!(
        out,
        "# system={} t={} L={} N={}",
        state.system(),
        state.t(),
        g.half_length(),
        g.len()
    );
    out.push_str("x,field_a,field_b\n");
    for j in 0..g.len() {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e}",
            g.x(j),
            state.field_a()[j],
            state.field_b()[j]
        );
    }
    out
}

pub fn read_field_csv(text: &str) -> Result<FieldState, FieldCsvError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (pline, preamble) = lines.next().ok_or(FieldCsvError::MissingPreamble)?;
    let body = preamble
        .strip_prefix('#')
        .ok_or(FieldCsvError::MissingPreamble)?;
    let mut system = None;
    let mut t = None;
    let mut half_length = None;
    let mut n = None;
    let syntax = |line: usize, msg: String| FieldCsvError::Syntax { line, msg };
    for token in body.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| syntax(pline, format!("malformed token '{token}'")))?;
        let num = || {
            value
                .parse::<f64>()
                .map_err(|_| syntax(pline, format!("bad number '{value}' for {key}")))
        };
        match key {
            "system" => system = Some(value.parse::<System>().map_err(|e| syntax(pline, e))?),
            "t" => t = Some(num()?),
            "L" => half_length = Some(num()?),
            "N" => {
                n = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| syntax(pline, format!("bad N '{value}'")))?,
                )
            }
            _ => return Err(syntax(pline, format!("unknown key '{key}'"))),
        }
    }
    let (Some(system), Some(t), Some(half_length), Some(n)) = (system, t, half_length, n) else {
        return Err(FieldCsvError::MissingPreamble);
    };
    let grid = PeriodicGrid::new(half_length, n)?;

    let (hline, header) = lines
        .next()
        .ok_or_else(|| syntax(pline + 1, "missing header".into()))?;
    if header.replace(' ', "") != "x,field_a,field_b" {
        return Err(syntax(hline, format!("unexpected header '{header}'")));
    }

    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for (line, row) in lines {
        let j = a.len();
        if j >= n {
            return Err(FieldCsvError::RowCount {
                expected: n,
                found: j + 1,
            });
        }
        let mut cols = row.split(',').map(str::trim);
        let mut next = |name: &str| -> Result<f64, FieldCsvError> {
            let c = cols
                .next()
                .ok_or_else(|| syntax(line, format!("missing column {name}")))?;
            c.parse::<f64>()
                .map_err(|_| syntax(line, format!("bad number '{c}' in column {name}")))
        };
        let x = next("x")?;
        let fa = next("field_a")?;
        let fb = next("field_b")?;
        if cols.next().is_some() {
            return Err(syntax(line, "too many columns".into()));
        }
        let expected = grid.x(j);
        if !((x - expected).abs() <= 1e-9 * half_length.max(1.0)) {
            return Err(FieldCsvError::GridMismatch { row: j, x, expected });
        }
        a.push(fa);
        b.push(fb);
    }
    if a.len() != n {
        return Err(FieldCsvError::RowCount {
            expected: n,
            found: a.len(),
        });
    }
    Ok(FieldState::new(grid, t, system, a, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let g = PeriodicGrid::new(3.5, 16).unwrap();
        let s = FieldState::new(
            g,
            12.25,
            System::Gb,
            g.sample(|x| (x * 0.7).sin() / 3.0),
            g.sample(|x| (-x * x).exp()),
        )
        .unwrap();
        let text = write_field_csv(&s);
        assert!(text.starts_with("# system=GB t=12.25 L=3.5 N=16\nx,field_a,field_b\n"));
        assert_eq!(read_field_csv(&text).unwrap(), s);
    }

    #[test]
    fn truncated_input_is_rejected() {
        let g = PeriodicGrid::new(1.0, 16).unwrap();
        let text = write_field_csv(&FieldState::zeros(g, System::Mb));
        let cut: String = text.lines().take(10).collect::<Vec<_>>().join("\n");
        assert!(matches!(
            read_field_csv(&cut),
            Err(FieldCsvError::RowCount { .. })
        ));
        assert_eq!(read_field_csv(""), Err(FieldCsvError::MissingPreamble));
    }

    #[test]
    fn nan_values_are_rejected() {
        let g = PeriodicGrid::new(1.0, 16).unwrap();
        let text = write_field_csv(&FieldState::zeros(g, System::Mb)).replacen(
            "0.0000000000000000e0\n",
            "NaN\n",
            1,
        );
        assert!(matches!(
            read_field_csv(&text),
            Err(FieldCsvError::State(SpectralError::NonFinite))
        ));
    }
}
