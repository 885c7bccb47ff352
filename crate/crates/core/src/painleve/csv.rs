//! ```text
//! # alpha=-1.6666666666666666e-1 beta=-6.6666666666666663e-1
//! y,P,dP
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{PainleveError, PainleveSolution, PivParams};

#[derive(Debug, Error, PartialEq)]
pub enum PainleveCsvError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing preamble line '# alpha=.. beta=..'")]
    MissingPreamble,
    #[error(transparent)]
    Solution(#[from] PainleveError),
}

pub fn write_painleve_csv(sol: &PainleveSolution) -> String {
    let mut out = String::with_capacity(72 * (sol.len() + 2));
    let pr = sol.params();
    let _ = writeln!(out, "# alpha={:.16e} beta={:.16e}", pr.alpha, pr.beta);
    out.push_str("y,P,dP\n");
    for i in 0..sol.len() {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e}",
            sol.y()[i],
            sol.p()[i],
            sol.dp()[i]
        );
    }
    out
}

pub fn read_painleve_csv(text: &str) -> Result<PainleveSolution, PainleveCsvError> {
    let syntax = |line: usize, msg: String| PainleveCsvError::Syntax { line, msg };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (pline, preamble) = lines.next().ok_or(PainleveCsvError::MissingPreamble)?;
    let body = preamble
        .strip_prefix('#')
        .ok_or(PainleveCsvError::MissingPreamble)?;
    let (mut alpha, mut beta) = (None, None);
    for token in body.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| syntax(pline, format!("malformed token '{token}'")))?;
        let v = value
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| syntax(pline, format!("bad number '{value}' for {key}")))?;
        match key {
            "alpha" => alpha = Some(v),
            "beta" => beta = Some(v),
            _ => return Err(syntax(pline, format!("unknown key '{key}'"))),
        }
    }
    let (Some(alpha), Some(beta)) = (alpha, beta) else {
        return Err(PainleveCsvError::MissingPreamble);
    };

    let (hline, header) = lines
        .next()
        .ok_or_else(|| syntax(pline + 1, "missing header".into()))?;
    if header.replace(' ', "") != "y,P,dP" {
        return Err(syntax(hline, format!("unexpected header '{header}'")));
    }

    let (mut y, mut p, mut dp) = (Vec::new(), Vec::new(), Vec::new());
    for (line, row) in lines {
        let cols: Vec<&str> = row.split(',').map(str::trim).collect();
        if cols.len() != 3 {
            return Err(syntax(line, format!("expected 3 columns, found {}", cols.len())));
        }
        let mut vals = [0.0; 3];
        for (v, c) in vals.iter_mut().zip(&cols) {
            *v = c
                .parse::<f64>()
                .map_err(|_| syntax(line, format!("bad number '{c}'")))?;
        }
        y.push(vals[0]);
        p.push(vals[1]);
        dp.push(vals[2]);
    }
    Ok(PainleveSolution::new(y, p, dp, PivParams::new(alpha, beta))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let y = vec![-1.0, -0.1, 0.3, 1.0 / 3.0];
        let p: Vec<f64> = y.iter().map(|v: &f64| v.sin() + 0.7).collect();
        let dp: Vec<f64> = y.iter().map(|v: &f64| v.cos()).collect();
        let sol = PainleveSolution::new(y, p, dp, PivParams::new(0.25, -1.0 / 3.0)).unwrap();
        let text = write_painleve_csv(&sol);
        assert!(text.starts_with("# alpha=2.5000000000000000e-1 beta="));
        assert_eq!(read_painleve_csv(&text).unwrap(), sol);
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(read_painleve_csv(""), Err(PainleveCsvError::MissingPreamble));
        assert_eq!(
            read_painleve_csv("# alpha=1\ny,P,dP\n"),
            Err(PainleveCsvError::MissingPreamble)
        );
        assert!(matches!(
            read_painleve_csv("# alpha=1 beta=2\ny,P\n"),
            Err(PainleveCsvError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            read_painleve_csv("# alpha=1 beta=2\ny,P,dP\n0,1\n"),
            Err(PainleveCsvError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            read_painleve_csv("# alpha=1 beta=2\ny,P,dP\n1,1,1\n0,1,1\n"),
            Err(PainleveCsvError::Solution(_))
        ));
    }
}
