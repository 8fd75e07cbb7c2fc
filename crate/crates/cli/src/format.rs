//! Plain-text state and ensemble files.
//!
//! A state file starts with `n <qubits>` followed by `2^n` lines `re im`,
//! basis index ascending with the first qubit most significant. An ensemble
//! file starts with `n <qubits> k <components>` followed by `k` blocks, each a
//! `w <weight>` line and `2^n` amplitude lines. Blank lines and lines whose
//! first non-space character is `#` are ignored.

use std::fmt::Write as _;

use egf_core::{Ensemble, PureState};
use num_complex::Complex64;

use crate::error::CliError;

/// Significant digits written for every float; enough to round-trip an f64.
pub const SIGNIFICANT_DIGITS: usize = 17;

/// Formats `v` with 17 significant digits, positionally when the exponent is
/// moderate and in scientific notation otherwise. Exact zero prints as `0`.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.prec$e}", prec = SIGNIFICANT_DIGITS - 1);
    // exponent after rounding, so that 9.99.. carrying into 10.0.. is handled
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

struct Lines<'a> {
    path: &'a str,
    inner: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(path: &'a str, text: &'a str) -> Self {
        let inner = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        Lines { path, inner, last: 0 }
    }

    fn error(&self, line: usize, msg: impl Into<String>) -> CliError {
        CliError::Parse {
            path: self.path.to_string(),
            line,
            msg: msg.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), CliError> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(self.error(self.last + 1, format!("unexpected end of file, expected {what}"))),
        }
    }

    fn finish(&mut self) -> Result<(), CliError> {
        match self.inner.next() {
            Some((n, _)) => Err(self.error(n, "unexpected trailing content")),
            None => Ok(()),
        }
    }

    fn float(&self, line: usize, token: &str) -> Result<f64, CliError> {
        token
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.error(line, format!("invalid number '{token}'")))
    }

    fn count(&self, line: usize, token: &str) -> Result<usize, CliError> {
        token
            .parse::<usize>()
            .map_err(|_| self.error(line, format!("invalid count '{token}'")))
    }

    fn amplitudes(&mut self, dim: usize) -> Result<Vec<Complex64>, CliError> {
        let mut amps = Vec::with_capacity(dim);
        for idx in 0..dim {
            let (n, l) = self.next(&format!("amplitude {idx} of {dim}"))?;
            let fields: Vec<&str> = l.split_whitespace().collect();
            let [re, im] = fields[..] else {
                return Err(self.error(n, format!("expected 're im', found '{l}'")));
            };
            amps.push(Complex64::new(self.float(n, re)?, self.float(n, im)?));
        }
        Ok(amps)
    }

    fn qubits(&self, line: usize, token: &str) -> Result<usize, CliError> {
        let n = self.count(line, token)?;
        if !(1..=egf_core::qlinalg::state::MAX_QUBITS).contains(&n) {
            return Err(self.error(line, format!("qubit count {n} outside 1..=10")));
        }
        Ok(n)
    }
}

pub fn parse_state(path: &str, text: &str) -> Result<PureState, CliError> {
    let mut lines = Lines::new(path, text);
    let (ln, header) = lines.next("header 'n <qubits>'")?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", count] => lines.qubits(ln, count)?,
        _ => return Err(lines.error(ln, format!("expected header 'n <qubits>', found '{header}'"))),
    };
    let amps = lines.amplitudes(1 << n)?;
    lines.finish()?;
    Ok(PureState::new(amps)?)
}

pub fn parse_ensemble(path: &str, text: &str) -> Result<Ensemble, CliError> {
    let mut lines = Lines::new(path, text);
    let (ln, header) = lines.next("header 'n <qubits> k <components>'")?;
    let (n, k) = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", count, "k", comps] => (lines.qubits(ln, count)?, lines.count(ln, comps)?),
        _ => {
            return Err(lines.error(
                ln,
                format!("expected header 'n <qubits> k <components>', found '{header}'"),
            ))
        }
    };
    if k == 0 {
        return Err(lines.error(ln, "ensemble needs at least one component"));
    }
    let mut components = Vec::with_capacity(k);
    for _ in 0..k {
        let (wl, line) = lines.next("weight line 'w <weight>'")?;
        let w = match line.split_whitespace().collect::<Vec<_>>()[..] {
            ["w", value] => lines.float(wl, value)?,
            _ => return Err(lines.error(wl, format!("expected 'w <weight>', found '{line}'"))),
        };
        let amps = lines.amplitudes(1 << n)?;
        components.push((w, PureState::new(amps)?));
    }
    lines.finish()?;
    Ok(Ensemble::new(components)?)
}

fn push_amplitudes(out: &mut String, psi: &PureState) {
    for z in psi.amps() {
        let _ = writeln!(out, "{} {}", format_value(z.re), format_value(z.im));
    }
}

pub fn write_state(psi: &PureState) -> String {
    let mut out = format!("n {}\n", psi.n());
    push_amplitudes(&mut out, psi);
    out
}

pub fn write_ensemble(ens: &Ensemble) -> String {
    let mut out = format!("n {} k {}\n", ens.n(), ens.len());
    for (w, psi) in ens.iter() {
        let _ = writeln!(out, "w {}", format_value(*w));
        push_amplitudes(&mut out, psi);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use egf_core::qlinalg::random_pure_state;

    #[test]
    fn value_formatting() {
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(1.0), "1.0000000000000000");
        assert_eq!(format_value(5.0 / 6.0), "0.83333333333333337");
        assert_eq!(format_value(-0.5), "-0.50000000000000000");
        assert_eq!(format_value(9.999_999_999_999_999_9), "10.000000000000000");
        assert_eq!(format_value(1e-20), "9.9999999999999995e-21");
        for v in [std::f64::consts::PI, 1.0 / 3.0, 2.5e-5, 123456.789, -7.1e-3] {
            assert_eq!(format_value(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn state_round_trip() {
        for seed in 0..20 {
            let psi = random_pure_state(1 + (seed % 5) as usize, seed);
            let back = parse_state("mem", &write_state(&psi)).unwrap();
            for (x, y) in psi.amps().iter().zip(back.amps()) {
                assert!((x - y).norm() <= 1e-15);
            }
        }
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# bell pair\nn 2\n\n0.7071067811865476 0\n0 0\n  # middle\n0 0\n0.7071067811865476 0\n";
        let psi = parse_state("mem", text).unwrap();
        assert_eq!(psi.n(), 2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_state("f", "n 1\n1 0\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }), "{err}");
        let err = parse_state("f", "n 1\n1 0\nx 0\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }), "{err}");
        assert_eq!(parse_state("f", "qubits 1\n").unwrap_err().exit_code(), 1);
        assert_eq!(parse_state("f", "n 1\n1 0\n0 0\n0 0\n").unwrap_err().exit_code(), 1);
        assert_eq!(parse_state("f", "n 1\n1 0\n1 0\n").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn ensemble_round_trip() {
        let ens = Ensemble::new(vec![(0.25, random_pure_state(3, 1)), (0.75, random_pure_state(3, 2))]).unwrap();
        let back = parse_ensemble("mem", &write_ensemble(&ens)).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back.components()[0].0, 0.25);
        assert_eq!(
            parse_ensemble("f", "n 1 k 1\nw 0.5\n1 0\n0 0\n").unwrap_err().exit_code(),
            2
        );
        assert_eq!(parse_ensemble("f", "n 1 k 2\nw 1\n1 0\n0 0\n").unwrap_err().exit_code(), 1);
    }
}
