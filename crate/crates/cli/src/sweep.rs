//! One-parameter state families and their CSV sweeps.

use std::fmt::Write as _;

use clap::ValueEnum;
use egf_core::tripartite::{egf_theorem1, TripartiteAmplitudes, TripartiteReport};
use egf_core::{EgfError, PureState, Result};
use rayon::prelude::*;

use crate::format::format_value;

/// Negative radicands this close to zero are rounding noise at the domain edge.
pub const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// `x/3|000> + sqrt(2-x^2)/3|001> + 1/3|010> + |101>/sqrt6 + |110>/sqrt6 + |111>/sqrt3`, x in [0, sqrt2].
    #[value(name = "eq20")]
    Ramp,
    /// `a|000> + h|111>` parameterized by `|a|^2` in [0, 1].
    GhzLike,
}

impl Family {
    /// Closed parameter interval swept by default.
    pub fn range(self) -> (f64, f64) {
        match self {
            Family::Ramp => (0.0, std::f64::consts::SQRT_2),
            Family::GhzLike => (0.0, 1.0),
        }
    }

    pub fn state(self, x: f64) -> Result<PureState> {
        let mut amps = [0.0; 8];
        match self {
            Family::Ramp => {
                let radicand = checked_nonnegative(2.0 - x * x, "2 - x^2 >= 0")?;
                amps[0b000] = x / 3.0;
                amps[0b001] = radicand.sqrt() / 3.0;
                amps[0b010] = 1.0 / 3.0;
                amps[0b101] = 1.0 / 6f64.sqrt();
                amps[0b110] = 1.0 / 6f64.sqrt();
                amps[0b111] = 1.0 / 3f64.sqrt();
            }
            Family::GhzLike => {
                if !(0.0..=1.0).contains(&x) {
                    return Err(EgfError::Domain {
                        value: x,
                        domain: "|a|^2 in [0, 1]",
                    });
                }
                amps[0b000] = x.sqrt();
                amps[0b111] = (1.0 - x).sqrt();
            }
        }
        PureState::from_real(&amps)
    }
}

fn checked_nonnegative(v: f64, domain: &'static str) -> Result<f64> {
    if v < -DOMAIN_SLACK || !v.is_finite() {
        return Err(EgfError::Domain {
            value: v,
            domain,
        });
    }
    Ok(v.max(0.0))
}

/// `points` uniformly spaced values over `[lo, hi]`, endpoints exact.
pub fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| match i {
            0 => lo,
            _ if i + 1 == points => hi,
            _ => lo + (hi - lo) * i as f64 / (points - 1) as f64,
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub x: f64,
    pub report: TripartiteReport,
}

/// Evaluates the closed form at every grid point, rows in grid order.
pub fn sweep(family: Family, points: usize) -> Result<Vec<SweepRow>> {
    let (lo, hi) = family.range();
    grid(lo, hi, points)
        .into_par_iter()
        .map(|x| {
            let amps = TripartiteAmplitudes::from_state(&family.state(x)?)?;
            Ok(SweepRow {
                x,
                report: egf_theorem1(&amps)?,
            })
        })
        .collect()
}

/// Header `x,egf,<report fields>` and one line per row, LF terminated.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let names: Vec<String> = TripartiteReport::field_names().into_iter().filter(|n| n != "egf").collect();
    let _ = writeln!(out, "x,egf,{}", names.join(","));
    for row in rows {
        let mut line = format!("{},{}", format_value(row.x), format_value(row.report.egf));
        for (name, value) in row.report.fields() {
            if name != "egf" {
                line.push(',');
                line.push_str(&format_value(value));
            }
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}
