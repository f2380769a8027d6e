use std::io::Write;
use std::path::PathBuf;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::output::{self, CSV_SCHEMA_VERSION};
use super::{CliError, Format, MethodArg};
use crate::moments::{deviations, moments_closed_with, moments_oracle, MomentReport};
use crate::states::window;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub q_min: f64,
    pub q_max: f64,
    pub q_steps: usize,
    pub alpha: Complex64,
    pub tol: f64,
    pub method: MethodArg,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.q_steps == 0 {
            return bad("--q-steps must be at least 1".into());
        }
        if !(self.q_min > 1.0) {
            return bad(format!("--q-min must exceed 1, got {}", self.q_min));
        }
        let top = if self.q_steps == 1 { self.q_min } else { self.q_max };
        if !(top < window::SECOND_MOMENT) {
            return bad(format!("q must stay below 7/3 for the moments, got {top}"));
        }
        if self.q_steps > 1 && !(self.q_min < self.q_max) {
            return bad(format!("--q-min {} must be below --q-max {}", self.q_min, self.q_max));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad(format!("--tol must lie in (0, 1), got {}", self.tol));
        }
        if !(self.alpha.re.is_finite() && self.alpha.im.is_finite()) {
            return bad("alpha must be finite".into());
        }
        Ok(())
    }

    pub fn q_grid(&self) -> Vec<f64> {
        if self.q_steps == 1 {
            return vec![self.q_min];
        }
        let span = self.q_max - self.q_min;
        let last = (self.q_steps - 1) as f64;
        (0..self.q_steps).map(|i| self.q_min + span * i as f64 / last).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub q: f64,
    pub mean_x: f64,
    pub mean_x2: f64,
    pub mean_p: f64,
    pub mean_p2: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub dx: f64,
    pub dp: f64,
    pub product: f64,
    pub method: &'static str,
    pub max_deviation: Option<f64>,
}

impl SweepRow {
    fn new(r: &MomentReport, method: &'static str, max_deviation: Option<f64>) -> Self {
        Self {
            q: r.q,
            mean_x: r.mean_x.re,
            mean_x2: r.mean_x2.re,
            mean_p: r.mean_p.re,
            mean_p2: r.mean_p2.re,
            var_x: r.var_x,
            var_p: r.var_p,
            dx: r.dx(),
            dp: r.dp(),
            product: r.product,
            method,
            max_deviation,
        }
    }
}

/// One row per q, computed in parallel and returned in q order. The
/// closed-form and both methods carry the largest closed-vs-oracle deviation.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    config.validate()?;
    let convention = match config.method {
        MethodArg::Oracle => None,
        _ => Some(crate::closed_form::calibrated().map_err(|e| CliError::Numerical(e.to_string()))?),
    };
    let alpha = config.alpha;
    config
        .q_grid()
        .par_iter()
        .map(|&q| {
            let fail = |e: crate::Error| CliError::Numerical(format!("q = {q}: {e}"));
            let oracle = moments_oracle(q, alpha, config.tol).map_err(fail)?;
            match (config.method, convention) {
                (MethodArg::Oracle, _) | (_, None) => Ok(SweepRow::new(&oracle, "oracle", None)),
                (method, Some(convention)) => {
                    let closed = moments_closed_with(q, alpha, convention).map_err(fail)?;
                    let dev = deviations(&closed, &oracle).max();
                    let shown = if method == MethodArg::ClosedForm { &closed } else { &oracle };
                    Ok(SweepRow::new(shown, method.as_str(), Some(dev)))
                }
            }
        })
        .collect()
}

#[derive(Serialize)]
struct SweepJson<'a> {
    schema_version: u32,
    config: ConfigEcho,
    rows: &'a [SweepRow],
}

#[derive(Serialize)]
struct ConfigEcho {
    q_min: f64,
    q_max: f64,
    q_steps: usize,
    alpha_re: f64,
    alpha_im: f64,
    tol: f64,
    method: &'static str,
}

fn echo(config: &SweepConfig) -> ConfigEcho {
    ConfigEcho {
        q_min: config.q_min,
        q_max: config.q_max,
        q_steps: config.q_steps,
        alpha_re: config.alpha.re,
        alpha_im: config.alpha.im,
        tol: config.tol,
        method: config.method.as_str(),
    }
}

pub const CSV_COLUMNS: [&str; 12] = [
    "q", "mean_x", "mean_x2", "mean_p", "mean_p2", "var_x", "var_p", "dx", "dp", "product", "method",
    "max_deviation",
];

pub fn write(config: &SweepConfig, rows: &[SweepRow]) -> Result<(), CliError> {
    let mut out = output::open(config.out.as_deref())?;
    match config.format {
        Format::Json => {
            let doc = SweepJson { schema_version: CSV_SCHEMA_VERSION, config: echo(config), rows };
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let e = echo(config);
            writeln!(out, "# tsallis-coherent sweep schema v{CSV_SCHEMA_VERSION}")?;
            writeln!(
                out,
                "# q_min={} q_max={} q_steps={} alpha_re={} alpha_im={} tol={} method={}",
                e.q_min, e.q_max, e.q_steps, e.alpha_re, e.alpha_im, e.tol, e.method
            )?;
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(CSV_COLUMNS)?;
            for r in rows {
                let reals = [r.q, r.mean_x, r.mean_x2, r.mean_p, r.mean_p2, r.var_x, r.var_p, r.dx, r.dp, r.product];
                let mut record: Vec<String> = reals.iter().map(|&v| output::real(v)).collect();
                record.push(r.method.to_string());
                record.push(output::optional(r.max_deviation));
                w.write_record(&record)?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}
