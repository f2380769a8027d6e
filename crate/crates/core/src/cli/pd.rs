use std::io::Write;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::Serialize;

use super::output::{self, CSV_SCHEMA_VERSION};
use super::{CliError, Format, MethodArg};
use crate::momentum::{default_k_grid, momentum_pd_with, MomentumPd};
use crate::states::{window, Method};

#[derive(Debug, Clone)]
pub struct PdConfig {
    pub q: f64,
    pub alpha: Complex64,
    pub k_min: Option<f64>,
    pub k_max: Option<f64>,
    pub k_steps: usize,
    pub tol: f64,
    pub method: MethodArg,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl PdConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if !(self.q == 1.0 || (self.q > 1.0 && self.q < window::NORMALIZABLE)) {
            return bad(format!("--q must be 1 or lie in (1, 5), got {}", self.q));
        }
        if self.k_steps < 2 {
            return bad("--k-steps must be at least 2".into());
        }
        let (lo, hi) = self.bounds();
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return bad(format!("k grid [{lo}, {hi}] is empty"));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad(format!("--tol must lie in (0, 1), got {}", self.tol));
        }
        if self.method == MethodArg::Both {
            return bad("pd accepts --method oracle or closed-form".into());
        }
        Ok(())
    }

    fn bounds(&self) -> (f64, f64) {
        let half = 8.0 + 2.0 * self.alpha.norm();
        (self.k_min.unwrap_or(-half), self.k_max.unwrap_or(half))
    }

    pub fn k_grid(&self) -> Vec<f64> {
        if self.k_min.is_none() && self.k_max.is_none() && self.k_steps == 401 {
            return default_k_grid(self.alpha);
        }
        let (lo, hi) = self.bounds();
        let last = (self.k_steps - 1) as f64;
        (0..self.k_steps).map(|i| lo + (hi - lo) * i as f64 / last).collect()
    }
}

#[derive(Debug, Clone)]
pub struct PdOutput {
    pub pd: MomentumPd,
}

pub fn run_pd(config: &PdConfig) -> Result<PdOutput, CliError> {
    config.validate()?;
    let method = match config.method {
        MethodArg::ClosedForm => Method::ClosedForm,
        _ => Method::Oracle,
    };
    let pd = momentum_pd_with(config.q, config.alpha, &config.k_grid(), method, config.tol)
        .map_err(|e| CliError::Numerical(format!("q = {}: {e}", config.q)))?;
    Ok(PdOutput { pd })
}

#[derive(Serialize)]
struct PdRow {
    k: f64,
    pd: f64,
    amplitude_re: f64,
    amplitude_im: f64,
}

#[derive(Serialize)]
struct PdJson {
    schema_version: u32,
    q: f64,
    alpha_re: f64,
    alpha_im: f64,
    method: &'static str,
    parseval: Option<f64>,
    rows: Vec<PdRow>,
}

pub fn write(config: &PdConfig, out: &PdOutput) -> Result<(), CliError> {
    let mut w = output::open(config.out.as_deref())?;
    let rows: Vec<PdRow> = out
        .pd
        .samples
        .iter()
        .map(|s| PdRow { k: s.k, pd: s.pd, amplitude_re: s.amplitude.re, amplitude_im: s.amplitude.im })
        .collect();
    match config.format {
        Format::Json => {
            let doc = PdJson {
                schema_version: CSV_SCHEMA_VERSION,
                q: config.q,
                alpha_re: config.alpha.re,
                alpha_im: config.alpha.im,
                method: config.method.as_str(),
                parseval: out.pd.parseval,
                rows,
            };
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let grid = config.k_grid();
            writeln!(w, "# tsallis-coherent pd schema v{CSV_SCHEMA_VERSION}")?;
            writeln!(
                w,
                "# q={} alpha_re={} alpha_im={} k_min={} k_max={} k_steps={} tol={} method={}",
                config.q,
                config.alpha.re,
                config.alpha.im,
                grid[0],
                grid[grid.len() - 1],
                config.k_steps,
                config.tol,
                config.method.as_str()
            )?;
            {
                let mut csv = csv::Writer::from_writer(&mut w);
                csv.write_record(["k", "pd", "amplitude_re", "amplitude_im"])?;
                for r in &rows {
                    csv.write_record([r.k, r.pd, r.amplitude_re, r.amplitude_im].map(output::real))?;
                }
                csv.flush()?;
            }
            match out.pd.parseval {
                Some(p) => writeln!(w, "# parseval={}", output::real(p))?,
                None => writeln!(w, "# parseval=")?,
            }
        }
    }
    w.flush()?;
    Ok(())
}
