//! Deviation between a quantum observable series and a semiclassical
//! trajectory sampled on the same grid.

use std::io::Write;

use h2p_core::observables::ObservableSeries;
use h2p_core::semiclassics::Trajectory;
use serde::Serialize;

pub const DEFAULT_THRESHOLD: f64 = 1.5;
pub const REPORT_CSV_HEADER: &str = "t,dx,dy,dcom";
const GRID_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Deviation {
    pub t: f64,
    pub dx: f64,
    pub dy: f64,
    pub dcom: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviationReport {
    pub threshold: f64,
    #[serde(skip)]
    pub samples: Vec<Deviation>,
    pub compared: usize,
    pub max_dx: f64,
    pub max_dy: f64,
    pub max_dcom: f64,
    pub first_exceed_x: Option<f64>,
    pub first_exceed_y: Option<f64>,
}

impl DeviationReport {
    /// Largest deviations among samples with `t <= horizon`.
    pub fn max_until(&self, horizon: f64) -> (f64, f64, f64) {
        self.samples
            .iter()
            .filter(|d| d.t <= horizon + GRID_TOLERANCE)
            .fold((0.0, 0.0, 0.0), |m, d| {
                (m.0.max(d.dx), m.1.max(d.dy), m.2.max(d.dcom))
            })
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{REPORT_CSV_HEADER}")?;
        for d in &self.samples {
            writeln!(out, "{},{},{},{}", d.t, d.dx, d.dy, d.dcom)?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CompareError {
    #[error("time grids differ at sample {index}: {quantum} vs {semiclassical}")]
    GridMismatch {
        index: usize,
        quantum: f64,
        semiclassical: f64,
    },
    #[error("no common samples")]
    Empty,
}

/// Compare over the common prefix of the two grids (a semiclassical run that
/// stopped at a coincidence is shorter). Times must agree sample by sample.
pub fn compare_runs(
    quantum: &ObservableSeries,
    semiclassical: &Trajectory,
    threshold: f64,
) -> Result<DeviationReport, CompareError> {
    let n = quantum.samples.len().min(semiclassical.samples.len());
    if n == 0 {
        return Err(CompareError::Empty);
    }
    let mut samples = Vec::with_capacity(n);
    for (index, (q, s)) in quantum
        .samples
        .iter()
        .zip(&semiclassical.samples)
        .enumerate()
    {
        if (q.t - s.t).abs() > GRID_TOLERANCE * q.t.abs().max(1.0) {
            return Err(CompareError::GridMismatch {
                index,
                quantum: q.t,
                semiclassical: s.t,
            });
        }
        samples.push(Deviation {
            t: q.t,
            dx: (q.mean_x - s.state.x).abs(),
            dy: (q.mean_y - s.state.y).abs(),
            dcom: (q.com - 0.5 * (s.state.x + s.state.y)).abs(),
        });
    }
    let first = |f: fn(&Deviation) -> f64| samples.iter().find(|d| f(d) > threshold).map(|d| d.t);
    let max = |f: fn(&Deviation) -> f64| samples.iter().map(f).fold(0.0, f64::max);
    Ok(DeviationReport {
        threshold,
        compared: n,
        max_dx: max(|d| d.dx),
        max_dy: max(|d| d.dy),
        max_dcom: max(|d| d.dcom),
        first_exceed_x: first(|d| d.dx),
        first_exceed_y: first(|d| d.dy),
        samples,
    })
}
