use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;

use super::{solve_bound_states_converged, Parity, RelativeProblem};
use crate::error::Result;
use crate::model::HubbardParams;

pub const BAND_CSV_HEADER: &str = "K,branch,E_over_J,parity";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandRow {
    pub total_momentum: f64,
    /// Index of the bound state at this `K`, counted from the lowest energy.
    pub branch: usize,
    pub energy: f64,
    pub parity: Parity,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BandTable {
    pub rows: Vec<BandRow>,
}

impl BandTable {
    /// Energies of every bound state at the `index`-th momentum of the sweep.
    pub fn energies_at(&self, total_momentum: f64) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.total_momentum == total_momentum)
            .map(|r| r.energy)
            .collect()
    }

    /// Energy of one branch across the sweep, `None` where it does not exist.
    pub fn branch(&self, ks: &[f64], branch: usize) -> Vec<Option<f64>> {
        ks.iter()
            .map(|&k| {
                self.rows
                    .iter()
                    .find(|r| r.total_momentum == k && r.branch == branch)
                    .map(|r| r.energy)
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{BAND_CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                r.total_momentum,
                r.branch,
                r.energy,
                r.parity.as_str()
            )?;
        }
        Ok(())
    }
}

/// `n` equally spaced momenta covering `[-π, π]` inclusive.
pub fn momentum_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| -PI + 2.0 * PI * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Bound-state energies `E_n(K)` on a momentum grid. Each `K` is solved
/// independently with a certified truncation.
pub fn doublon_band_sweep(params: &HubbardParams, momenta: &[f64]) -> Result<BandTable> {
    let per_k: Vec<Result<Vec<BandRow>>> = momenta
        .par_iter()
        .map(|&k| {
            let problem = RelativeProblem::with_default_truncation(params, k)?;
            let spectrum = solve_bound_states_converged(&problem)?;
            Ok(spectrum
                .states
                .iter()
                .enumerate()
                .map(|(branch, s)| BandRow {
                    total_momentum: k,
                    branch,
                    energy: s.energy,
                    parity: s.parity,
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_k {
        rows.extend(r?);
    }
    Ok(BandTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = momentum_grid(41);
        assert_eq!(g.len(), 41);
        assert_eq!(g[0], -PI);
        assert_eq!(g[40], PI);
        assert!(g[20].abs() < 1e-15);
    }

    #[test]
    fn csv_layout() {
        let params = HubbardParams::onsite_only(1.0, -6.0);
        let table = doublon_band_sweep(&params, &[0.0]).unwrap();
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(BAND_CSV_HEADER));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "0");
        assert_eq!(row[1], "0");
        assert!((row[2].parse::<f64>().unwrap() + 52f64.sqrt()).abs() < 1e-12);
        assert_eq!(row[3], "S");
    }
}
