//! Measured quantities: marginals, mean positions, lattice velocities,
//! momentum distributions and the Ehrenfest consistency check.

use std::io::{BufRead, Write};

use ndarray::{Array2, Axis};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::model::{Boundary, Hamiltonian, LatticeSpec, TwoParticleState};
use crate::sum::Accumulator;

pub const SERIES_CSV_HEADER: &str = "t,mean_x,mean_y,sep,com,vx,vy,norm,energy,edge_leak";
/// Width of the band next to an open edge counted as leakage.
pub const EDGE_BAND: usize = 2;
/// Coarsest sampling accepted by [`ehrenfest_check`].
pub const EHRENFEST_MAX_DT: f64 = 0.01;

/// Single-particle occupation probabilities `P_up(x) = Σ_y |ψ|²` and
/// `P_down(y) = Σ_x |ψ|²`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalDistribution {
    pub up: Vec<f64>,
    pub down: Vec<f64>,
}

pub fn marginals(state: &TwoParticleState) -> MarginalDistribution {
    let a = state.amplitudes();
    let n = state.n_sites();
    let mut up = vec![Accumulator::new(); n];
    let mut down = vec![Accumulator::new(); n];
    for ((x, y), v) in a.indexed_iter() {
        let p = v.norm_sqr();
        up[x].add(p);
        down[y].add(p);
    }
    MarginalDistribution {
        up: up.iter().map(Accumulator::total).collect(),
        down: down.iter().map(Accumulator::total).collect(),
    }
}

fn first_moment(p: &[f64]) -> (f64, f64) {
    let mut mass = Accumulator::new();
    let mut moment = Accumulator::new();
    for (i, &v) in p.iter().enumerate() {
        mass.add(v);
        moment.add(i as f64 * v);
    }
    (moment.total(), mass.total())
}

/// `(⟨x⟩, ⟨y⟩)` normalized by the total probability.
pub fn mean_positions(state: &TwoParticleState) -> (f64, f64) {
    let m = marginals(state);
    let (mx, total) = first_moment(&m.up);
    let (my, _) = first_moment(&m.down);
    (mx / total, my / total)
}

/// `(v_x, v_y) = 2J (⟨sin p̂_x⟩, ⟨sin p̂_y⟩)` from the nearest-neighbour
/// current `2J Im Σ ψ*(x,y) ψ(x+1,y)`, normalized by the total probability.
pub fn velocity_expectations(
    state: &TwoParticleState,
    lattice: &LatticeSpec,
    hopping: f64,
) -> (f64, f64) {
    let a = state.amplitudes();
    let n = state.n_sites();
    let mut jx = Accumulator::new();
    let mut jy = Accumulator::new();
    let mut total = Accumulator::new();
    for x in 0..n {
        for y in 0..n {
            let psi = a[[x, y]];
            total.add(psi.norm_sqr());
            if let Some(xr) = lattice.neighbor(x, true) {
                jx.add((psi.conj() * a[[xr, y]]).im);
            }
            if let Some(yr) = lattice.neighbor(y, true) {
                jy.add((psi.conj() * a[[x, yr]]).im);
            }
        }
    }
    let norm = total.total();
    (
        2.0 * hopping * jx.total() / norm,
        2.0 * hopping * jy.total() / norm,
    )
}

/// Occupation within [`EDGE_BAND`] sites of an open edge; zero on a ring.
pub fn edge_leakage(state: &TwoParticleState, lattice: &LatticeSpec) -> f64 {
    if lattice.boundary() == Boundary::Periodic {
        return 0.0;
    }
    let n = state.n_sites();
    let near = |i: usize| i < EDGE_BAND || i + EDGE_BAND >= n;
    let mut acc = Accumulator::new();
    for ((x, y), v) in state.amplitudes().indexed_iter() {
        if near(x) || near(y) {
            acc.add(v.norm_sqr());
        }
    }
    acc.total()
}

/// `⟨ψ|T|ψ⟩` for the joint translation `(Tψ)(x,y) = ψ(x-1, y-1)` (indices
/// modulo `n`). On a ring it is conserved with the total quasi-momentum.
pub fn diagonal_translation_expectation(state: &TwoParticleState) -> C64 {
    let a = state.amplitudes();
    let n = state.n_sites();
    let mut re = Accumulator::new();
    let mut im = Accumulator::new();
    for x in 0..n {
        for y in 0..n {
            let v = a[[x, y]].conj() * a[[(x + n - 1) % n, (y + n - 1) % n]];
            re.add(v.re);
            im.add(v.im);
        }
    }
    C64::new(re.total(), im.total())
}

/// Probability on the discrete momentum grid `p_k = 2πk/n - π`, indexed
/// `[k_x, k_y]`. Treats the grid as periodic.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumDistribution {
    pub momenta: Vec<f64>,
    pub probability: Array2<f64>,
}

impl MomentumDistribution {
    /// Momenta `(p_x, p_y)` of the most probable grid point.
    pub fn peak(&self) -> (f64, f64) {
        let ((kx, ky), _) =
            self.probability
                .indexed_iter()
                .fold(((0, 0), f64::NEG_INFINITY), |best, (ix, &p)| {
                    if p > best.1 {
                        (ix, p)
                    } else {
                        best
                    }
                });
        (self.momenta[kx], self.momenta[ky])
    }

    pub fn total(&self) -> f64 {
        crate::sum::sum(self.probability.iter().copied())
    }
}

pub fn momentum_grid_index(n: usize, k: usize) -> f64 {
    2.0 * std::f64::consts::PI * k as f64 / n as f64 - std::f64::consts::PI
}

pub fn momentum_distribution(state: &TwoParticleState) -> MomentumDistribution {
    let n = state.n_sites();
    // the (-1)^(x+y) factor moves the grid origin from p = 0 to p = -π
    let mut grid = state.amplitudes().to_owned();
    for ((x, y), v) in grid.indexed_iter_mut() {
        if (x + y) % 2 == 1 {
            *v = -*v;
        }
    }
    let fft = FftPlanner::new().plan_fft_forward(n);
    for mut row in grid.axis_iter_mut(Axis(0)) {
        let mut buf: Vec<C64> = row.to_vec();
        fft.process(&mut buf);
        row.iter_mut().zip(buf).for_each(|(d, s)| *d = s);
    }
    for mut col in grid.axis_iter_mut(Axis(1)) {
        let mut buf: Vec<C64> = col.to_vec();
        fft.process(&mut buf);
        col.iter_mut().zip(buf).for_each(|(d, s)| *d = s);
    }
    let scale = 1.0 / (n * n) as f64;
    MomentumDistribution {
        momenta: (0..n).map(|k| momentum_grid_index(n, k)).collect(),
        probability: grid.mapv(|v| v.norm_sqr() * scale),
    }
}

/// One sample of the observable record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observation {
    pub t: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub separation: f64,
    pub com: f64,
    pub vx: f64,
    pub vy: f64,
    /// Squared two-norm.
    pub norm: f64,
    pub energy: f64,
    pub edge_leak: f64,
}

pub fn observe(state: &TwoParticleState, ham: &Hamiltonian, t: f64) -> Result<Observation> {
    let lattice = ham.lattice();
    let (mean_x, mean_y) = mean_positions(state);
    let (vx, vy) = velocity_expectations(state, lattice, ham.hopping());
    let norm = state.norm_sqr();
    Ok(Observation {
        t,
        mean_x,
        mean_y,
        separation: mean_y - mean_x,
        com: 0.5 * (mean_x + mean_y),
        vx,
        vy,
        norm,
        energy: ham.expectation(state)? / norm,
        edge_leak: edge_leakage(state, lattice),
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObservableSeries {
    pub samples: Vec<Observation>,
}

impl ObservableSeries {
    pub fn push(&mut self, obs: Observation) {
        self.samples.push(obs);
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn column(&self, f: impl Fn(&Observation) -> f64) -> Vec<f64> {
        self.samples.iter().map(f).collect()
    }

    pub fn times(&self) -> Vec<f64> {
        self.column(|o| o.t)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{SERIES_CSV_HEADER}")?;
        for o in &self.samples {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                o.t,
                o.mean_x,
                o.mean_y,
                o.separation,
                o.com,
                o.vx,
                o.vy,
                o.norm,
                o.energy,
                o.edge_leak
            )?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().transpose()?.unwrap_or_default();
        if header.trim() != SERIES_CSV_HEADER {
            return Err(Error::Format(format!(
                "unexpected series header `{header}`"
            )));
        }
        let mut samples = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let v: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Format(format!("line {}: {e}", i + 2)))?;
            if v.len() != 10 {
                return Err(Error::Format(format!(
                    "line {}: expected 10 fields, got {}",
                    i + 2,
                    v.len()
                )));
            }
            samples.push(Observation {
                t: v[0],
                mean_x: v[1],
                mean_y: v[2],
                separation: v[3],
                com: v[4],
                vx: v[5],
                vy: v[6],
                norm: v[7],
                energy: v[8],
                edge_leak: v[9],
            });
        }
        Ok(Self { samples })
    }
}

/// Largest deviations between the central difference of the mean positions
/// and the lattice velocities over the interior samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EhrenfestResiduals {
    pub x: f64,
    pub y: f64,
}

pub fn ehrenfest_check(series: &ObservableSeries) -> Result<EhrenfestResiduals> {
    let s = &series.samples;
    if s.len() < 3 {
        return Err(Error::InvalidParameter {
            name: "series",
            reason: "need at least three samples".into(),
        });
    }
    let mut worst = EhrenfestResiduals { x: 0.0, y: 0.0 };
    for w in s.windows(3) {
        let dt = w[2].t - w[0].t;
        if dt > 2.0 * EHRENFEST_MAX_DT * (1.0 + 1e-9) {
            return Err(Error::CoarseSampling {
                dt: 0.5 * dt,
                max: EHRENFEST_MAX_DT,
            });
        }
        let dx = (w[2].mean_x - w[0].mean_x) / dt;
        let dy = (w[2].mean_y - w[0].mean_y) / dt;
        worst.x = worst.x.max((dx - w[1].vx).abs());
        worst.y = worst.y.max((dy - w[1].vy).abs());
    }
    Ok(worst)
}
