use std::f64::consts::{PI, SQRT_2};

use super::SymTridiagonal;
use crate::error::{invalid, Error, Result};
use crate::model::{HubbardParams, InteractionShape};

/// Energy margin outside the continuum `|E| <= 4J|cos(K/2)|` below which an
/// eigenvalue of the truncated operator is not classified as bound.
pub const BAND_MARGIN: f64 = 1e-8;
/// Largest amplitude a converged bound state may keep at `s = ±S`.
pub const EDGE_TOLERANCE: f64 = 1e-8;
/// Energy shift allowed when the truncation is doubled.
pub const DOUBLING_TOLERANCE: f64 = 1e-10;
const MAX_HALF_WIDTH: usize = 1 << 17;

/// `cos(K/2)` evaluated as `sin((π - |K|)/2)` so that it is exactly zero at
/// the zone edge.
pub fn cos_half(total_momentum: f64) -> f64 {
    (0.5 * (PI - total_momentum.abs())).sin()
}

/// Relative-motion problem at fixed total quasi-momentum `K`, truncated to
/// `s ∈ [-S, S]`:
///
/// ```text
/// -2J cos(K/2) [f(s+1) + f(s-1)] + W(|s|) f(s) = E f(s)
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeProblem {
    params: HubbardParams,
    total_momentum: f64,
    half_width: usize,
    potential: Vec<f64>,
}

impl RelativeProblem {
    pub fn new(params: &HubbardParams, total_momentum: f64, half_width: usize) -> Result<Self> {
        params.validate()?;
        if !(total_momentum.is_finite() && total_momentum.abs() <= PI) {
            return Err(invalid("K", format!("{total_momentum} outside [-π, π]")));
        }
        if half_width == 0 {
            return Err(invalid("S", "truncation must be positive"));
        }
        if params.shape == InteractionShape::Exponential
            && (half_width as f64) < 10.0 / params.range
        {
            return Err(invalid(
                "S",
                format!(
                    "S = {half_width} is shorter than 10/γ = {:.1}",
                    10.0 / params.range
                ),
            ));
        }
        Ok(Self {
            params: params.clone(),
            total_momentum,
            half_width,
            potential: (0..=half_width).map(|s| params.interaction(s)).collect(),
        })
    }

    /// Truncation `S = max(100, ⌈12/γ⌉)`.
    pub fn default_half_width(params: &HubbardParams) -> usize {
        match &params.shape {
            InteractionShape::Exponential => 100usize.max((12.0 / params.range).ceil() as usize),
            InteractionShape::OnsiteOnly => 100,
            InteractionShape::Custom(tail) => 100usize.max(2 * tail.len()),
        }
    }

    pub fn with_default_truncation(params: &HubbardParams, total_momentum: f64) -> Result<Self> {
        Self::new(params, total_momentum, Self::default_half_width(params))
    }

    pub fn params(&self) -> &HubbardParams {
        &self.params
    }

    pub fn total_momentum(&self) -> f64 {
        self.total_momentum
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn dim(&self) -> usize {
        2 * self.half_width + 1
    }

    /// Interaction at `|s|` for `|s| <= S`.
    pub fn potential(&self, s: isize) -> f64 {
        self.potential[s.unsigned_abs()]
    }

    /// Off-diagonal element `-2J cos(K/2)`.
    pub fn effective_hopping(&self) -> f64 {
        -2.0 * self.params.hopping * cos_half(self.total_momentum)
    }

    /// Half-width `4J|cos(K/2)|` of the two-particle scattering continuum.
    pub fn band_edge(&self) -> f64 {
        4.0 * self.params.hopping * cos_half(self.total_momentum).abs()
    }

    pub fn with_half_width(&self, half_width: usize) -> Result<Self> {
        Self::new(&self.params, self.total_momentum, half_width)
    }

    /// Even sector in the basis `{e_0, (e_s + e_{-s})/√2}`, `s = 1..=S`.
    pub(crate) fn symmetric_sector(&self) -> SymTridiagonal {
        let t = self.effective_hopping();
        let mut off = vec![t; self.half_width];
        off[0] = SQRT_2 * t;
        SymTridiagonal::new(self.potential.clone(), off)
    }

    /// Odd sector in the basis `(e_s - e_{-s})/√2`, `s = 1..=S`.
    pub(crate) fn antisymmetric_sector(&self) -> SymTridiagonal {
        let t = self.effective_hopping();
        SymTridiagonal::new(self.potential[1..].to_vec(), vec![t; self.half_width - 1])
    }
}

/// Relative Hamiltonian on `s = -S..=S` (row `i` is `s = i - S`).
pub fn relative_hamiltonian(problem: &RelativeProblem) -> SymTridiagonal {
    let s_max = problem.half_width as isize;
    let diag = (-s_max..=s_max).map(|s| problem.potential(s)).collect();
    SymTridiagonal::new(
        diag,
        vec![problem.effective_hopping(); 2 * problem.half_width],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

impl Parity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Parity::Symmetric => "S",
            Parity::Antisymmetric => "A",
        }
    }
}

/// Doublon: eigenfunction of the relative problem outside the continuum.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    /// `f(s)` at index `s + S`, unit norm.
    pub wavefunction: Vec<f64>,
    pub parity: Parity,
    pub total_momentum: f64,
}

impl BoundState {
    pub fn half_width(&self) -> usize {
        self.wavefunction.len() / 2
    }

    pub fn amplitude(&self, s: isize) -> f64 {
        self.wavefunction[(s + self.half_width() as isize) as usize]
    }

    pub fn edge_amplitude(&self) -> f64 {
        let n = self.wavefunction.len();
        self.wavefunction[0]
            .abs()
            .max(self.wavefunction[n - 1].abs())
    }
}

fn expand_sector(vector: &[f64], parity: Parity, half_width: usize) -> Vec<f64> {
    let mut f = vec![0.0; 2 * half_width + 1];
    let centre = half_width;
    match parity {
        Parity::Symmetric => {
            f[centre] = vector[0];
            for s in 1..=half_width {
                f[centre + s] = vector[s] / SQRT_2;
                f[centre - s] = vector[s] / SQRT_2;
            }
        }
        Parity::Antisymmetric => {
            for s in 1..=half_width {
                f[centre + s] = vector[s - 1] / SQRT_2;
                f[centre - s] = -vector[s - 1] / SQRT_2;
            }
        }
    }
    f
}

/// Eigenpairs of the truncated relative operator with
/// `|E| > 4J|cos(K/2)| + BAND_MARGIN`, ordered by energy.
///
/// Every returned state has `|f(±S)| <= EDGE_TOLERANCE`. If any eigenvalue
/// outside the band fails that test the truncation is reported as not
/// converged: such a level is either a weakly bound state that does not fit
/// in the box or a box level pulled out of the continuum by the interaction
/// tail, and only a larger `S` tells the two apart.
pub fn solve_bound_states(problem: &RelativeProblem) -> Result<Vec<BoundState>> {
    let threshold = problem.band_edge() + BAND_MARGIN;
    let s_max = problem.half_width;
    let mut states = Vec::new();
    for (parity, sector) in [
        (Parity::Symmetric, problem.symmetric_sector()),
        (Parity::Antisymmetric, problem.antisymmetric_sector()),
    ] {
        let n = sector.dim();
        let below = sector.count_below(-threshold);
        let above = n - sector.count_below(threshold);
        for k in (0..below).chain(n - above..n) {
            let energy = sector.eigenvalue(k);
            if energy.abs() <= threshold {
                continue;
            }
            let vector = sector.eigenvector(energy);
            let state = BoundState {
                energy,
                wavefunction: expand_sector(&vector, parity, s_max),
                parity,
                total_momentum: problem.total_momentum,
            };
            let edge = state.edge_amplitude();
            if edge > EDGE_TOLERANCE {
                return Err(Error::TruncationNotConverged {
                    half_width: s_max,
                    reason: format!("level at E = {energy:.10} keeps edge amplitude {edge:.2e}"),
                });
            }
            states.push(state);
        }
    }
    states.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(states)
}

/// Bound states at a truncation certified by doubling.
#[derive(Clone, Debug)]
pub struct BoundSpectrum {
    pub states: Vec<BoundState>,
    pub half_width: usize,
}

impl BoundSpectrum {
    pub fn count(&self) -> usize {
        self.states.len()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }
}

/// Start from `problem`'s truncation and double `S` until the bound states
/// converge and their count and energies (to `DOUBLING_TOLERANCE`) survive one
/// further doubling.
pub fn solve_bound_states_converged(problem: &RelativeProblem) -> Result<BoundSpectrum> {
    let mut current = problem.clone();
    loop {
        let next_width = current.half_width * 2;
        if next_width > MAX_HALF_WIDTH {
            return Err(Error::TruncationNotConverged {
                half_width: current.half_width,
                reason: "no stable truncation found".into(),
            });
        }
        let doubled = current.with_half_width(next_width)?;
        if let Ok(states) = solve_bound_states(&current) {
            if let Ok(check) = solve_bound_states(&doubled) {
                let stable = states.len() == check.len()
                    && states
                        .iter()
                        .zip(&check)
                        .all(|(a, b)| (a.energy - b.energy).abs() < DOUBLING_TOLERANCE);
                if stable {
                    return Ok(BoundSpectrum {
                        states,
                        half_width: current.half_width,
                    });
                }
            }
        }
        current = doubled;
    }
}
