//! Unitary time evolution of two-particle states.

mod bessel;
mod bounds;
mod chebyshev;
mod dense;

pub use bessel::bessel_j_sequence;
pub use bounds::{estimate_spectral_bounds, SpectralBounds, BRACKET_MARGIN};
pub use chebyshev::{ChebyshevPropagator, MAX_SCALED_STEP};
pub use dense::{dense_matrix, DenseOracle, DENSE_MAX_SITES};

use crate::error::{invalid, Error, Result};
use crate::model::{Hamiltonian, TwoParticleState};
use crate::observables::{observe, ObservableSeries, Observation};

/// Edge occupation above which later samples are flagged as contaminated by
/// reflections off an open boundary.
pub const LEAKAGE_THRESHOLD: f64 = 1e-4;
/// Relative norm drift treated as a sign that the spectral bracket is wrong.
pub const NORM_ALARM: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    PolynomialExpansion,
    DenseOracle,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropagatorConfig {
    /// Sampling interval of the recorded observables.
    pub dt_out: f64,
    /// Target propagation error per unit time.
    pub accuracy: f64,
    /// Spectral bracket; estimated from the Hamiltonian when `None`.
    pub spectral_bounds: Option<SpectralBounds>,
    pub method: Method,
    /// Times at which full states are kept (nearest sample is used).
    pub snapshot_times: Vec<f64>,
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        Self {
            dt_out: 0.1,
            accuracy: 1e-10,
            spectral_bounds: None,
            method: Method::PolynomialExpansion,
            snapshot_times: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EvolutionRecord {
    pub times: Vec<f64>,
    pub snapshots: Vec<TwoParticleState>,
    pub observables: ObservableSeries,
    pub edge_leakage: Vec<f64>,
    /// Set from the first sample whose edge leakage exceeded
    /// [`LEAKAGE_THRESHOLD`] onwards.
    pub contaminated: Vec<bool>,
    pub bounds: SpectralBounds,
    pub final_state: TwoParticleState,
}

impl EvolutionRecord {
    /// Time of the first boundary-contaminated sample.
    pub fn contamination_onset(&self) -> Option<f64> {
        self.contaminated
            .iter()
            .position(|&c| c)
            .map(|i| self.times[i])
    }
}

/// Default spectral bracket of an assembled Hamiltonian.
pub fn bounds_for(ham: &Hamiltonian) -> SpectralBounds {
    bounds::bracket(ham.hopping(), ham.potential())
}

/// Per-step series cut: far below the requested accuracy and at roundoff
/// level, so that unitarity is limited by arithmetic only.
fn series_tolerance(accuracy: f64, dt: f64) -> f64 {
    (accuracy * dt * 1e-4).min(1e-16)
}

/// Output grid `0, dt_out, 2 dt_out, ..., t_final` (last interval may be short).
pub fn sample_times(t_final: f64, dt_out: f64) -> Vec<f64> {
    let steps = (t_final / dt_out - 1e-9).ceil().max(1.0) as usize;
    (0..=steps)
        .map(|k| (k as f64 * dt_out).min(t_final))
        .collect()
}

/// Evolve `initial` to `t_final`, recording observables every `dt_out` and
/// calling `on_sample` for each recorded state (including `t = 0`).
pub fn evolve<F>(
    initial: &TwoParticleState,
    ham: &Hamiltonian,
    config: &PropagatorConfig,
    t_final: f64,
    mut on_sample: F,
) -> Result<EvolutionRecord>
where
    F: FnMut(&TwoParticleState, &Observation),
{
    initial.ensure_lattice(ham.lattice())?;
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(invalid("t_final", "must be positive"));
    }
    if !(config.dt_out.is_finite() && config.dt_out > 0.0) {
        return Err(invalid("dt_out", "must be positive"));
    }
    if !(config.accuracy.is_finite() && config.accuracy > 0.0) {
        return Err(invalid("accuracy", "must be positive"));
    }
    let bounds = config.spectral_bounds.unwrap_or_else(|| bounds_for(ham));
    let n = ham.lattice().n_sites();
    let times = sample_times(t_final, config.dt_out);
    let t0 = initial.time();

    let dense = match config.method {
        Method::DenseOracle => Some(DenseOracle::new(ham)?),
        Method::PolynomialExpansion => None,
    };
    let mut chebyshev =
        ChebyshevPropagator::new(bounds, series_tolerance(config.accuracy, config.dt_out), n);

    let initial_norm = initial.norm();
    let mut psi = initial.amplitudes().to_owned();
    let mut series = ObservableSeries::default();
    let mut snapshots = Vec::new();
    let mut pending: Vec<f64> = config.snapshot_times.clone();
    let mut leakage = Vec::with_capacity(times.len());
    let mut contaminated = Vec::with_capacity(times.len());
    let mut flagged = false;

    for (k, &t) in times.iter().enumerate() {
        if k > 0 {
            let dt = t - times[k - 1];
            match &dense {
                Some(oracle) => psi = oracle.propagate_grid(&psi, dt),
                None => chebyshev.propagate(ham, &mut psi, dt),
            }
        }
        let state = TwoParticleState::new(psi.clone(), t0 + t)?;
        let obs = observe(&state, ham, t)?;
        let drift = (obs.norm.sqrt() - initial_norm).abs();
        if drift.is_nan() || drift > NORM_ALARM * initial_norm {
            return Err(Error::SpectralBracket { time: t, drift });
        }
        flagged |= obs.edge_leak > LEAKAGE_THRESHOLD;
        leakage.push(obs.edge_leak);
        contaminated.push(flagged);
        pending.retain(|&want| {
            if (want - t).abs() <= 0.5 * config.dt_out {
                snapshots.push(state.clone());
                false
            } else {
                true
            }
        });
        on_sample(&state, &obs);
        series.push(obs);
    }

    Ok(EvolutionRecord {
        times,
        snapshots,
        observables: series,
        edge_leakage: leakage,
        contaminated,
        bounds,
        final_state: TwoParticleState::new(psi, t0 + t_final)?,
    })
}

/// Final state at `initial.time() + t` with no intermediate sampling.
pub fn propagate(
    initial: &TwoParticleState,
    ham: &Hamiltonian,
    t: f64,
    accuracy: f64,
) -> Result<TwoParticleState> {
    initial.ensure_lattice(ham.lattice())?;
    let bounds = bounds_for(ham);
    let tol = series_tolerance(accuracy, t.abs().min(MAX_SCALED_STEP / bounds.half_width()));
    let mut chebyshev = ChebyshevPropagator::new(bounds, tol, ham.lattice().n_sites());
    let mut psi = initial.amplitudes().to_owned();
    chebyshev.propagate(ham, &mut psi, t);
    TwoParticleState::new(psi, initial.time() + t)
}
