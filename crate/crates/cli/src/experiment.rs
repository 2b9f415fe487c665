//! Wires lattice, packet, propagator, spectrum and semiclassics into one run
//! and writes its artifacts.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use h2p_core::dynamics::{evolve, EvolutionRecord, PropagatorConfig};
use h2p_core::model::{gaussian_packet, save_grid, Hamiltonian, TwoParticleState};
use h2p_core::semiclassics::{
    integrate_until_coincidence, ForceModel, IntegratorConfig, SemiclassicalState, Trajectory,
    TrajectorySummary, COINCIDENCE_GUARD,
};
use h2p_core::spectral::{solve_bound_states_converged, RelativeProblem};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Artifact, ConfigError, ExperimentConfig};

pub const SERIES_FILE: &str = "series.csv";
pub const TRAJECTORY_FILE: &str = "semiclassical.csv";
pub const TRAJECTORY_SIDECAR: &str = "semiclassical.json";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CONFIG_FILE: &str = "config.json";

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Numerical(h2p_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<h2p_core::Error> for RunError {
    fn from(e: h2p_core::Error) -> Self {
        use h2p_core::Error as E;
        match e {
            E::InvalidParameter { name, reason } => RunError::Config(ConfigError {
                field: Some(name.to_string()),
                line: None,
                message: reason,
            }),
            E::Io(io) => RunError::Io(io),
            other => RunError::Numerical(other),
        }
    }
}

impl RunError {
    /// 2 for configuration problems, 3 for a violated numerical contract,
    /// 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) => 3,
            RunError::Io(_) => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    #[serde(rename = "F")]
    pub force: Option<f64>,
    pub period: Option<f64>,
    pub amplitude: Option<f64>,
    pub max_separation_drift: f64,
    pub max_com_drift: f64,
    pub doublon_count_k0: Option<usize>,
    pub contamination_onset: Option<f64>,
    pub initial_edge_occupation: f64,
    pub clipped: bool,
    /// Time at which the semiclassical pair met, if it did.
    pub semiclassical_coincidence: Option<f64>,
    pub samples: usize,
}

pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub record: EvolutionRecord,
    pub trajectory: Option<Trajectory>,
    pub force_model: Option<ForceModel>,
    pub summary: Summary,
    pub warnings: Vec<String>,
}

fn doublon_count(config: &ExperimentConfig) -> Result<usize, h2p_core::Error> {
    let problem = RelativeProblem::with_default_truncation(&config.params(), 0.0)?;
    Ok(solve_bound_states_converged(&problem)?.count())
}

/// Run the quantum evolution and its semiclassical counterpart.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput, RunError> {
    config.validate()?;
    let mut warnings = Vec::new();
    let lattice = config.lattice();
    let params = config.params();
    let prepared = gaussian_packet(&lattice, &config.packet(), config.statistics())?;
    if prepared.clipped {
        warnings.push(format!(
            "packet touches the boundary: initial edge occupation {:.3e}",
            prepared.edge_occupation
        ));
    }
    let ham = Hamiltonian::from_params(&params, lattice)?;
    let propagator = PropagatorConfig {
        dt_out: config.dt_out,
        accuracy: config.accuracy,
        snapshot_times: config.snapshots(),
        ..Default::default()
    };
    let record = evolve(
        &prepared.state,
        &ham,
        &propagator,
        config.t_final,
        |_, _| {},
    )?;

    let centers = config.centers();
    let separation = centers.separation();
    let (force_model, trajectory, coincidence) = if separation.abs() >= COINCIDENCE_GUARD {
        let model = ForceModel::new(&params, separation)?;
        let initial = SemiclassicalState {
            x: centers.x0,
            y: centers.y0,
            px: config.px.0,
            py: config.py.0,
        };
        let integrator = IntegratorConfig {
            dt_out: config.dt_out,
            ..Default::default()
        };
        let run = integrate_until_coincidence(initial, &params, config.t_final, &integrator)?;
        if let Some((t, _)) = run.coincidence {
            warnings.push(format!(
                "semiclassical pair reached coincidence at t = {t:.3}; trajectory truncated"
            ));
        }
        (
            Some(model),
            Some(run.trajectory),
            run.coincidence.map(|c| c.0),
        )
    } else {
        warnings.push("packets start on top of each other; semiclassical run skipped".into());
        (None, None, None)
    };

    let count = match doublon_count(config) {
        Ok(n) => Some(n),
        Err(e) => {
            warnings.push(format!("doublon count unavailable: {e}"));
            None
        }
    };

    let samples = &record.observables.samples;
    let first = samples[0];
    let max_drift = |f: fn(&h2p_core::observables::Observation) -> f64| {
        samples
            .iter()
            .map(|o| (f(o) - f(&first)).abs())
            .fold(0.0, f64::max)
    };
    let summary = Summary {
        force: force_model.map(|m| m.force),
        period: force_model.and_then(|m| m.period().ok()),
        amplitude: force_model.and_then(|m| m.amplitude(params.hopping).ok()),
        max_separation_drift: max_drift(|o| o.separation),
        max_com_drift: max_drift(|o| o.com),
        doublon_count_k0: count,
        contamination_onset: record.contamination_onset(),
        initial_edge_occupation: prepared.edge_occupation,
        clipped: prepared.clipped,
        semiclassical_coincidence: coincidence,
        samples: samples.len(),
    };
    Ok(ExperimentOutput {
        config: config.clone(),
        record,
        trajectory,
        force_model,
        summary,
        warnings,
    })
}

/// File name of the snapshot nearest to `t`.
pub fn snapshot_name(t: f64) -> String {
    format!("snapshot_t{t}.h2pg")
}

fn snapshot_label(state: &TwoParticleState, requested: &[f64]) -> f64 {
    requested
        .iter()
        .copied()
        .min_by(|a, b| {
            (a - state.time())
                .abs()
                .total_cmp(&(b - state.time()).abs())
        })
        .unwrap_or(state.time())
}

/// Write the selected artifacts into `dir` and return the files written.
pub fn write_artifacts(output: &ExperimentOutput, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    fs::create_dir_all(dir)?;
    let config = &output.config;
    let mut written = Vec::new();
    let mut create = |name: String| -> std::io::Result<(BufWriter<File>, PathBuf)> {
        let path = dir.join(name);
        written.push(path.clone());
        Ok((BufWriter::new(File::create(&path)?), path))
    };
    {
        let (mut f, _) = create(CONFIG_FILE.into())?;
        std::io::Write::write_all(&mut f, config.to_json().as_bytes())?;
    }
    if config.wants(Artifact::Series) {
        let (f, _) = create(SERIES_FILE.into())?;
        output.record.observables.write_csv(f)?;
    }
    if config.wants(Artifact::Semiclassical) {
        if let (Some(traj), Some(model)) = (&output.trajectory, &output.force_model) {
            let (f, _) = create(TRAJECTORY_FILE.into())?;
            traj.write_csv(f)?;
            let (f, _) = create(TRAJECTORY_SIDECAR.into())?;
            serde_json::to_writer_pretty(f, &TrajectorySummary::new(model, config.hopping))
                .map_err(std::io::Error::other)?;
        }
    }
    if config.wants(Artifact::Snapshots) {
        for state in &output.record.snapshots {
            let label = snapshot_label(state, &config.snapshots());
            let (_, path) = create(snapshot_name(label))?;
            save_grid(state, &path)?;
        }
    }
    if config.wants(Artifact::Summary) {
        let (f, _) = create(SUMMARY_FILE.into())?;
        serde_json::to_writer_pretty(f, &output.summary).map_err(std::io::Error::other)?;
    }
    Ok(written)
}

/// Output directory: the explicit one, else the config's, else `h2p-out`.
pub fn output_dir(config: &ExperimentConfig, explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("h2p-out"))
}

pub fn run_and_write(config: &ExperimentConfig, dir: &Path) -> Result<ExperimentOutput, RunError> {
    let output = run_experiment(config)?;
    write_artifacts(&output, dir)?;
    Ok(output)
}

/// Worker count from `H2P_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("H2P_THREADS")
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

/// Run independent configurations in parallel, each into `root/<name>`.
pub fn run_sweep(
    jobs: &[(String, ExperimentConfig)],
    root: &Path,
) -> Vec<(String, Result<Summary, RunError>)> {
    let work = || {
        jobs.par_iter()
            .map(|(name, config)| {
                let result = run_and_write(config, &root.join(name)).map(|o| o.summary);
                (name.clone(), result)
            })
            .collect()
    };
    match thread_cap().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(work),
        None => work(),
    }
}
