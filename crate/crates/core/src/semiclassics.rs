//! Leading-order semiclassical motion of the pair: group velocities
//! `2J sin p` and the interaction gradient as a force on each particle.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::HubbardParams;

/// Positions closer than this abort the integration.
pub const COINCIDENCE_GUARD: f64 = 0.5;
pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const TRAJECTORY_CSV_HEADER: &str = "t,x,y,px,py";
const MIN_STEP: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemiclassicalState {
    pub x: f64,
    pub y: f64,
    /// Unwrapped quasi-momenta.
    pub px: f64,
    pub py: f64,
}

impl SemiclassicalState {
    pub fn separation(&self) -> f64 {
        self.y - self.x
    }

    fn axpy(&self, h: f64, d: &Self) -> Self {
        Self {
            x: self.x + h * d.x,
            y: self.y + h * d.y,
            px: self.px + h * d.px,
            py: self.py + h * d.py,
        }
    }

    fn max_diff(&self, o: &Self) -> f64 {
        (self.x - o.x)
            .abs()
            .max((self.y - o.y).abs())
            .max((self.px - o.px).abs())
            .max((self.py - o.py).abs())
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.px.is_finite() && self.py.is_finite()
    }
}

/// Slope `dV/ds` of the interaction at distance `|s|`.
pub fn interaction_force(params: &HubbardParams, s: f64) -> Result<f64> {
    if !s.is_finite() || s == 0.0 {
        return Err(invalid("s", "separation must be finite and nonzero"));
    }
    Ok(params.interaction_slope(s.abs()))
}

/// Constant force felt by a pair frozen at separation `d`,
/// `F = -dV/ds(d)` (equal to `γ U e^{-γd}` for the exponential shape).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForceModel {
    pub force: f64,
    pub separation: f64,
}

impl ForceModel {
    pub fn new(params: &HubbardParams, separation: f64) -> Result<Self> {
        let slope = interaction_force(params, separation)?;
        Ok(Self {
            force: -slope,
            separation,
        })
    }

    /// `2π/|F|`.
    pub fn period(&self) -> Result<f64> {
        if self.force == 0.0 {
            return Err(Error::ZeroForce);
        }
        Ok(2.0 * PI / self.force.abs())
    }

    /// Peak displacement `|4J/F|`, reached after half a period.
    pub fn amplitude(&self, hopping: f64) -> Result<f64> {
        if self.force == 0.0 {
            return Err(Error::ZeroForce);
        }
        Ok((4.0 * hopping / self.force).abs())
    }
}

pub fn bloch_period(params: &HubbardParams, separation: f64) -> Result<f64> {
    ForceModel::new(params, separation)?.period()
}

fn derivative(params: &HubbardParams, s: &SemiclassicalState) -> SemiclassicalState {
    let j2 = 2.0 * params.hopping;
    let sep = s.separation();
    let push = sep.signum() * params.interaction_slope(sep.abs());
    SemiclassicalState {
        x: j2 * s.px.sin(),
        y: j2 * s.py.sin(),
        px: push,
        py: -push,
    }
}

fn rk4(params: &HubbardParams, s: &SemiclassicalState, h: f64) -> SemiclassicalState {
    let k1 = derivative(params, s);
    let k2 = derivative(params, &s.axpy(0.5 * h, &k1));
    let k3 = derivative(params, &s.axpy(0.5 * h, &k2));
    let k4 = derivative(params, &s.axpy(h, &k3));
    SemiclassicalState {
        x: s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
        y: s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
        px: s.px + h / 6.0 * (k1.px + 2.0 * k2.px + 2.0 * k3.px + k4.px),
        py: s.py + h / 6.0 * (k1.py + 2.0 * k2.py + 2.0 * k3.py + k4.py),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    /// Largest step.
    pub step: f64,
    /// Local error bound per step, estimated by step doubling.
    pub tolerance: f64,
    pub dt_out: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            step: DEFAULT_STEP,
            tolerance: DEFAULT_TOLERANCE,
            dt_out: 0.1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: SemiclassicalState,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> Option<&TrajectorySample> {
        self.samples.last()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{TRAJECTORY_CSV_HEADER}")?;
        for s in &self.samples {
            let q = s.state;
            writeln!(out, "{},{},{},{},{}", s.t, q.x, q.y, q.px, q.py)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines.next().transpose()?.unwrap_or_default();
        if header.trim() != TRAJECTORY_CSV_HEADER {
            return Err(Error::Format(format!(
                "unexpected trajectory header `{header}`"
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
            if v.len() != 5 {
                return Err(Error::Format(format!(
                    "line {}: expected 5 fields, got {}",
                    i + 2,
                    v.len()
                )));
            }
            samples.push(TrajectorySample {
                t: v[0],
                state: SemiclassicalState {
                    x: v[1],
                    y: v[2],
                    px: v[3],
                    py: v[4],
                },
            });
        }
        Ok(Self { samples })
    }
}

/// Sidecar written next to a trajectory CSV.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySummary {
    #[serde(rename = "F")]
    pub force: f64,
    pub period: Option<f64>,
    pub amplitude: Option<f64>,
}

impl TrajectorySummary {
    pub fn new(model: &ForceModel, hopping: f64) -> Self {
        Self {
            force: model.force,
            period: model.period().ok(),
            amplitude: model.amplitude(hopping).ok(),
        }
    }
}

/// Trajectory recorded up to `t_final`, or up to the last sample before the
/// pair came within [`COINCIDENCE_GUARD`] of each other.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialTrajectory {
    pub trajectory: Trajectory,
    /// Time and separation at which the guard tripped.
    pub coincidence: Option<(f64, f64)>,
}

/// Advance from `t0` to `t1`, shrinking the step where the doubling estimate
/// exceeds the tolerance.
fn advance(
    params: &HubbardParams,
    config: &IntegratorConfig,
    mut s: SemiclassicalState,
    t0: f64,
    t1: f64,
) -> Result<std::result::Result<SemiclassicalState, (f64, f64)>> {
    let mut t = t0;
    let mut h = config.step;
    while t1 - t > 1e-12 * t1.abs().max(1.0) {
        let step = h.min(t1 - t);
        let full = rk4(params, &s, step);
        let half = rk4(params, &s, 0.5 * step);
        let fine = rk4(params, &half, 0.5 * step);
        if !fine.is_finite() {
            return Err(Error::StepFailure(t));
        }
        if fine.max_diff(&full) > config.tolerance {
            h = 0.5 * step;
            if h < MIN_STEP {
                return Err(Error::StepFailure(t));
            }
            continue;
        }
        s = fine;
        t += step;
        h = (2.0 * h).min(config.step);
        if s.separation().abs() < COINCIDENCE_GUARD {
            return Ok(Err((t, s.separation())));
        }
    }
    Ok(Ok(s))
}

fn validate(initial: &SemiclassicalState, config: &IntegratorConfig, t_final: f64) -> Result<()> {
    if !initial.is_finite() {
        return Err(invalid("initial", "state must be finite"));
    }
    if initial.separation().abs() < COINCIDENCE_GUARD {
        return Err(Error::Coincidence {
            time: 0.0,
            separation: initial.separation(),
        });
    }
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(invalid("t_final", "must be positive"));
    }
    if !(config.step > 0.0 && config.tolerance > 0.0 && config.dt_out > 0.0) {
        return Err(invalid(
            "integrator",
            "step, tolerance and dt_out must be positive",
        ));
    }
    Ok(())
}

/// Like [`integrate`], but stops cleanly at a coincidence.
pub fn integrate_until_coincidence(
    initial: SemiclassicalState,
    params: &HubbardParams,
    t_final: f64,
    config: &IntegratorConfig,
) -> Result<PartialTrajectory> {
    validate(&initial, config, t_final)?;
    params.validate()?;
    let times = crate::dynamics::sample_times(t_final, config.dt_out);
    let mut samples = vec![TrajectorySample {
        t: 0.0,
        state: initial,
    }];
    let mut s = initial;
    for w in times.windows(2) {
        match advance(params, config, s, w[0], w[1])? {
            Ok(next) => {
                s = next;
                samples.push(TrajectorySample { t: w[1], state: s });
            }
            Err(hit) => {
                return Ok(PartialTrajectory {
                    trajectory: Trajectory { samples },
                    coincidence: Some(hit),
                })
            }
        }
    }
    Ok(PartialTrajectory {
        trajectory: Trajectory { samples },
        coincidence: None,
    })
}

/// Integrate the semiclassical equations on the `dt_out` grid.
pub fn integrate(
    initial: SemiclassicalState,
    params: &HubbardParams,
    t_final: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    let run = integrate_until_coincidence(initial, params, t_final, config)?;
    match run.coincidence {
        Some((time, separation)) => Err(Error::Coincidence { time, separation }),
        None => Ok(run.trajectory),
    }
}

/// Exact solution for a pair whose separation stays fixed (for example
/// `p_x + p_y = π`): the force on `x` is constant, `f = sign(s) dV/ds(|s|)`,
/// and `x(t) = x0 + (2J/f)(cos p_x0 - cos(p_x0 + f t))`, likewise for `y`
/// with `-f`. Returns `None` unless the separation is in fact constant.
pub fn closed_form_trajectory(
    initial: &SemiclassicalState,
    params: &HubbardParams,
    t: f64,
) -> Result<Option<SemiclassicalState>> {
    let s = initial.separation();
    let f = s.signum() * interaction_force(params, s)?;
    let j2 = 2.0 * params.hopping;
    if (initial.px.sin() - initial.py.sin()).abs() > 1e-12
        || (initial.px.cos() + initial.py.cos()).abs() > 1e-12
    {
        return Ok(None);
    }
    let shift = |p0: f64, g: f64| {
        if g == 0.0 {
            j2 * p0.sin() * t
        } else {
            j2 / g * (p0.cos() - (p0 + g * t).cos())
        }
    };
    Ok(Some(SemiclassicalState {
        x: initial.x + shift(initial.px, f),
        y: initial.y + shift(initial.py, -f),
        px: initial.px + f * t,
        py: initial.py - f * t,
    }))
}

/// Bloch trajectory of a pair with `x` leading by `d`: `p_x = π`, `p_y = 0`,
/// `y = x - d`, and `x(t) = x0 + (2J/F)(cos Ft - 1)` with the signed force of
/// [`ForceModel`]. Falls back to `x = x0` when `F = 0`.
pub fn closed_form_bloch(x0: f64, d: f64, params: &HubbardParams, t: f64) -> Result<(f64, f64)> {
    let force = ForceModel::new(params, d)?.force;
    let x = if force == 0.0 {
        x0
    } else {
        x0 + 2.0 * params.hopping / force * ((force * t).cos() - 1.0)
    };
    Ok((x, x - d))
}
