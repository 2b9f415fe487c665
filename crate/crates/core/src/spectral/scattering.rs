use std::f64::consts::{FRAC_PI_2, PI};

use super::{cos_half, RelativeProblem};
use crate::error::{Error, Result};

/// Smallest allowed distance of `q` from the band edges 0 and π.
pub const EDGE_GUARD: f64 = 1e-3;
/// `|W|` must stay below this on the fit window.
pub const DECAY_THRESHOLD: f64 = 1e-12;
pub const FIT_POINTS: usize = 64;
/// Relative rms misfit allowed between the tail and a free wave.
pub const FIT_TOLERANCE: f64 = 1e-8;
const MAX_FIT_START: usize = 1 << 22;

/// Continuum solution of the relative problem with relative momentum `q`.
///
/// Phase shifts are measured against free motion: far from the origin the
/// even solution behaves as `cos(q|s| + δ_S)` and the odd one as
/// `sign(s) sin(q|s| + δ_A)`, both reduced to `(-π/2, π/2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatteringSolution {
    pub q: f64,
    pub total_momentum: f64,
    pub energy: f64,
    pub delta_symmetric: f64,
    pub delta_antisymmetric: f64,
    /// Worst relative rms misfit of the two tail fits.
    pub fit_residual: f64,
}

/// Reduce a phase modulo π into `(-π/2, π/2]`.
pub fn reduce_phase(delta: f64) -> f64 {
    let r = delta.rem_euclid(PI);
    if r > FRAC_PI_2 {
        r - PI
    } else {
        r
    }
}

pub fn scattering_phase_shift(problem: &RelativeProblem, q: f64) -> Result<ScatteringSolution> {
    if !(q.is_finite() && q > EDGE_GUARD && q < PI - EDGE_GUARD) {
        return Err(Error::DegenerateFit(format!(
            "q = {q} too close to the band edges"
        )));
    }
    let t = problem.effective_hopping();
    if t.abs() < 1e-12 {
        return Err(Error::DegenerateFit(
            "flat band: effective hopping vanishes".into(),
        ));
    }
    let params = problem.params();
    let energy = -4.0 * params.hopping * cos_half(problem.total_momentum()) * q.cos();

    let start = params.decay_distance(DECAY_THRESHOLD).max(2);
    if start > MAX_FIT_START {
        let w = params.interaction(MAX_FIT_START).abs();
        return Err(Error::PotentialNotDecayed(w));
    }
    let end = start + FIT_POINTS;

    let even = integrate_outward(
        params,
        energy,
        t,
        1.0,
        (energy - params.onsite) / (2.0 * t),
        end,
    );
    let odd = integrate_outward(params, energy, t, 0.0, 1.0, end);

    let (a_e, b_e, res_e) = fit_free_wave(&even, q, start);
    let (a_o, b_o, res_o) = fit_free_wave(&odd, q, start);
    let fit_residual = res_e.max(res_o);
    if fit_residual.is_nan() || fit_residual > FIT_TOLERANCE {
        return Err(Error::DegenerateFit(format!(
            "tail misfit {fit_residual:.2e}"
        )));
    }
    // a cos(qs) + b sin(qs) = A cos(qs + δ)  with a = A cos δ, b = -A sin δ
    let delta_symmetric = reduce_phase((-b_e).atan2(a_e));
    // a cos(qs) + b sin(qs) = A sin(qs + δ)  with a = A sin δ, b = A cos δ
    let delta_antisymmetric = reduce_phase(a_o.atan2(b_o));
    Ok(ScatteringSolution {
        q,
        total_momentum: problem.total_momentum(),
        energy,
        delta_symmetric,
        delta_antisymmetric,
        fit_residual,
    })
}

/// `f(0..=end)` from the recurrence `t[f(s+1) + f(s-1)] = (E - W(s)) f(s)`,
/// rescaled whenever it grows large (only the shape matters).
fn integrate_outward(
    params: &crate::model::HubbardParams,
    energy: f64,
    t: f64,
    f0: f64,
    f1: f64,
    end: usize,
) -> Vec<f64> {
    let mut f = Vec::with_capacity(end + 1);
    f.push(f0);
    f.push(f1);
    for s in 1..end {
        let next = (energy - params.interaction(s)) * f[s] / t - f[s - 1];
        f.push(next);
        if next.abs() > 1e150 {
            f.iter_mut().for_each(|v| *v *= 1e-150);
        }
    }
    f
}

/// Least-squares `a cos(qs) + b sin(qs)` on `s = start..start + FIT_POINTS`.
fn fit_free_wave(f: &[f64], q: f64, start: usize) -> (f64, f64, f64) {
    let (mut cc, mut cs, mut ss, mut fc, mut fs) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (s, &fv) in f.iter().enumerate().skip(start).take(FIT_POINTS) {
        let (sn, cn) = (q * s as f64).sin_cos();
        cc += cn * cn;
        cs += cn * sn;
        ss += sn * sn;
        fc += fv * cn;
        fs += fv * sn;
    }
    let det = cc * ss - cs * cs;
    let a = (fc * ss - fs * cs) / det;
    let b = (fs * cc - fc * cs) / det;
    let amplitude = a.hypot(b);
    let misfit = (start..start + FIT_POINTS)
        .map(|s| {
            let (sn, cn) = (q * s as f64).sin_cos();
            (f[s] - a * cn - b * sn).powi(2)
        })
        .sum::<f64>()
        / FIT_POINTS as f64;
    (a, b, misfit.sqrt() / amplitude)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::HubbardParams;

    #[test]
    fn phase_reduction() {
        assert_eq!(reduce_phase(0.0), 0.0);
        assert!((reduce_phase(PI + 0.1) - 0.1).abs() < 1e-15);
        assert!((reduce_phase(-FRAC_PI_2) - FRAC_PI_2).abs() < 1e-15);
        assert!((reduce_phase(2.0) - (2.0 - PI)).abs() < 1e-15);
    }

    #[test]
    fn free_motion_has_no_shift() {
        let p = HubbardParams::exponential(1.0, 0.0, 0.2);
        for k in [0.0, 1.3, -2.5] {
            let prob = RelativeProblem::with_default_truncation(&p, k).unwrap();
            for q in [0.2, 1.0, 2.9] {
                let sol = scattering_phase_shift(&prob, q).unwrap();
                assert!(sol.delta_symmetric.abs() < 1e-9, "{sol:?}");
                assert!(sol.delta_antisymmetric.abs() < 1e-9, "{sol:?}");
            }
        }
    }

    #[test]
    fn energy_is_band_dispersion() {
        let p = HubbardParams::exponential(1.0, -6.0, 1.0 / 12.0);
        let prob = RelativeProblem::with_default_truncation(&p, 0.7).unwrap();
        let q = 1.1;
        let sol = scattering_phase_shift(&prob, q).unwrap();
        assert_eq!(sol.energy, -4.0 * cos_half(0.7) * q.cos());
        assert!(sol.energy.abs() <= prob.band_edge());
    }

    #[test]
    fn onsite_even_shift_matches_closed_form() {
        // contact interaction: the free form cos(q|s| + δ) holds down to s = 0,
        // and the s = 0 equation gives tan δ_S = -U / (4J cos(K/2) sin q)
        let u = 1.7;
        let p = HubbardParams::onsite_only(1.0, u);
        let prob = RelativeProblem::with_default_truncation(&p, 0.0).unwrap();
        for q in [0.4, 1.5, 2.6] {
            let sol = scattering_phase_shift(&prob, q).unwrap();
            let expected = reduce_phase((-u / (4.0 * q.sin())).atan());
            assert!(
                (sol.delta_symmetric - expected).abs() < 1e-10,
                "q={q}: {sol:?} vs {expected}"
            );
            assert!(sol.delta_antisymmetric.abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_band_edges_and_flat_band() {
        let p = HubbardParams::exponential(1.0, -6.0, 1.0 / 12.0);
        let prob = RelativeProblem::with_default_truncation(&p, 0.0).unwrap();
        assert!(scattering_phase_shift(&prob, 1e-5).is_err());
        assert!(scattering_phase_shift(&prob, PI - 1e-5).is_err());
        let flat = RelativeProblem::with_default_truncation(&p, PI).unwrap();
        assert!(scattering_phase_shift(&flat, 1.0).is_err());
    }
}
