use std::f64::consts::PI;

use h2p_core::model::HubbardParams;
use h2p_core::spectral::{
    doublon_band_sweep, momentum_grid, reduce_phase, relative_hamiltonian, scattering_phase_shift,
    solve_bound_states, solve_bound_states_converged, Parity, RelativeProblem, BAND_MARGIN,
};
use nalgebra::{DMatrix, SymmetricEigen};

fn paper() -> HubbardParams {
    HubbardParams::exponential(1.0, -6.0, 1.0 / 12.0)
}

/// Dense relative operator on `s = -L..=L` with `f(±(L+1)) = 0`.
fn dense_relative(params: &HubbardParams, k: f64, l: usize) -> SymmetricEigen<f64, nalgebra::Dyn> {
    let n = 2 * l + 1;
    let t = -2.0 * params.hopping * (k / 2.0).cos();
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            params.interaction((i as isize - l as isize).unsigned_abs())
        } else if i.abs_diff(j) == 1 {
            t
        } else {
            0.0
        }
    });
    SymmetricEigen::new(m)
}

#[test]
fn onsite_band_matches_dense_diagonalization() {
    let params = HubbardParams::onsite_only(1.0, -6.0);
    let ks = momentum_grid(41);
    let table = doublon_band_sweep(&params, &ks).unwrap();
    for &k in &ks {
        let levels = table.energies_at(k);
        assert_eq!(levels.len(), 1, "K = {k}");
        let oracle = dense_relative(&params, k, 100).eigenvalues.min();
        let closed = -(36.0 + 16.0 * (k / 2.0).cos().powi(2)).sqrt();
        assert!(
            (levels[0] - oracle).abs() < 1e-6,
            "K = {k}: {} vs {oracle}",
            levels[0]
        );
        assert!((levels[0] - closed).abs() < 1e-6);
    }
}

#[test]
fn zone_edge_levels_are_the_interaction_values() {
    let params = HubbardParams::exponential(1.0, -6.0, 0.5);
    for k in [PI, -PI] {
        let problem = RelativeProblem::with_default_truncation(&params, k).unwrap();
        let spectrum = solve_bound_states_converged(&problem).unwrap();
        let mut expected = vec![params.interaction(0)];
        for s in 1.. {
            let w = params.interaction(s);
            if w >= -BAND_MARGIN {
                break;
            }
            expected.extend([w, w]);
        }
        expected.sort_by(f64::total_cmp);
        let got = spectrum.energies();
        assert_eq!(got.len(), expected.len());
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn bound_states_are_orthonormal_eigenvectors() {
    let problem = RelativeProblem::new(&paper(), 0.7, 1200).unwrap();
    let states = solve_bound_states(&problem).unwrap();
    assert!(states.len() > 10);
    let h = relative_hamiltonian(&problem);
    for (i, a) in states.iter().enumerate() {
        let hf = h.matvec(&a.wavefunction);
        let residual = hf
            .iter()
            .zip(&a.wavefunction)
            .map(|(x, f)| (x - a.energy * f).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(residual <= 1e-9, "residual {residual}");
        assert!(a.edge_amplitude() <= 1e-8);
        assert!(a.energy.abs() > problem.band_edge());
        let sign = if a.parity == Parity::Symmetric {
            1.0
        } else {
            -1.0
        };
        for s in 1..=1200isize {
            assert_eq!(a.amplitude(-s), sign * a.amplitude(s));
        }
        for b in &states[i..] {
            let dot: f64 = a
                .wavefunction
                .iter()
                .zip(&b.wavefunction)
                .map(|(x, y)| x * y)
                .sum();
            let expected = if std::ptr::eq(a, b) { 1.0 } else { 0.0 };
            assert!((dot - expected).abs() < 1e-10);
        }
    }
}

#[test]
fn bound_plus_continuum_is_complete() {
    let params = HubbardParams::exponential(1.0, -3.0, 0.6);
    let problem = RelativeProblem::new(&params, 1.1, 120).unwrap();
    let bound = solve_bound_states(&problem).unwrap();
    let all = relative_hamiltonian(&problem).eigenvalues();
    let continuum = all
        .iter()
        .filter(|e| e.abs() <= problem.band_edge() + BAND_MARGIN)
        .count();
    assert_eq!(bound.len() + continuum, problem.dim());
    let dense = dense_relative(&params, 1.1, 120);
    let mut dense_bound: Vec<f64> = dense
        .eigenvalues
        .iter()
        .copied()
        .filter(|e| e.abs() > problem.band_edge() + BAND_MARGIN)
        .collect();
    dense_bound.sort_by(f64::total_cmp);
    assert_eq!(dense_bound.len(), bound.len());
    for (a, b) in bound.iter().zip(&dense_bound) {
        assert!((a.energy - b).abs() < 1e-10);
    }
}

#[test]
fn short_range_limit_matches_onsite() {
    let onsite = HubbardParams::onsite_only(1.0, -6.0);
    let steep = HubbardParams::exponential(1.0, -6.0, 20.0);
    for k in [0.0, 0.9, 2.3] {
        let a = solve_bound_states_converged(
            &RelativeProblem::with_default_truncation(&onsite, k).unwrap(),
        )
        .unwrap();
        let b = solve_bound_states_converged(
            &RelativeProblem::with_default_truncation(&steep, k).unwrap(),
        )
        .unwrap();
        assert_eq!(a.count(), b.count());
        for (x, y) in a.energies().iter().zip(b.energies()) {
            assert!((x - y).abs() < 1e-8);
        }
    }
}

#[test]
fn band_is_even_in_total_momentum() {
    let ks = [0.3, 1.2, 2.0, 2.9];
    let plus = doublon_band_sweep(&paper(), &ks).unwrap();
    let minus = doublon_band_sweep(&paper(), &ks.map(|k| -k)).unwrap();
    for k in ks {
        let (a, b) = (plus.energies_at(k), minus.energies_at(-k));
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn free_relative_spectrum_fills_the_band() {
    let problem = RelativeProblem::new(&HubbardParams::onsite_only(1.0, 0.0), 0.0, 400).unwrap();
    let e = relative_hamiltonian(&problem).eigenvalues();
    assert!(e.iter().all(|v| v.abs() <= 4.0));
    assert!(e[0] < -3.999 && e[e.len() - 1] > 3.999);
    assert!(e.windows(2).all(|w| w[1] - w[0] < 0.02));
    assert!(solve_bound_states(&problem).unwrap().is_empty());
}

/// Even levels in a box with walls at `±(L+1)` satisfy
/// `q (L+1) + δ = (m + 1/2) π`, so each level gives the phase shift at its
/// own momentum.
#[test]
fn symmetric_phase_shift_matches_box_quantization() {
    let l = 500usize;
    let eig = dense_relative(&paper(), 0.0, l);
    let mut levels: Vec<(f64, f64)> = Vec::new();
    for (i, &e) in eig.eigenvalues.iter().enumerate() {
        if e.abs() >= 4.0 {
            continue;
        }
        let v = eig.eigenvectors.column(i);
        let even = (1..=l).all(|s| (v[l + s] - v[l - s]).abs() < 1e-8);
        if !even {
            continue;
        }
        let q = (-e / 4.0).acos();
        levels.push((q, reduce_phase(PI / 2.0 - q * (l + 1) as f64)));
    }
    levels.sort_by(|a, b| a.0.total_cmp(&b.0));
    let target = PI / 2.0;
    let hi = levels.iter().position(|&(q, _)| q > target).unwrap();
    let (q0, d0) = levels[hi - 1];
    let (q1, mut d1) = levels[hi];
    d1 = d0 + reduce_phase(d1 - d0);
    let box_delta = d0 + (d1 - d0) * (target - q0) / (q1 - q0);

    let problem = RelativeProblem::with_default_truncation(&paper(), 0.0).unwrap();
    let fit = scattering_phase_shift(&problem, target).unwrap();
    let gap = reduce_phase(fit.delta_symmetric - box_delta);
    assert!(
        gap.abs() < 1e-4,
        "fit {} vs box {box_delta}",
        fit.delta_symmetric
    );
}

#[test]
fn antisymmetric_phase_shift_matches_box_quantization() {
    // odd states: sign(s) sin(q|s| + δ) vanishes at the wall when q(L+1) + δ = mπ
    let l = 500usize;
    let eig = dense_relative(&paper(), 0.0, l);
    let mut levels: Vec<(f64, f64)> = Vec::new();
    for (i, &e) in eig.eigenvalues.iter().enumerate() {
        if e.abs() >= 4.0 {
            continue;
        }
        let v = eig.eigenvectors.column(i);
        if !(1..=l).all(|s| (v[l + s] + v[l - s]).abs() < 1e-8) {
            continue;
        }
        let q = (-e / 4.0).acos();
        levels.push((q, reduce_phase(-q * (l + 1) as f64)));
    }
    levels.sort_by(|a, b| a.0.total_cmp(&b.0));
    let target = 1.1;
    let hi = levels.iter().position(|&(q, _)| q > target).unwrap();
    let (q0, d0) = levels[hi - 1];
    let (q1, d1) = levels[hi];
    let d1 = d0 + reduce_phase(d1 - d0);
    let box_delta = d0 + (d1 - d0) * (target - q0) / (q1 - q0);

    let problem = RelativeProblem::with_default_truncation(&paper(), 0.0).unwrap();
    let fit = scattering_phase_shift(&problem, target).unwrap();
    assert!(reduce_phase(fit.delta_antisymmetric - box_delta).abs() < 1e-4);
}
