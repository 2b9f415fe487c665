use ndarray::{Array2, Zip};
use num_complex::Complex64 as C64;

use super::bessel::bessel_j_sequence;
use super::SpectralBounds;
use crate::model::Hamiltonian;

/// Largest rescaled step `Δ·dt` taken in one expansion.
pub const MAX_SCALED_STEP: f64 = 10.0;

/// `exp(-iHt)` by Chebyshev expansion of the operator rescaled onto `[-1, 1]`:
///
/// ```text
/// exp(-iHt) = exp(-iEc t) [ J_0(Δt) + 2 Σ_k (-i)^k J_k(Δt) T_k(H') ],
/// H' = (H - Ec)/Δ
/// ```
///
/// with `Ec` and `Δ` the centre and half-width of the spectral bracket. The
/// series is cut once the Bessel coefficients drop below the tolerance.
pub struct ChebyshevPropagator {
    bounds: SpectralBounds,
    tolerance: f64,
    cached: Option<(f64, Vec<C64>)>,
    prev: Array2<C64>,
    cur: Array2<C64>,
    next: Array2<C64>,
    acc: Array2<C64>,
}

impl ChebyshevPropagator {
    pub fn new(bounds: SpectralBounds, tolerance: f64, n_sites: usize) -> Self {
        let z = || Array2::zeros((n_sites, n_sites));
        Self {
            bounds,
            tolerance,
            cached: None,
            prev: z(),
            cur: z(),
            next: z(),
            acc: z(),
        }
    }

    /// Expansion coefficients for a step `dt`, including the global phase.
    pub fn coefficients(&self, dt: f64) -> Vec<C64> {
        let z = self.bounds.half_width() * dt;
        let kmax = (1.5 * z).ceil() as usize + 60;
        let j = bessel_j_sequence(z, kmax);
        let cut = self.tolerance.max(1e-18) * 0.25;
        let order = (z.ceil() as usize..kmax)
            .find(|&k| j[k].abs() < cut && j[k + 1].abs() < cut)
            .unwrap_or(kmax);
        let phase = C64::from_polar(1.0, -self.bounds.center() * dt);
        let mut minus_i_pow = C64::new(1.0, 0.0);
        (0..=order)
            .map(|k| {
                let weight = if k == 0 { 1.0 } else { 2.0 };
                let c = phase * minus_i_pow * (weight * j[k]);
                minus_i_pow *= C64::new(0.0, -1.0);
                c
            })
            .collect()
    }

    /// Number of expansion terms used for a step `dt`.
    pub fn order(&self, dt: f64) -> usize {
        self.coefficients(dt).len() - 1
    }

    /// Advance `psi` by `dt` in place, splitting long steps.
    pub fn propagate(&mut self, ham: &Hamiltonian, psi: &mut Array2<C64>, dt: f64) {
        if dt == 0.0 {
            return;
        }
        let pieces = ((self.bounds.half_width() * dt.abs()) / MAX_SCALED_STEP)
            .ceil()
            .max(1.0) as usize;
        let h = dt / pieces as f64;
        for _ in 0..pieces {
            self.step(ham, psi, h);
        }
    }

    fn step(&mut self, ham: &Hamiltonian, psi: &mut Array2<C64>, dt: f64) {
        let coeffs = match &self.cached {
            Some((cached_dt, c)) if *cached_dt == dt => c.clone(),
            _ => {
                let c = self.coefficients(dt);
                self.cached = Some((dt, c.clone()));
                c
            }
        };
        let center = self.bounds.center();
        let inv = 1.0 / self.bounds.half_width();

        self.prev.assign(psi);
        Zip::from(&mut self.acc)
            .and(&self.prev)
            .for_each(|a, &p| *a = coeffs[0] * p);
        if coeffs.len() > 1 {
            ham.apply_affine(self.prev.view(), self.cur.view_mut(), inv, center);
            Zip::from(&mut self.acc)
                .and(&self.cur)
                .for_each(|a, &c| *a += coeffs[1] * c);
        }
        for &c_k in &coeffs[2.min(coeffs.len())..] {
            ham.apply_affine(self.cur.view(), self.next.view_mut(), 2.0 * inv, center);
            Zip::from(&mut self.next)
                .and(&self.prev)
                .and(&mut self.acc)
                .for_each(|n, &p, a| {
                    *n -= p;
                    *a += c_k * *n;
                });
            std::mem::swap(&mut self.prev, &mut self.cur);
            std::mem::swap(&mut self.cur, &mut self.next);
        }
        psi.assign(&self.acc);
    }
}
