//! Real symmetric tridiagonal eigenproblems: Sturm-sequence bisection for
//! eigenvalues and twisted factorizations for eigenvectors.

#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    /// `off[i]` couples rows `i` and `i + 1`.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(
            off.len() + 1 == diag.len() || (diag.is_empty() && off.is_empty()),
            "off-diagonal must be one shorter than the diagonal"
        );
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(v.len(), n);
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.off[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    fn pivot_floor(&self) -> f64 {
        let max_off = self.off.iter().fold(1.0f64, |m, b| m.max(b * b));
        f64::MIN_POSITIVE * max_off
    }

    /// Number of eigenvalues strictly below `lambda`, from the signs of the
    /// LDLᵀ pivots of `T - λ`.
    pub fn count_below(&self, lambda: f64) -> usize {
        let floor = self.pivot_floor();
        let mut count = 0;
        let mut q = 0.0;
        for i in 0..self.dim() {
            q = self.diag[i]
                - lambda
                - if i > 0 {
                    self.off[i - 1] * self.off[i - 1] / q
                } else {
                    0.0
                };
            if q.abs() < floor {
                q = -floor;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// `k`-th smallest eigenvalue (0-based) to full working precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.dim(), "eigenvalue index out of range");
        let (g_lo, g_hi) = self.gershgorin();
        let pad = 2.0 * f64::EPSILON * g_lo.abs().max(g_hi.abs()) + self.pivot_floor();
        let (mut lo, mut hi) = (g_lo - pad, g_hi + pad);
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.eigenvalue(k)).collect()
    }

    /// Unit eigenvector for an (accurate, isolated) eigenvalue `lambda`.
    ///
    /// Solves `(T - λ) z = γ_r e_r` through the twisted factorization whose
    /// twist index `r` minimizes `|γ_r|`; the sign is fixed so that the
    /// largest component is positive.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.dim();
        if n == 1 {
            return vec![1.0];
        }
        let floor = self
            .pivot_floor()
            .max(f64::EPSILON * f64::MIN_POSITIVE.sqrt());
        let guard = |q: f64| {
            if q.abs() < floor {
                floor.copysign(q)
            } else {
                q
            }
        };
        let a: Vec<f64> = self.diag.iter().map(|d| d - lambda).collect();
        let b = &self.off;

        let mut fwd = vec![0.0; n];
        fwd[0] = a[0];
        for i in 1..n {
            fwd[i] = a[i] - b[i - 1] * b[i - 1] / guard(fwd[i - 1]);
        }
        let mut bwd = vec![0.0; n];
        bwd[n - 1] = a[n - 1];
        for i in (0..n - 1).rev() {
            bwd[i] = a[i] - b[i] * b[i] / guard(bwd[i + 1]);
        }
        let twist = (0..n)
            .min_by(|&i, &j| {
                let gi = (fwd[i] + bwd[i] - a[i]).abs();
                let gj = (fwd[j] + bwd[j] - a[j]).abs();
                gi.total_cmp(&gj)
            })
            .unwrap_or(0);

        let mut z = vec![0.0; n];
        z[twist] = 1.0;
        for i in (0..twist).rev() {
            z[i] = -b[i] * z[i + 1] / guard(fwd[i]);
        }
        for i in twist + 1..n {
            z[i] = -b[i - 1] * z[i - 1] / guard(bwd[i]);
        }
        normalize_with_sign(&mut z);
        z
    }
}

pub(crate) fn normalize_with_sign(z: &mut [f64]) {
    let scale = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return;
    }
    let norm = scale * z.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt();
    let pivot = z
        .iter()
        .copied()
        .fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
    let factor = pivot.signum() / norm;
    z.iter_mut().for_each(|v| *v *= factor);
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn two_by_two() {
        let t = SymTridiagonal::new(vec![1.0, 3.0], vec![-1.0]);
        assert_eq!(t.count_below(0.0), 0);
        assert_eq!(t.count_below(1.0), 1);
        assert_eq!(t.count_below(4.0), 2);
        let ev = t.eigenvalues();
        assert!((ev[0] - (2.0 - 2f64.sqrt())).abs() < 1e-15);
        assert!((ev[1] - (2.0 + 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn free_chain_spectrum_and_vectors() {
        let n = 60;
        let t = SymTridiagonal::new(vec![0.0; n], vec![-1.0; n - 1]);
        let ev = t.eigenvalues();
        for (k, e) in ev.iter().enumerate() {
            let exact = -2.0 * ((k + 1) as f64 * PI / (n + 1) as f64).cos();
            assert!((e - exact).abs() < 1e-13, "k={k}");
        }
        for &k in &[0usize, 17, 59] {
            let v = t.eigenvector(ev[k]);
            let hv = t.matvec(&v);
            let res = hv
                .iter()
                .zip(&v)
                .map(|(h, x)| (h - ev[k] * x).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-12, "k={k} res={res:e}");
        }
    }

    #[test]
    fn decoupled_diagonal_gives_unit_vectors() {
        let t = SymTridiagonal::new(vec![3.0, -1.0, 2.0], vec![0.0, 0.0]);
        assert_eq!(t.eigenvalues(), vec![-1.0, 2.0, 3.0]);
        assert_eq!(t.eigenvector(-1.0), vec![0.0, 1.0, 0.0]);
    }
}
