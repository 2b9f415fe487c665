use nalgebra::{DMatrix, DVector, SymmetricEigen};
use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{Hamiltonian, TwoParticleState};

/// Largest lattice for which the dense path may be built.
pub const DENSE_MAX_SITES: usize = 12;

/// The Hamiltonian as a dense real symmetric matrix, basis index `x·n + y`.
pub fn dense_matrix(ham: &Hamiltonian) -> DMatrix<f64> {
    let lattice = ham.lattice();
    let n = lattice.n_sites();
    let mut m = DMatrix::zeros(n * n, n * n);
    let j = ham.hopping();
    for x in 0..n {
        for y in 0..n {
            let row = x * n + y;
            m[(row, row)] += ham.diagonal()[[x, y]];
            for forward in [false, true] {
                if let Some(xn) = lattice.neighbor(x, forward) {
                    m[(row, xn * n + y)] -= j;
                }
                if let Some(yn) = lattice.neighbor(y, forward) {
                    m[(row, x * n + yn)] -= j;
                }
            }
        }
    }
    m
}

/// Exact propagation through full diagonalization; reference for testing
/// the expansion propagator on small lattices.
pub struct DenseOracle {
    n_sites: usize,
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl DenseOracle {
    pub fn new(ham: &Hamiltonian) -> Result<Self> {
        let n_sites = ham.lattice().n_sites();
        if n_sites > DENSE_MAX_SITES {
            return Err(Error::OracleTooLarge {
                n_sites,
                max: DENSE_MAX_SITES,
            });
        }
        let eig = SymmetricEigen::new(dense_matrix(ham));
        Ok(Self {
            n_sites,
            energies: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.energies
    }

    pub fn propagate_grid(&self, psi: &Array2<C64>, t: f64) -> Array2<C64> {
        let n = self.n_sites;
        let re = DVector::from_iterator(n * n, psi.iter().map(|a| a.re));
        let im = DVector::from_iterator(n * n, psi.iter().map(|a| a.im));
        let c_re = self.vectors.tr_mul(&re);
        let c_im = self.vectors.tr_mul(&im);
        let mut r_re = DVector::zeros(n * n);
        let mut r_im = DVector::zeros(n * n);
        for k in 0..n * n {
            let c = C64::new(c_re[k], c_im[k]) * C64::from_polar(1.0, -self.energies[k] * t);
            r_re[k] = c.re;
            r_im[k] = c.im;
        }
        let out_re = &self.vectors * r_re;
        let out_im = &self.vectors * r_im;
        Array2::from_shape_fn((n, n), |(x, y)| {
            C64::new(out_re[x * n + y], out_im[x * n + y])
        })
    }

    pub fn propagate(&self, state: &TwoParticleState, t: f64) -> TwoParticleState {
        let grid = self.propagate_grid(&state.amplitudes().to_owned(), t);
        TwoParticleState::new(grid, state.time() + t).expect("square grid")
    }
}
