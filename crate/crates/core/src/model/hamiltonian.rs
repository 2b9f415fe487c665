use ndarray::{Array2, ArrayView2, ArrayViewMut1, ArrayViewMut2, Axis};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::{build_potential, HubbardParams, InteractionPotential, LatticeSpec, TwoParticleState};
use crate::error::{invalid, Error, Result};

/// Rows per lattice above which operator applications fan out over rayon.
const PARALLEL_MIN_SITES: usize = 64;

/// Two-particle lattice Hamiltonian
///
/// ```text
/// (Hψ)(x,y) = -J [ψ(x-1,y) + ψ(x+1,y) + ψ(x,y-1) + ψ(x,y+1)] + W(|y-x|) ψ(x,y)
/// ```
///
/// applied matrix-free. Neighbours outside an open lattice are dropped; on a
/// periodic lattice they wrap and the interaction uses the ring distance.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    lattice: LatticeSpec,
    hopping: f64,
    potential: InteractionPotential,
    diagonal: Array2<f64>,
}

impl Hamiltonian {
    pub fn new(
        params: &HubbardParams,
        potential: InteractionPotential,
        lattice: LatticeSpec,
    ) -> Result<Self> {
        params.validate()?;
        if potential.len() != lattice.n_sites() {
            return Err(invalid(
                "potential",
                format!(
                    "table has {} entries for {} sites",
                    potential.len(),
                    lattice.n_sites()
                ),
            ));
        }
        let n = lattice.n_sites();
        let diagonal =
            Array2::from_shape_fn((n, n), |(x, y)| potential.at(lattice.separation(x, y)));
        Ok(Self {
            lattice,
            hopping: params.hopping,
            potential,
            diagonal,
        })
    }

    pub fn from_params(params: &HubbardParams, lattice: LatticeSpec) -> Result<Self> {
        let potential = build_potential(params, &lattice)?;
        Self::new(params, potential, lattice)
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    pub fn potential(&self) -> &InteractionPotential {
        &self.potential
    }

    /// Interaction energy on every configuration, `W(|y - x|)`.
    pub fn diagonal(&self) -> ArrayView2<'_, f64> {
        self.diagonal.view()
    }

    /// `Hψ`, carrying over the timestamp of `state`.
    pub fn apply(&self, state: &TwoParticleState) -> Result<TwoParticleState> {
        state.ensure_lattice(&self.lattice)?;
        let n = self.lattice.n_sites();
        let mut out = Array2::zeros((n, n));
        self.apply_affine(state.amplitudes(), out.view_mut(), 1.0, 0.0);
        TwoParticleState::new(out, state.time())
    }

    /// `dst = scale · (H - shift) src`. Panics if the grids do not match the
    /// lattice.
    pub fn apply_affine(
        &self,
        src: ArrayView2<'_, C64>,
        mut dst: ArrayViewMut2<'_, C64>,
        scale: f64,
        shift: f64,
    ) {
        let n = self.lattice.n_sites();
        assert_eq!(src.dim(), (n, n), "source grid does not match lattice");
        assert_eq!(dst.dim(), (n, n), "destination grid does not match lattice");
        if n >= PARALLEL_MIN_SITES {
            dst.axis_iter_mut(Axis(0))
                .into_par_iter()
                .enumerate()
                .for_each(|(x, row)| self.apply_row(src, x, row, scale, shift));
        } else {
            for (x, row) in dst.axis_iter_mut(Axis(0)).enumerate() {
                self.apply_row(src, x, row, scale, shift);
            }
        }
    }

    #[inline]
    fn apply_row(
        &self,
        src: ArrayView2<'_, C64>,
        x: usize,
        mut out: ArrayViewMut1<'_, C64>,
        scale: f64,
        shift: f64,
    ) {
        let zero = C64::new(0.0, 0.0);
        let lat = &self.lattice;
        let left = lat.neighbor(x, false).map(|r| src.row(r));
        let right = lat.neighbor(x, true).map(|r| src.row(r));
        let row = src.row(x);
        let diag = self.diagonal.row(x);
        let j = self.hopping;
        for y in 0..lat.n_sites() {
            let a = left.as_ref().map_or(zero, |r| r[y]);
            let b = right.as_ref().map_or(zero, |r| r[y]);
            let c = lat.neighbor(y, false).map_or(zero, |c| row[c]);
            let d = lat.neighbor(y, true).map_or(zero, |c| row[c]);
            // (a + b) + (c + d) is invariant under x <-> y, so exchange
            // symmetric states stay exactly symmetric.
            let psi = row[y];
            let h = -j * ((a + b) + (c + d)) + diag[y] * psi;
            out[y] = (h - shift * psi) * scale;
        }
    }

    /// `⟨ψ|H|ψ⟩` (real for a Hermitian operator).
    pub fn expectation(&self, state: &TwoParticleState) -> Result<f64> {
        let image = self.apply(state)?;
        Ok(state.inner(&image).re)
    }
}

/// One-shot convenience: build the operator and return `Hψ`.
pub fn apply_hamiltonian(
    state: &TwoParticleState,
    potential: &InteractionPotential,
    params: &HubbardParams,
    lattice: &LatticeSpec,
) -> Result<TwoParticleState> {
    if state.n_sites() != lattice.n_sites() {
        return Err(Error::DimensionMismatch {
            expected: lattice.n_sites(),
            rows: state.n_sites(),
            cols: state.n_sites(),
        });
    }
    Hamiltonian::new(params, potential.clone(), *lattice)?.apply(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Boundary, HubbardParams};

    #[test]
    fn point_state_stencil() {
        let lattice = LatticeSpec::open(80).unwrap();
        let params = HubbardParams::exponential(1.0, -6.0, 1.0 / 12.0);
        let w = build_potential(&params, &lattice).unwrap();
        let image =
            apply_hamiltonian(&TwoParticleState::point(80, 10, 20), &w, &params, &lattice).unwrap();
        let a = image.amplitudes();
        for (x, y) in [(9, 20), (11, 20), (10, 19), (10, 21)] {
            assert_eq!(a[[x, y]], C64::new(-1.0, 0.0));
        }
        assert!((a[[10, 20]].re + 2.6075).abs() < 1e-4);
        assert_eq!(a[[10, 20]].re, w.at(10));
        let nonzero = a.iter().filter(|v| **v != C64::new(0.0, 0.0)).count();
        assert_eq!(nonzero, 5);
    }

    #[test]
    fn corner_drops_missing_neighbours() {
        let lattice = LatticeSpec::open(6).unwrap();
        let params = HubbardParams::onsite_only(1.0, 0.0);
        let h = Hamiltonian::from_params(&params, lattice).unwrap();
        let image = h.apply(&TwoParticleState::point(6, 0, 5)).unwrap();
        let nonzero = image.amplitudes().iter().filter(|v| v.norm() > 0.0).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn uniform_state_on_ring() {
        let lattice = LatticeSpec::new(9, Boundary::Periodic).unwrap();
        let params = HubbardParams::onsite_only(1.0, 0.0);
        let h = Hamiltonian::from_params(&params, lattice).unwrap();
        let uniform =
            TwoParticleState::new(Array2::from_elem((9, 9), C64::new(1.0 / 9.0, 0.0)), 0.0)
                .unwrap();
        let image = h.apply(&uniform).unwrap();
        for (u, v) in uniform.amplitudes().iter().zip(image.amplitudes().iter()) {
            assert!((v - u * -4.0).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_hopping_is_diagonal() {
        let lattice = LatticeSpec::open(7).unwrap();
        let params = HubbardParams::exponential(0.0, 2.5, 0.4);
        let h = Hamiltonian::from_params(&params, lattice).unwrap();
        let state = TwoParticleState::new(
            Array2::from_shape_fn((7, 7), |(x, y)| {
                C64::new(x as f64 - 0.5 * y as f64, 0.1 * (x * y) as f64)
            }),
            0.0,
        )
        .unwrap();
        let image = h.apply(&state).unwrap();
        for ((x, y), v) in image.amplitudes().indexed_iter() {
            let expected = state.amplitudes()[[x, y]] * params.interaction(x.abs_diff(y));
            assert_eq!(*v, expected);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let lattice = LatticeSpec::open(8).unwrap();
        let params = HubbardParams::onsite_only(1.0, 1.0);
        let w = build_potential(&params, &lattice).unwrap();
        let err = apply_hamiltonian(&TwoParticleState::zeros(9), &w, &params, &lattice);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }
}
