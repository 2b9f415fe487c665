use ndarray::{Array2, ArrayView2, ArrayViewMut2};
use num_complex::Complex64 as C64;

use super::{LatticeSpec, Statistics};
use crate::error::{invalid, Error, Result};
use crate::sum::Accumulator;

/// Amplitude grid `ψ(x, y)` of two particles on a line. The first index is
/// the coordinate of the first particle (`x`, spin up), the second that of
/// the other (`y`, spin down).
#[derive(Clone, Debug, PartialEq)]
pub struct TwoParticleState {
    amplitudes: Array2<C64>,
    time: f64,
}

impl TwoParticleState {
    pub fn new(amplitudes: Array2<C64>, time: f64) -> Result<Self> {
        let (rows, cols) = amplitudes.dim();
        if rows != cols {
            return Err(Error::DimensionMismatch {
                expected: rows,
                rows,
                cols,
            });
        }
        Ok(Self { amplitudes, time })
    }

    pub fn zeros(n_sites: usize) -> Self {
        Self {
            amplitudes: Array2::zeros((n_sites, n_sites)),
            time: 0.0,
        }
    }

    /// Both particles localized on single sites.
    pub fn point(n_sites: usize, x: usize, y: usize) -> Self {
        let mut s = Self::zeros(n_sites);
        s.amplitudes[[x, y]] = C64::new(1.0, 0.0);
        s
    }

    pub fn n_sites(&self) -> usize {
        self.amplitudes.nrows()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn set_time(&mut self, time: f64) {
        self.time = time;
    }

    pub fn amplitudes(&self) -> ArrayView2<'_, C64> {
        self.amplitudes.view()
    }

    pub fn amplitudes_mut(&mut self) -> ArrayViewMut2<'_, C64> {
        self.amplitudes.view_mut()
    }

    pub fn into_amplitudes(self) -> Array2<C64> {
        self.amplitudes
    }

    pub fn ensure_lattice(&self, lattice: &LatticeSpec) -> Result<()> {
        let (rows, cols) = self.amplitudes.dim();
        if rows != lattice.n_sites() || cols != lattice.n_sites() {
            return Err(Error::DimensionMismatch {
                expected: lattice.n_sites(),
                rows,
                cols,
            });
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        let mut acc = Accumulator::new();
        for a in self.amplitudes.iter() {
            acc.add(a.norm_sqr());
        }
        acc.total()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / norm;
        self.amplitudes.mapv_inplace(|a| a * inv);
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &TwoParticleState) -> C64 {
        inner(self.amplitudes.view(), other.amplitudes.view())
    }

    /// Probability `|ψ(x, y)|²` per configuration.
    pub fn occupations(&self) -> Array2<f64> {
        self.amplitudes.mapv(|a| a.norm_sqr())
    }

    pub fn is_exchange_symmetric(&self) -> bool {
        let n = self.n_sites();
        (0..n).all(|x| (x + 1..n).all(|y| self.amplitudes[[x, y]] == self.amplitudes[[y, x]]))
    }

    /// Pointwise complex conjugate (time reversal in the position basis).
    pub fn conjugate(&self) -> Self {
        Self {
            amplitudes: self.amplitudes.mapv(|a| a.conj()),
            time: self.time,
        }
    }

    /// Staggered phase map `(Gψ)(x, y) = (-1)^(x+y) ψ(x, y)`. It shifts both
    /// quasi-momenta by π and maps `H(W)` onto `-H(-W)`.
    pub fn gauge_transform(&self) -> Self {
        let mut amplitudes = self.amplitudes.clone();
        for ((x, y), a) in amplitudes.indexed_iter_mut() {
            if (x + y) % 2 == 1 {
                *a = -*a;
            }
        }
        Self {
            amplitudes,
            time: self.time,
        }
    }
}

pub(crate) fn inner(a: ArrayView2<'_, C64>, b: ArrayView2<'_, C64>) -> C64 {
    let mut re = Accumulator::new();
    let mut im = Accumulator::new();
    for (u, v) in a.iter().zip(b.iter()) {
        let p = u.conj() * v;
        re.add(p.re);
        im.add(p.im);
    }
    C64::new(re.total(), im.total())
}

/// Project onto the exchange-symmetric (bosonic) subspace and renormalize.
pub fn symmetrize(state: &TwoParticleState) -> Result<TwoParticleState> {
    let input_norm = state.norm();
    if input_norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let a = state.amplitudes.view();
    let n = state.n_sites();
    let amplitudes = Array2::from_shape_fn((n, n), |(x, y)| {
        // same operand order for (x, y) and (y, x) keeps the result exactly symmetric
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        a[[lo, hi]] + a[[hi, lo]]
    });
    let mut symmetric = TwoParticleState {
        amplitudes,
        time: state.time,
    };
    if symmetric.norm() <= 1e-12 * input_norm {
        return Err(Error::Antisymmetric);
    }
    symmetric.normalize()?;
    Ok(symmetric)
}

/// Parameters of a separable Gaussian two-particle wave packet
/// `exp[-(x-x0)²/w² - (y-y0)²/w²] exp[i(px x + py y)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianPacket {
    pub center: (f64, f64),
    pub width: f64,
    pub momenta: (f64, f64),
}

/// A freshly prepared packet and its occupation within two sites of an open
/// edge. `clipped` is raised when that occupation exceeds 1e-8.
#[derive(Clone, Debug)]
pub struct PreparedPacket {
    pub state: TwoParticleState,
    pub edge_occupation: f64,
    pub clipped: bool,
}

pub const CLIP_THRESHOLD: f64 = 1e-8;

pub fn gaussian_packet(
    lattice: &LatticeSpec,
    packet: &GaussianPacket,
    statistics: Statistics,
) -> Result<PreparedPacket> {
    let n = lattice.n_sites() as f64;
    let (x0, y0) = packet.center;
    for (name, c) in [("x0", x0), ("y0", y0)] {
        if !(c.is_finite() && (0.0..n).contains(&c)) {
            return Err(invalid(name, format!("center {c} outside 0..{n}")));
        }
    }
    if !(packet.width.is_finite() && packet.width > 0.0) {
        return Err(invalid("w", "width must be positive"));
    }
    let (px, py) = packet.momenta;
    if !(px.is_finite() && py.is_finite()) {
        return Err(invalid("momenta", "must be finite"));
    }
    let w2 = packet.width * packet.width;
    let ns = lattice.n_sites();
    let amplitudes = Array2::from_shape_fn((ns, ns), |(x, y)| {
        let (xf, yf) = (x as f64, y as f64);
        let envelope = (-(xf - x0).powi(2) / w2 - (yf - y0).powi(2) / w2).exp();
        C64::from_polar(envelope, px * xf + py * yf)
    });
    let mut state = TwoParticleState::new(amplitudes, 0.0)?;
    state.normalize()?;
    if statistics == Statistics::Bosonic {
        state = symmetrize(&state)?;
    }
    let edge_occupation = crate::observables::edge_leakage(&state, lattice);
    Ok(PreparedPacket {
        clipped: edge_occupation > CLIP_THRESHOLD,
        edge_occupation,
        state,
    })
}
