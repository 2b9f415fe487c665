use crate::model::{HubbardParams, InteractionPotential, LatticeSpec};

/// Fractional safety margin added to each side of the spectral bracket.
pub const BRACKET_MARGIN: f64 = 0.05;
const MIN_HALF_WIDTH: f64 = 1e-6;

/// Interval `[min, max]` assumed to contain the whole spectrum of `H`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralBounds {
    pub min: f64,
    pub max: f64,
}

impl SpectralBounds {
    pub fn center(&self) -> f64 {
        0.5 * (self.min + self.max)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.max - self.min)
    }

    pub fn span(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, lo: f64, hi: f64) -> bool {
        self.min <= lo && hi <= self.max
    }
}

/// Analytic bracket `±(4J + max|W|)` widened by 5%. The kinetic term of the
/// two-particle operator is bounded by `4J` in norm; without hopping the
/// operator is diagonal and the bracket shrinks to `[min W, max W]`.
pub fn estimate_spectral_bounds(
    params: &HubbardParams,
    potential: &InteractionPotential,
    _lattice: &LatticeSpec,
) -> SpectralBounds {
    bracket(params.hopping, potential)
}

pub(crate) fn bracket(hopping: f64, potential: &InteractionPotential) -> SpectralBounds {
    let (lo, hi) = if hopping == 0.0 {
        (potential.min(), potential.max())
    } else {
        let r = 4.0 * hopping + potential.max_abs();
        (-r, r)
    };
    let half = (0.5 * (hi - lo)).max(MIN_HALF_WIDTH);
    let pad = BRACKET_MARGIN * half;
    SpectralBounds {
        min: lo - pad,
        max: hi + pad,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_potential;

    #[test]
    fn attractive_preset() {
        let lattice = LatticeSpec::open(20).unwrap();
        let p = HubbardParams::exponential(1.0, -6.0, 1.0 / 12.0);
        let b = estimate_spectral_bounds(&p, &build_potential(&p, &lattice).unwrap(), &lattice);
        assert!(b.contains(-10.0, 10.0));
        assert!(b.span() < 22.0);
    }

    #[test]
    fn free_band() {
        let lattice = LatticeSpec::open(20).unwrap();
        let p = HubbardParams::exponential(1.0, 0.0, 0.5);
        let b = estimate_spectral_bounds(&p, &build_potential(&p, &lattice).unwrap(), &lattice);
        assert!(b.contains(-4.0, 4.0));
    }

    #[test]
    fn frozen_hopping_brackets_potential() {
        let lattice = LatticeSpec::open(20).unwrap();
        let p = HubbardParams::exponential(0.0, -6.0, 0.5);
        let w = build_potential(&p, &lattice).unwrap();
        let b = estimate_spectral_bounds(&p, &w, &lattice);
        assert!(b.contains(w.min(), w.max()));
        let pad = 0.05 * 0.5 * (w.max() - w.min());
        assert!((b.min - (w.min() - pad)).abs() < 1e-12);
        assert!((b.max - (w.max() + pad)).abs() < 1e-12);
    }
}
