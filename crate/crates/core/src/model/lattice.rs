use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Open,
    Periodic,
}

/// Square grid of `n_sites × n_sites` two-particle configurations `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeSpec {
    n_sites: usize,
    boundary: Boundary,
}

impl LatticeSpec {
    pub const MIN_SITES: usize = 4;

    pub fn new(n_sites: usize, boundary: Boundary) -> Result<Self> {
        if n_sites < Self::MIN_SITES {
            return Err(invalid(
                "n_sites",
                format!("need at least {} sites, got {n_sites}", Self::MIN_SITES),
            ));
        }
        Ok(Self { n_sites, boundary })
    }

    pub fn open(n_sites: usize) -> Result<Self> {
        Self::new(n_sites, Boundary::Open)
    }

    pub fn periodic(n_sites: usize) -> Result<Self> {
        Self::new(n_sites, Boundary::Periodic)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Number of two-particle basis states.
    pub fn dim(&self) -> usize {
        self.n_sites * self.n_sites
    }

    /// Neighbour of `site` one step to the left (`forward = false`) or right.
    /// `None` when the step leaves an open lattice.
    #[inline]
    pub fn neighbor(&self, site: usize, forward: bool) -> Option<usize> {
        let n = self.n_sites;
        match (self.boundary, forward) {
            (_, true) if site + 1 < n => Some(site + 1),
            (_, false) if site > 0 => Some(site - 1),
            (Boundary::Periodic, true) => Some(0),
            (Boundary::Periodic, false) => Some(n - 1),
            (Boundary::Open, _) => None,
        }
    }

    /// Interparticle distance used to index the interaction table. On a ring
    /// this is the shorter arc so that the interaction is translation
    /// invariant.
    #[inline]
    pub fn separation(&self, x: usize, y: usize) -> usize {
        let s = x.abs_diff(y);
        match self.boundary {
            Boundary::Open => s,
            Boundary::Periodic => s.min(self.n_sites - s),
        }
    }
}
