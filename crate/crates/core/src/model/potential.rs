use super::{HubbardParams, LatticeSpec};
use crate::error::Result;

/// Interaction energy tabulated by interparticle distance, `table[s] = W(s)`
/// for `s = 0..n_sites`.
#[derive(Clone, Debug, PartialEq)]
pub struct InteractionPotential {
    table: Vec<f64>,
}

impl InteractionPotential {
    pub fn from_table(table: Vec<f64>) -> Self {
        Self { table }
    }

    pub fn zero(n_sites: usize) -> Self {
        Self {
            table: vec![0.0; n_sites],
        }
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    #[inline]
    pub fn at(&self, s: usize) -> f64 {
        self.table[s]
    }

    pub fn negated(&self) -> Self {
        Self {
            table: self.table.iter().map(|w| -w).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.table.iter().fold(0.0, |m, w| m.max(w.abs()))
    }

    pub fn min(&self) -> f64 {
        self.table.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.table.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn build_potential(
    params: &HubbardParams,
    lattice: &LatticeSpec,
) -> Result<InteractionPotential> {
    params.validate()?;
    let table = (0..lattice.n_sites())
        .map(|s| params.interaction(s))
        .collect();
    Ok(InteractionPotential { table })
}
