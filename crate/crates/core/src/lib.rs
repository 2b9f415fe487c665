//! Two particles on a one-dimensional lattice with a long-range density
//! interaction: exact two-body dynamics, the doublon spectrum at fixed total
//! quasi-momentum, and the semiclassical picture of self-propelled pairs.
//!
//! ```
//! use h2p_core::model::{Hamiltonian, HubbardParams, LatticeSpec, TwoParticleState};
//!
//! let params = HubbardParams::exponential(1.0, -6.0, 1.0 / 12.0);
//! let ham = Hamiltonian::from_params(&params, LatticeSpec::open(32)?)?;
//! let image = ham.apply(&TwoParticleState::point(32, 10, 20))?;
//! assert_eq!(image.amplitudes()[[9, 20]].re, -1.0);
//! # Ok::<(), h2p_core::Error>(())
//! ```

pub mod dynamics;
pub mod error;
pub mod model;
pub mod observables;
pub mod semiclassics;
pub mod spectral;
pub mod sum;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/observables.md")]
    mod observables {}
    #[doc = include_str!("../../../book/src/semiclassics.md")]
    mod semiclassics {}
}
