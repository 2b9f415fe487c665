//! Lattice, interaction, two-particle states and the lattice Hamiltonian.

mod dump;
mod hamiltonian;
mod lattice;
mod params;
mod potential;
mod state;

pub use dump::{load_grid, read_grid, save_grid, write_grid};
pub use hamiltonian::{apply_hamiltonian, Hamiltonian};
pub use lattice::{Boundary, LatticeSpec};
pub use params::{HubbardParams, InteractionShape, Statistics};
pub use potential::{build_potential, InteractionPotential};
pub use state::{
    gaussian_packet, symmetrize, GaussianPacket, PreparedPacket, TwoParticleState, CLIP_THRESHOLD,
};
