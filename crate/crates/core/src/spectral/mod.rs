//! Relative-coordinate spectrum at fixed total quasi-momentum: doublon bound
//! states, their dispersion, and continuum phase shifts.

mod band;
mod relative;
mod scattering;
mod tridiag;

pub use band::{doublon_band_sweep, momentum_grid, BandRow, BandTable, BAND_CSV_HEADER};
pub use relative::{
    cos_half, relative_hamiltonian, solve_bound_states, solve_bound_states_converged,
    BoundSpectrum, BoundState, Parity, RelativeProblem, BAND_MARGIN, DOUBLING_TOLERANCE,
    EDGE_TOLERANCE,
};
pub use scattering::{reduce_phase, scattering_phase_shift, ScatteringSolution};
pub use tridiag::SymTridiagonal;
