use h2p_core::model::{
    apply_hamiltonian, build_potential, symmetrize, Boundary, Hamiltonian, HubbardParams,
    LatticeSpec, TwoParticleState,
};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn random_state(n: usize, seed: &[(f64, f64)]) -> TwoParticleState {
    let grid = Array2::from_shape_fn((n, n), |(x, y)| {
        let (re, im) = seed[(x * n + y) % seed.len()];
        C64::new(re + 0.01 * x as f64, im - 0.02 * y as f64)
    });
    TwoParticleState::new(grid, 0.0).unwrap()
}

fn inner(a: &TwoParticleState, b: &TwoParticleState) -> C64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes().iter())
        .map(|(u, v)| u.conj() * v)
        .sum()
}

fn max_diff(a: &TwoParticleState, b: &TwoParticleState) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes().iter())
        .map(|(u, v)| (u - v).norm())
        .fold(0.0, f64::max)
}

fn swap_sum(state: &TwoParticleState) -> TwoParticleState {
    let g = state.amplitudes();
    TwoParticleState::new(
        Array2::from_shape_fn(g.dim(), |(x, y)| g[[x, y]] + g[[y, x]]),
        0.0,
    )
    .unwrap()
}

fn gauge(state: &TwoParticleState) -> TwoParticleState {
    let grid = Array2::from_shape_fn(state.amplitudes().dim(), |(x, y)| {
        let v = state.amplitudes()[[x, y]];
        if (x + y) % 2 == 0 {
            v
        } else {
            -v
        }
    });
    TwoParticleState::new(grid, 0.0).unwrap()
}

type Case = (usize, bool, f64, f64, Vec<(f64, f64)>, Vec<(f64, f64)>);

fn arb_case() -> impl Strategy<Value = Case> {
    (
        6usize..14,
        any::<bool>(),
        -8.0f64..8.0,
        0.05f64..2.0,
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..40),
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..40),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hermitian((n, periodic, u, gamma, a, b) in arb_case()) {
        let boundary = if periodic { Boundary::Periodic } else { Boundary::Open };
        let lattice = LatticeSpec::new(n, boundary).unwrap();
        let ham = Hamiltonian::from_params(&HubbardParams::exponential(1.0, u, gamma), lattice).unwrap();
        let phi = random_state(n, &a);
        let psi = random_state(n, &b);
        let lhs = inner(&phi, &ham.apply(&psi).unwrap());
        let rhs = inner(&psi, &ham.apply(&phi).unwrap()).conj();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * phi.norm() * psi.norm());
    }

    #[test]
    fn exchange_commutes((n, periodic, u, gamma, a, _b) in arb_case()) {
        let boundary = if periodic { Boundary::Periodic } else { Boundary::Open };
        let lattice = LatticeSpec::new(n, boundary).unwrap();
        let params = HubbardParams::exponential(1.0, u, gamma);
        let potential = build_potential(&params, &lattice).unwrap();
        let psi = random_state(n, &a);
        // symmetrize is the swap sum followed by a normalization, so compare the linear part
        let lhs = apply_hamiltonian(&swap_sum(&psi), &potential, &params, &lattice).unwrap();
        let rhs = swap_sum(&apply_hamiltonian(&psi, &potential, &params, &lattice).unwrap());
        prop_assert!(max_diff(&lhs, &rhs) <= 1e-12 * (1.0 + u.abs()) * psi.norm());
        let normalized = apply_hamiltonian(&symmetrize(&psi).unwrap(), &potential, &params, &lattice).unwrap();
        prop_assert!(normalized.is_exchange_symmetric());
    }

    #[test]
    fn gauge_flips_interaction((n, periodic, u, gamma, a, _b) in arb_case()) {
        // the sign flip of the kinetic term needs an even ring
        let n = if periodic { n & !1 } else { n };
        let boundary = if periodic { Boundary::Periodic } else { Boundary::Open };
        let lattice = LatticeSpec::new(n, boundary).unwrap();
        let params = HubbardParams::exponential(1.0, u, gamma);
        let ham = Hamiltonian::from_params(&params, lattice).unwrap();
        let flipped = Hamiltonian::from_params(&params.negated(), lattice).unwrap();
        let psi = random_state(n, &a);
        let lhs = gauge(&ham.apply(&gauge(&psi)).unwrap());
        let rhs = flipped.apply(&psi).unwrap();
        let neg = TwoParticleState::new(rhs.amplitudes().mapv(|v| -v), 0.0).unwrap();
        prop_assert!(max_diff(&lhs, &neg) <= 1e-12 * psi.norm());
    }
}

#[test]
fn symmetrize_idempotent() {
    let psi = symmetrize(&random_state(9, &[(0.3, -0.1), (0.7, 0.2), (-0.4, 0.9)])).unwrap();
    let again = symmetrize(&psi).unwrap();
    assert!(max_diff(&psi, &again) < 1e-15);
    assert!(again.is_exchange_symmetric());
}
