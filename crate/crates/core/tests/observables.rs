use std::f64::consts::PI;

use h2p_core::dynamics::{evolve, Method, PropagatorConfig};
use h2p_core::model::{
    gaussian_packet, GaussianPacket, Hamiltonian, HubbardParams, InteractionPotential, LatticeSpec,
    Statistics,
};
use h2p_core::observables::{
    diagonal_translation_expectation, ehrenfest_check, marginals, velocity_expectations,
};

fn packet(
    lattice: &LatticeSpec,
    center: (f64, f64),
    width: f64,
    momenta: (f64, f64),
    stats: Statistics,
) -> h2p_core::model::TwoParticleState {
    let g = GaussianPacket {
        center,
        width,
        momenta,
    };
    gaussian_packet(lattice, &g, stats).unwrap().state
}

#[test]
fn ehrenfest_identity_on_small_lattice() {
    let lattice = LatticeSpec::open(8).unwrap();
    let psi = packet(
        &lattice,
        (3.0, 5.0),
        1.5,
        (0.3, 1.0),
        Statistics::Distinguishable,
    );
    let ham = Hamiltonian::from_params(&HubbardParams::exponential(1.0, -6.0, 1.0 / 12.0), lattice)
        .unwrap();
    let config = PropagatorConfig {
        dt_out: 1e-3,
        method: Method::DenseOracle,
        ..Default::default()
    };
    let rec = evolve(&psi, &ham, &config, 1.0, |_, _| {}).unwrap();
    let r = ehrenfest_check(&rec.observables).unwrap();
    assert!(r.x <= 1e-5 && r.y <= 1e-5, "{r:?}");
}

#[test]
fn frozen_particles_have_no_velocity() {
    let lattice = LatticeSpec::open(12).unwrap();
    let psi = packet(
        &lattice,
        (4.0, 7.0),
        1.5,
        (0.8, -0.4),
        Statistics::Distinguishable,
    );
    let ham =
        Hamiltonian::from_params(&HubbardParams::exponential(0.0, -6.0, 0.5), lattice).unwrap();
    let config = PropagatorConfig {
        dt_out: 1e-2,
        ..Default::default()
    };
    let rec = evolve(&psi, &ham, &config, 0.5, |_, _| {}).unwrap();
    let first = rec.observables.samples[0];
    for o in &rec.observables.samples {
        assert_eq!((o.vx, o.vy), (0.0, 0.0));
        assert!((o.mean_x - first.mean_x).abs() < 1e-12 && (o.mean_y - first.mean_y).abs() < 1e-12);
    }
    let r = ehrenfest_check(&rec.observables).unwrap();
    assert!(r.x < 1e-9 && r.y < 1e-9);
}

#[test]
fn free_velocity_is_constant_on_a_ring() {
    let n = 24;
    let lattice = LatticeSpec::periodic(n).unwrap();
    let psi = packet(
        &lattice,
        (8.0, 15.0),
        2.0,
        (0.7, -1.3),
        Statistics::Distinguishable,
    );
    let ham = Hamiltonian::new(
        &HubbardParams::onsite_only(1.0, 0.0),
        InteractionPotential::zero(n),
        lattice,
    )
    .unwrap();
    let (vx0, vy0) = velocity_expectations(&psi, &lattice, 1.0);
    let config = PropagatorConfig {
        dt_out: 0.25,
        ..Default::default()
    };
    evolve(&psi, &ham, &config, 5.0, |_, o| {
        assert!((o.vx - vx0).abs() <= 1e-10 && (o.vy - vy0).abs() <= 1e-10);
    })
    .unwrap();
}

#[test]
fn marginals_stay_normalized_and_exchange_covariant() {
    let lattice = LatticeSpec::open(30).unwrap();
    let psi = packet(&lattice, (12.0, 18.0), 2.5, (0.0, PI), Statistics::Bosonic);
    let ham = Hamiltonian::from_params(&HubbardParams::exponential(1.0, -6.0, 1.0 / 12.0), lattice)
        .unwrap();
    let config = PropagatorConfig {
        dt_out: 0.5,
        ..Default::default()
    };
    evolve(&psi, &ham, &config, 4.0, |s, _| {
        let m = marginals(s);
        let norm = s.norm_sqr();
        assert!(m.up.iter().chain(&m.down).all(|&p| p >= 0.0));
        assert!((m.up.iter().sum::<f64>() - norm).abs() <= 1e-12);
        assert!((m.down.iter().sum::<f64>() - norm).abs() <= 1e-12);
        for (a, b) in m.up.iter().zip(&m.down) {
            assert!((a - b).abs() <= 1e-12);
        }
    })
    .unwrap();
}

#[test]
fn derived_columns_are_consistent() {
    let lattice = LatticeSpec::open(40).unwrap();
    let psi = packet(
        &lattice,
        (15.0, 25.0),
        3.0,
        (0.0, 0.0),
        Statistics::Distinguishable,
    );
    let ham = Hamiltonian::from_params(&HubbardParams::exponential(1.0, -6.0, 1.0 / 12.0), lattice)
        .unwrap();
    let rec = evolve(&psi, &ham, &PropagatorConfig::default(), 3.0, |_, _| {}).unwrap();
    for o in &rec.observables.samples {
        assert!((o.separation - (o.mean_y - o.mean_x)).abs() <= 1e-12);
        assert!((o.com - 0.5 * (o.mean_x + o.mean_y)).abs() <= 1e-12);
    }
}

#[test]
fn self_propelled_pair_conserves_total_quasi_momentum() {
    // the sum of lattice velocities is not conserved here: both particles
    // accelerate the same way, so the check uses the joint translation
    let lattice = LatticeSpec::periodic(80).unwrap();
    let psi = packet(
        &lattice,
        (35.0, 45.0),
        6.0,
        (0.0, PI),
        Statistics::Distinguishable,
    );
    let ham = Hamiltonian::from_params(&HubbardParams::exponential(1.0, -6.0, 1.0 / 12.0), lattice)
        .unwrap();
    let before = diagonal_translation_expectation(&psi);
    let rec = evolve(&psi, &ham, &PropagatorConfig::default(), 15.0, |s, _| {
        assert!((diagonal_translation_expectation(s) - before).norm() <= 1e-9);
    })
    .unwrap();
    let mid = rec.observables.samples[60];
    assert!(mid.vx > 1.0 && mid.vy > 1.0);
}
