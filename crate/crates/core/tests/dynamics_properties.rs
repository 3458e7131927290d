use mwio_core::dynamics::{
    closed_equilibrium_predict, fixed_point_residual, kron_equilibrium, open_equilibrium, simulate,
    EquilibriumMethod, SimulationOptions,
};
use mwio_core::economy::{build_lifted, validate, ModelClass};
use mwio_core::fixtures;
use mwio_core::matrix::{Vector, STOCHASTIC_TOL};
use mwio_core::random;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn closed_dynamics_conserve_mass_and_reach_the_prediction() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let opts = SimulationOptions::default();
    for k in 0..20 {
        let shape = random::shape(&mut rng, 5, 4);
        let net = random::closed_network(&mut rng, shape, k % 2 == 0);
        let report = validate(&net, STOCHASTIC_TOL).unwrap();
        assert_eq!(report.model_class, ModelClass::Closed);
        let sys = build_lifted(&net).unwrap();
        let x0 = net.initial_state();
        let trace = simulate(&sys, x0, &opts).unwrap();
        assert!(trace.converged, "{shape:?}");

        let mass0 = x0.sum();
        for pair in trace.states.windows(2) {
            assert!((pair[1].sum() - pair[0].sum()).abs() <= 1e-12 * mass0);
        }
        for state in &trace.states {
            assert!(state.iter().all(|&v| v >= 0.0));
        }

        let predicted = closed_equilibrium_predict(&sys, x0).unwrap();
        let gap = predicted.dist_inf(trace.final_state());
        assert!(gap <= 1e-7, "{shape:?}: gap {gap}");
        let off_root: Vec<usize> = (0..net.dim())
            .filter(|i| !report.root_set.contains(&(i / net.industries())))
            .collect();
        assert!(off_root.iter().all(|&i| predicted[i] <= 1e-8));
        let residual = fixed_point_residual(&sys, trace.final_state()).unwrap();
        assert!(
            residual <= 10.0 * opts.convergence_tol,
            "residual {residual}"
        );
    }
}

#[test]
fn kron_limit_matches_general_prediction() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20 {
        let shape = random::shape(&mut rng, 4, 4);
        let (w, a, net) = random::uniform_matrix_network(&mut rng, shape);
        assert_eq!(
            validate(&net, STOCHASTIC_TOL).unwrap().model_class,
            ModelClass::Closed
        );
        let sys = build_lifted(&net).unwrap();
        let general = closed_equilibrium_predict(&sys, net.initial_state()).unwrap();
        let kron = kron_equilibrium(&w, &a, net.initial_state()).unwrap();
        assert!(
            kron.dist_inf(&general) <= 1e-9,
            "{shape:?} gap {}",
            kron.dist_inf(&general)
        );
    }
}

#[test]
fn kron_limit_on_five_agent_weights() {
    let shared = fixtures::shared_supplier_matrix();
    let mut net = fixtures::closed_five_agent();
    let w = net.weight_matrix();
    net = mwio_core::EconomyNetwork::from_weights(
        &w,
        &shared,
        None,
        Some(net.initial_state().clone()),
    )
    .unwrap();
    let sys = build_lifted(&net).unwrap();
    let general = closed_equilibrium_predict(&sys, net.initial_state()).unwrap();
    let kron = kron_equilibrium(&w, &shared, net.initial_state()).unwrap();
    assert!(kron.dist_inf(&general) <= 1e-9);
}

#[test]
fn open_methods_agree_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let opts = SimulationOptions::default();
    for _ in 0..20 {
        let shape = random::shape(&mut rng, 5, 4);
        let net = random::open_network(&mut rng, shape);
        assert_eq!(
            validate(&net, STOCHASTIC_TOL).unwrap().model_class,
            ModelClass::Open
        );
        let sys = build_lifted(&net).unwrap();
        let direct = open_equilibrium(&sys, EquilibriumMethod::Direct, &opts).unwrap();
        let iter = open_equilibrium(&sys, EquilibriumMethod::Iterative, &opts).unwrap();
        assert!(direct.spectral_radius_estimate < 1.0);
        assert!(direct.x_star.dist_inf(&iter.x_star) <= 1e-8, "{shape:?}");
        assert!(iter.residual <= 10.0 * opts.convergence_tol);
        assert!(iter.x_star.iter().all(|&v| v >= 0.0));
    }
}

#[test]
fn open_iterates_stay_nonnegative() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..10 {
        let shape = random::shape(&mut rng, 5, 4);
        let net = random::open_network(&mut rng, shape);
        let sys = build_lifted(&net).unwrap();
        let trace = simulate(
            &sys,
            &Vector::zeros(net.dim()),
            &SimulationOptions::default(),
        )
        .unwrap();
        assert!(trace.states.iter().all(|s| s.iter().all(|&v| v >= 0.0)));
    }
}

/// `‖x[k] − x*‖∞` never grows once the first `dn` steps are past, until it
/// reaches `floor`, the accuracy of the reference `x*`.
fn assert_tail_contracts(states: &[Vector], x_star: &Vector, dn: usize, floor: f64) {
    let errors: Vec<f64> = states.iter().map(|s| s.dist_inf(x_star)).collect();
    for (k, pair) in errors.windows(2).enumerate().skip(dn) {
        if pair[0] <= floor {
            break;
        }
        assert!(
            pair[1] <= pair[0],
            "error grew at step {}: {} -> {}",
            k + 1,
            pair[0],
            pair[1]
        );
    }
}

#[test]
fn error_contracts_on_reference_networks() {
    let opts = SimulationOptions::default();

    let open = fixtures::open_five_agent();
    let sys = build_lifted(&open).unwrap();
    let x_star = open_equilibrium(&sys, EquilibriumMethod::Direct, &opts)
        .unwrap()
        .x_star;
    let trace = simulate(&sys, &Vector::zeros(15), &opts).unwrap();
    assert_tail_contracts(&trace.states, &x_star, 15, 1e-13);

    let closed = fixtures::closed_five_agent();
    let sys = build_lifted(&closed).unwrap();
    let limit = closed_equilibrium_predict(&sys, closed.initial_state()).unwrap();
    let trace = simulate(&sys, closed.initial_state(), &opts).unwrap();
    // the Perron vector is only resolved to a 1e-13 residual
    assert_tail_contracts(&trace.states, &limit, 15, 1e-11);
}
