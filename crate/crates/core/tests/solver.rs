use approx::assert_abs_diff_eq;
use fracmp::solver::{convex_solve, mountain_pass_solve};
use fracmp::verify::shoot_power;
use fracmp::{EnergyFunctional, FracParams, Nonlinearity, Problem, Profile, SolverOptions};

#[test]
fn classical_solution_matches_shooting() {
    let params = FracParams::new(1.0, 2.0, 1.0).unwrap();
    let problem = Problem::uniform(params, Nonlinearity::power(4.0, 1.0), 256).unwrap();
    let report = mountain_pass_solve(&problem, &SolverOptions::default()).unwrap();
    assert!(report.converged);
    let oracle = shoot_power(problem.grid, 1.0, 4.0, 16).unwrap();
    let sign = report.u_star.values()[128].signum();
    for (u, v) in report.u_star.values().iter().zip(oracle.values()) {
        assert_abs_diff_eq!(sign * u, *v, epsilon = 1e-3);
    }
}

#[test]
fn sublinear_dirichlet_term_converges() {
    for &(alpha, n) in &[(0.9, 256), (1.0, 512)] {
        let params = FracParams::new(alpha, 1.5, 1.0).unwrap();
        let problem = Problem::uniform(params, Nonlinearity::power(3.0, 1.0), n).unwrap();
        let report = mountain_pass_solve(&problem, &SolverOptions::default()).unwrap();
        assert!(report.converged, "alpha {alpha}: grad {}", report.grad_norm);
        let beta = report.geometry.as_ref().unwrap().beta;
        assert!(report.energy_value >= beta);
    }
}

#[test]
fn convex_solve_returns_critical_point() {
    let params = FracParams::new(0.8, 3.0, 1.0).unwrap();
    let nl = Nonlinearity::forcing_only(Profile::constant(2.0));
    let problem = Problem::uniform(params, nl, 128).unwrap();
    let report = convex_solve(&problem, &SolverOptions::default()).unwrap();
    assert!(report.converged);
    let energy = EnergyFunctional::new(&problem);
    assert!(energy.grad_norm(&report.u_star) <= 1e-6);
    assert!(report.energy_value < 0.0);
}
