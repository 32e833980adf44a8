import numpy as np
import pytest

from obstacle_control import fem
from obstacle_control.obstacle import (ObstacleSolveError, contact_nodes, energy,
                                       psor_oracle, solve_obstacle)
from obstacle_control.pchip import ControlVector, control_trace


def with_fields(problem, f_vec=None, psi_vec=None):
    return fem.DiscreteObstacleProblem(
        problem.K,
        problem.f_vec if f_vec is None else f_vec,
        problem.psi_vec if psi_vec is None else psi_vec,
        problem.dirichlet_nodes, problem.dirichlet_angles, problem.mesh)


def random_instance(problem, rng):
    """Random boundary data and obstacle on the fixed coarse mesh."""
    n = problem.mesh.num_nodes
    a = rng.uniform(0.2, 3.0, 12)
    u_d = control_trace(ControlVector(a), problem.dirichlet_angles)
    c = rng.uniform(0.1, 0.6)
    cx, cy = rng.uniform(-0.5, 0.5, 2)
    shift = rng.uniform(0.02, 0.4)
    psi = -c * ((problem.mesh.nodes[:, 0] - cx) ** 2
                + (problem.mesh.nodes[:, 1] - cy) ** 2) - shift
    return with_fields(problem, psi_vec=psi), u_d


def assert_kkt(problem, sol, tol_r=1e-10, tol_c=1e-12):
    interior = problem.interior
    q, psi = sol.q, problem.psi_vec
    lam = problem.K @ q - problem.f_vec
    scale = max(1.0, np.abs(problem.f_vec).max(),
                np.abs(problem.K).max() * np.abs(q).max())
    assert np.all(q[interior] >= psi[interior] - tol_c)
    free = np.setdiff1d(interior, sol.contact_set)
    assert np.abs(lam[free]).max(initial=0.0) <= tol_r * scale
    assert lam[sol.contact_set].min(initial=0.0) >= -tol_r * scale
    gap = q[interior] - psi[interior]
    assert (lam[interior] * gap).max(initial=0.0) <= tol_r * scale


def test_inactive_obstacle_matches_unconstrained(problem_coarse):
    prob = with_fields(problem_coarse,
                       psi_vec=np.full(problem_coarse.mesh.num_nodes, -1e9))
    u0 = np.zeros(len(prob.dirichlet_nodes))
    sol = solve_obstacle(prob, u0)
    y = fem.unconstrained_dirichlet_solve(problem_coarse, u0)
    assert np.abs(sol.q - y).max() <= 1e-10
    assert len(sol.contact_set) == 0


def test_constant_extension_above_obstacle(problem_coarse):
    prob = with_fields(problem_coarse, f_vec=np.zeros(problem_coarse.mesh.num_nodes))
    c = 2.0
    sol = solve_obstacle(prob, np.full(len(prob.dirichlet_nodes), c))
    assert np.abs(sol.q - c).max() <= 1e-12
    assert len(sol.contact_set) == 0


def test_matches_psor_on_reference_configuration(problem_coarse):
    u_d = control_trace(ControlVector(np.full(30, 2.0)), problem_coarse.dirichlet_angles)
    active = solve_obstacle(problem_coarse, u_d)
    oracle = psor_oracle(problem_coarse, u_d, omega=1.5, tol=1e-12)
    assert np.abs(active.q - oracle.q).max() <= 1e-8
    assert np.array_equal(active.contact_set, oracle.contact_set)
    assert len(active.contact_set) > 0
    assert_kkt(problem_coarse, active)


def test_psor_no_obstacle_matches_unconstrained(problem_coarse):
    prob = with_fields(problem_coarse,
                       psi_vec=np.full(problem_coarse.mesh.num_nodes, -1e9))
    u0 = np.full(len(prob.dirichlet_nodes), 0.5)
    sol = psor_oracle(prob, u0, omega=1.5, tol=1e-13)
    y = fem.unconstrained_dirichlet_solve(with_fields(problem_coarse), u0)
    assert np.abs(sol.q - y).max() <= 1e-8


def test_psor_relaxation_validation(problem_coarse):
    with pytest.raises(ValueError):
        psor_oracle(problem_coarse, np.zeros(len(problem_coarse.dirichlet_nodes)), omega=2.5)


def test_psor_unit_relaxation_converges(problem_coarse):
    u_d = control_trace(ControlVector(np.full(30, 2.0)), problem_coarse.dirichlet_angles)
    sol = psor_oracle(problem_coarse, u_d, omega=1.0, tol=1e-11, max_iter=100_000)
    assert sol.iterations < 100_000


def test_cross_validation_on_random_instances(problem_coarse, rng):
    for _ in range(10):
        prob, u_d = random_instance(problem_coarse, rng)
        active = solve_obstacle(prob, u_d)
        oracle = psor_oracle(prob, u_d, omega=1.5, tol=1e-12)
        assert np.abs(active.q - oracle.q).max() <= 1e-8
        assert np.array_equal(active.contact_set, oracle.contact_set)
        assert_kkt(prob, active)


def test_contact_set_rule(problem_coarse):
    u_d = control_trace(ControlVector(np.full(30, 2.0)), problem_coarse.dirichlet_angles)
    sol = solve_obstacle(problem_coarse, u_d)
    assert np.array_equal(contact_nodes(problem_coarse, sol.q), sol.contact_set)
    # tol_c = 0 and tol_c = 1e-12 may differ only where the gap is below 1e-12
    tight = contact_nodes(problem_coarse, sol.q, tol_c=0.0)
    loose = contact_nodes(problem_coarse, sol.q, tol_c=1e-12)
    extra = np.setdiff1d(loose, tight)
    gaps = sol.q[extra] - problem_coarse.psi_vec[extra]
    assert np.all(np.abs(gaps) < 1e-12 * np.maximum(1.0, np.abs(problem_coarse.psi_vec[extra])))


def test_contact_set_empty_without_obstacle(problem_coarse):
    prob = with_fields(problem_coarse,
                       psi_vec=np.full(problem_coarse.mesh.num_nodes, -1e9))
    sol = solve_obstacle(prob, np.zeros(len(prob.dirichlet_nodes)))
    assert len(contact_nodes(prob, sol.q)) == 0


def test_energy_optimality_against_feasible_perturbations(problem_coarse, rng):
    u_d = control_trace(ControlVector(np.full(30, 2.0)), problem_coarse.dirichlet_angles)
    sol = solve_obstacle(problem_coarse, u_d)
    base = energy(problem_coarse, sol.q)
    interior = problem_coarse.interior
    for _ in range(100):
        qt = sol.q.copy()
        qt[interior] += 0.05 * rng.standard_normal(len(interior))
        qt[interior] = np.maximum(qt[interior], problem_coarse.psi_vec[interior])
        assert energy(problem_coarse, qt) >= base - 1e-12 * max(1.0, abs(base))


def test_warm_start_returns_same_solution(problem_coarse, rng):
    prob, u_d = random_instance(problem_coarse, rng)
    cold = solve_obstacle(prob, u_d)
    warm = solve_obstacle(prob, u_d, warm_start=cold.contact_set)
    assert np.abs(cold.q - warm.q).max() <= 1e-12
    assert np.array_equal(cold.contact_set, warm.contact_set)
    assert warm.iterations <= cold.iterations


def test_energy_monotone_after_first_activation(problem_coarse, rng):
    # From a cold start the first iterate is the unconstrained minimizer, so
    # the energy necessarily jumps up when the contact constraints activate;
    # from then on the swap rule lowers it monotonically on these problems.
    for _ in range(5):
        prob, u_d = random_instance(problem_coarse, rng)
        sol = solve_obstacle(prob, u_d)
        pi = np.asarray(sol.pi_history)
        assert len(pi) == sol.iterations
        if len(pi) > 2:
            assert np.all(np.diff(pi[1:]) <= 1e-9 * np.maximum(1.0, np.abs(pi[1:-1])))


def test_iteration_cap_raises_with_partial_state(problem_coarse):
    u_d = control_trace(ControlVector(np.full(30, 2.0)), problem_coarse.dirichlet_angles)
    with pytest.raises(ObstacleSolveError) as err:
        solve_obstacle(problem_coarse, u_d, max_iter=2)
    assert err.value.solution is not None
    assert err.value.solution.q.shape == (problem_coarse.mesh.num_nodes,)


def test_nonfinite_boundary_data_rejected(problem_coarse):
    bad = np.zeros(len(problem_coarse.dirichlet_nodes))
    bad[0] = np.nan
    with pytest.raises(ValueError):
        solve_obstacle(problem_coarse, bad)
