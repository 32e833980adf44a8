import numpy as np
import pytest

from obstacle_control import build_problem, generate_disk_mesh

RADIUS = 1.75
TARGET_TRIANGLE = ((-1.0, 0.0), (0.5, 0.75), (0.5, -1.5))
LOAD = -10.0


def quadratic_obstacle(p):
    return -0.3 * (p[:, 0] ** 2 + (p[:, 1] - 0.25) ** 2) - 0.05


@pytest.fixture(scope="session")
def mesh_coarse():
    return generate_disk_mesh(RADIUS, 0.2, TARGET_TRIANGLE, seed=0)


@pytest.fixture(scope="session")
def mesh_medium():
    return generate_disk_mesh(RADIUS, 0.1, TARGET_TRIANGLE, seed=0)


@pytest.fixture(scope="session")
def problem_coarse(mesh_coarse):
    return build_problem(mesh_coarse, LOAD, quadratic_obstacle)


@pytest.fixture(scope="session")
def problem_medium(mesh_medium):
    return build_problem(mesh_medium, LOAD, quadratic_obstacle)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
