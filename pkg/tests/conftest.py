import numpy as np
import pytest

from autgrp._basis import SolutionBasis

# worked 4x4 example with cosquare blocks J_2(2) + J_2(1/2)
EXAMPLE_JORDAN = np.array([[5, 6, -9, -9], [1, 0, -1, 1], [-3, -6, 7, 7], [-6, 2, 2, 0]], float)
EXAMPLE_JORDAN_SOL = [
    24 * np.array([[5, -1, -3, 0], [10, -2, -6, 0], [5, -1, -3, 0], [4, 0, -4, 0]], float),
    8 * np.array([[-23, 4, 12, 6], [-46, 5, 30, 12], [-26, 4, 15, 6], [-16, 0, 16, 3]], float),
]
EXAMPLE_JORDAN_W = np.array([[6, 1], [12, 8], [6, 1], [0, 0]], float)
EXAMPLE_JORDAN_U = np.array([[-4, 7], [-8, 15], [-4, 8], [-4, 7]], float)

# real 4x4 example whose cosquare has eigenvalues 1 +- i, (1 +- i)/2
EXAMPLE_QUAD = np.array([[-1, 0, -3, -2], [1, 0, 1, 0], [-2, 2, 4, -1], [0, -1, -1, -2]], float)
EXAMPLE_QUAD_SOL = [
    np.array([[13, -8, -34, 14], [2, -13, -62, -20], [8, 8, 7, 10], [-32, 16, 20, -7]], float) / 3,
    np.array([[-39, 9, 22, -32], [-51, 39, 86, -10], [-9, -9, -16, 5], [36, -18, 10, 16]], float) / 3,
]

# real 4x4 example with a two-dimensional group (surface data)
EXAMPLE_SURFACE = np.array([[1, 1, -1, -1], [-1, 1, 0, -1], [1, 0, 1, -1], [1, 1, 1, 1]], float)
EXAMPLE_SURFACE_SOL = [
    np.array([[0, 1, -1, -2], [-1, 0, -1, -1], [1, 1, 0, -1], [2, 1, 1, 0]], float),
    np.array([[0, -1, 1, -1], [1, 0, -2, 1], [-1, 2, 0, 1], [1, -1, -1, 0]], float),
]

# canonical 2x2 forms, one per group type, with the expected (case, dim)
TABLE_2x2 = [
    (np.array([[1.0, 2.0], [-2.0, -1.0]]), 1, 1),
    (np.array([[1.0, 2.0], [-2.0, 1.0]]), 2, 1),
    (np.eye(2), 3, 1),
    (np.diag([1.0, -1.0]), 4, 1),
    (np.array([[0.0, 1.0], [-1.0, 0.0]]), 5, 3),
    (np.array([[0.0, -1.0], [1.0, 1.0]]), 6, 1),
    (np.array([[0.0, 1.0], [0.0, 0.0]]), 7, 1),
    (np.diag([1.0, 0.0]), 8, 2),
    (np.zeros((2, 2)), 9, 4),
]


def as_basis(mats, J, space="sol", inv="T"):
    """Wrap literal matrices as a SolutionBasis for span comparisons."""
    mats = [np.asarray(m) for m in mats]
    field = "complex" if np.iscomplexobj(J) else "real"
    return SolutionBasis(space, inv, field, mats, [0.0] * len(mats), [()] * len(mats), J.shape[0])


def random_form(rng, n, rank=None, complex_=False):
    """Gaussian ``n x n`` matrix, optionally of the given rank, real or complex."""
    rank = n if rank is None else rank

    def draw(shape):
        A = rng.standard_normal(shape)
        return A + 1j * rng.standard_normal(shape) if complex_ else A

    if rank == n:
        return draw((n, n))
    return draw((n, rank)) @ draw((rank, n))


# PASS/FAIL lines recorded by test_acceptance.py, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
