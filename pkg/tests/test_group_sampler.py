import numpy as np
import pytest
from scipy.linalg import block_diag

from autgrp.errors import DomainError, InputError
from autgrp.group_sampler import (
    SampleConfig,
    classify_2x2,
    exp_map,
    gnuplot_script,
    membership_residual,
    points_to_csv,
    points_to_ply,
    profile_4x4,
    project_cloud,
    projection_matrix,
    sample_group,
    samples_to_csv,
)
from autgrp.pencil_kronecker import congruence_scramble
from autgrp.solution_basis import sol_basis

from conftest import EXAMPLE_QUAD, EXAMPLE_SURFACE, TABLE_2x2


def test_membership_of_identity_and_cosquare(rng):
    J = rng.standard_normal((5, 5))
    assert membership_residual(np.eye(5), J) == 0.0
    C = np.linalg.solve(J.T, J)
    assert membership_residual(C, J) <= 1e-10 * np.linalg.norm(J)


def test_generic_matrix_is_not_a_member(rng):
    J = rng.standard_normal((3, 3))
    assert membership_residual(rng.standard_normal((3, 3)), J) > 1e-3


def test_exp_map_closed_forms():
    np.testing.assert_array_equal(exp_map(np.zeros((3, 3))), np.eye(3))
    t = 0.8
    R = exp_map(np.array([[0, t], [-t, 0]]))
    np.testing.assert_allclose(R, [[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]], atol=1e-14)
    with pytest.raises(ValueError):
        exp_map(np.zeros((2, 3)))


def test_exp_map_det_trace(rng):
    X = rng.standard_normal((6, 6))
    assert abs(np.linalg.det(exp_map(X)) - np.exp(np.trace(X))) <= 1e-10 * np.exp(np.trace(X))


def test_tangent_elements_exponentiate_into_group(rng):
    J = rng.standard_normal((4, 4))
    for X in sol_basis(J):
        assert membership_residual(exp_map(X), J) <= 1e-8


def test_sample_config_validation():
    with pytest.raises(ValueError):
        SampleConfig(N=-1)
    with pytest.raises(ValueError):
        SampleConfig(seed=-2)
    with pytest.raises(ValueError):
        SampleConfig(scale=np.inf)


def test_sampling_basics(rng):
    J = rng.standard_normal((4, 4))
    assert sample_group(J, "T", SampleConfig(N=0)) == []
    cfg = SampleConfig(N=25, seed=9)
    first = sample_group(J, "T", cfg)
    assert max(membership_residual(G, J) for G in first) <= 1e-8
    second = sample_group(J, "T", cfg)
    assert all(np.array_equal(a, b) for a, b in zip(first, second))
    assert samples_to_csv(first) == samples_to_csv(second)


def test_sample_streams_are_independent_of_count(rng):
    J = rng.standard_normal((3, 3))
    short = sample_group(J, "T", SampleConfig(N=3, seed=4))
    long = sample_group(J, "T", SampleConfig(N=10, seed=4))
    assert all(np.array_equal(a, b) for a, b in zip(short, long))


@pytest.mark.parametrize("inv", ["T", "H"])
def test_sampling_complex(rng, inv):
    J = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    for G in sample_group(J, inv, SampleConfig(N=20, seed=1)):
        assert membership_residual(G, J, inv) <= 1e-8


def test_sampling_singular_form():
    J = congruence_scramble(np.diag([1.0, 1.0, 0.0]), "T", 5)
    for G in sample_group(J, "T", SampleConfig(N=20, seed=2)):
        assert membership_residual(G, J) <= 1e-8 * np.linalg.norm(J)


def test_projection_matrix_is_orthonormal():
    Q = projection_matrix(16, 3)
    assert np.linalg.norm(Q.T @ Q - np.eye(3)) <= 1e-12
    np.testing.assert_array_equal(Q, projection_matrix(16, 3))


def test_zero_draw_projects_identity(rng):
    J = rng.standard_normal((3, 3))
    pts = project_cloud(J, "T", SampleConfig(N=1, seed=6, scale=0.0))
    Q = projection_matrix(9, 6)
    np.testing.assert_allclose(pts[0], Q.T @ np.eye(3).reshape(-1, order="F"), atol=1e-15)


def test_projected_points_back_check(rng):
    J = rng.standard_normal((4, 4))
    pts, samples = project_cloud(J, "T", SampleConfig(N=30, seed=2), return_samples=True)
    assert pts.shape == (30, 3)
    for p, G in zip(pts, samples):
        assert membership_residual(G, J) <= 1e-8
        assert np.linalg.norm(p) <= np.linalg.norm(G) + 1e-12


def test_surface_grid():
    pts, samples = project_cloud(EXAMPLE_SURFACE, "T", SampleConfig(seed=1), mode="surface-grid",
                                 grid=50, return_samples=True)
    assert pts.shape == (2500, 3)
    assert max(membership_residual(G, EXAMPLE_SURFACE) for G in samples) <= 1e-8


def test_surface_grid_needs_two_dimensions():
    with pytest.raises(DomainError):
        project_cloud(np.eye(3), "T", SampleConfig(N=1), mode="surface-grid")


@pytest.mark.parametrize("J, case, dim", TABLE_2x2)
def test_classify_2x2(J, case, dim):
    c = classify_2x2(J)
    assert (c.case, c.dim) == (case, dim)
    assert c.dim == sol_basis(J).dim


@pytest.mark.parametrize("J, case, dim", TABLE_2x2)
def test_classify_2x2_is_congruence_invariant(rng, J, case, dim):
    S = rng.standard_normal((2, 2)) + 3 * np.eye(2)
    assert classify_2x2(S.T @ J @ S).case == case


def test_classify_2x2_rejects_other_input():
    with pytest.raises(InputError):
        classify_2x2(np.eye(3))


def test_profile_4x4():
    # 2x2 blocks: symmetric part definite -> unit pair, indefinite -> real reciprocal pair
    circle_a = np.array([[1.0, 2.0], [-2.0, 1.0]])
    circle_b = np.array([[2.0, 1.0], [-1.0, 3.0]])
    hyper_a = np.array([[1.0, 2.0], [-2.0, -1.0]])
    hyper_b = np.array([[1.0, 3.0], [-3.0, -2.0]])
    assert profile_4x4(block_diag(circle_a, circle_b)) == "circle x circle"
    assert profile_4x4(block_diag(hyper_a, hyper_b)) == "hyperbola x hyperbola"
    assert profile_4x4(block_diag(hyper_a, circle_a)) == "hyperbola x circle"
    assert profile_4x4(EXAMPLE_QUAD) == "punctured-plane"
    assert profile_4x4(np.eye(4)) == "NonGeneric"


def test_exports():
    pts = np.array([[0.1, 0.2, 0.3], [1.0, -2.0, 3.5]])
    csv = points_to_csv(pts)
    assert csv.splitlines()[0] == "x,y,z"
    assert [float(v) for v in csv.splitlines()[1].split(",")] == [0.1, 0.2, 0.3]
    ply = points_to_ply(pts)
    assert "element vertex 2" in ply and ply.splitlines()[-1] == "1.0 -2.0 3.5"
    assert "splot" in gnuplot_script("cloud.csv")
    header = samples_to_csv([np.eye(2)]).splitlines()[0]
    assert header == "g11,g12,g21,g22"
