import numpy as np
import pytest
from scipy.linalg import block_diag

from autgrp.eigenstructure import centralizer_basis, cosquare, jordan_structure
from autgrp.pencil_kronecker import canonical_block, congruence_scramble, kronecker_structure
from autgrp.solution_basis import (
    build_pair_matrix,
    cosol_basis,
    dim_from_structure,
    dimension_report,
    oracle_basis,
    project_centralizer,
    sol_basis,
    span_equal,
)

from conftest import (
    EXAMPLE_JORDAN,
    EXAMPLE_JORDAN_SOL,
    EXAMPLE_JORDAN_U,
    EXAMPLE_JORDAN_W,
    EXAMPLE_QUAD,
    EXAMPLE_QUAD_SOL,
    EXAMPLE_SURFACE,
    EXAMPLE_SURFACE_SOL,
    TABLE_2x2,
    as_basis,
    random_form,
)


def test_builder_matrices_reproduce_worked_example():
    J, W, U = EXAMPLE_JORDAN, EXAMPLE_JORDAN_W, EXAMPLE_JORDAN_U
    np.testing.assert_allclose(build_pair_matrix("X_T", 1, J, W, U), EXAMPLE_JORDAN_SOL[0])
    np.testing.assert_allclose(build_pair_matrix("X_T", 2, J, W, U), EXAMPLE_JORDAN_SOL[1])


def test_builder_validation():
    J = np.eye(2)
    with pytest.raises(ValueError):
        build_pair_matrix("Z_T", 1, J, np.eye(2), np.eye(2))
    with pytest.raises(ValueError):
        build_pair_matrix("X_T", 3, J, np.eye(2), np.eye(2))
    with pytest.raises(ValueError):
        build_pair_matrix("X_R", 1, J, np.eye(2)[:, :1], np.eye(2))


@pytest.mark.parametrize("J, expected", [
    (EXAMPLE_JORDAN, EXAMPLE_JORDAN_SOL),
    (EXAMPLE_QUAD, EXAMPLE_QUAD_SOL),
    (EXAMPLE_SURFACE, EXAMPLE_SURFACE_SOL),
], ids=["jordan", "quadruple", "surface"])
def test_worked_examples(J, expected):
    b = sol_basis(J)
    assert b.dim == 2
    assert span_equal(b, as_basis(expected, J))
    assert b.residual_max <= 1e-10 * np.linalg.norm(J)


@pytest.mark.parametrize("J, case, dim", TABLE_2x2)
def test_2x2_dimensions(J, case, dim):
    assert sol_basis(J).dim == dim
    assert span_equal(sol_basis(J), oracle_basis(J, "T", 1))
    assert span_equal(cosol_basis(J), oracle_basis(J, "T", -1))


def test_identity_gives_skew_and_symmetric():
    b = sol_basis(np.eye(3))
    assert b.dim == 3
    for X in b:
        np.testing.assert_allclose(X, -X.T, atol=1e-14)
    assert cosol_basis(np.eye(3)).dim == 6


def test_elements_are_normalised():
    for X in sol_basis(EXAMPLE_QUAD):
        assert abs(np.linalg.norm(X) - 1) < 1e-12


@pytest.mark.parametrize("inv", ["T", "H"])
@pytest.mark.parametrize("complex_", [False, True])
@pytest.mark.parametrize("rank", [None, 2])
def test_random_forms_match_oracle(rng, inv, complex_, rank):
    for n in (3, 4, 5):
        J = random_form(rng, n, rank, complex_)
        for sign, fn in ((1, sol_basis), (-1, cosol_basis)):
            assert span_equal(fn(J, inv), oracle_basis(J, inv, sign))


@pytest.mark.parametrize("inv", ["T", "H"])
def test_repeated_blocks(inv):
    J = block_diag(np.eye(2), canonical_block("pair", 2, 3.0), canonical_block("pair", 2, 3.0))
    J = congruence_scramble(J, inv, 2)
    for sign, fn in ((1, sol_basis), (-1, cosol_basis)):
        assert span_equal(fn(J, inv), oracle_basis(J, inv, sign))


def test_projection_of_centralizer(rng):
    J = rng.standard_normal((4, 4))
    C = cosquare(J)
    Z = centralizer_basis(C, jordan_structure(C))
    for M in Z:
        plus = project_centralizer(M, J, "T", +1, halve=True)
        minus = project_centralizer(M, J, "T", -1, halve=True)
        np.testing.assert_allclose(plus + minus, M, atol=1e-10)
        assert np.linalg.norm(plus.T @ J + J @ plus) < 1e-9
        assert np.linalg.norm(minus.T @ J - J @ minus) < 1e-9


@pytest.mark.parametrize("partner", [False, True])
def test_regeneration_keeps_span(rng, partner):
    J = rng.standard_normal((5, 5))
    ref = sol_basis(J)
    assert span_equal(ref, sol_basis(J, random_state=3, partner=partner))


def test_dim_from_structure_examples():
    assert dim_from_structure(kronecker_structure(np.eye(4)), "sol").total == 6
    assert dim_from_structure(kronecker_structure(np.eye(4)), "cosol").total == 10
    assert dim_from_structure(kronecker_structure(np.zeros((3, 3))), "sol").total == 9


def test_dimension_report_singular_complex():
    J = np.diag([1.0, 0.0]) + 0j
    J[0, 1] = 1j
    for inv in ("T", "H"):
        rep = dimension_report(J, inv, "sol")
        assert rep.agrees, rep.to_json()


def test_interaction_term_alternative_form_is_reported():
    # a real form with a singular pair: the two interaction-term forms differ
    rep = dimension_report(np.diag([1.0, 0.0]), "T", "sol")
    assert rep.agrees
    assert rep.D_I_printed is not None
    assert rep.notes


def test_repeated_unit_blocks_with_unmatched_chains():
    # cosquare has eigenvalue 1 twice (two 1x1 blocks) and the pair +-i; the
    # independently computed chains at 1 do not correspond block by block
    J = np.array([[0, 1, 1, 1], [1, 1, 1, 1], [1, 0, 1, 0], [1, -1, 1, 1]], float)
    for sign, fn in ((1, sol_basis), (-1, cosol_basis)):
        assert span_equal(fn(J), oracle_basis(J, "T", sign))
