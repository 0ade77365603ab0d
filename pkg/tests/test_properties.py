import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from autgrp.eigenstructure import centralizer_dimension, cosquare, jordan_structure
from autgrp.group_sampler import SampleConfig, classify_2x2, membership_residual, sample_group
from autgrp.io import matrix_from_json, matrix_to_json
from autgrp.solution_basis import cosol_basis, oracle_basis, sol_basis, span_equal

SETTINGS = dict(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

small_ints = st.integers(min_value=-2, max_value=2)


@st.composite
def integer_forms(draw, max_n=4):
    n = draw(st.integers(min_value=1, max_value=max_n))
    re = draw(arrays(np.int64, (n, n), elements=small_ints)).astype(float)
    if draw(st.booleans()):
        return re + 1j * draw(arrays(np.int64, (n, n), elements=small_ints))
    return re


@settings(**SETTINGS)
@given(J=integer_forms(), inv=st.sampled_from(["T", "H"]))
def test_bases_match_oracle_on_integer_forms(J, inv):
    for sign, fn in ((1, sol_basis), (-1, cosol_basis)):
        b = fn(J, inv)
        assert span_equal(b, oracle_basis(J, inv, sign))


@settings(**SETTINGS)
@given(J=arrays(np.float64, (3, 3), elements=st.floats(-3, 3, allow_nan=False)))
def test_direct_sum_of_sol_and_cosol(J):
    if np.linalg.svd(J, compute_uv=False)[-1] < 1e-3 * max(1.0, np.abs(J).max()):
        return
    spec = jordan_structure(cosquare(J))
    assert sol_basis(J).dim + cosol_basis(J).dim == centralizer_dimension(spec)


@settings(**SETTINGS)
@given(J=integer_forms(max_n=3), seed=st.integers(0, 2**64 - 1))
def test_samples_stay_in_group(J, seed):
    inv = "T"
    for G in sample_group(J, inv, SampleConfig(N=3, seed=seed, scale=0.5)):
        assert membership_residual(G, J, inv) <= 1e-8 * max(1.0, np.linalg.norm(J))


@settings(**SETTINGS)
@given(J=arrays(np.int64, (2, 2), elements=st.integers(-3, 3)))
def test_classifier_dimension_matches_basis(J):
    J = J.astype(float)
    assert classify_2x2(J).dim == sol_basis(J).dim


@settings(**SETTINGS)
@given(M=arrays(np.float64, (2, 3), elements=st.floats(allow_nan=False, allow_infinity=False)))
def test_matrix_json_round_trip(M):
    assert np.array_equal(matrix_from_json(matrix_to_json(M)), M)
