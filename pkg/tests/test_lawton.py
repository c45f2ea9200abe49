import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framelet2d import (
    CANONICAL_FORMS,
    FilterCoeffs,
    InvalidN0,
    NoConvergence,
    SolverOptions,
    haar_pair,
    lawton_index_set,
    load_filter,
    residuals,
    solve,
    special_vectors,
    validate,
)
from framelet2d.lawton import filter_from_json_dict, filter_to_json_dict

SQRT2 = math.sqrt(2.0)


def test_index_set_is_even_sum_sublattice_for_index_1():
    # C^T Z^2 for index 1 is the set of integer points with even x+y
    ks = lawton_index_set(CANONICAL_FORMS[1], 1)
    expected = sorted((i, j) for i in range(-2, 3) for j in range(-2, 3)
                      if (i + j) % 2 == 0)
    assert ks == expected


def test_index_set_scales_with_support():
    assert len(lawton_index_set(CANONICAL_FORMS[1], 2)) == 41
    for k in lawton_index_set(CANONICAL_FORMS[5], 1):
        assert max(abs(k[0]), abs(k[1])) <= 2


@pytest.mark.parametrize("idx", [1, 2, 3, 4, 5, 6])
def test_haar_pair_solves_every_canonical_form(idx):
    h = haar_pair(idx)
    r = residuals(h, CANONICAL_FORMS[idx])
    assert r.max_abs <= 1e-14
    ok, _ = validate(h, CANONICAL_FORMS[idx])
    assert ok
    assert abs(h.tap_sum() - SQRT2) <= 1e-15


def test_haar_pair_taps():
    h = haar_pair(1)
    assert h[(0, 0)] == pytest.approx(1 / SQRT2)
    assert h[special_vectors(1).ell] == pytest.approx(1 / SQRT2)
    assert h[(1, 1)] == 0
    h5 = haar_pair(5)
    assert h5[(0, 1)] == pytest.approx(1 / SQRT2)


def test_residuals_flag_a_perturbed_tap():
    h = haar_pair(1)
    bad = FilterCoeffs(n0=1, coeffs=dict(h.coeffs))
    bad.coeffs[(0, 0)] = 1 / SQRT2 + 1e-6
    r = residuals(bad, CANONICAL_FORMS[1])
    assert r.max_abs > 1e-7
    ok, _ = validate(bad, CANONICAL_FORMS[1])
    assert not ok


def test_filter_coeffs_guards():
    with pytest.raises(InvalidN0):
        FilterCoeffs(n0=0)
    with pytest.raises(ValueError):
        FilterCoeffs(n0=1, coeffs={(2, 0): 1.0})


def test_solver_returns_haar_start_unchanged():
    h = solve(CANONICAL_FORMS[1], 1, SolverOptions(seed=0, starts=1))
    ref = haar_pair(1)
    assert h.validated
    for n in {(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)}:
        assert h[n] == ref[n]  # exact: a converged start is not polished


def test_solver_haar_embeds_in_larger_support():
    h = solve(CANONICAL_FORMS[1], 2, SolverOptions(seed=0, starts=1))
    assert h.n0 == 2
    assert h[(0, 0)] == pytest.approx(1 / SQRT2, abs=1e-15)
    assert residuals(h, CANONICAL_FORMS[1]).max_abs <= 1e-12


@pytest.mark.parametrize("idx", [1, 5])
def test_solver_converges_from_random_starts(idx):
    opts = SolverOptions(seed=7, starts=12, haar_start=False)
    h = solve(CANONICAL_FORMS[idx], 1, opts)
    assert h.validated
    r = residuals(h, CANONICAL_FORMS[idx])
    assert r.max_abs <= 1e-12
    assert abs(h.tap_sum() - SQRT2) <= 1e-11


def test_solver_complex_mode():
    opts = SolverOptions(seed=3, starts=10, complex_coeffs=True,
                         haar_start=False)
    h = solve(CANONICAL_FORMS[1], 1, opts)
    assert residuals(h, CANONICAL_FORMS[1]).max_abs <= 1e-12


def test_solver_reports_no_convergence():
    opts = SolverOptions(seed=0, starts=1, max_iter=1, haar_start=False)
    with pytest.raises(NoConvergence):
        solve(CANONICAL_FORMS[1], 1, opts)


def test_solver_rejects_bad_n0():
    with pytest.raises(InvalidN0):
        solve(CANONICAL_FORMS[1], 0)


def test_json_dict_schema():
    doc = filter_to_json_dict(haar_pair(1), CANONICAL_FORMS[1])
    assert doc["matrix"] == [[1, 1], [1, -1]]
    assert doc["N0"] == 1
    assert {"n", "re", "im"} <= set(doc["coeffs"][0])
    taps = {tuple(c["n"]): complex(c["re"], c["im"]) for c in doc["coeffs"]}
    assert taps[(0, 0)] == pytest.approx(1 / SQRT2)


def test_json_round_trip_through_file(tmp_path):
    h0 = haar_pair(5)
    doc = filter_to_json_dict(h0, CANONICAL_FORMS[5])
    path = tmp_path / "filter.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    h1, mat = load_filter(path)
    assert np.array_equal(mat, CANONICAL_FORMS[5])
    assert h1.n0 == h0.n0
    assert h1.coeffs == h0.coeffs


@given(
    n0=st.integers(min_value=1, max_value=3),
    raw=st.lists(
        st.tuples(
            st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
            st.floats(-2, 2, allow_nan=False),
            st.floats(-2, 2, allow_nan=False),
        ),
        min_size=1, max_size=8,
    ),
)
@settings(max_examples=60, deadline=None)
def test_json_round_trip_is_exact(n0, raw):
    coeffs = {}
    for n, re, im in raw:
        if max(abs(n[0]), abs(n[1])) <= n0:
            coeffs[n] = complex(re, im)
    if not coeffs:
        return
    h0 = FilterCoeffs(n0=n0, coeffs=coeffs)
    h1, _ = filter_from_json_dict(
        json.loads(json.dumps(filter_to_json_dict(h0, CANONICAL_FORMS[2]))))
    assert h1.coeffs == h0.coeffs
