import json

import numpy as np
import pytest

from framelet2d import (
    CANONICAL_FORMS,
    DegenerateInput,
    SampledField,
    click_residual,
    coefficient,
    frame_ratio,
    gaussian_bump,
    haar_pair,
    indicator_box,
    l_j,
    level_coefficients,
    make_report,
    standard_suite,
    telescoping_residual,
    trig_windowed,
)
from framelet2d.verify import TestFunction, _level_uspace, from_field, plancherel_mismatch

C1 = CANONICAL_FORMS[1]


# ------------------------------------------------------------ test functions

def test_standard_suite_kinds_and_norms():
    suite = standard_suite()
    assert [f.kind for f in suite] == ["gaussian_bump", "indicator_box",
                                       "trig_windowed"]
    for f in suite:
        assert f.norm2() > 0
        assert f.field.step == 1 / 32


def test_box_norm_is_exactly_its_area():
    # the box edges sit halfway between nodes, so the Riemann sum counts
    # exactly side/step samples per axis: norm^2 == area with no error
    f = indicator_box()
    assert f.norm2() ** 2 == 1.5625


def test_trig_window_vanishes_at_grid_boundary():
    f = trig_windowed()
    v = f.field.values
    assert np.max(np.abs(v[0, :])) == 0
    assert np.max(np.abs(v[:, -1])) == 0


def test_fn_matches_field_samples():
    f = gaussian_bump()
    ax0 = f.field.axis(0)
    ax1 = f.field.axis(1)
    pts = np.stack(np.meshgrid(ax0[::40], ax1[::40], indexing="ij"), axis=-1)
    got = f.fn(pts.reshape(-1, 2))
    want = f.field.values[::40, ::40].reshape(-1)
    np.testing.assert_allclose(got, want, atol=1e-15)


# -------------------------------------------------------------- coefficients

def test_self_inner_product(sys256):
    f = from_field(sys256.psi_c)
    got = coefficient(f, sys256.psi_c, C1, 0, (0, 0))
    want = sys256.psi_c.norm2() ** 2
    assert got.real == pytest.approx(want, rel=1e-6)
    assert abs(got.imag) <= 1e-12 * want


def test_disjoint_supports_give_exact_zero(sys256):
    f = gaussian_bump()
    assert coefficient(f, sys256.psi_c, C1, 0, (200, 0)) == 0


def test_dilation_is_unitary_on_gaussians():
    f = gaussian_bump()
    g = gaussian_bump(center=(-0.2, 0.15), sigma=0.4)
    a = C1.astype(float)
    step = f.field.step
    ax = f.field.axis(0)
    t = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1)
    lhs = np.sum(np.sqrt(2) * f.fn(t @ a.T) *
                 np.conj(np.sqrt(2) * g.fn(t @ a.T))) * step ** 2
    rhs = np.sum(f.field.values * np.conj(g.field.values)) * step ** 2
    assert lhs == pytest.approx(rhs, abs=1e-3)


def test_bulk_coefficients_match_single_calls(sys256):
    f = gaussian_bump()
    for j in (-1, 0, 2):
        ells, coeffs = level_coefficients(f, sys256.psi_c, C1, j)
        assert len(ells) == len(coeffs)
        for k in range(0, len(ells), max(1, len(ells) // 5)):
            single = coefficient(f, sys256.psi_c, C1, j, tuple(ells[k]))
            assert abs(single - coeffs[k]) <= 1e-12


def test_two_quadrature_routes_agree(sys256):
    """Summing on f's grid vs substituting onto the atom's grid.

    At j=0 the grids are node-aligned and the routes agree to rounding;
    at j>0 the atom is subsampled and the gap is the (harmless) aliasing
    of the atom's spectrum at reciprocal-lattice nodes, ~1e-3 here.
    """
    f = gaussian_bump()
    for j, tol in ((0, 1e-12), (1, 5e-3), (2, 5e-3)):
        ells_t, ct = level_coefficients(f, sys256.psi_c, C1, j)
        ells_u, cu = _level_uspace(f, sys256.psi_c, C1, j)
        dt = {tuple(e): v for e, v in zip(ells_t, ct)}
        du = {tuple(e): v for e, v in zip(ells_u, cu)}
        common = set(dt) & set(du)
        assert common
        assert max(abs(dt[k] - du[k]) for k in common) <= tol
        assert sum(abs(dt[k]) ** 2 for k in set(dt) - common) <= 1e-20
        assert sum(abs(du[k]) ** 2 for k in set(du) - common) <= 1e-20


# --------------------------------------------------------------- frame ratio

def _zero_function():
    f = gaussian_bump()
    return TestFunction(
        kind="zero", params={},
        fn=lambda t: np.zeros(t.shape[:-1]),
        field=SampledField(origin=f.field.origin, step=f.field.step,
                           values=np.zeros_like(f.field.values), label="zero"))


def test_frame_ratio_rejects_zero_function(sys256):
    with pytest.raises(DegenerateInput):
        frame_ratio(_zero_function(), sys256.psi_c, C1, (-1, 1))


def test_frame_ratio_monotone_in_level_range(sys256):
    f = gaussian_bump()
    r1 = frame_ratio(f, sys256.psi_c, C1, (-1, 1))
    r2 = frame_ratio(f, sys256.psi_c, C1, (-2, 2))
    r3 = frame_ratio(f, sys256.psi_c, C1, (-3, 3))
    assert r1 <= r2 + 1e-9
    assert r2 <= r3 + 1e-9


def test_frame_ratio_scale_invariant(sys256):
    f = gaussian_bump()
    tripled = TestFunction(
        kind=f.kind, params=f.params,
        fn=lambda t: 3.0 * f.fn(t),
        field=SampledField(origin=f.field.origin, step=f.field.step,
                           values=3.0 * f.field.values, label="3f"))
    r1 = frame_ratio(f, sys256.psi_c, C1, (-2, 2))
    r3 = frame_ratio(tripled, sys256.psi_c, C1, (-2, 2))
    assert abs(r1 - r3) <= 1e-9


def test_frame_ratio_translation_exact_on_permuting_levels(sys256):
    # k = (1,-1) lies in A Z^2, so at every level j >= -1 the translated
    # coefficient family is a relabeling of the original and the partial
    # sums agree to window-clipping precision
    f = gaussian_bump()
    shifted = gaussian_bump(center=(0.11 + 1.0, -0.07 - 1.0))
    r = frame_ratio(f, sys256.psi_c, C1, (-1, 3))
    rs = frame_ratio(shifted, sys256.psi_c, C1, (-1, 3))
    assert abs(r - rs) <= 1e-4


def test_frame_ratio_translation_invariant(sys256):
    # below the permuting levels the shift redistributes coarse-scale mass,
    # so invariance is only as good as the truncation window; measured
    # 5.0e-3 for this shift at the default range
    f = gaussian_bump()
    shifted = gaussian_bump(center=(0.11 + 1.0, -0.07 + 1.0))
    r = frame_ratio(f, sys256.psi_c, C1, (-6, 6))
    rs = frame_ratio(shifted, sys256.psi_c, C1, (-6, 6))
    assert abs(r - rs) <= 1e-2


# ---------------------------------------------------------------- telescoping

def test_telescoping_zero_function_is_zero(sys256):
    assert telescoping_residual(_zero_function(), sys256, 0) == 0.0


def test_scalar_telescoping_identity(sys256):
    # L_{J+1} - L_J equals the level-J wavelet energy, up to quadrature
    f = gaussian_bump()
    j = 0
    l0 = l_j(f, sys256.phi, C1, j)
    l1 = l_j(f, sys256.phi, C1, j + 1)
    _, coeffs = level_coefficients(f, sys256.psi_c, C1, j)
    fj = float(np.sum(np.abs(coeffs) ** 2))
    assert abs(l1 - l0 - fj) <= 5e-2 * f.norm2() ** 2


# ----------------------------------------------------------------- plancherel

def test_plancherel_for_standard_suite():
    for f in standard_suite():
        assert plancherel_mismatch(f) <= 1e-6


def test_plancherel_rejects_zero():
    with pytest.raises(DegenerateInput):
        plancherel_mismatch(_zero_function())


# -------------------------------------------------------------- click residual

def test_click_constant_function():
    # areas: both routes integrate the constant exactly
    for idx in (1, 5):
        from framelet2d import special_vectors
        q = special_vectors(idx).q
        assert click_residual(CANONICAL_FORMS[idx], q, {(0, 0): 1.0}) <= 1e-9


def test_click_cos_x1():
    from framelet2d import special_vectors
    q = special_vectors(1).q
    assert click_residual(C1, q, {(1, 0): 0.5, (-1, 0): 0.5},
                          quad_n=512) <= 1e-6


def test_click_accepts_callable():
    from framelet2d import special_vectors
    q = special_vectors(1).q
    r_dict = click_residual(C1, q, {(1, 0): 0.5, (-1, 0): 0.5}, quad_n=128)
    r_call = click_residual(C1, q, lambda x: np.cos(x[..., 0]), quad_n=128)
    assert r_dict == pytest.approx(r_call, abs=1e-12)


def test_click_haar_m0_squared():
    from framelet2d import special_vectors
    q = special_vectors(1).q
    # |m0|^2 = cos^2(x1/2) = 1/2 + cos(x1)/2
    poly = {(0, 0): 0.5, (1, 0): 0.25, (-1, 0): 0.25}
    assert click_residual(C1, q, poly, quad_n=512) <= 1e-6


# -------------------------------------------------------------------- reports

EXPECTED_CHECKS = {
    "lawton_max_abs", "m0_at_zero_err", "qmf_residual", "max_abs_m0_excess",
    "ghat0_err", "phi_integral_err", "phi_imag_ratio", "phi_tail_mass",
    "refinement_residual", "psi_integral", "pull_back_l2_err",
    "scalar_telescoping_j0", "l_minus8_ratio", "l_6_ratio",
    "lemma_bound_ratio", "click_const", "click_cos_x1", "click_m0_sq",
}


def test_report_structure(sys256):
    rep = make_report(sys256, tfs=[gaussian_bump()], levels=(-2, 2))
    names = set(rep.checks)
    assert EXPECTED_CHECKS <= names
    assert "plancherel_gaussian_bump" in names
    assert "frame_ratio_gaussian_bump" in names
    assert {"telescoping_j-1", "telescoping_j0", "telescoping_j1"} <= names
    for entry in rep.checks.values():
        assert {"value", "threshold", "pass"} <= set(entry)
    assert rep.passed == all(e["pass"] for e in rep.checks.values())
    doc = rep.to_json_dict()
    json.dumps(doc)  # serializable
    assert doc["passed"] == rep.passed
    assert doc["metadata"]["levels"] == [-2, 2]
    assert doc["metadata"]["canonical_index"] == 1
