import dataclasses

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from lightlike.errors import NotLightlike, NotOnHypersurface, PolicyFailure
from lightlike.hypersurface import (AffineHypersurface, NullCone, ScreenPolicy, build_null_frame,
                                    check_dprime_invariance, project_to_surface)
from lightlike.linalg import Subspace, inner
from lightlike.presets import fixture_a, fixture_b, random_lightlike_hyperplane
from lightlike.structure import standard_model

R2 = np.sqrt(2.0)
ORIGIN = np.zeros(5)


def exact_fixture_b_frame():
    """Transversal section of fixture B from V = e1, in exact arithmetic."""
    s2 = sp.sqrt(2)
    G = sp.diag(-1, -1, 1, 1, 1)
    xi = sp.Matrix([s2, 0, 1, 0, 1])
    V = sp.Matrix([1, 0, 0, 0, 0])
    gv = lambda u, v: (u.T * G * v)[0]  # noqa: E731
    N = (V - gv(V, V) / (2 * gv(V, xi)) * xi) / gv(V, xi)
    return xi, sp.simplify(N)


def test_fixture_a_frame(S5):
    f = build_null_frame(S5, fixture_a(S5), ORIGIN)
    np.testing.assert_allclose(f.xi, [1, 0, 1, 0, 0])
    np.testing.assert_allclose(f.N, [-0.5, 0, 0.5, 0, 0], atol=1e-15)
    assert f.a == 0.0 and f.b == 0.0
    assert f.dprime_basis.shape[0] == 1
    assert Subspace(f.dprime_basis).contains([0, 0, 0, 0, 1.0])
    assert f.check(S5)
    assert check_dprime_invariance(S5, f).invariant


def test_fixture_a_translation_invariant(S5):
    H = fixture_a(S5)
    base = build_null_frame(S5, H, ORIGIN)
    for p in ([1, 0, 1, 0, 0], [0.5, 2, 0.5, -1, 3]):
        f = build_null_frame(S5, H, np.array(p, float))
        np.testing.assert_allclose(f.N, base.N)
        np.testing.assert_allclose(f.screen_basis, base.screen_basis)


def test_fixture_b_matches_exact_oracle(S5):
    xi_e, N_e = exact_fixture_b_frame()
    f = build_null_frame(S5, fixture_b(S5), ORIGIN)
    np.testing.assert_allclose(f.xi, np.array(xi_e, dtype=float).ravel(), atol=1e-15)
    np.testing.assert_allclose(f.N, np.array(N_e, dtype=float).ravel(), atol=1e-15)
    np.testing.assert_allclose(f.N, [-R2 / 4, 0, 0.25, 0, 0.25], atol=1e-15)
    assert f.a == pytest.approx(0.25, abs=1e-15) and f.b == 1.0
    assert not f.degenerate
    assert f.dprime_basis.shape[0] == 1
    inv = check_dprime_invariance(S5, f)
    assert not inv.invariant and inv.in_screen
    assert max(inv.c11_residuals.values()) < 1e-14


def test_fixture_b_zeta_auxiliary(S5):
    f = build_null_frame(S5, fixture_b(S5), ORIGIN, ScreenPolicy("auxiliary-vector", S5.zeta))
    np.testing.assert_allclose(f.N, [-R2 / 2, 0, -0.5, 0, 0.5], atol=1e-15)
    assert f.degenerate and f.dprime_basis.shape[0] == 2
    assert check_dprime_invariance(S5, f).invariant
    assert f.check(S5)


def test_guards(S5):
    H = fixture_b(S5)
    with pytest.raises(NotOnHypersurface):
        build_null_frame(S5, H, np.array([0, 0, 1.0, 0, 0]))
    with pytest.raises(NotOnHypersurface):
        build_null_frame(S5, H, np.zeros(4))
    with pytest.raises(NotOnHypersurface):
        build_null_frame(S5, H, np.array([np.nan, 0, 0, 0, 0]))
    spacelike = AffineHypersurface([0, 0, 1.0, 0, 0])
    with pytest.raises(NotLightlike):
        build_null_frame(S5, spacelike, ORIGIN)
    with pytest.raises(NotLightlike):
        build_null_frame(S5, NullCone.for_structure(S5), ORIGIN)
    # xi itself pairs to zero with xi: no transversal section
    with pytest.raises(PolicyFailure):
        build_null_frame(S5, H, ORIGIN, ScreenPolicy("auxiliary-vector", [R2, 0, 1, 0, 1]))


def test_policy_config_validation():
    from lightlike.errors import ConfigError
    with pytest.raises(ConfigError):
        ScreenPolicy("nearest")
    with pytest.raises(ConfigError):
        ScreenPolicy("auxiliary-vector")
    assert ScreenPolicy().to_config() == {"kind": "basis-scan"}


def test_scaling_rescales_transversal(S5):
    H = fixture_b(S5)
    f = build_null_frame(S5, H, ORIGIN)
    for alpha in (0.5, 2.0, -3.0):
        g = build_null_frame(S5, H.scaled(alpha), ORIGIN)
        np.testing.assert_allclose(g.xi, alpha * f.xi)
        np.testing.assert_allclose(g.N, f.N / alpha, atol=1e-15)
        assert g.a * g.b == pytest.approx(f.a * f.b)


def test_project_to_null_cone(S5, rng):
    cone = NullCone.for_structure(S5)
    for _ in range(20):
        q = project_to_surface(cone, rng.uniform(-1, 1, 5))
        assert abs(cone.residual(q)) < 1e-12
        assert build_null_frame(S5, cone, q).check(S5)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([(2, (-1, 1)), (3, (-1, 1, 1)), (3, (-1, -1, 1))]),
       st.booleans())
def test_random_frames_satisfy_invariants(seed, model, tangential):
    S = standard_model(*model)
    H, p = random_lightlike_hyperplane(S, np.random.default_rng(seed), tangential)
    f = build_null_frame(S, H, p)
    res = f.invariant_residuals(S)
    assert res.pop("screen_sigma_min") > 1e-9
    assert max(res.values()) <= 1e-9, res
    assert f.screen_basis.shape == (S.dim - 2, S.dim)
    assert abs(float(inner(S.metric, f.xi, f.N)) - 1) < 1e-12


def test_tangential_frame_uses_pair_fallback(S5):
    # xi = (1, 1, 1, 1, 0): no single basis vector is orthogonal to phi_bar xi
    # while pairing with xi, so the scan falls through to pair combinations.
    H = AffineHypersurface([-1.0, -1.0, 1.0, 1.0, 0.0])
    f = build_null_frame(S5, H, ORIGIN)
    assert f.pivots[0][0] == "pair"
    assert f.a == 0.0 and f.b == 0.0
    assert f.check(S5)


def test_frame_check_detects_corruption(S5):
    f = build_null_frame(S5, fixture_b(S5), ORIGIN)
    bad = dataclasses.replace(f, N=f.N + 1e-6)
    assert not bad.check(S5)
