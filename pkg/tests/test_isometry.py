"""Isometry triples: theta maps, the ODE system, gluing, and lifts."""

import json
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isonorm.isometry import (Decomposition, IsometryTriple, Sector, ThetaMap,
                              build_h_from_theta, bump_profile,
                              check_d_property, check_hessian_isometry,
                              classify_sectors, d_residual_signed,
                              glue_construct, identity_map, integrate_branch,
                              legendre_map_tag, ode_residuals,
                              planar_lift_map, quadratic_and_roots,
                              theta_from_json_dict, theta_to_json_dict,
                              theta_value, triple_from_json_dict,
                              triple_to_json_dict)
from isonorm.planar import (DualProfile, PlanarNorm, indicatrix_point,
                            legendre_map, theta_legendre)
from isonorm.profile import Profile, round_profile

ELLIPSE = Profile(2, (1.0, 0.2))
WOBBLE3 = Profile(3, (0.5, 0.02, 0.005))


def _legendre_triple(f: Profile) -> IsometryTriple:
    return IsometryTriple(f=f, h=DualProfile(f), theta=legendre_map_tag())


def _identity_triple(f: Profile) -> IsometryTriple:
    return IsometryTriple(f=f, h=f, theta=identity_map())


# -------------------------------------------------------------- theta maps

def test_theta_kind_validation():
    with pytest.raises(ValueError):
        ThetaMap(kind="affine")
    with pytest.raises(ValueError):
        ThetaMap(kind="linear", params=(1.0,))
    with pytest.raises(ValueError):
        ThetaMap(kind="linear", params=(1.0, -2.0))
    with pytest.raises(ValueError):
        ThetaMap(kind="sampled", grid=(0.0, 0.1, 0.05, 0.2),
                 values=(0.0, 0.1, 0.2, 0.3))


def test_theta_identity_and_linear():
    f = ELLIPSE
    assert theta_value(identity_map(), f, 0.37, 0) == pytest.approx(0.37)
    assert theta_value(identity_map(), f, 0.37, 1) == pytest.approx(1.0)
    tm = ThetaMap(kind="linear", params=(1.0, 2.0))
    t = math.pi / 4
    assert theta_value(tm, f, t, 0) == pytest.approx(math.atan(2.0),
                                                     abs=1e-12)
    h = 1e-6
    fd = (theta_value(tm, f, t + h, 0) - theta_value(tm, f, t - h, 0)) / (2 * h)
    assert theta_value(tm, f, t, 1) == pytest.approx(fd, rel=1e-7)


def test_theta_legendre_kind_uses_profile():
    nm = PlanarNorm(ELLIPSE)
    tm = legendre_map_tag()
    for t in (0.2, 0.9, 1.4):
        assert theta_value(tm, ELLIPSE, t, 0) == pytest.approx(
            theta_legendre(nm, t), abs=1e-12)


def test_theta_sampled_interpolates():
    grid = np.linspace(0.0, math.pi / 2, 33)
    tm = ThetaMap(kind="sampled", grid=tuple(grid), values=tuple(grid * 1.0))
    assert theta_value(tm, ELLIPSE, 0.7, 0) == pytest.approx(0.7, abs=1e-10)
    assert theta_value(tm, ELLIPSE, 0.7, 1) == pytest.approx(1.0, abs=1e-6)


def test_theta_json_round_trip():
    maps = [identity_map(),
            ThetaMap(kind="linear", params=(1.0, 1.5)),
            ThetaMap(kind="sampled",
                     grid=(0.0, 0.5, 1.0, 1.5),
                     values=(0.0, 0.45, 1.05, 1.5))]
    for tm in maps:
        back = theta_from_json_dict(json.loads(json.dumps(
            theta_to_json_dict(tm))))
        for t in (0.2, 0.8, 1.3):
            assert theta_value(back, ELLIPSE, t, 0) == pytest.approx(
                theta_value(tm, ELLIPSE, t, 0), abs=1e-12)


# ------------------------------------------------------------ ODE residuals

def test_identity_triple_residuals_vanish():
    tr = _identity_triple(WOBBLE3)
    for t in np.linspace(0.05, math.pi / 3 - 0.05, 33):
        assert np.max(np.abs(ode_residuals(tr, float(t)))) < 1e-12


def test_legendre_triple_residuals_vanish():
    tr = _legendre_triple(ELLIPSE)
    assert len(ode_residuals(tr, 0.3)) == 3  # second order + one per k
    for t in np.linspace(0.05, math.pi / 2 - 0.05, 33):
        assert np.max(np.abs(ode_residuals(tr, float(t)))) < 1e-9


def test_perturbed_h_breaks_residuals():
    tr = IsometryTriple(f=ELLIPSE, h=Profile(2, (1.0, 0.23)),
                        theta=identity_map())
    worst = max(np.max(np.abs(ode_residuals(tr, float(t))))
                for t in np.linspace(0.1, 1.4, 21))
    assert worst > 1e-2


def test_triple_d_mismatch_rejected():
    with pytest.raises(ValueError):
        IsometryTriple(f=ELLIPSE, h=WOBBLE3, theta=identity_map())


def test_triple_json_round_trip():
    tr = _legendre_triple(ELLIPSE)
    back = triple_from_json_dict(json.loads(json.dumps(
        triple_to_json_dict(tr))))
    for t in (0.2, 0.7, 1.2):
        assert np.allclose(ode_residuals(back, t), ode_residuals(tr, t),
                           atol=1e-12)


# ------------------------------------------------------- quadratic reduction

def test_quadratic_round_frozen():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        q = quadratic_and_roots(round_profile(1), math.pi / 4, math.pi / 4)
    assert (q.A, q.B, q.C) == pytest.approx((-2.0, 4.0, -2.0), abs=1e-12)
    assert sorted(q.roots) == pytest.approx([1.0, 1.0], abs=1e-8)


def test_quadratic_roots_sector_guarantee_warning():
    with pytest.warns(UserWarning):
        quadratic_and_roots(ELLIPSE, 0.5, 0.55)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        quadratic_and_roots(WOBBLE3, 0.5, 0.55)  # d=3: no warning


@given(st.floats(0.15, 0.85), st.floats(0.15, 0.85), st.floats(-0.04, 0.04))
@settings(max_examples=60, deadline=None)
def test_quadratic_roots_satisfy_quadratic(t_frac, th_frac, c1):
    f = Profile(3, (0.5, c1, 0.004))
    t = t_frac * math.pi / 3
    theta = th_frac * math.pi / 3
    q = quadratic_and_roots(f, t, theta)
    for r in q.roots:
        assert abs(q.A * r * r + q.B * r + q.C) < 1e-10


# ------------------------------------------------------------ branch solves

def test_branch_one_frozen_endpoint():
    sol = integrate_branch(round_profile(1), "one", math.pi / 4,
                           math.atan(2.0), math.pi / 3)
    # closed form theta = atan(2 tan t)
    assert sol.thetas[-1] == pytest.approx(1.289761425292083, abs=1e-9)


def test_branch_two_tracks_legendre():
    nm = PlanarNorm(ELLIPSE)
    t0 = 0.4
    sol = integrate_branch(ELLIPSE, "two", t0, theta_legendre(nm, t0), 1.1)
    err = max(abs(th - theta_legendre(nm, float(t)))
              for t, th in zip(sol.ts[:: len(sol.ts) // 16],
                               sol.thetas[:: len(sol.ts) // 16]))
    assert err < 1e-9


def test_branch_rejects_unknown():
    with pytest.raises(ValueError):
        integrate_branch(ELLIPSE, "three", 0.4, 0.4, 0.9)


# ----------------------------------------------------------------- build_h

def test_build_h_identity_reproduces_f():
    t0 = math.pi / 4
    h = build_h_from_theta(ELLIPSE, identity_map(), t0,
                           ELLIPSE.evaluate(t0, 0))
    ts = np.linspace(0.06, math.pi / 2 - 0.06, 41)
    err = np.max(np.abs(h.evaluate(ts, 0) - ELLIPSE.evaluate(ts, 0)))
    assert err < 1e-10


def test_build_h_legendre_reproduces_dual():
    t0 = math.pi / 4
    f0, f1 = ELLIPSE.evaluate(t0, 0), ELLIPSE.evaluate(t0, 1)
    h0 = f0 / (4 * f0 * f0 + f1 * f1)
    h = build_h_from_theta(ELLIPSE, legendre_map_tag(), t0, h0)
    dual = DualProfile(ELLIPSE)
    ths = np.linspace(0.06, math.pi / 2 - 0.06, 41)
    err = max(abs(h.evaluate(float(th), 0) - dual.evaluate(float(th), 0))
              for th in ths)
    assert err < 1e-10


@given(st.floats(0.3, 3.0))
@settings(max_examples=10, deadline=None)
def test_build_h_scale_equivariant(lam):
    t0 = 0.7
    base = build_h_from_theta(ELLIPSE, identity_map(), t0, 1.0)
    scaled = build_h_from_theta(ELLIPSE, identity_map(), t0, lam)
    for t in (0.2, 0.8, 1.3):
        assert scaled.evaluate(t, 0) == pytest.approx(
            lam * base.evaluate(t, 0), rel=1e-10)


def test_build_h_rejects_nonpositive_anchor():
    with pytest.raises(ValueError):
        build_h_from_theta(ELLIPSE, identity_map(), 0.7, 0.0)


# --------------------------------------------------------- isometry checks

def test_identity_map_is_isometry():
    nm = PlanarNorm(ELLIPSE)
    res = check_hessian_isometry(nm, nm, lambda x: x, samples=10)
    assert res.max_metric_residual < 1e-9


def test_legendre_map_is_isometry():
    nm = PlanarNorm(ELLIPSE)
    dual_nm = PlanarNorm(DualProfile(ELLIPSE))
    res = check_hessian_isometry(nm, dual_nm,
                                 lambda x: legendre_map(nm, x), samples=10)
    assert res.max_metric_residual < 1e-8


def test_rotation_is_not_isometry():
    nm = PlanarNorm(ELLIPSE)
    R = np.array([[0.0, -1.0], [1.0, 0.0]])
    res = check_hessian_isometry(nm, nm, lambda x: R @ x, samples=10)
    assert res.max_metric_residual > 1e-2


# -------------------------------------------------------------- d-property

def test_legendre_has_d_property():
    nm = PlanarNorm(ELLIPSE)
    dual_nm = PlanarNorm(DualProfile(ELLIPSE))
    phi = lambda x: legendre_map(nm, x)
    for k in range(ELLIPSE.d):
        dec = Decomposition(angle=-k * math.pi / ELLIPSE.d)
        res = check_d_property(nm, dual_nm, phi, dec, samples=12)
        assert res.max_residual < 1e-8


def test_rotation_fails_d_property():
    nm = PlanarNorm(ELLIPSE)
    R = np.array([[0.0, -1.0], [1.0, 0.0]])
    res = check_d_property(nm, nm, lambda x: R @ x,
                           Decomposition(angle=0.0), samples=12)
    assert res.max_residual > 1e-3


def test_signed_residual_equals_ode_residual():
    # on the unit sphere of the norm, the pointwise decomposition residual
    # at angle -k pi/d is exactly the k-th first-order equation residual
    f = Profile(2, (1.0, 0.15, 0.01))
    tr = _identity_triple(f)
    nm = PlanarNorm(f)
    phi = lambda x: x
    for k in range(f.d):
        dec = Decomposition(angle=-k * math.pi / f.d)
        for t in (0.3, 0.8, 1.2):
            x = indicatrix_point(nm, t)
            lhs = d_residual_signed(nm, nm, phi, dec, x)
            rhs = 2.0 * f.evaluate(t, 0) * ode_residuals(tr, t)[k + 1]
            assert lhs == pytest.approx(rhs, abs=1e-8)


# ------------------------------------------------------------------- glue

def _two_sector_result():
    base = bump_profile(3, humps=[(0.24, 0.4), (0.78, 0.36)])
    sectors = [Sector(0.0, 0.52, "scale"),
               Sector(0.52, math.pi / 3, "legendre-scale")]
    return glue_construct(base, sectors)


def test_glue_two_sectors_residuals():
    res = _two_sector_result()
    assert res.max_band_residual < 1e-6
    ts = np.linspace(1e-3, math.pi / 3 - 1e-3, 257)
    worst = max(np.max(np.abs(ode_residuals(res.triple, float(t))))
                for t in ts)
    assert worst < 1e-6


def test_glue_single_scale_sector_is_scaling_triple():
    base = bump_profile(2, humps=[(0.6, 0.5)])
    res = glue_construct(base, [Sector(0.0, math.pi / 2, "scale", 1.3)])
    assert res.triple.theta.kind == "identity"
    assert res.scale == pytest.approx(1.3)
    for t in (0.3, 0.9):
        assert res.triple.h.evaluate(t, 0) == pytest.approx(
            base.evaluate(t, 0) / 1.69, rel=1e-12)


def test_glue_single_legendre_sector_is_legendre_triple():
    base = bump_profile(2, humps=[(0.7, 0.5)])
    res = glue_construct(base,
                         [Sector(0.0, math.pi / 2, "legendre-scale", 1.0)])
    assert res.triple.theta.kind == "legendre"
    ts = np.linspace(0.05, math.pi / 2 - 0.05, 65)
    worst = max(np.max(np.abs(ode_residuals(res.triple, float(t))))
                for t in ts)
    assert worst < 1e-9


def test_glue_rejects_coverage_gap():
    base = bump_profile(2, humps=[(0.7, 0.4)])
    with pytest.raises(ValueError):
        glue_construct(base, [Sector(0.0, 0.5, "scale"),
                              Sector(0.9, math.pi / 2, "legendre-scale")])


def test_glue_rejects_scale_mismatch():
    base = bump_profile(2, humps=[(0.9, 0.4)])
    with pytest.raises(ValueError):
        glue_construct(base, [Sector(0.0, 0.5, "scale", 1.0),
                              Sector(0.5, math.pi / 2, "scale", 2.0)])


def test_glue_rejects_nonround_band():
    # hump sits right on the seam: the blend band is not round there
    base = bump_profile(2, humps=[(0.5, 0.4)])
    with pytest.raises(ValueError):
        glue_construct(base, [Sector(0.0, 0.5, "scale"),
                              Sector(0.5, math.pi / 2, "legendre-scale")])


def test_bump_profile_round_on_gaps():
    base = bump_profile(3, humps=[(0.24, 0.4)])
    for t in (0.55, 0.8, 1.0):
        assert base.evaluate(t, 0) == pytest.approx(0.5, abs=1e-7)
        assert abs(base.evaluate(t, 2)) < 1e-6


# ---------------------------------------------------------------- classify

def test_classify_legendre_triple():
    labels = classify_sectors(_legendre_triple(ELLIPSE))
    assert len(labels) == 1
    assert labels[0].label == "legendre"


def test_classify_identity_triple():
    labels = classify_sectors(_identity_triple(WOBBLE3))
    assert len(labels) == 1
    assert labels[0].label == "identity"


def test_classify_glued_triple():
    res = _two_sector_result()
    labels = classify_sectors(res.triple)
    kinds = [s.label for s in labels]
    assert kinds == ["identity", "legendre"]
    # the seam between the runs sits at the sector boundary
    assert labels[0].hi == pytest.approx(0.52, abs=0.01)


# -------------------------------------------------------------------- lift

def test_planar_lift_of_legendre_triple_is_gradient_map():
    tr = _legendre_triple(ELLIPSE)
    nm = PlanarNorm(ELLIPSE)
    phi = planar_lift_map(tr)
    rng = np.random.default_rng(3)
    for _ in range(20):
        ang = rng.uniform(0.0, 2.0 * math.pi)
        x = 1.3 * indicatrix_point(nm, ang)
        assert np.allclose(phi(x), legendre_map(nm, x), atol=1e-9)


def test_planar_lift_identity_triple():
    tr = _identity_triple(ELLIPSE)
    phi = planar_lift_map(tr)
    x = np.array([0.4, 0.7])
    assert np.allclose(phi(x), x, atol=1e-12)
