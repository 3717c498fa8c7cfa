"""Hessian isometries between norms induced by the same foliation.

A triple (f, theta, h) encodes the candidate isometry
Phi(r, t, xi) = (r sqrt(f(t)/h(theta(t))), theta(t), xi) in the adapted
spherical presentation.  The triple is an actual isometry of the Hessian
metrics iff the coupled ODE system vanishes: one second-order equation
tying the radial curvature data of f and h through theta', plus one
first-order equation per dihedral direction k = 0..d-1.

The second family admits a quadratic reduction in theta' whose two roots
are the "identity-like" and "Legendre-like" branches; gluing the two
branch maps across bands where the base profile is round produces the
piecewise constructions checked by classify_sectors.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import PchipInterpolator

from .foliation import FoliationModel, normal_geodesic, t_coord
from .planar import (DualProfile, PlanarNorm, _legendre_numden, _unwrap_to,
                     dual_profile, fundamental_tensor, legendre_ode_rhs,
                     theta_legendre, theta_legendre_deriv, theta_scaled,
                     theta_scaled_deriv)
from .profile import Profile, SectorProfile, profile_from_json_dict, sampled_profile

THETA_KINDS = ("identity", "linear", "legendre", "scaled-legendre",
               "sampled", "piecewise")
INTERIOR_GUARD = 1e-3
CLASSIFY_TOL = 1e-6
DEFAULT_BAND_WIDTH = 0.02
ROUND_BAND_TOL = 1e-6

IDENTITY_TYPE = "identity"
LEGENDRE_TYPE = "legendre"
TRANSITION = "transition"


@dataclass(frozen=True)
class ThetaMap:
    """Monotone equivariant angle map on the principal sector (0, pi/d).

    kinds: identity; linear(a,b) = atan2(b sin t, a cos t); legendre
    (angle of the gradient of E); scaled-legendre(a,b); sampled (monotone
    cubic through grid/values); piecewise (list of (lo, hi, sub-map)).
    """

    kind: str
    params: tuple[float, ...] = ()
    grid: tuple[float, ...] | None = None
    values: tuple[float, ...] | None = None
    pieces: tuple = ()

    def __post_init__(self):
        if self.kind not in THETA_KINDS:
            raise ValueError(f"unknown theta kind {self.kind!r}")
        if self.kind in ("linear", "scaled-legendre"):
            if len(self.params) != 2 or min(self.params) <= 0:
                raise ValueError(f"{self.kind} needs two positive parameters")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.kind == "sampled":
            g = np.asarray(self.grid, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if g.ndim != 1 or g.shape != v.shape or len(g) < 4:
                raise ValueError("sampled theta needs matching grid/values, >= 4 nodes")
            if np.any(np.diff(g) <= 0) or np.any(np.diff(v) <= 0):
                raise ValueError("sampled theta must be strictly increasing")
            object.__setattr__(self, "grid", tuple(float(x) for x in g))
            object.__setattr__(self, "values", tuple(float(x) for x in v))
        if self.kind == "piecewise":
            if not self.pieces:
                raise ValueError("piecewise theta needs at least one piece")
            lo_prev = None
            for lo, hi, sub in self.pieces:
                if not isinstance(sub, ThetaMap) or sub.kind == "piecewise":
                    raise ValueError("pieces must be non-piecewise ThetaMaps")
                if hi <= lo or (lo_prev is not None and abs(lo - lo_prev) > 1e-9):
                    raise ValueError("pieces must be contiguous and ordered")
                lo_prev = hi


def identity_map() -> ThetaMap:
    return ThetaMap(kind="identity")


def legendre_map_tag() -> ThetaMap:
    return ThetaMap(kind="legendre")


def theta_value(tm: ThetaMap, f: Profile, t, order: int = 0):
    """theta(t) (order 0) or theta'(t) (order 1); scalar or array t."""
    if order not in (0, 1):
        raise ValueError("theta maps support order 0 and 1 only")
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)

    if tm.kind == "identity":
        out = t_arr.copy() if order == 0 else np.ones_like(t_arr)
    elif tm.kind == "linear":
        a, b = tm.params
        if order == 0:
            raw = np.arctan2(b * np.sin(t_arr), a * np.cos(t_arr))
            out = _unwrap_to(t_arr, raw)
        else:
            out = a * b / (a * a * np.cos(t_arr) ** 2 + b * b * np.sin(t_arr) ** 2)
    elif tm.kind == "legendre":
        nm = PlanarNorm(f, validate=False)
        out = theta_legendre(nm, t_arr) if order == 0 else theta_legendre_deriv(nm, t_arr)
    elif tm.kind == "scaled-legendre":
        a, b = tm.params
        nm = PlanarNorm(f, validate=False)
        out = (theta_scaled(nm, t_arr, a, b) if order == 0
               else theta_scaled_deriv(nm, t_arr, a, b))
    elif tm.kind == "sampled":
        interp = PchipInterpolator(np.asarray(tm.grid), np.asarray(tm.values))
        out = interp(t_arr) if order == 0 else interp.derivative()(t_arr)
    else:  # piecewise
        out = np.empty_like(t_arr)
        filled = np.zeros(t_arr.shape, dtype=bool)
        for i, (lo, hi, sub) in enumerate(tm.pieces):
            last = i == len(tm.pieces) - 1
            mask = (t_arr >= lo) & ((t_arr <= hi) if last else (t_arr < hi)) & ~filled
            if i == 0:
                mask |= (t_arr < lo) & ~filled
            if last:
                mask |= (t_arr > hi) & ~filled
            if np.any(mask):
                out[mask] = theta_value(sub, f, t_arr[mask], order)
                filled |= mask
    return float(out[0]) if scalar else out


def theta_to_json_dict(tm: ThetaMap) -> dict:
    d: dict = {"kind": tm.kind}
    if tm.kind in ("linear", "scaled-legendre"):
        d["a"], d["b"] = tm.params
    elif tm.kind == "sampled":
        d["grid"] = list(tm.grid)
        d["values"] = list(tm.values)
    elif tm.kind == "piecewise":
        d["pieces"] = [{"lo": lo, "hi": hi, "map": theta_to_json_dict(sub)}
                       for lo, hi, sub in tm.pieces]
    return d


def theta_from_json_dict(d: dict) -> ThetaMap:
    kind = d["kind"]
    if kind in ("linear", "scaled-legendre"):
        return ThetaMap(kind=kind, params=(d["a"], d["b"]))
    if kind == "sampled":
        return ThetaMap(kind=kind, grid=tuple(d["grid"]), values=tuple(d["values"]))
    if kind == "piecewise":
        pieces = tuple((p["lo"], p["hi"], theta_from_json_dict(p["map"]))
                       for p in d["pieces"])
        return ThetaMap(kind=kind, pieces=pieces)
    return ThetaMap(kind=kind)


@dataclass(frozen=True)
class IsometryTriple:
    f: Profile
    h: Profile
    theta: ThetaMap

    def __post_init__(self):
        if self.f.d != self.h.d:
            raise ValueError("f and h must share the dihedral order d")


def triple_to_json_dict(tr: IsometryTriple) -> dict:
    return {"f": tr.f.to_json_dict(),
            "h": tr.h.to_json_dict(),
            "theta": theta_to_json_dict(tr.theta)}


def triple_from_json_dict(d: dict) -> IsometryTriple:
    return IsometryTriple(f=profile_from_json_dict(d["f"]),
                          h=profile_from_json_dict(d["h"]),
                          theta=theta_from_json_dict(d["theta"]))


def load_triple(path) -> IsometryTriple:
    with open(path) as fh:
        return triple_from_json_dict(json.load(fh))


def save_triple(tr: IsometryTriple, path) -> None:
    with open(path, "w") as fh:
        json.dump(triple_to_json_dict(tr), fh, indent=2, sort_keys=True)


# --- the ODE system ---------------------------------------------------------


def ode_residuals(tr: IsometryTriple, t: float) -> np.ndarray:
    """Left-minus-right of the isometry ODE system at t; length d+1.

    Entry 0 is the second-order equation linking the curvature data of f
    and h through theta'; entries 1..d are the dihedral first-order
    equations (one per k).  All vanish iff the triple is a Hessian isometry.
    """
    d = tr.f.d
    th = theta_value(tr.theta, tr.f, t, 0)
    thp = theta_value(tr.theta, tr.f, t, 1)
    f0, f1, f2 = (tr.f.evaluate(t, k) for k in range(3))
    h0, h1, h2 = (tr.h.evaluate(th, k) for k in range(3))

    res = np.empty(d + 1)
    lhs2 = f2 / (2 * f0) - f1 * f1 / (4 * f0 * f0) + 1.0
    rhs2 = h2 / (2 * h0) - h1 * h1 / (4 * h0 * h0) + 1.0
    res[0] = lhs2 - thp * thp * rhs2
    for k in range(d):
        tau = k * math.pi / d
        sf, cf = math.sin(t + tau), math.cos(t + tau)
        sh, ch = math.sin(th + tau), math.cos(th + tau)
        res[k + 1] = (sf * sf + sf * cf * f1 / (2 * f0)) \
            - (sh * sh + sh * ch * h1 / (2 * h0))
    return res


class QuadraticReduction(NamedTuple):
    A: float
    B: float
    C: float
    roots: tuple[float, float]


def quadratic_and_roots(f: Profile, t: float, theta: float) -> QuadraticReduction:
    """Coefficients of the quadratic in theta' obtained by eliminating h,
    plus its two closed-form roots (identity-like and Legendre-like).

    Raises when the leading coefficient degenerates; outside d > 2 the
    nonvanishing of A is not guaranteed, which is reported as a warning.
    """
    f0 = f.evaluate(t, 0)
    f1 = f.evaluate(t, 1)
    f2 = f.evaluate(t, 2)
    ct, st = math.cos(t), math.sin(t)
    cth, sth = math.cos(theta), math.sin(theta)
    cs = ct * st

    A = cs * (ct * f1 + 2 * st * f0) * (st * f1 - 2 * ct * f0) \
        / (2 * f0 * f0 * cth * cth * sth * sth)
    B = (cs * f2 / f0 - cs * f1 * f1 / (f0 * f0)
         + (ct * ct - st * st) * f1 / f0 + 4 * cs) / (cth * sth)
    C = -f2 / f0 + f1 * f1 / (2 * f0 * f0) - 2.0

    if f.d <= 2:
        warnings.warn("nonvanishing of the leading coefficient is only "
                      "guaranteed for d > 2", stacklevel=2)
    if abs(A) < 1e-12:
        raise ValueError(f"degenerate quadratic: |A| = {abs(A):.3e} < 1e-12")

    gap = 2 * f0 * f2 - f1 * f1 + 4 * f0 * f0
    N = 2 * f0 * st + f1 * ct
    D = 2 * f0 * ct - f1 * st
    r1 = cth * sth / cs
    r2 = gap * cth * sth / (N * D)
    return QuadraticReduction(A=A, B=B, C=C, roots=(r1, r2))


class BranchSolution(NamedTuple):
    ts: np.ndarray
    thetas: np.ndarray


def integrate_branch(f: Profile, branch: str, t0: float, theta0: float,
                     t1: float, steps: int = 4096) -> BranchSolution:
    """Fixed-step RK4 for theta(t) along branch "one"
    (theta' = cos sin theta / cos sin t) or "two" (the Legendre-root ODE)."""
    branch = branch.lower()
    if branch not in ("one", "two"):
        raise ValueError("branch must be 'one' or 'two'")
    d = f.d
    hi = math.pi / d

    if branch == "one":
        rhs = lambda t, th: math.cos(th) * math.sin(th) / (math.cos(t) * math.sin(t))
    else:
        rhs = lambda t, th: legendre_ode_rhs(f, t, th)

    ts = np.linspace(t0, t1, steps + 1)
    dt = (t1 - t0) / steps
    thetas = np.empty(steps + 1)
    th = float(theta0)
    thetas[0] = th
    for i in range(steps):
        t = ts[i]
        k1 = rhs(t, th)
        k2 = rhs(t + dt / 2, th + dt * k1 / 2)
        k3 = rhs(t + dt / 2, th + dt * k2 / 2)
        k4 = rhs(t + dt, th + dt * k3)
        th = th + dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6
        if not (0.0 < th < hi):
            raise ValueError(f"theta left the sector (0, pi/{d}) at t={ts[i+1]:.4f}")
        thetas[i + 1] = th
    return BranchSolution(ts=ts, thetas=thetas)


def build_h_from_theta(f: Profile, theta: ThetaMap, theta0: float, h0: float,
                       grid_size: int = 2048) -> Profile:
    """Integrate the k=0 dihedral equation for log h along theta(t).

    Anchored by h(theta(theta0)) = h0; the result is sampled at the theta
    images and fitted back to a symmetric profile.
    """
    if h0 <= 0:
        raise ValueError("h0 must be positive")
    d = f.d
    lo, hi = INTERIOR_GUARD, math.pi / d - INTERIOR_GUARD
    if not (lo < theta0 < hi):
        raise ValueError("theta0 must be interior to the sector")

    def integrand(ts):
        th = theta_value(theta, f, ts, 0)
        thp = theta_value(theta, f, ts, 1)
        f0 = f.evaluate(ts, 0)
        f1 = f.evaluate(ts, 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            rhs = ((2 * np.sin(ts) ** 2 + np.sin(ts) * np.cos(ts) * f1 / f0)
                   / (np.sin(th) * np.cos(th)) - 2 * np.tan(th))
            vals = rhs * thp
        # theta = pi/2 (reachable only inside d=1 sectors) is a removable
        # 0/0 of the quotient; rebuild isolated hits from a local quadratic
        # through healthy neighbours (the hit may sit at an array edge, so
        # plain interpolation would clamp).
        sick = np.flatnonzero(np.abs(np.cos(th)) < 1e-6)
        if sick.size and sick.size < ts.size - 4:
            healthy = np.flatnonzero(np.abs(np.cos(th)) >= 1e-6)
            for i in sick:
                near = healthy[np.argsort(np.abs(ts[healthy] - ts[i]))[:5]]
                vals[i] = np.polyfit(ts[near] - ts[i], vals[near], 2)[-1]
        return vals

    half = grid_size // 2
    t_fwd = np.linspace(theta0, hi, half + 1)
    t_bwd = np.linspace(lo, theta0, half + 1)
    log_fwd = cumulative_simpson(integrand(t_fwd), x=t_fwd, initial=0.0)
    log_bwd = cumulative_simpson(integrand(t_bwd), x=t_bwd, initial=0.0)
    log_bwd -= log_bwd[-1]          # re-anchor at theta0
    logs = np.concatenate([log_bwd, log_fwd[1:]]) + math.log(h0)
    ts_all = np.concatenate([t_bwd, t_fwd[1:]])
    if not np.all(np.isfinite(logs)) or np.max(np.abs(logs)) > 50:
        raise ValueError("log h blew up along the integration: invalid theta map")
    th_all = theta_value(theta, f, ts_all, 0)
    return sampled_profile(d, th_all, np.exp(logs))


# --- pointwise metric checks -------------------------------------------------


def _tensor_at(norm, x) -> np.ndarray:
    if isinstance(norm, PlanarNorm):
        return fundamental_tensor(norm, np.asarray(x, dtype=float))
    from .hessian import fd_fundamental_tensor
    return fd_fundamental_tensor(norm, x).matrix


def _sample_points(norm, samples: int, seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    pts = []
    if isinstance(norm, PlanarNorm):
        d = norm.profile.d
        guard = 0.05
        for _ in range(samples):
            t = rng.uniform(guard, math.pi / d - guard)
            r = rng.uniform(0.6, 1.4)
            pts.append(r * np.array([math.cos(t), math.sin(t)]))
    else:
        from .foliation import random_leaf_points
        m = norm.foliation
        guard = 0.1
        for i in range(samples):
            t = rng.uniform(guard, math.pi / m.d - guard)
            u = random_leaf_points(m, t, 1, seed=int(rng.integers(2 ** 31)))[0]
            pts.append(rng.uniform(0.6, 1.4) * u)
    return pts


def _map_jacobian(phi: Callable, x: np.ndarray, step: float) -> np.ndarray:
    n = len(x)
    J = np.empty((n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = step
        J[:, i] = (np.asarray(phi(x + e)) - np.asarray(phi(x - e))) / (2 * step)
    return J


class IsometryCheck(NamedTuple):
    max_metric_residual: float


def check_hessian_isometry(norm1, norm2, phi: Callable,
                           samples: int = 20, seed: int = 0,
                           fd_step: float = 1e-5) -> IsometryCheck:
    """Max over samples and basis pairs of |g1(u,v) - g2(dPhi u, dPhi v)|."""
    worst = 0.0
    for x in _sample_points(norm1, samples, seed):
        g1 = _tensor_at(norm1, x)
        y = np.asarray(phi(x), dtype=float)
        g2 = _tensor_at(norm2, y)
        J = _map_jacobian(phi, x, fd_step * float(np.linalg.norm(x)))
        worst = max(worst, float(np.max(np.abs(g1 - J.T @ g2 @ J))))
    return IsometryCheck(max_metric_residual=worst)


@dataclass(frozen=True)
class Decomposition:
    """Orthogonal splitting: planar via the angle of V', or an explicit
    orthonormal basis matrix for the V' factor in higher dimensions."""

    angle: float | None = None
    vprime: tuple | None = None

    def project_out(self, x: np.ndarray) -> np.ndarray:
        """Component of x orthogonal to V' (that is, x'')."""
        if self.angle is not None:
            u = np.array([math.cos(self.angle), math.sin(self.angle)])
            return x - np.dot(x, u) * u
        Q = np.asarray(self.vprime, dtype=float)
        if Q.ndim == 1:
            Q = Q[:, None]
        return x - Q @ (Q.T @ x)


def d_residual_signed(norm1, norm2, phi: Callable, dec: Decomposition,
                      x) -> float:
    """g1_x(x'', x) - g2_{Phi x}((Phi x)'', Phi x) for the decomposition."""
    x = np.asarray(x, dtype=float)
    g1 = _tensor_at(norm1, x)
    y = np.asarray(phi(x), dtype=float)
    g2 = _tensor_at(norm2, y)
    lhs = float(dec.project_out(x) @ g1 @ x)
    rhs = float(dec.project_out(y) @ g2 @ y)
    return lhs - rhs


class DPropertyCheck(NamedTuple):
    max_residual: float


def check_d_property(norm1, norm2, phi: Callable, dec: Decomposition,
                     samples: int = 20, seed: int = 0) -> DPropertyCheck:
    worst = 0.0
    for x in _sample_points(norm1, samples, seed):
        worst = max(worst, abs(d_residual_signed(norm1, norm2, phi, dec, x)))
    return DPropertyCheck(max_residual=worst)


# --- gluing and classification ----------------------------------------------


@dataclass(frozen=True)
class Sector:
    lo: float
    hi: float
    mode: str           # "scale" | "legendre-scale"
    scale: float = 1.0

    def __post_init__(self):
        if self.mode not in ("scale", "legendre-scale"):
            raise ValueError(f"unknown sector mode {self.mode!r}")
        if self.scale <= 0:
            raise ValueError("sector scale must be positive")
        if self.hi <= self.lo:
            raise ValueError("empty sector interval")


@dataclass(frozen=True)
class GlueResult:
    triple: IsometryTriple
    norm1: PlanarNorm
    norm2: PlanarNorm
    max_band_residual: float
    scale: float


def glue_construct(f_base: Profile, sectors, band_width: float = DEFAULT_BAND_WIDTH) -> GlueResult:
    """Assemble the piecewise isometry that applies each sector's map.

    Sector modes: "scale" (x -> lam x) and "legendre-scale" (x -> lam grad E).
    The two agree wherever the profile is round with value 1/2, so the base
    profile must be round on a band of the given width around every interior
    sector boundary; the assembled theta and h switch pieces at the band
    centers and stay smooth because both pieces coincide on the whole band.
    """
    sectors = tuple(s if isinstance(s, Sector) else Sector(**s) for s in sectors)
    if not sectors:
        raise ValueError("need at least one sector")
    d = f_base.d
    hi_end = math.pi / d
    if abs(sectors[0].lo) > 1e-9 or abs(sectors[-1].hi - hi_end) > 1e-9:
        raise ValueError("sectors must cover [0, pi/d] to respect the symmetry")
    for a, b in zip(sectors, sectors[1:]):
        if abs(a.hi - b.lo) > 1e-9:
            raise ValueError("sector intervals must be contiguous")
    scales = {s.scale for s in sectors}
    if max(scales) - min(scales) > 1e-12:
        raise ValueError("all sector scales must agree for the pieces to glue")
    lam = sectors[0].scale

    breaks = tuple(s.hi for s in sectors[:-1])
    for b in breaks:
        band = np.linspace(b - band_width / 2, b + band_width / 2, 65)
        if np.max(np.abs(f_base.evaluate(band, 0) - 0.5)) > ROUND_BAND_TOL:
            raise ValueError(
                f"profile is not round (f = 1/2) on the band around t={b:.4f}")

    # exact dual evaluator: a fitted dual's spectral tail would be amplified
    # by freq^2 in the h'' of the residual system and swamp the band check
    needs_dual = any(s.mode == "legendre-scale" for s in sectors)
    dual = DualProfile(f_base) if needs_dual else None
    piece_profiles = []
    piece_maps = []
    for s in sectors:
        if s.mode == "scale":
            piece_profiles.append(f_base.scaled(1.0 / lam ** 2))
            piece_maps.append((s.lo, s.hi, identity_map()))
        else:
            piece_profiles.append(dual.scaled(1.0 / lam ** 2))
            piece_maps.append((s.lo, s.hi, legendre_map_tag()))

    if len(sectors) == 1:
        h_prof = piece_profiles[0]
        theta = piece_maps[0][2]
    else:
        h_prof = SectorProfile(d=d, breaks=breaks, pieces=tuple(piece_profiles))
        theta = ThetaMap(kind="piecewise", pieces=tuple(piece_maps))

    ts = np.linspace(INTERIOR_GUARD, hi_end - INTERIOR_GUARD, 1024)
    th = theta_value(theta, f_base, ts, 0)
    if np.any(np.diff(th) <= 0):
        raise ValueError("assembled theta map is not strictly increasing")

    triple = IsometryTriple(f=f_base, h=h_prof, theta=theta)
    band_res = 0.0
    for b in breaks:
        for t in np.linspace(b - band_width / 2, b + band_width / 2, 33):
            band_res = max(band_res, float(np.max(np.abs(ode_residuals(triple, t)))))
    return GlueResult(triple=triple, norm1=PlanarNorm(f_base),
                      norm2=PlanarNorm(h_prof), max_band_residual=band_res,
                      scale=lam)


def bump_profile(d: int, humps, amplitude: float = 5e-4,
                 grid_size: int = 8192, max_terms: int = 96) -> Profile:
    """Round profile 1/2 plus compactly supported C^7 humps, one per
    (center, width) pair, fitted to the symmetric cosine basis.

    Useful as a glue base: the humps vanish identically outside their
    supports, so the profile is round on any band that avoids them.  The
    generous term count keeps the second derivative of the fit quiet on the
    round stretches, which is what the in-band residuals of a glued triple
    are limited by.

    Returned as a plain cosine-series profile (the fit *is* the profile
    here) so that JSON round trips reproduce it coefficient-for-coefficient.
    """
    ts = np.linspace(0.0, math.pi / d, grid_size + 1)
    vals = np.full_like(ts, 0.5)
    for center, width in humps:
        s = (ts - center) / (width / 2.0)
        mask = np.abs(s) < 1.0
        vals[mask] += amplitude * np.cos(0.5 * math.pi * s[mask]) ** 8
    fitted = sampled_profile(d, ts, vals, max_terms=max_terms)
    return Profile(d, fitted.cos_coeffs, kind="cosine",
                   fit_residual=fitted.fit_residual)


class SectorLabel(NamedTuple):
    lo: float
    hi: float
    label: str


def classify_sectors(tr: IsometryTriple, grid: int = 512,
                     tol: float = CLASSIFY_TOL) -> list[SectorLabel]:
    """Label maximal runs of t where theta matches the identity, the
    Legendre closed form, or neither (Transition)."""
    d = tr.f.d
    ts = np.linspace(INTERIOR_GUARD, math.pi / d - INTERIOR_GUARD, grid)
    th = np.atleast_1d(theta_value(tr.theta, tr.f, ts, 0))
    nm = PlanarNorm(tr.f, validate=False)
    th_leg = theta_legendre(nm, ts)
    is_id = np.abs(th - ts) < tol
    is_leg = np.abs(th - th_leg) < tol

    # pointwise labels; points matching both are resolved to a neighboring
    # definite label so that round stretches don't split the runs
    raw = np.where(is_id & ~is_leg, 0, np.where(is_leg & ~is_id, 1,
                   np.where(is_id & is_leg, 2, 3)))
    labels = raw.copy()
    definite = np.where(raw < 2)[0]
    if len(definite) == 0:
        labels[:] = np.where(raw == 2, 0, 3)
    else:
        for i in np.where(raw == 2)[0]:
            j = definite[np.argmin(np.abs(definite - i))]
            labels[i] = raw[j]

    names = {0: IDENTITY_TYPE, 1: LEGENDRE_TYPE, 3: TRANSITION}
    out: list[SectorLabel] = []
    start = 0
    for i in range(1, grid + 1):
        if i == grid or labels[i] != labels[start]:
            out.append(SectorLabel(lo=float(ts[start]), hi=float(ts[i - 1]),
                                   label=names[int(labels[start])]))
            start = i
    return out


# --- lifting to n dimensions --------------------------------------------------


def lift_to_nd(tr: IsometryTriple, m: FoliationModel,
               delta: float = 0.02) -> Callable:
    """Pointwise map Phi(x) = r sqrt(f(t)/h(theta)) * gamma_x(theta) where
    gamma_x is the normal geodesic of the foliation through x/|x|."""
    if tr.f.d != m.d:
        raise ValueError("triple and foliation disagree on d")

    def phi(x):
        x = np.asarray(x, dtype=float)
        r, t = t_coord(m, x)
        th = theta_value(tr.theta, tr.f, t, 0)
        f0 = tr.f.evaluate(t, 0)
        h0 = tr.h.evaluate(th, 0)
        gamma = normal_geodesic(m, x, delta=delta)
        return r * math.sqrt(f0 / h0) * gamma(th)

    return phi


def _fold_theta(tm: ThetaMap, f: Profile, t: float) -> float:
    """Equivariant extension of theta from the principal sector to all of R.

    theta commutes with the dihedral action, so even-numbered sectors are
    translates of the principal one and odd-numbered sectors are its
    reflections: theta(2 pi/d - t) = 2 pi/d - theta(t).
    """
    d = f.d
    period = math.pi / d
    j = math.floor(t / period)
    tau = t - j * period
    if tau < 1e-12:
        return j * period
    if period - tau < 1e-12:
        return (j + 1) * period
    if j % 2 == 0:
        return j * period + theta_value(tm, f, tau, 0)
    return (j + 1) * period - theta_value(tm, f, period - tau, 0)


def planar_lift_map(tr: IsometryTriple) -> Callable:
    """The planar realization x -> r sqrt(f/h(theta)) (cos theta, sin theta),
    extended equivariantly to the full circle."""

    def phi(x):
        x = np.asarray(x, dtype=float)
        r = float(np.linalg.norm(x))
        t = math.atan2(x[1], x[0])
        th = _fold_theta(tr.theta, tr.f, t)
        f0 = tr.f.evaluate(t, 0)
        h0 = tr.h.evaluate(th, 0)
        return r * math.sqrt(f0 / h0) * np.array([math.cos(th), math.sin(th)])

    return phi
