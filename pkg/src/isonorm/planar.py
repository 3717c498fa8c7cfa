"""Planar Minkowski norms F = r*sqrt(2 f(t)) and their Legendre geometry.

Everything here is closed-form in (f, f', f''): the fundamental tensor in a
rotating frame, the gradient (Legendre) map, the angle it induces on the
indicatrix, and the dual profile obtained by transporting the indicatrix
through the gradient map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profile import (Profile, convexity_gap, dihedral_fold, is_minkowski,
                      profile_from_json_dict, register_profile_kind,
                      sampled_profile)


@dataclass(frozen=True)
class PlanarNorm:
    profile: Profile

    def __init__(self, profile: Profile, validate: bool = True):
        if validate:
            report = is_minkowski(profile)
            if report.status == "invalid":
                raise ValueError(
                    f"profile is not a Minkowski norm profile "
                    f"(min_f={report.min_f:.3g}, min_gap={report.min_gap:.3g})")
        object.__setattr__(self, "profile", profile)

    @property
    def d(self) -> int:
        return self.profile.d


def value(nm: PlanarNorm, x) -> float:
    """F(x) = r*sqrt(2 f(t)); 0 at the origin."""
    x = np.asarray(x, dtype=float)
    r = math.hypot(x[0], x[1])
    if r == 0.0:
        return 0.0
    t = math.atan2(x[1], x[0])
    return r * math.sqrt(2.0 * nm.profile.evaluate(t, 0))


def fundamental_tensor(nm: PlanarNorm, x) -> np.ndarray:
    """Hessian of E = F^2/2 at x != 0, in Cartesian coordinates.

    In the orthonormal frame (e_r, e_t) the matrix is
    [[2f, f'], [f', f'' + 2f]]; rotate back by the polar angle.
    """
    x = np.asarray(x, dtype=float)
    r = math.hypot(x[0], x[1])
    if r == 0.0:
        raise ValueError("fundamental tensor undefined at the origin")
    t = math.atan2(x[1], x[0])
    f0 = nm.profile.evaluate(t, 0)
    f1 = nm.profile.evaluate(t, 1)
    f2 = nm.profile.evaluate(t, 2)
    frame = np.array([[2.0 * f0, f1], [f1, f2 + 2.0 * f0]])
    c, s = math.cos(t), math.sin(t)
    rot = np.array([[c, -s], [s, c]])
    return rot @ frame @ rot.T


def legendre_map(nm: PlanarNorm, x) -> np.ndarray:
    """Gradient of E at x: 2f * x + f' * r * e_t."""
    x = np.asarray(x, dtype=float)
    r = math.hypot(x[0], x[1])
    if r == 0.0:
        raise ValueError("gradient map undefined at the origin")
    t = math.atan2(x[1], x[0])
    f0 = nm.profile.evaluate(t, 0)
    f1 = nm.profile.evaluate(t, 1)
    e_t = np.array([-math.sin(t), math.cos(t)])
    return 2.0 * f0 * x + f1 * r * e_t


def _legendre_numden(p: Profile, t):
    """Numerator/denominator of tan(theta) for the gradient direction."""
    f0 = p.evaluate(t, 0)
    f1 = p.evaluate(t, 1)
    num = 2.0 * f0 * np.sin(t) + f1 * np.cos(t)
    den = 2.0 * f0 * np.cos(t) - f1 * np.sin(t)
    return num, den


def _unwrap_to(t, raw):
    """Shift raw angles by multiples of 2*pi to land within pi of t.

    The gradient of a strongly convex E never turns more than pi/2 away
    from x (their inner product is 2E > 0), so this fixes the branch,
    keeps continuity, and preserves the dihedral equivariance.
    """
    return raw + 2.0 * math.pi * np.round((t - raw) / (2.0 * math.pi))


def theta_legendre(nm: PlanarNorm, t):
    """Polar angle of legendre_map at polar angle t (branch-corrected)."""
    num, den = _legendre_numden(nm.profile, t)
    return _unwrap_to(np.asarray(t, dtype=float), np.arctan2(num, den))


def theta_legendre_deriv(nm: PlanarNorm, t):
    """d theta_legendre / dt = gap / (num^2 + den^2)."""
    from .profile import convexity_gap

    num, den = _legendre_numden(nm.profile, t)
    return convexity_gap(nm.profile, t) / (num * num + den * den)


def theta_scaled(nm: PlanarNorm, t, a: float, b: float):
    """Angle of x -> (a * dE/dx1, b * dE/dx2); a = b gives theta_legendre."""
    if a <= 0 or b <= 0:
        raise ValueError("axis weights must be positive")
    num, den = _legendre_numden(nm.profile, t)
    return _unwrap_to(np.asarray(t, dtype=float), np.arctan2(b * num, a * den))


def theta_scaled_deriv(nm: PlanarNorm, t, a: float, b: float):
    from .profile import convexity_gap

    num, den = _legendre_numden(nm.profile, t)
    gap = convexity_gap(nm.profile, t)
    return a * b * gap / (a * a * den * den + b * b * num * num)


def legendre_ode_rhs(p: Profile, t, theta):
    """Right side of the first-order ODE solved by theta_legendre:

        theta' = gap(t) * cos(theta) sin(theta) / (num(t) * den(t)).

    Also the second root of the reduction quadratic (the "Legendre branch").
    """
    from .profile import convexity_gap

    num, den = _legendre_numden(p, t)
    gap = convexity_gap(p, t)
    return gap * np.cos(theta) * np.sin(theta) / (num * den)


def indicatrix_point(nm: PlanarNorm, t):
    """The point of S_F at polar angle t: (2f)^(-1/2) (cos t, sin t)."""
    f0 = nm.profile.evaluate(t, 0)
    rho = 1.0 / np.sqrt(2.0 * f0)
    return np.stack([rho * np.cos(t), rho * np.sin(t)], axis=-1)


def dual_profile(nm: PlanarNorm, grid_size: int = 512,
                 max_terms: int | None = None) -> Profile:
    """Profile of the dual norm, via the gradient image of the indicatrix.

    Samples x on S_F, maps through legendre_map, reads polar (rho, theta) of
    the images and sets h(theta) = 1/(2 rho^2); the (theta, h) pairs are fit
    to a cosine series of the same dihedral order.
    """
    if grid_size < 128:
        raise ValueError("grid_size must be >= 128")
    d = nm.profile.d
    ts = np.linspace(0.0, math.pi / d, grid_size)
    pts = indicatrix_point(nm, ts)
    images = np.array([legendre_map(nm, p) for p in pts])
    rho = np.hypot(images[:, 0], images[:, 1])
    thetas = _unwrap_to(ts, np.arctan2(images[:, 1], images[:, 0]))
    if np.any(np.diff(thetas) <= 0.0):
        raise ValueError("gradient image angles are not strictly monotone "
                         "(input norm is not strongly convex)")
    h = 1.0 / (2.0 * rho * rho)
    if max_terms is None:
        return sampled_profile(d, thetas, h)
    return sampled_profile(d, thetas, h, max_terms=max_terms)


def sample_indicatrix(nm: PlanarNorm, n: int):
    """Rows (t, x1, x2, F(x), theta_legendre) over one full period."""
    ts = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    pts = indicatrix_point(nm, ts)
    rows = []
    for t, p in zip(ts, pts):
        rows.append((float(t), float(p[0]), float(p[1]),
                     value(nm, p), float(theta_legendre(nm, t))))
    return rows


@dataclass(frozen=True)
class DualProfile:
    """Exact dual profile h with h(theta_legendre(t)) = f/(4f^2 + f'^2).

    Evaluation inverts the Legendre angle map by Newton iteration and
    applies the chain rule analytically, so no spectral truncation enters:
    the fitted `dual_profile` is the portable representation, this one is
    the machine-precision evaluator used where second derivatives of h
    feed residual checks.  Derivatives are supported up to order 2 (order 3
    would need the fourth derivative of the base profile).
    """

    base: Profile
    scale: float = 1.0

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def kind(self) -> str:
        return "dual"

    @property
    def fit_residual(self) -> float:
        return 0.0

    def _invert_theta(self, theta: float) -> float:
        """Solve theta_legendre(t) = theta on [0, pi/d]."""
        t = theta
        for _ in range(60):
            N, D = _legendre_numden(self.base, t)
            cur = _unwrap_to(t, np.arctan2(N, D))
            gap = convexity_gap(self.base, t)
            step = (cur - theta) * (N * N + D * D) / gap
            t -= step
            if abs(step) < 1e-14:
                break
        return float(t)

    def evaluate(self, t, order: int = 0):
        if order not in (0, 1, 2):
            raise ValueError("dual profiles support derivative orders 0..2")
        scalar = np.asarray(t).ndim == 0
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty_like(t_arr)
        for i, theta in enumerate(t_arr):
            tau, sign = dihedral_fold(float(theta), self.d)
            s = self._invert_theta(tau)
            out[i] = self._eval_at(s, order) * sign ** order
        return float(out[0]) if scalar else out

    def _eval_at(self, t: float, order: int) -> float:
        f = self.base
        f0, f1, f2 = (f.evaluate(t, k) for k in range(3))
        G = 4 * f0 * f0 + f1 * f1
        if order == 0:
            return self.scale * f0 / G
        f3 = f.evaluate(t, 3)
        Gp = 2 * f1 * (4 * f0 + f2)
        qp = f1 / G - f0 * Gp / G ** 2
        gap = 2 * f0 * f2 - f1 * f1 + 4 * f0 * f0
        N = 2 * f0 * math.sin(t) + f1 * math.cos(t)
        D = 2 * f0 * math.cos(t) - f1 * math.sin(t)
        tp = gap / (N * N + D * D)
        if order == 1:
            return self.scale * qp / tp
        Gpp = 8 * (f1 * f1 + f0 * f2) + 2 * (f2 * f2 + f1 * f3)
        qpp = f2 / G - 2 * f1 * Gp / G ** 2 - f0 * Gpp / G ** 2 \
            + 2 * f0 * Gp ** 2 / G ** 3
        gap_p = 2 * f0 * (f3 + 4 * f1)
        Np = f1 * math.sin(t) + (2 * f0 + f2) * math.cos(t)
        Dp = f1 * math.cos(t) - (2 * f0 + f2) * math.sin(t)
        tpp = gap_p / (N * N + D * D) \
            - gap * 2 * (N * Np + D * Dp) / (N * N + D * D) ** 2
        return self.scale * (qpp * tp - qp * tpp) / tp ** 3

    def scaled(self, factor: float) -> "DualProfile":
        return DualProfile(base=self.base, scale=self.scale * factor)

    def to_json_dict(self) -> dict:
        return {"kind": "dual", "d": self.d, "base": self.base.to_json_dict(),
                "scale": self.scale}


register_profile_kind(
    "dual", lambda data: DualProfile(base=profile_from_json_dict(data["base"]),
                                     scale=float(data.get("scale", 1.0))))
