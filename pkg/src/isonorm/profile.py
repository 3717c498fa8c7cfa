"""Dihedrally symmetric profile functions f(t) on the circle.

A profile of order d is a smooth function f(t) = c0 + sum_j c_j cos(j*d*t),
even and 2*pi/d periodic by construction.  Profiles are the angular part of
norms F = r*sqrt(2 f(t)); the strong-convexity criterion for such a norm is

    gap(t) = 2 f f'' - (f')^2 + 4 f^2 > 0   and   f > 0.

Numerically produced profiles (duals, phi-constructions, glued targets) are
fit to the same cosine basis; the fitted series is the single evaluation
authority for every derivative order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

ALLOWED_D = (1, 2, 3, 4, 6)
FIT_MAX_TERMS = 32
FIT_RESIDUAL_FLAG = 1e-8
VALIDITY_MARGIN = 1e-9
MAX_DERIV_ORDER = 3


@dataclass(frozen=True)
class Profile:
    """Truncated cosine series c0 + sum_j c_j cos(j*d*t)."""

    d: int
    cos_coeffs: tuple[float, ...]
    kind: str = "cosine"  # "cosine" (exact) or "sampled" (fit to samples)
    fit_residual: float = 0.0
    # original samples for "sampled" profiles, kept for JSON round-trips
    sample_grid: tuple[float, ...] | None = None
    sample_values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.d not in ALLOWED_D:
            raise ValueError(f"d must be one of {ALLOWED_D}, got {self.d}")
        if not self.cos_coeffs:
            raise ValueError("profile needs at least one coefficient")
        object.__setattr__(self, "cos_coeffs", tuple(float(c) for c in self.cos_coeffs))

    def evaluate(self, t, order: int = 0):
        """d^order f / dt^order at t (scalar or array), order 0..3."""
        if order not in range(MAX_DERIV_ORDER + 1):
            raise ValueError(f"order must be in 0..{MAX_DERIV_ORDER}, got {order}")
        t = np.asarray(t, dtype=float)
        if not np.all(np.isfinite(t)):
            raise ValueError("non-finite angle")
        coeffs = np.asarray(self.cos_coeffs)
        freq = np.arange(len(coeffs)) * self.d
        # d^m/dt^m cos(w t) = w^m cos(w t + m pi/2); 0**0 == 1 keeps the c0 term
        weights = coeffs * freq.astype(float) ** order
        phase = np.multiply.outer(t, freq) + 0.5 * math.pi * order
        out = np.cos(phase) @ weights
        return float(out) if out.ndim == 0 else out

    def scaled(self, factor: float) -> "Profile":
        """The profile factor*f (coefficient-wise, exact)."""
        return Profile(self.d, tuple(factor * c for c in self.cos_coeffs),
                       kind=self.kind, fit_residual=abs(factor) * self.fit_residual)

    def to_json_dict(self) -> dict:
        if self.kind == "sampled" and self.sample_grid is not None:
            return {"d": self.d, "kind": "sampled",
                    "grid": list(self.sample_grid), "values": list(self.sample_values)}
        return {"d": self.d, "kind": "cosine", "cos_coeffs": list(self.cos_coeffs)}


def round_profile(d: int = 1) -> Profile:
    """f = 1/2: the Euclidean norm for any foliation order."""
    return Profile(d, (0.5,))


def convexity_gap(p: Profile, t):
    """2 f f'' - (f')^2 + 4 f^2 at t (scalar or array)."""
    f0 = p.evaluate(t, 0)
    f1 = p.evaluate(t, 1)
    f2 = p.evaluate(t, 2)
    return 2.0 * f0 * f2 - f1 * f1 + 4.0 * f0 * f0


def _golden_refine(fun, a: float, b: float, iters: int = 48) -> tuple[float, float]:
    """Deterministic golden-section minimization of fun on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = fun(x1), fun(x2)
    for _ in range(iters):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = fun(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = fun(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    status: str  # "valid" | "marginal" | "invalid"
    min_f: float
    min_gap: float
    argmin: float  # location of the gap minimum


def is_minkowski(p: Profile, grid_size: int = 1024) -> ValidityReport:
    """Check f > 0 and gap > 0 on [0, pi/d] (grid plus golden refinement).

    "valid" needs both minima above 1e-9; a sign flip below -1e-9 is
    "invalid"; anything pinched in between is reported as "marginal" rather
    than guessed.
    """
    if grid_size < 64:
        raise ValueError("grid_size must be >= 64")
    ts = np.linspace(0.0, math.pi / p.d, grid_size)
    fs = p.evaluate(ts, 0)
    gaps = convexity_gap(p, ts)
    h = ts[1] - ts[0]

    def refine(values, fun):
        i = int(np.argmin(values))
        lo = max(ts[0], ts[i] - h)
        hi = min(ts[-1], ts[i] + h)
        arg, val = _golden_refine(fun, lo, hi)
        if values[i] < val:
            arg, val = ts[i], values[i]
        return arg, float(val)

    _, min_f = refine(fs, lambda t: p.evaluate(t, 0))
    arg_gap, min_gap = refine(gaps, lambda t: convexity_gap(p, t))

    if min_f > VALIDITY_MARGIN and min_gap > VALIDITY_MARGIN:
        status = "valid"
    elif min_f < -VALIDITY_MARGIN or min_gap < -VALIDITY_MARGIN:
        status = "invalid"
    else:
        status = "marginal"
    return ValidityReport(valid=(status == "valid"), status=status,
                          min_f=min_f, min_gap=min_gap, argmin=float(arg_gap))


def fit_cosine_series(d: int, ts, values, max_terms: int = FIT_MAX_TERMS):
    """Least-squares fit of values(ts) in the basis cos(j*d*t), j < max_terms.

    Returns (coefficients, max_abs_residual).  ts need not be uniform.
    """
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    n_terms = min(max_terms, max(1, len(ts) // 2))
    design = np.cos(np.multiply.outer(ts, np.arange(n_terms) * d))
    coeffs, *_ = np.linalg.lstsq(design, values, rcond=None)
    resid = float(np.max(np.abs(design @ coeffs - values)))
    return coeffs, resid


def sampled_profile(d: int, ts, values, max_terms: int = FIT_MAX_TERMS) -> Profile:
    """Build a "sampled" Profile by fitting a cosine series to (ts, values)."""
    coeffs, resid = fit_cosine_series(d, ts, values, max_terms)
    return Profile(d, tuple(coeffs), kind="sampled", fit_residual=resid,
                   sample_grid=tuple(float(t) for t in np.asarray(ts, float)),
                   sample_values=tuple(float(v) for v in np.asarray(values, float)))


def from_phi(phi, b: float = 1.0, mode: str = "alpha-beta",
             grid_size: int = 512) -> Profile:
    """Profiles from a one-variable generating function phi.

    mode "alpha-beta"    : d=1, f(t) = phi(b cos t)^2 / 2
    mode "alpha1-alpha2" : d=2, f(t) = phi(cos t)^2 / 2

    The squared form keeps f >= 0 even when phi dips negative; such profiles
    simply fail is_minkowski (f touches zero), which is the caller's gate.
    """
    if mode == "alpha-beta":
        if b <= 0:
            raise ValueError("b must be positive")
        d = 1
        ts = np.linspace(0.0, math.pi, grid_size)
        raw = np.array([phi(b * math.cos(t)) for t in ts], dtype=float)
    elif mode == "alpha1-alpha2":
        d = 2
        ts = np.linspace(0.0, math.pi / 2, grid_size)
        raw = np.array([phi(math.cos(t)) for t in ts], dtype=float)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if not np.all(np.isfinite(raw)):
        raise ValueError("phi produced non-finite values on the sampling grid")
    return sampled_profile(d, ts, 0.5 * raw * raw)


def dihedral_fold(t: float, d: int) -> tuple[float, float]:
    """Map t to (tau, sign) with tau in [0, pi/d] and, for any profile of
    order d, f(t) = f(tau) and f'(t) = sign * f'(tau)."""
    period = 2.0 * math.pi / d
    tau = math.fabs(t) % period
    sign = 1.0 if t >= 0 else -1.0
    if tau > period / 2.0:
        tau = period - tau
        sign = -sign
    return tau, sign


@dataclass(frozen=True)
class SectorProfile:
    """Profile assembled from per-sector pieces on the fundamental interval.

    `breaks` are the switch angles inside (0, pi/d); piece i is used on
    [breaks[i-1], breaks[i]].  Evaluation folds t into [0, pi/d] by dihedral
    symmetry first, so the assembled function is automatically even and
    2*pi/d periodic.  Pieces are full Profiles (globally defined); continuity
    across switch angles is the constructor's responsibility and is checked
    numerically by the glue code, not here.
    """

    d: int
    breaks: tuple[float, ...]
    pieces: tuple[Profile, ...]

    def __post_init__(self):
        if len(self.pieces) != len(self.breaks) + 1:
            raise ValueError("need exactly len(breaks)+1 pieces")
        if any(p.d != self.d for p in self.pieces):
            raise ValueError("piece symmetry order mismatch")
        if list(self.breaks) != sorted(self.breaks):
            raise ValueError("breaks must be increasing")

    @property
    def kind(self) -> str:
        return "sector"

    @property
    def fit_residual(self) -> float:
        return max(p.fit_residual for p in self.pieces)

    def _fold(self, t: float) -> tuple[float, float]:
        return dihedral_fold(t, self.d)

    def evaluate(self, t, order: int = 0):
        scalar = np.asarray(t).ndim == 0
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty_like(t_arr)
        for i, ti in enumerate(t_arr):
            tau, sign = self._fold(float(ti))
            # side="right" so that a break angle belongs to the piece on its
            # right, matching the convention of piecewise theta maps
            idx = int(np.searchsorted(self.breaks, tau, side="right"))
            out[i] = self.pieces[idx].evaluate(tau, order) * sign ** order
        return float(out[0]) if scalar else out

    def to_json_dict(self) -> dict:
        return {"d": self.d, "kind": "sector", "breaks": list(self.breaks),
                "pieces": [p.to_json_dict() for p in self.pieces]}


# other modules can contribute profile kinds (e.g. exact dual profiles)
# without this module importing them
_EXTRA_JSON_KINDS: dict = {}


def register_profile_kind(kind: str, loader) -> None:
    _EXTRA_JSON_KINDS[kind] = loader


def profile_from_json_dict(data: dict):
    kind = data.get("kind", "cosine")
    if kind == "cosine":
        return Profile(int(data["d"]), tuple(data["cos_coeffs"]))
    if kind == "sampled":
        return sampled_profile(int(data["d"]), data["grid"], data["values"])
    if kind == "sector":
        pieces = tuple(profile_from_json_dict(p) for p in data["pieces"])
        return SectorProfile(int(data["d"]), tuple(data["breaks"]), pieces)
    if kind in _EXTRA_JSON_KINDS:
        return _EXTRA_JSON_KINDS[kind](data)
    raise ValueError(f"unknown profile kind {kind!r}")


def load_profile(path) -> Profile:
    with open(path) as fh:
        return profile_from_json_dict(json.load(fh))


def save_profile(p, path) -> None:
    with open(path, "w") as fh:
        json.dump(p.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
