"""Norms on R^n induced by an isoparametric foliation: F = r*sqrt(2 f(t)).

The Hessian metric g = Hess(E), E = F^2/2, is evaluated by finite
differences in ambient coordinates; the closed forms live in the adapted
frame (radial, t-direction, shape eigenvectors) and every closed-form claim
here is cross-checked against the FD side by projection.

Curvature note: for a Hessian metric the Riemann tensor depends only on the
second and third derivatives of the potential — the fourth-derivative terms
cancel identically under the antisymmetrization — so the curvature is
assembled from third-order stencils of E:

    R^l_{kij} = (1/4) g^{la} (T_{jab} g^{bm} T_{mik} - T_{iab} g^{bm} T_{mjk}),

with T = FD third-derivative tensor of E.  Differencing the FD metric a
second time instead (the naive recipe) amplifies the inner truncation error
by orders of magnitude and drowns genuinely flat cases; measured noise
floors for the assembled form sit far below the 1e-3 flatness threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .fd import hessian_fd, third_tensor_fd
from .foliation import (DEFAULT_FOCAL_GUARD, FocalProximityError, FoliationModel,
                        _sphere_tangent_basis, multiplicities, normal_plane_basis,
                        t_coord, unit_w)
from .profile import Profile, convexity_gap, is_minkowski

TENSOR_STEP_SCALE = 1e-4
CURVATURE_TENSOR_STEP = 2e-4
CURVATURE_THIRD_STEP = 1e-3
FLATNESS_THRESHOLD = 1e-3


@dataclass(frozen=True)
class InducedNorm:
    foliation: FoliationModel
    profile: Profile

    def __init__(self, foliation: FoliationModel, profile, validate: bool = True):
        if profile.d != foliation.d:
            raise ValueError(
                f"profile symmetry order d={profile.d} does not match the "
                f"foliation (d={foliation.d})")
        if validate and isinstance(profile, Profile):
            report = is_minkowski(profile)
            if report.status == "invalid":
                raise ValueError(
                    f"profile is not a Minkowski norm profile "
                    f"(min_f={report.min_f:.3g}, min_gap={report.min_gap:.3g})")
        object.__setattr__(self, "foliation", foliation)
        object.__setattr__(self, "profile", profile)


def value(nm: InducedNorm, x) -> float:
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r == 0.0:
        return 0.0
    t = t_coord(nm.foliation, x).t
    return r * math.sqrt(2.0 * nm.profile.evaluate(t, 0))


def energy(nm: InducedNorm, x) -> float:
    """E(x) = F(x)^2 / 2 = r^2 f(t)."""
    x = np.asarray(x, dtype=float)
    r2 = float(np.dot(x, x))
    if r2 == 0.0:
        return 0.0
    t = t_coord(nm.foliation, x).t
    return r2 * nm.profile.evaluate(t, 0)


def grad_energy(nm: InducedNorm, x) -> np.ndarray:
    """Closed-form gradient of E: 2f * x + r f' * w."""
    x = np.asarray(x, dtype=float)
    r, t = t_coord(nm.foliation, x)
    f0 = nm.profile.evaluate(t, 0)
    f1 = nm.profile.evaluate(t, 1)
    if abs(f1) < 1e-15:
        return 2.0 * f0 * x
    w = unit_w(nm.foliation, x)
    return 2.0 * f0 * x + r * f1 * w


class TensorResult(NamedTuple):
    matrix: np.ndarray
    eigenvalues: np.ndarray
    positive_definite: bool


def fd_fundamental_tensor(nm: InducedNorm, x,
                          step_scale: float = TENSOR_STEP_SCALE) -> TensorResult:
    """Hessian of E at x by central differences, step = step_scale * |x|.

    Works on focal cones too: the stencil only needs E values, and E is
    smooth across the cones for admissible profiles.
    """
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r == 0.0:
        raise ValueError("fundamental tensor undefined at the origin")
    G = hessian_fd(lambda p: energy(nm, p), x, step=step_scale * r)
    G = 0.5 * (G + G.T)
    evals = np.linalg.eigvalsh(G)
    return TensorResult(matrix=G, eigenvalues=evals,
                        positive_definite=bool(evals[0] > 0.0))


class FrameComponents(NamedTuple):
    g_rr: float
    g_rt: float
    g_tt: float
    tangential_factors: tuple[float, ...]


def frame_components(nm: InducedNorm, x, spectrum) -> FrameComponents:
    """Closed-form metric components in the adapted frame at x.

    g(d_r, d_r) = 2f,  g(d_r, d_t) = r f',  g(d_t, d_t) = r^2 (f'' + 2f);
    for each shape eigenvalue kappa, the leaf direction carries the ratio
    g(v, v) / g_euclid(v, v) = 2f + kappa f'.  Factors are aligned with the
    given spectrum entries.
    """
    x = np.asarray(x, dtype=float)
    r, t = t_coord(nm.foliation, x)
    f0 = nm.profile.evaluate(t, 0)
    f1 = nm.profile.evaluate(t, 1)
    f2 = nm.profile.evaluate(t, 2)
    factors = tuple(2.0 * f0 + entry.kappa * f1 for entry in spectrum)
    return FrameComponents(g_rr=2.0 * f0, g_rt=r * f1,
                           g_tt=r * r * (f2 + 2.0 * f0),
                           tangential_factors=factors)


def frame_basis(nm: InducedNorm, x, spectrum) -> np.ndarray:
    """Columns: radial u, t-direction w, then shape eigenvectors."""
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    u = x / r
    w = unit_w(nm.foliation, x)
    cols = [u, w]
    for entry in spectrum:
        for vec in entry.basis:
            cols.append(vec)
    return np.array(cols).T


def closed_frame_matrix(nm: InducedNorm, x, spectrum) -> np.ndarray:
    """Expected projected metric matrix in the frame_basis (unit vectors)."""
    comps = frame_components(nm, x, spectrum)
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    n = nm.foliation.n
    M = np.zeros((n, n))
    M[0, 0] = comps.g_rr
    M[0, 1] = M[1, 0] = comps.g_rt / r
    M[1, 1] = comps.g_tt / (r * r)
    idx = 2
    for entry, factor in zip(spectrum, comps.tangential_factors):
        for _ in range(entry.multiplicity):
            M[idx, idx] = factor
            idx += 1
    return M


class CurvatureResult(NamedTuple):
    max_abs_component: float
    noise_floor: float
    flat: bool


def riemann_fd(nm: InducedNorm, x, delta: float = DEFAULT_FOCAL_GUARD,
               flat_threshold: float = FLATNESS_THRESHOLD) -> CurvatureResult:
    """Max |R^l_kij| of the Hessian metric at x/|x|, from FD stencils of E."""
    x = np.asarray(x, dtype=float)
    x = x / np.linalg.norm(x)
    r, t = t_coord(nm.foliation, x)
    if not (delta < t < math.pi / nm.foliation.d - delta):
        raise FocalProximityError(f"t={t:.4f} inside the focal guard band")

    fun = lambda p: energy(nm, p)
    G = hessian_fd(fun, x, step=CURVATURE_TENSOR_STEP)
    G = 0.5 * (G + G.T)
    T = third_tensor_fd(fun, x, step=CURVATURE_THIRD_STEP)
    Gi = np.linalg.inv(G)

    A = np.einsum("la,iab,bm,mjk->lkij", Gi, T, Gi, T)
    R = 0.25 * (np.transpose(A, (0, 1, 3, 2)) - A)
    max_abs = float(np.max(np.abs(R)))

    # roundoff floor: third-difference stencils see ~eps*E/h^3 of noise, and
    # R is quadratic in T, so the floor is linear in |T| plus a square term
    eps_t = 8.0 * np.finfo(float).eps * max(1.0, abs(energy(nm, x))) \
        / CURVATURE_THIRD_STEP ** 3
    t_max = float(np.max(np.abs(T)))
    gi_norm = float(np.linalg.norm(Gi, 2))
    floor = 0.5 * gi_norm ** 2 * (2.0 * t_max * eps_t + eps_t ** 2)
    return CurvatureResult(max_abs_component=max_abs, noise_floor=floor,
                           flat=bool(max_abs < flat_threshold))


def indicatrix_grad_t_norm(nm: InducedNorm, t: float) -> float:
    """Closed-form squared g-norm of grad t on the indicatrix:
    4 f^2 / (4 f^2 - (f')^2 + 2 f f'')."""
    f0 = nm.profile.evaluate(t, 0)
    f1 = nm.profile.evaluate(t, 1)
    f2 = nm.profile.evaluate(t, 2)
    return 4.0 * f0 * f0 / (4.0 * f0 * f0 - f1 * f1 + 2.0 * f0 * f2)


def _laplacian_pieces(nm: InducedNorm, t: float):
    p = nm.profile
    f0 = p.evaluate(t, 0)
    f1 = p.evaluate(t, 1)
    f2 = p.evaluate(t, 2)
    f3 = p.evaluate(t, 3)
    gap = 2.0 * f0 * f2 - f1 * f1 + 4.0 * f0 * f0
    gap_p = 2.0 * f0 * (f3 + 4.0 * f1)
    return f0, f1, f2, f3, gap, gap_p


def indicatrix_laplacian_t(nm: InducedNorm, t: float, spectrum=None) -> float:
    """Closed-form Laplacian of t on the indicatrix (S_F, g).

    Assembled in divergence form from the frame volume element: with
    S(t) = sqrt(gap) * prod_k [(2f + kappa_k f')^(1/2) sin(t + k pi/d)]^(m_k),

        Delta t |_{S_F} = 2f * [ -(n-2) f'/gap + d/dt(2f/gap)
                                 + (2f/gap) * d/dt log S ].

    Depends on t only; the optional spectrum argument fixes the (k, m_k)
    bookkeeping from a measured spectrum, while the kappa values themselves
    always use the closed form cot(t + k pi/d).
    """
    m = nm.foliation
    f0, f1, f2, f3, gap, gap_p = _laplacian_pieces(nm, t)
    if spectrum is not None:
        mults = tuple((entry.k, entry.multiplicity) for entry in spectrum)
    else:
        mults = multiplicities(m)

    dlogS = 0.5 * gap_p / gap
    for k, mk in mults:
        tau = t + k * math.pi / m.d
        kap = math.cos(tau) / math.sin(tau)
        kap_p = -1.0 - kap * kap
        factor = 2.0 * f0 + kap * f1
        factor_p = 2.0 * f1 + kap_p * f1 + kap * f2
        dlogS += mk * (0.5 * factor_p / factor + kap)

    d_2f_over_gap = 2.0 * f1 / gap - 2.0 * f0 * gap_p / (gap * gap)
    n = m.n
    return 2.0 * f0 * (-(n - 2) * f1 / gap + d_2f_over_gap
                       + (2.0 * f0 / gap) * dlogS)


# --- FD counterparts on the indicatrix -------------------------------------
#
# The indicatrix is parametrized over the unit sphere through a normal-
# coordinate chart z -> u(z) around a base direction; the only FD ingredient
# is the ambient fundamental tensor, everything else (chart Jacobian, dt) is
# closed-form, which keeps the noise of the outer divergence difference low.


def _chart_point(u0: np.ndarray, V: np.ndarray, z: np.ndarray):
    """u(z) = cos|z| u0 + sin|z| V^T z / |z| and its partials du/dz_a."""
    zeta = float(np.linalg.norm(z))
    n = len(u0)
    na = V.shape[0]
    if zeta < 1e-14:
        return u0.copy(), V.T.copy()
    vz = V.T @ z
    u = math.cos(zeta) * u0 + (math.sin(zeta) / zeta) * vz
    du = np.empty((n, na))
    coeff = (math.cos(zeta) / zeta - math.sin(zeta) / zeta ** 2)
    for a in range(na):
        du[:, a] = (-math.sin(zeta) * (z[a] / zeta) * u0
                    + coeff * (z[a] / zeta) * vz
                    + (math.sin(zeta) / zeta) * V[a])
    return u, du


def _indicatrix_chart_data(nm: InducedNorm, u0: np.ndarray, V: np.ndarray,
                           z: np.ndarray, tensor_step: float):
    """(metric, dt-components, sqrt(det)) of the induced chart metric at z."""
    m = nm.foliation
    u, du = _chart_point(u0, V, z)
    t = t_coord(m, u).t
    f0 = nm.profile.evaluate(t, 0)
    f1 = nm.profile.evaluate(t, 1)
    w = unit_w(m, u)
    dt = du.T @ w                      # chart components of grad t
    rho = 1.0 / math.sqrt(2.0 * f0)
    drho = -f1 * rho / (2.0 * f0) * dt
    X = rho * u
    J = rho * du + np.outer(u, drho)
    G = hessian_fd(lambda p: energy(nm, p), X, step=tensor_step * rho)
    G = 0.5 * (G + G.T)
    ghat = J.T @ G @ J
    return ghat, dt, math.sqrt(float(np.linalg.det(ghat)))


def fd_indicatrix_grad_t_norm(nm: InducedNorm, u0,
                              tensor_step: float = CURVATURE_TENSOR_STEP) -> float:
    """FD squared norm of grad t on the indicatrix at direction u0."""
    u0 = np.asarray(u0, dtype=float)
    u0 = u0 / np.linalg.norm(u0)
    V = _sphere_tangent_basis(u0)
    ghat, dt, _ = _indicatrix_chart_data(nm, u0, V, np.zeros(len(V)), tensor_step)
    return float(dt @ np.linalg.solve(ghat, dt))


def fd_indicatrix_laplacian_t(nm: InducedNorm, u0,
                              outer_step: float = 1e-2,
                              tensor_step: float = 3e-4) -> float:
    """FD Laplacian of t on the indicatrix at direction u0 (divergence form).

    The divergence of the flux sqrt(det g) g^{ab} dt/dz^b is differenced with
    a fourth-order stencil: the chart (and hence the truncation error of a
    low-order difference) depends on the base point, which would otherwise
    show up as spurious position dependence of an isoparametric invariant.
    """
    u0 = np.asarray(u0, dtype=float)
    u0 = u0 / np.linalg.norm(u0)
    V = _sphere_tangent_basis(u0)
    na = len(V)
    _, _, sdet0 = _indicatrix_chart_data(nm, u0, V, np.zeros(na), tensor_step)

    total = 0.0
    for a in range(na):
        for coef, mult in ((-1.0, 2.0), (8.0, 1.0), (-8.0, -1.0), (1.0, -2.0)):
            z = np.zeros(na)
            z[a] = mult * outer_step
            ghat, dt, sdet = _indicatrix_chart_data(nm, u0, V, z, tensor_step)
            flux = sdet * np.linalg.solve(ghat, dt)
            total += coef * flux[a] / (12.0 * outer_step)
    return float(total / sdet0)


class FlatCandidateReport(NamedTuple):
    candidate: bool
    fprime_at_pi3: float


def cartan_flat_candidate(profile, tol: float = 1e-8) -> FlatCandidateReport:
    """Gate for profiles that could make the Cartan-foliation norm flat.

    A flat Hessian metric forces the restriction of the profile to every
    normal plane to look Euclidean there; the first nontrivial obstruction
    is f'(pi/3) = 0 (the second focal angle of the d=3 geodesic).  Profiles
    failing it are rejected as flat candidates outright.
    """
    fp = float(profile.evaluate(math.pi / 3.0, 1))
    return FlatCandidateReport(candidate=bool(abs(fp) <= tol), fprime_at_pi3=fp)
