#!/usr/bin/env python3
"""Sweep profile families and tabulate where the Hessian metric is flat.

For each foliation model we walk a one-parameter family of profiles, sample
the Riemann tensor by finite differences at a few interior leaf points, and
print the largest component.  Quadratic-energy profiles (f = affine in
cos 2t for d=1, in cos dt generally only the round one) should sit at FD
noise level; anything genuinely Finsler should light up.  For cartan3 we
also print the necessary-condition gate f'(pi/3) = 0.  Any profile with the
full d=3 dihedral symmetry passes that gate automatically (sin(3j pi/3) = 0
term by term), so the wobble rows demonstrate that the gate is necessary but
nowhere near sufficient; a separate table runs the gate on candidates
*without* the symmetry, where it does real work.

Usage:
    python3 scripts/curvature_sweep.py                 # default sweep
    python3 scripts/curvature_sweep.py --model d1:3 --steps 9
"""

import argparse
import math

import numpy as np

from isonorm.foliation import cartan3, d1, d2, parse_model, random_leaf_points
from isonorm.hessian import InducedNorm, cartan_flat_candidate, riemann_fd
from isonorm.profile import Profile, is_minkowski

FLAT_NOISE = 1e-3


def sweep_model(model, family, seed, t_samples=(0.45, 0.8)):
    print(f"\n== {model.describe()}  (n={model.n}, d={model.d}) ==")
    print(f"{'profile':<38} {'min_gap':>9} {'max |R|':>10}  verdict")
    for label, profile in family:
        rep = is_minkowski(profile)
        if not rep.valid:
            print(f"{label:<38} {rep.min_gap:>9.3g} {'-':>10}  not a norm")
            continue
        nm = InducedNorm(model, profile)
        worst = 0.0
        for i, t in enumerate(t_samples):
            t = min(t, math.pi / model.d - 0.3)
            for u in random_leaf_points(model, t, 2, seed=seed + i):
                worst = max(worst, riemann_fd(nm, u).max_abs_component)
        verdict = "flat (FD noise)" if worst < FLAT_NOISE else "curved"
        extra = ""
        if model.d == 3:
            gate = cartan_flat_candidate(profile)
            extra = f"  f'(pi/3)={gate.fprime_at_pi3:+.2e}" \
                    f" {'candidate' if gate.candidate else 'rejected'}"
        print(f"{label:<38} {rep.min_gap:>9.3g} {worst:>10.2e}  {verdict}{extra}")


def family_d1(steps):
    # round -> ellipse ray (all quadratic energies, so all flat) and a
    # Randers ray (flat only at beta = 0).
    fam = []
    for s in np.linspace(0.0, 0.35, steps):
        fam.append((f"ellipse  f = 0.5 + {s:.3f} cos2t",
                    Profile(1, (0.5, 0.0, float(s) / 2))))
    for b in np.linspace(0.0, 0.6, steps):
        a2, b_ = 1.0, float(b)
        fam.append((f"randers  alpha + {b_:.3f} x1",
                    Profile(1, ((a2 + b_ * b_ / 2) / 2, b_, b_ * b_ / 4))))
    return fam


def family_d2(steps):
    fam = []
    for s in np.linspace(0.0, 0.4, steps):
        fam.append((f"clifford ellipse  c1 = {s:.3f}",
                    Profile(2, (1.0, float(s)))))
    for s in np.linspace(0.0, 0.06, steps):
        fam.append((f"second harmonic   c2 = {s:.3f}",
                    Profile(2, (1.0, 0.15, float(s)))))
    return fam


def family_d3(steps):
    fam = [("round", Profile(3, (0.5,)))]
    for s in np.linspace(0.01, 0.05, steps - 1):
        fam.append((f"wobble  c1 = {s:.3f}", Profile(3, (0.5, float(s)))))
    return fam


def gate_table():
    # The gate accepts any 2 pi-periodic profile as a *candidate* for the
    # Cartan family; only here can it reject anything, since full d=3
    # symmetry forces f'(pi/3) = 0 identically.
    print("\n-- flat-candidate gate on asymmetric candidates --")
    cands = [
        ("randers d=1 (0.5225, 0.3, 0.0225)", Profile(1, (0.5225, 0.3, 0.0225))),
        ("ellipse d=1 (0.5, 0, 0.1)", Profile(1, (0.5, 0.0, 0.1))),
        ("round", Profile(3, (0.5,))),
    ]
    for label, p in cands:
        gate = cartan_flat_candidate(p)
        word = "candidate" if gate.candidate else "rejected"
        print(f"{label:<38} f'(pi/3) = {gate.fprime_at_pi3:+.3e}  {word}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", default=None,
                    help="restrict to one model (d1:n | d2:n:k | cartan3)")
    ap.add_argument("--steps", type=int, default=5,
                    help="points per family ray (default 5)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    sweeps = [
        (d1(3), family_d1(args.steps)),
        (d2(4, 2), family_d2(args.steps)),
        (cartan3(), family_d3(args.steps)),
    ]
    if args.model is not None:
        wanted = parse_model(args.model)
        sweeps = [(m, fam) for m, fam in sweeps if m.describe() == wanted.describe()]
        if not sweeps:
            raise SystemExit(f"no sweep family for model {args.model}")

    for model, family in sweeps:
        sweep_model(model, family, args.seed)
        if model.d == 3:
            gate_table()
    print(f"\nflat threshold = {FLAT_NOISE:g} (FD noise floor is ~1e-6 here; "
          f"curved examples land at 1e-2 or above)")


if __name__ == "__main__":
    main()
