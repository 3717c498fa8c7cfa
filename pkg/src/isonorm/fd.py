"""Central finite-difference stencils on a shared, memoized lattice.

All derivative estimates of a scalar field are assembled from values at
x + step * (integer offset); the lattice cache keeps repeated stencil
evaluations (Hessian + full third-derivative tensor at one point) cheap.
"""

from __future__ import annotations

from itertools import combinations_with_replacement, permutations, product

import numpy as np


class _Lattice:
    def __init__(self, fun, x, step):
        self.fun = fun
        self.x = np.asarray(x, dtype=float)
        self.step = float(step)
        self.cache: dict[tuple[int, ...], float] = {}

    def __call__(self, *offset: int) -> float:
        key = tuple(offset)
        if key not in self.cache:
            pt = self.x + self.step * np.asarray(key, dtype=float)
            self.cache[key] = float(self.fun(pt))
        return self.cache[key]


def _unit_offsets(n: int, entries: dict[int, int]) -> tuple[int, ...]:
    off = [0] * n
    for axis, val in entries.items():
        off[axis] += val
    return tuple(off)


def gradient_fd(fun, x, step: float = 1e-6) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    lat = _Lattice(fun, x, step)
    n = len(x)
    g = np.empty(n)
    for i in range(n):
        g[i] = (lat(*_unit_offsets(n, {i: 1})) - lat(*_unit_offsets(n, {i: -1}))) / (2 * step)
    return g


def hessian_fd(fun, x, step: float = 1e-4) -> np.ndarray:
    """Symmetric central-difference Hessian."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    lat = _Lattice(fun, x, step)
    h2 = step * step
    H = np.empty((n, n))
    f0 = lat(*([0] * n))
    for i in range(n):
        H[i, i] = (lat(*_unit_offsets(n, {i: 1})) - 2.0 * f0
                   + lat(*_unit_offsets(n, {i: -1}))) / h2
    for i in range(n):
        for j in range(i + 1, n):
            val = (lat(*_unit_offsets(n, {i: 1, j: 1}))
                   - lat(*_unit_offsets(n, {i: 1, j: -1}))
                   - lat(*_unit_offsets(n, {i: -1, j: 1}))
                   + lat(*_unit_offsets(n, {i: -1, j: -1}))) / (4.0 * h2)
            H[i, j] = H[j, i] = val
    return H


def third_tensor_fd(fun, x, step: float = 1e-3) -> np.ndarray:
    """Fully symmetric third-derivative tensor by central differences."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    lat = _Lattice(fun, x, step)
    h3 = step ** 3
    T = np.zeros((n, n, n))

    def entry(i: int, j: int, k: int) -> float:
        if i == j == k:
            return (lat(*_unit_offsets(n, {i: 2})) - 2.0 * lat(*_unit_offsets(n, {i: 1}))
                    + 2.0 * lat(*_unit_offsets(n, {i: -1}))
                    - lat(*_unit_offsets(n, {i: -2}))) / (2.0 * h3)
        if i == j:  # second difference along i, first along k
            return (lat(*_unit_offsets(n, {i: 1, k: 1}))
                    - 2.0 * lat(*_unit_offsets(n, {k: 1}))
                    + lat(*_unit_offsets(n, {i: -1, k: 1}))
                    - lat(*_unit_offsets(n, {i: 1, k: -1}))
                    + 2.0 * lat(*_unit_offsets(n, {k: -1}))
                    - lat(*_unit_offsets(n, {i: -1, k: -1}))) / (2.0 * h3)
        # three distinct axes: product of three central first differences
        total = 0.0
        for si, sj, sk in product((1, -1), repeat=3):
            total += si * sj * sk * lat(*_unit_offsets(n, {i: si, j: sj, k: sk}))
        return total / (8.0 * h3)

    for idx in combinations_with_replacement(range(n), 3):
        i, j, k = sorted(idx)
        if i == j == k:
            val = entry(i, i, i)
        elif i == j:
            val = entry(i, i, k)
        elif j == k:
            val = entry(j, j, i)
        else:
            val = entry(i, j, k)
        for perm in set(permutations((i, j, k))):
            T[perm] = val
    return T
