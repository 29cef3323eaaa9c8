"""Dense-matrix conventions, pivot trails, and the level-3 flop counter.

Matrices are plain ``numpy.float64`` 2-D arrays.  Storage is column-major
(Fortran order) throughout because every algorithm in this package walks
column panels; element ``(i, j)`` of a generated matrix lives at flat
index ``i + j*rows`` of its buffer.  Factorizations mutate their argument
in place, so callers keep a copy when they need the original.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

EPS = float(np.finfo(np.float64).eps)


def as_matrix(a) -> np.ndarray:
    """Copy `a` into a fresh column-major float64 matrix."""
    out = np.array(a, dtype=np.float64, order="F", copy=True)
    if out.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={out.ndim}")
    return out


def check_finite(a: np.ndarray, what: str = "matrix") -> np.ndarray:
    if not np.isfinite(a).all():
        raise ValueError(f"{what} contains NaN or Inf entries")
    return a


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(a))


# ---------------------------------------------------------------------------
# Pivot trails
#
# A trail is an int64 vector of swap targets: entry i records that column i
# was exchanged with column trail[i] >= i at step i.  Applying the swaps in
# ascending order to the original matrix reproduces the column order the
# factorization worked with; the decomposition of a permutation into such a
# swap sequence is unique.
# ---------------------------------------------------------------------------


def apply_pivot_trail(a: np.ndarray, trail, inverse: bool = False) -> np.ndarray:
    """Apply (or undo) a swap trail to the columns of `a`, in place."""
    trail = np.asarray(trail, dtype=np.int64)
    n = a.shape[1]
    steps = range(len(trail) - 1, -1, -1) if inverse else range(len(trail))
    for i in steps:
        j = int(trail[i])
        if j < i or j >= n:
            raise IndexError(f"trail[{i}] = {j} out of range [{i}, {n})")
        if j != i:
            a[:, [i, j]] = a[:, [j, i]]
    return a


def trail_to_permutation(trail, n: int) -> np.ndarray:
    """Permutation vector p with A[:, p] = forward-applied A."""
    p = np.arange(n, dtype=np.int64)
    for i, j in enumerate(np.asarray(trail, dtype=np.int64)):
        if j < i or j >= n:
            raise IndexError(f"trail[{i}] = {j} out of range [{i}, {n})")
        p[i], p[j] = p[j], p[i]
    return p


def permutation_to_trail(perm) -> np.ndarray:
    """Unique ascending swap trail that reproduces `perm` from identity."""
    perm = np.asarray(perm, dtype=np.int64)
    n = len(perm)
    cur = np.arange(n, dtype=np.int64)
    pos = np.arange(n, dtype=np.int64)  # pos[col] = current index of col
    trail = np.empty(n, dtype=np.int64)
    for i in range(n):
        j = int(pos[perm[i]])
        trail[i] = j
        ci, cj = cur[i], cur[j]
        cur[i], cur[j] = cj, ci
        pos[ci], pos[cj] = j, i
    return trail


# ---------------------------------------------------------------------------
# Flop accounting
# ---------------------------------------------------------------------------


class FlopCounter:
    """Accumulates the flops spent in level-3 kernels.

    Only matrix-matrix products (2*m*n*k per m x k times k x n product,
    counting every multiply and every add) and triangular solves with a
    matrix right-hand side (b*b per column for a b x b system) are
    instrumented; level-1/level-2 work inside unblocked loops and scalar
    bookkeeping are not.  This isolates exactly the part of the
    computation that blocked algorithms cast as high-performance kernels,
    which is what the benchmark harness compares against the standardized
    (4/3)n^3 budget.
    """

    def __init__(self):
        self.count = 0

    def add(self, flops: int):
        self.count += int(flops)

    def reset(self):
        self.count = 0


def matmul(a: np.ndarray, b: np.ndarray, fc: FlopCounter | None = None) -> np.ndarray:
    """a @ b, counted as a level-3 product when `fc` is given."""
    if fc is not None:
        fc.add(2 * a.shape[0] * a.shape[1] * b.shape[1])
    return a @ b


def solve_upper(
    t: np.ndarray,
    b: np.ndarray,
    transpose: bool = False,
    fc: FlopCounter | None = None,
) -> np.ndarray:
    """Solve T X = B (or T^T X = B) for upper-triangular T, counted."""
    if fc is not None:
        ncols = b.shape[1] if b.ndim == 2 else 1
        fc.add(t.shape[0] * t.shape[0] * ncols)
    return solve_triangular(
        t, b, trans="T" if transpose else "N", lower=False, check_finite=False
    )
