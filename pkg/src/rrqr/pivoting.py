"""Column-pivoted QR: weight downdating, MGSP, and the Householder variants.

Pivoting always moves the remaining column of largest 2-norm to the front,
with ties broken toward the smallest index so that every variant makes the
same deterministic choice.  Squared column norms (weights) are maintained
across steps by subtracting the squares of the freshly computed R row,
``nu_j -> nu_j - r_j^2``, instead of being recomputed; a drift safeguard
recomputes a weight exactly once it has decayed below 1e-8 of its original
value, where cancellation would otherwise corrupt the pivot order.

Three factorization drivers live here:

* ``mgsp``       -- modified Gram-Schmidt with pivoting (also the engine
                    behind randomized block-pivot selection),
* ``hqrp_unb``   -- Householder QR with pivoting, full trailing updates
                    (variant 1),
* ``hqrp_blk``   -- the blocked form, whose panels run the delayed-update
                    variant 3 and leave one rank-b update per panel to a
                    matrix-matrix multiply.
"""

from __future__ import annotations

import numpy as np

from .core import EPS, FlopCounter, matmul
from .householder import QRFactors, housev


class WeightVector:
    """Squared column norms with downdating and a recompute safeguard."""

    RECOMPUTE_FRACTION = 1e-8

    def __init__(self, v):
        self.v = np.array(v, dtype=np.float64)
        self.v_orig = self.v.copy()

    def __len__(self):
        return len(self.v)

    def swap(self, i: int, j: int):
        self.v[[i, j]] = self.v[[j, i]]
        self.v_orig[[i, j]] = self.v_orig[[j, i]]

    def downdate(self, start: int, r_row: np.ndarray, recompute=None):
        """v[start:] -= r_row**2, clamped at zero, with drift safeguard.

        `recompute(j)` must return the exact current squared norm of
        column `j` (absolute index); it is called for every column whose
        downdated weight fell below RECOMPUTE_FRACTION of its original.
        """
        tail = self.v[start:]
        np.subtract(tail, np.square(r_row), out=tail)
        np.maximum(tail, 0.0, out=tail)
        if recompute is not None:
            drifted = np.nonzero(tail < self.RECOMPUTE_FRACTION * self.v_orig[start:])[0]
            for j in drifted:
                tail[j] = recompute(start + int(j))


def compute_weights(a: np.ndarray) -> WeightVector:
    """Weight vector of `a`: squared 2-norm of every column."""
    return WeightVector(np.einsum("ij,ij->j", a, a))


def downdate_weights(v: WeightVector, r_row, recompute=None) -> None:
    v.downdate(0, np.asarray(r_row, dtype=np.float64), recompute)


def determine_pivot(v, offset: int) -> int:
    """Index >= offset of the largest weight; ties go to the smallest index."""
    values = v.v if isinstance(v, WeightVector) else np.asarray(v)
    if offset >= len(values):
        raise IndexError(f"pivot offset {offset} out of range")
    return offset + int(np.argmax(values[offset:]))


def mgsp(a: np.ndarray, max_steps: int | None = None, step_hook=None):
    """Modified Gram-Schmidt with column pivoting.

    Returns (Q, R, trail) with A P = Q R, Q orthonormal and the R diagonal
    nonnegative and non-increasing.  Stops early once the largest remaining
    weight falls below m * eps * max(original weights), returning the
    rank-deficient truncation.  `a` itself is left untouched.
    """
    m, n = a.shape
    rmax = min(m, n)
    if max_steps is not None:
        rmax = min(rmax, max_steps)
    work = np.array(a, dtype=np.float64, order="F")
    weights = compute_weights(work)
    stop_level = m * EPS * float(np.max(weights.v_orig, initial=0.0))
    r_mat = np.zeros((rmax, n), order="F")
    trail = []
    for k in range(rmax):
        piv = determine_pivot(weights, k)
        if weights.v[piv] <= stop_level:
            break
        if piv != k:
            work[:, [k, piv]] = work[:, [piv, k]]
            r_mat[:k, [k, piv]] = r_mat[:k, [piv, k]]
            weights.swap(k, piv)
        col = work[:, k]
        rho = float(np.linalg.norm(col))
        if rho == 0.0:
            if piv != k:  # undo, so the truncated result matches the trail
                work[:, [k, piv]] = work[:, [piv, k]]
                r_mat[:k, [k, piv]] = r_mat[:k, [piv, k]]
                weights.swap(k, piv)
            break
        trail.append(piv)
        col /= rho
        r_row = col @ work[:, k + 1 :]
        work[:, k + 1 :] -= np.outer(col, r_row)
        r_mat[k, k] = rho
        r_mat[k, k + 1 :] = r_row
        weights.downdate(
            k + 1, r_row, lambda j: float(work[:, j] @ work[:, j])
        )
        if step_hook is not None:
            step_hook(k, work, weights)
    rank = len(trail)
    return work[:, :rank], r_mat[:rank, :], np.array(trail, dtype=np.int64)


def _var1_engine(
    a: np.ndarray,
    row0: int,
    col0: int,
    ncols: int,
    nsteps: int,
    t: np.ndarray,
    weights: WeightVector,
    fc: FlopCounter | None = None,
    step_hook=None,
):
    """Pivoted unblocked HQR over a window of `ncols` columns at (row0, col0).

    Runs `nsteps` steps of: pivot by weight, reflect, rank-1 trailing update
    across the window, accumulate T, downdate weights by the new R row.
    Column swaps act on full columns of `a` so R rows committed above the
    window stay consistent.  Returns (taus, local trail).
    """
    m = a.shape[0]
    taus = np.empty(nsteps)
    trail = np.empty(nsteps, dtype=np.int64)
    for k in range(nsteps):
        piv = determine_pivot(weights, k)
        trail[k] = piv
        if piv != k:
            a[:, [col0 + k, col0 + piv]] = a[:, [col0 + piv, col0 + k]]
            weights.swap(k, piv)
        rho, u_tail, tau = housev(a[row0 + k :, col0 + k])
        a[row0 + k, col0 + k] = rho
        a[row0 + k + 1 :, col0 + k] = u_tail
        taus[k] = tau
        if k > 0:
            t[:k, k] = (
                a[row0 + k, col0 : col0 + k]
                + u_tail @ a[row0 + k + 1 :, col0 : col0 + k]
            )
        t[k, k] = tau
        if k + 1 < ncols:
            row = a[row0 + k, col0 + k + 1 : col0 + ncols]
            tail = a[row0 + k + 1 :, col0 + k + 1 : col0 + ncols]
            w = (row + u_tail @ tail) / tau
            row -= w
            tail -= np.outer(u_tail, w)
            weights.downdate(
                k + 1,
                row,
                lambda j: float(
                    a[row0 + k + 1 :, col0 + j] @ a[row0 + k + 1 :, col0 + j]
                ),
            )
        if step_hook is not None:
            step_hook(k, a, weights)
    return taus, trail


def hqrp_unb(
    a: np.ndarray,
    steps: int | None = None,
    fc: FlopCounter | None = None,
    step_hook=None,
) -> QRFactors:
    """Classical column-pivoted Householder QR, full trailing updates."""
    m, n = a.shape
    r = min(m, n) if steps is None else min(steps, m, n)
    t = np.zeros((r, r))
    weights = compute_weights(a)
    taus, trail = _var1_engine(a, 0, 0, n, r, t, weights, fc, step_hook)
    return QRFactors(a, [0], [t], taus, trail)


def hqrp_panel_var3(
    a: np.ndarray,
    row0: int,
    col0: int,
    win: int,
    nsteps: int,
    t: np.ndarray,
    w_mat: np.ndarray,
    weights: WeightVector,
    fc: FlopCounter | None = None,
):
    """Delayed-update pivoted panel (Crout-flavored variant 3).

    Completes `nsteps` rows and columns of the window while touching the
    rest of the window only through the accumulated rows of `w_mat`
    (w_mat[k] = row k of T^{-T} U^T A-hat restricted to the window): the
    current column and current row are patched up against the stored
    original data, the reflector is computed, the next W row is derived
    and the finished R row committed.  The trailing block stays untouched;
    the caller owes it the single rank-`nsteps` update
    A22 -= U2 @ w_mat[:nsteps, nsteps:].

    Rows of `w_mat` at and beyond the current step are scratch and must
    not be read.  Returns (taus, local trail).
    """
    if w_mat.shape[0] < nsteps or w_mat.shape[1] < win:
        raise ValueError("W buffer smaller than the panel window")
    if len(weights) != win:
        raise ValueError("weight vector does not match the window width")
    taus = np.empty(nsteps)
    trail = np.empty(nsteps, dtype=np.int64)
    for k in range(nsteps):
        piv = determine_pivot(weights, k)
        trail[k] = piv
        if piv != k:
            a[:, [col0 + k, col0 + piv]] = a[:, [col0 + piv, col0 + k]]
            w_mat[:, [k, piv]] = w_mat[:, [piv, k]]
            weights.swap(k, piv)
        col = a[row0 + k :, col0 + k]
        if k > 0:
            col -= a[row0 + k :, col0 : col0 + k] @ w_mat[:k, k]
        rho, u_tail, tau = housev(col)
        a[row0 + k, col0 + k] = rho
        a[row0 + k + 1 :, col0 + k] = u_tail
        taus[k] = tau
        if k > 0:
            t[:k, k] = (
                a[row0 + k, col0 : col0 + k]
                + u_tail @ a[row0 + k + 1 :, col0 : col0 + k]
            )
        t[k, k] = tau
        row = a[row0 + k, col0 + k + 1 : col0 + win]
        if k > 0:
            row -= a[row0 + k, col0 : col0 + k] @ w_mat[:k, k + 1 : win]
        w_row = row + u_tail @ a[row0 + k + 1 :, col0 + k + 1 : col0 + win]
        if k > 0:
            w_row -= (u_tail @ a[row0 + k + 1 :, col0 : col0 + k]) @ w_mat[
                :k, k + 1 : win
            ]
        w_row /= tau
        w_mat[k, k + 1 : win] = w_row
        row -= w_row
        weights.downdate(
            k + 1,
            row,
            lambda j: _var3_residual_norm2(a, w_mat, row0, col0, k, j),
        )
    return taus, trail


def _var3_residual_norm2(a, w_mat, row0, col0, k, j) -> float:
    """Exact squared norm of window column j below row k, pre-deferred-update."""
    col = a[row0 + k + 1 :, col0 + j] - a[row0 + k + 1 :, col0 : col0 + k + 1] @ w_mat[
        : k + 1, j
    ]
    return float(col @ col)


def hqrp_blk(a: np.ndarray, b: int, fc: FlopCounter | None = None) -> QRFactors:
    """Blocked classical column-pivoted QR (variant-3 panels).

    Produces factors identical (to roundoff) to `hqrp_unb`, including the
    pivot trail under the shared smallest-index tie-break; only the
    rank-b trailing updates run as matrix-matrix multiplies.
    """
    if b < 1:
        raise ValueError("block size must be >= 1")
    m, n = a.shape
    r = min(m, n)
    weights = compute_weights(a)
    starts, blocks, taus_parts, trail_parts = [], [], [], []
    for j in range(0, r, b):
        bw = min(b, r - j)
        win = n - j
        t = np.zeros((bw, bw))
        w_mat = np.zeros((bw, win), order="F")
        local_weights = WeightVector(weights.v[j:])
        local_weights.v_orig = weights.v_orig[j:].copy()
        taus, trail = hqrp_panel_var3(a, j, j, win, bw, t, w_mat, local_weights, fc)
        a[j + bw :, j + bw :] -= matmul(a[j + bw :, j : j + bw], w_mat[:bw, bw:], fc)
        weights.v[j:] = local_weights.v
        weights.v_orig[j:] = local_weights.v_orig
        starts.append(j)
        blocks.append(t)
        taus_parts.append(taus)
        trail_parts.append(trail + j)
    return QRFactors(
        a,
        starts,
        blocks,
        np.concatenate(taus_parts) if taus_parts else np.empty(0),
        np.concatenate(trail_parts) if trail_parts else np.empty(0, dtype=np.int64),
    )
