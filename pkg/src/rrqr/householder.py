"""Householder reflectors and unpivoted QR factorizations.

A reflector is parametrized as ``H(u) = I - (1/tau) u u^T`` with
``u = [1; u_tail]`` and ``tau = (u^T u) / 2``, so that ``H(u) x = rho e_0``.
The sign convention is ``rho = -sign(x_0) * ||x||`` (sign(0) = +1), which
keeps the head update cancellation-free; R diagonals therefore come out
with flipped signs relative to the input.

A factorization overwrites its input: R lives on and above the diagonal,
reflector tails below it.  Alongside each column panel an upper-triangular
block T accumulates, equal to the strictly upper part of U^T U plus
diag(tau), which turns the reflector product into the block form

    H(u_{b-1}) ... H(u_1) H(u_0) = I - U T^{-T} U^T

and hence Q = I - U T^{-1} U^T.  Blocked trailing updates and Q formation
all run through that identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .core import FlopCounter, matmul, solve_upper, trail_to_permutation


class Reflector(NamedTuple):
    rho: float
    u_tail: np.ndarray
    tau: float


def housev(x) -> Reflector:
    """Reflector taking `x` to rho * e_0.

    A zero input is mapped to the degenerate convention rho = 0,
    u_tail = 0, tau = 1/2 (the reflector negates the head coordinate and
    leaves the tail alone), which keeps factorizations of rank-deficient
    matrices total and every Q orthogonal.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or len(x) == 0:
        raise ValueError("housev needs a 1-D vector of length >= 1")
    amax = float(np.max(np.abs(x)))
    if amax == 0.0:
        return Reflector(0.0, np.zeros(len(x) - 1), 0.5)
    scaled = x / amax
    nrm = amax * float(np.sqrt(scaled @ scaled))
    sign = -1.0 if x[0] < 0 else 1.0
    rho = -sign * nrm
    u_tail = x[1:] / (x[0] - rho)  # x0 - rho = sign(x0)(|x0| + nrm), no cancellation
    tau = 0.5 * (1.0 + float(u_tail @ u_tail))
    return Reflector(rho, u_tail, tau)


@dataclass
class QRFactors:
    """Packed factorization: R above the diagonal, reflector tails below.

    `t_blocks[i]` is the T accumulator of the panel starting at column
    `panel_starts[i]`; `taus` concatenates the diagonal of every T block.
    `trail` is the pivot swap trail (empty for unpivoted factorizations).
    """

    packed: np.ndarray
    panel_starts: list
    t_blocks: list
    taus: np.ndarray
    trail: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    @property
    def m(self) -> int:
        return self.packed.shape[0]

    @property
    def n(self) -> int:
        return self.packed.shape[1]

    @property
    def r(self) -> int:
        return len(self.taus)

    def r_matrix(self) -> np.ndarray:
        return np.triu(self.packed[: self.r, :])

    def permutation(self) -> np.ndarray:
        return trail_to_permutation(self.trail, self.n)


def _unit_lower(panel: np.ndarray, width: int) -> np.ndarray:
    """Dense reflector block U from a packed panel (unit diagonal)."""
    u = np.tril(panel[:, :width], -1)
    u[np.arange(width), np.arange(width)] = 1.0
    return u


def _hqr_core(a: np.ndarray, t: np.ndarray, nsteps: int) -> np.ndarray:
    """Unblocked HQR with T accumulation over the leading `nsteps` columns.

    Every trailing column of `a` is updated rank-1 at each step; T gets
    one column per reflector (t_{0:i,i} = U_{i:,0:i}^T u_i, t_ii = tau_i).
    """
    n = a.shape[1]
    taus = np.empty(nsteps)
    for i in range(nsteps):
        rho, u_tail, tau = housev(a[i:, i])
        a[i, i] = rho
        a[i + 1 :, i] = u_tail
        taus[i] = tau
        if i + 1 < n:
            row = a[i, i + 1 :]
            tail = a[i + 1 :, i + 1 :]
            w = (row + u_tail @ tail) / tau
            row -= w
            tail -= np.outer(u_tail, w)
        if i > 0:
            t[:i, i] = a[i, :i] + u_tail @ a[i + 1 :, :i]
        t[i, i] = tau
    return taus


def hqr_unb_formT(panel: np.ndarray, t: np.ndarray | None = None):
    """Unblocked panel factorization; returns (T, taus), panel overwritten."""
    h, w = panel.shape
    if w > h:
        raise ValueError(f"panel must have at most as many columns as rows ({h}x{w})")
    if t is None:
        t = np.zeros((w, w))
    taus = _hqr_core(panel, t, w)
    return t, taus


def hqr_unb(a: np.ndarray, fc: FlopCounter | None = None) -> QRFactors:
    """Plain unblocked HQR of any shape; runs min(m, n) steps in place."""
    r = min(a.shape)
    t = np.zeros((r, r))
    taus = _hqr_core(a, t, r)
    return QRFactors(a, [0], [t], taus)


def apply_block_qt(
    panel: np.ndarray, t: np.ndarray, b_mat: np.ndarray, fc: FlopCounter | None = None
) -> None:
    """Apply the accumulated block reflector: B := (I - U T^{-1} U^T)^T B.

    `panel` is the packed panel holding U below its diagonal; `b_mat` must
    have as many rows as the panel and is updated in place as
    B -= U W with W = T^{-T} (U^T B).
    """
    width = t.shape[0]
    if panel.shape[0] != b_mat.shape[0]:
        raise ValueError("panel and target row counts differ")
    if width > panel.shape[1]:
        raise ValueError("T order exceeds panel width")
    if width == 0 or b_mat.shape[1] == 0:
        return
    u = _unit_lower(panel, width)
    w = solve_upper(t, matmul(u.T, b_mat, fc), transpose=True, fc=fc)
    b_mat -= matmul(u, w, fc)


def hqr_blk(a: np.ndarray, b: int, fc: FlopCounter | None = None) -> QRFactors:
    """Blocked HQR via the accumulated-reflector trailing update."""
    if b < 1:
        raise ValueError("block size must be >= 1")
    m, n = a.shape
    r = min(m, n)
    starts, blocks, taus = [], [], []
    for j in range(0, r, b):
        bw = min(b, r - j)
        t, panel_taus = hqr_unb_formT(a[j:, j : j + bw])
        apply_block_qt(a[j:, j : j + bw], t, a[j:, j + bw :], fc)
        starts.append(j)
        blocks.append(t)
        taus.append(panel_taus)
    return QRFactors(a, starts, blocks, np.concatenate(taus) if taus else np.empty(0))


def form_q(f: QRFactors, k: int, fc: FlopCounter | None = None) -> np.ndarray:
    """First `k` columns of Q = H(u_0) H(u_1) ... H(u_{r-1})."""
    if k > f.m or k < 0:
        raise ValueError(f"cannot form {k} columns of a {f.m}-row Q")
    q = np.eye(f.m, k, order="F")
    for j, t in zip(reversed(f.panel_starts), reversed(f.t_blocks)):
        bw = t.shape[0]
        u = _unit_lower(f.packed[j:, j : j + bw], bw)
        rows = q[j:, :]
        w = solve_upper(t, matmul(u.T, rows, fc), fc=fc)
        rows -= matmul(u, w, fc)
    return q
