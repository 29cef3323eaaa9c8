"""Randomized blocked column-pivoted QR with sample-matrix downdating.

Pivot blocks are chosen on a small sketch Y = G A, where G is Gaussian
with b + p rows (p is the oversampling margin, default 5): b steps of
pivoted Gram-Schmidt on Y pick the columns, the panel is then factored
with locally pivoted Householder QR, and the trailing matrix gets one
accumulated-reflector update per panel.

Two ways to refresh the sketch between panels:

* ``basic``    -- draw a fresh G every iteration and multiply it against
                  the updated trailing block;
* ``downdate`` -- keep Y current by subtracting the contribution of the
                  finished panel, choosing the next randomizing matrix as
                  G Q so that only thin products are needed:

      Y2_new = Y2 - (G1 - (G1 U11 + G2 U21) T11^{-1} U11^T) R12,

  where the bracket is exactly the panel block of the updated G, which is
  maintained alongside Y.

Both modes produce a valid factorization for every seed; only the pivot
choice is random.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import SimpleNamespace

import numpy as np

from .core import FlopCounter, matmul, permutation_to_trail, solve_upper
from .householder import QRFactors, _unit_lower, apply_block_qt
from .pivoting import WeightVector, _var1_engine, mgsp
from .rng import Xoshiro256pp, gaussian_matrix


@dataclass
class Sketch:
    """Sampling state: effective randomizing matrix G and sample matrix Y.

    G has b + p rows and one column per row of A; Y = G A has one column
    per column of A.  `col_offset` marks the first unfinished column; in
    downdating mode Y(:, col_offset:) always equals G-current times the
    current trailing block, up to roundoff.
    """

    g: np.ndarray
    y: np.ndarray
    b: int
    p: int
    col_offset: int = 0

    @property
    def rows(self) -> int:
        return self.g.shape[0]


def build_sketch(
    rng: Xoshiro256pp, a: np.ndarray, b: int, p: int = 5, fc: FlopCounter | None = None
) -> Sketch:
    """Draw G ((b+p) x m) and form Y = G A."""
    if b < 1 or p < 0:
        raise ValueError("need block size >= 1 and oversampling >= 0")
    g = gaussian_matrix(rng, b + p, a.shape[0])
    return Sketch(g, matmul(g, a, fc), b, p)


def select_block_pivots(y: np.ndarray, b: int) -> np.ndarray:
    """Swap trail of the first `b` pivots of a working copy of `y`.

    Runs b steps of pivoted Gram-Schmidt; `y` is not modified.  If the
    sketch runs out of mass early the trail is padded with identity swaps.
    """
    if b > y.shape[1]:
        raise ValueError(f"cannot pick {b} pivots from {y.shape[1]} columns")
    _, _, trail = mgsp(y, max_steps=b)
    if len(trail) < b:
        pad = np.arange(len(trail), b, dtype=np.int64)
        trail = np.concatenate([trail, pad])
    return trail


def downdate_sketch(
    sk: Sketch,
    u_panel: np.ndarray,
    t11: np.ndarray,
    r12: np.ndarray,
    iter_swaps,
    fc: FlopCounter | None = None,
) -> None:
    """Advance the sketch past a finished panel.

    `u_panel` is the packed panel column block (U11 over U21), `t11` its
    T accumulator, `r12` the freshly committed R rows right of the panel,
    and `iter_swaps` the (position, other) column swaps this iteration
    performed, in order.  Updates Y columns by those swaps, replaces G by
    G Q restricted to the panel's reflectors, and downdates the trailing
    part of Y.
    """
    bw = t11.shape[0]
    if bw == 0:
        return
    j = sk.col_offset
    if u_panel.shape[0] != sk.g.shape[1] - j:
        raise ValueError("panel height does not match the remaining G columns")
    if r12.shape != (bw, sk.y.shape[1] - j - bw):
        raise ValueError("R12 shape does not match the sketch partition")
    for pos, other in iter_swaps:
        if pos != other:
            sk.y[:, [pos, other]] = sk.y[:, [other, pos]]
    u = _unit_lower(u_panel, bw)
    gu = matmul(sk.g[:, j:], u, fc)
    s = solve_upper(t11, gu.T, transpose=True, fc=fc).T  # S = (G U) T^{-1}
    sk.g[:, j:] -= matmul(s, u.T, fc)
    sk.y[:, j + bw :] -= matmul(sk.g[:, j : j + bw], r12, fc)
    sk.col_offset = j + bw


def hqrrp_blk(
    a: np.ndarray,
    b: int,
    rng: Xoshiro256pp,
    p: int = 5,
    mode: str = "downdate",
    fc: FlopCounter | None = None,
    loop_hook=None,
) -> QRFactors:
    """Randomized blocked column-pivoted Householder QR, in place.

    Each iteration samples the trailing block, permutes the chosen b
    columns to the front, factors the panel with locally pivoted
    unblocked QR (so R diagonals decrease in magnitude within each
    diagonal block), applies the accumulated reflector to the trailing
    matrix, and refreshes the sketch per `mode` ("basic" or "downdate").

    `loop_hook(state)` is called at every loop head with the current
    col_offset, sketch arrays, packed matrix, panels, and permutation;
    it exists so invariants can be checked mid-flight.
    """
    if mode not in ("basic", "downdate"):
        raise ValueError(f"unknown mode {mode!r}")
    if b < 1 or p < 0:
        raise ValueError("need block size >= 1 and oversampling >= 0")
    m, n = a.shape
    r = min(m, n)
    perm = np.arange(n, dtype=np.int64)
    sk = build_sketch(rng, a, b, p, fc) if mode == "downdate" else None
    starts, blocks, taus_parts = [], [], []
    j = 0
    while j < r:
        bw = min(b, r - j)
        if mode == "basic":
            g = gaussian_matrix(rng, b + p, m - j)
            y_trail = matmul(g, a[j:, j:], fc)
        else:
            y_trail = sk.y[:, j:]
        if loop_hook is not None:
            loop_hook(
                SimpleNamespace(
                    col_offset=j,
                    y=y_trail,
                    g=sk.g if sk is not None else g,
                    a=a,
                    panels=list(zip(starts, blocks)),
                    perm=perm.copy(),
                    mode=mode,
                )
            )
        sel = select_block_pivots(y_trail, bw)
        iter_swaps = []
        for i, s in enumerate(sel):
            pi, pj = j + i, j + int(s)
            iter_swaps.append((pi, pj))
            if pi != pj:
                a[:, [pi, pj]] = a[:, [pj, pi]]
                perm[[pi, pj]] = perm[[pj, pi]]
        t = np.zeros((bw, bw))
        panel = a[j:, j : j + bw]
        local_w = WeightVector(np.einsum("ij,ij->j", panel, panel))
        taus, local_trail = _var1_engine(a, j, j, bw, bw, t, local_w, fc)
        for k, s in enumerate(local_trail):
            pi, pj = j + k, j + int(s)
            iter_swaps.append((pi, pj))
            if pi != pj:
                perm[[pi, pj]] = perm[[pj, pi]]
        apply_block_qt(a[j:, j : j + bw], t, a[j:, j + bw :], fc)
        if mode == "downdate":
            downdate_sketch(sk, a[j:, j : j + bw], t, a[j : j + bw, j + bw :], iter_swaps, fc)
        starts.append(j)
        blocks.append(t)
        taus_parts.append(taus)
        j += bw
    # Sketch selection and panel pivoting both swap at each position, so the
    # trail is the canonical decomposition of the net permutation (full
    # length: displaced columns shuffle the tail region too).
    return QRFactors(
        a,
        starts,
        blocks,
        np.concatenate(taus_parts) if taus_parts else np.empty(0),
        permutation_to_trail(perm),
    )
