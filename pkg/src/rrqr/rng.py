"""Seeded pseudo-random numbers with a pinned, portable bit stream.

The raw generator is xoshiro256++ seeded through SplitMix64; normal
variates come from the Box-Muller transform applied to pairs of 53-bit
uniforms.  The exact stream is part of the public contract: a given seed
produces bitwise-identical output on every platform, independent of the
numpy version, so seeded results can be frozen into regression tests.

Stream layout, per call:

* ``raw(n)`` consumes ``n`` generator steps.
* ``uniforms(n)`` maps each 64-bit word to ``((w >> 11) + 1) * 2**-53``,
  a value in ``(0, 1]``.
* ``normals(n)`` consumes ``2 * ceil(n / 2)`` words; pair ``(u1, u2)``
  yields ``r*cos(2*pi*u2), r*sin(2*pi*u2)`` with ``r = sqrt(-2*ln(u1))``,
  interleaved in that order.

The inner loop is jitted with numba when available; the pure-Python
fallback produces the identical stream.
"""

from __future__ import annotations

import math

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

_MASK = (1 << 64) - 1


def _splitmix64(seed, count):
    """Expand a 64-bit seed into `count` well-mixed words."""
    x = seed & _MASK
    out = []
    for _ in range(count):
        x = (x + 0x9E3779B97F4A7C15) & _MASK
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        out.append(z ^ (z >> 31))
    return out


def _fill_py(state, out):
    s0 = int(state[0])
    s1 = int(state[1])
    s2 = int(state[2])
    s3 = int(state[3])
    for i in range(out.shape[0]):
        x = (s0 + s3) & _MASK
        out[i] = (((x << 23) & _MASK | (x >> 41)) + s0) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) & _MASK) | (s3 >> 19)
    state[0] = s0
    state[1] = s1
    state[2] = s2
    state[3] = s3


if numba is not None:

    @numba.njit(cache=True)
    def _fill_numba(state, out):  # pragma: no cover - numba-compiled
        s0 = state[0]
        s1 = state[1]
        s2 = state[2]
        s3 = state[3]
        for i in range(out.shape[0]):
            x = s0 + s3
            out[i] = ((x << np.uint64(23)) | (x >> np.uint64(41))) + s0
            t = s1 << np.uint64(17)
            s2 ^= s0
            s3 ^= s1
            s1 ^= s2
            s0 ^= s3
            s2 ^= t
            s3 = (s3 << np.uint64(45)) | (s3 >> np.uint64(19))
        state[0] = s0
        state[1] = s1
        state[2] = s2
        state[3] = s3

    _fill = _fill_numba
else:  # pragma: no cover
    _fill = _fill_py


class Xoshiro256pp:
    """xoshiro256++ stream with Box-Muller normal variates.

    The state transition and output scrambler follow the reference
    definition exactly; see the module docstring for how uniforms and
    normals are derived from the word stream.
    """

    def __init__(self, seed: int):
        words = _splitmix64(int(seed), 4)
        if all(w == 0 for w in words):
            words[0] = 1  # all-zero state is the one invalid xoshiro state
        self._state = np.array(words, dtype=np.uint64)

    def raw(self, n: int) -> np.ndarray:
        """Next `n` raw 64-bit words."""
        out = np.empty(int(n), dtype=np.uint64)
        _fill(self._state, out)
        return out

    def uniforms(self, n: int) -> np.ndarray:
        """Next `n` doubles, uniform on (0, 1]."""
        w = self.raw(n)
        return ((w >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * 2.0**-53

    def normals(self, n: int) -> np.ndarray:
        """Next `n` standard normal variates."""
        n = int(n)
        if n == 0:
            return np.empty(0)
        half = (n + 1) // 2
        u1 = self.uniforms(half)
        u2 = self.uniforms(half)
        r = np.sqrt(-2.0 * np.log(u1))
        ang = (2.0 * math.pi) * u2
        out = np.empty(2 * half)
        out[0::2] = r * np.cos(ang)
        out[1::2] = r * np.sin(ang)
        return out[:n]


def gaussian_matrix(rng: Xoshiro256pp, rows: int, cols: int) -> np.ndarray:
    """rows x cols matrix of i.i.d. standard normals, filled column-major."""
    if rows < 1 or cols < 1:
        raise ValueError("gaussian_matrix needs rows, cols >= 1")
    return rng.normals(rows * cols).reshape((rows, cols), order="F")
