import numpy as np
import pytest

from rrqr import Xoshiro256pp, gaussian_matrix

try:  # at the sizes tested here, BLAS thread-pool spinning dominates runtime
    from threadpoolctl import threadpool_limits

    _BLAS_LIMIT = threadpool_limits(limits=1, user_api="blas")
except ImportError:  # pragma: no cover
    pass


def gauss(seed, m, n):
    """Seeded Gaussian test matrix."""
    return gaussian_matrix(Xoshiro256pp(seed), m, n)


def reflector_dense(u_full, tau):
    """Explicit H(u) = I - (1/tau) u u^T."""
    u = np.asarray(u_full, dtype=np.float64)
    return np.eye(len(u)) - np.outer(u, u) / tau


def packed_reflector(packed, taus, i, size):
    """Dense H(u_i) of a packed factorization, embedded in `size` rows."""
    u = np.zeros(size)
    u[i] = 1.0
    u[i + 1 :] = packed[i + 1 :, i]
    return reflector_dense(u, taus[i])


def reflector_product(packed, taus, width, size):
    """Explicit H(u_{width-1}) ... H(u_1) H(u_0), applied-first rightmost."""
    prod = np.eye(size)
    for i in range(width):
        prod = packed_reflector(packed, taus, i, size) @ prod
    return prod


@pytest.fixture
def rng():
    return Xoshiro256pp(0)
