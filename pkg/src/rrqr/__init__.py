"""Dense QR factorization with classical and randomized column pivoting."""

from .core import (
    EPS,
    FlopCounter,
    apply_pivot_trail,
    as_matrix,
    frobenius_norm,
    permutation_to_trail,
    trail_to_permutation,
)
from .householder import (
    QRFactors,
    Reflector,
    apply_block_qt,
    form_q,
    hqr_blk,
    hqr_unb,
    hqr_unb_formT,
    housev,
)
from .mio import read_matrix, write_matrix
from .pivoting import (
    WeightVector,
    compute_weights,
    determine_pivot,
    downdate_weights,
    hqrp_blk,
    hqrp_panel_var3,
    hqrp_unb,
    mgsp,
)
from .quality import (
    QualityReport,
    eckart_young_bounds,
    factorization_errors,
    orthogonality_error,
    reconstruction_error,
    spectral_norm_est,
    truncation_errors,
)
from .randomized import Sketch, build_sketch, downdate_sketch, hqrrp_blk, select_block_pivots
from .rng import Xoshiro256pp, gaussian_matrix
from .testmats import (
    gen_bie_single_layer,
    gen_fast_decay,
    gen_kahan,
    gen_s_shape,
    jacobi_svd_values,
)

__all__ = [
    "EPS",
    "FlopCounter",
    "QRFactors",
    "QualityReport",
    "Reflector",
    "Sketch",
    "WeightVector",
    "Xoshiro256pp",
    "apply_block_qt",
    "apply_pivot_trail",
    "as_matrix",
    "build_sketch",
    "compute_weights",
    "determine_pivot",
    "downdate_sketch",
    "downdate_weights",
    "eckart_young_bounds",
    "factorization_errors",
    "form_q",
    "frobenius_norm",
    "gaussian_matrix",
    "gen_bie_single_layer",
    "gen_fast_decay",
    "gen_kahan",
    "gen_s_shape",
    "hqr_blk",
    "hqr_unb",
    "hqr_unb_formT",
    "hqrp_blk",
    "hqrp_panel_var3",
    "hqrp_unb",
    "hqrrp_blk",
    "housev",
    "jacobi_svd_values",
    "mgsp",
    "orthogonality_error",
    "permutation_to_trail",
    "read_matrix",
    "reconstruction_error",
    "select_block_pivots",
    "spectral_norm_est",
    "trail_to_permutation",
    "truncation_errors",
    "write_matrix",
]

__version__ = "0.1.0"
