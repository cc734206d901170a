"""Heat kernels on SU(2) and the spectral reconstruction of the Hopf fibration.

Submodules
----------
special   Jacobi polynomials P_k^(0,n) and the theta-type sums.
su2       quaternion group geometry, pair coordinates, Haar measure, fibers.
kernels   the subelliptic kernel p, the round kernels q_t and q_tilde,
          and the integral/convolution cross-identities.
rigidity  spectral embeddings into S^3 and S^2, submersion and fiber checks,
          volume growth.
verify    named verification suites with JSON reports.
cli       the hopf-heat command-line tool.
"""

from .kernels import (
    EvalPolicy,
    SpectralIndex,
    p_integral,
    p_series,
    q_eval,
    q_t_kernel,
    q_tilde,
)
from .su2 import GroupElement, PairCoords, haar_sample, pair_coords

__version__ = "0.1.0"

__all__ = [
    "EvalPolicy",
    "SpectralIndex",
    "GroupElement",
    "PairCoords",
    "p_series",
    "p_integral",
    "q_eval",
    "q_t_kernel",
    "q_tilde",
    "pair_coords",
    "haar_sample",
    "__version__",
]
