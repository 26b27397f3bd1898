"""Rigidity of Hadamard matrices: exact constructions, bounds and desk-scale checks."""

from .bounds import (BoundQuery, bound_report, nayak_bound, theta_regime, thm1_submatrix_bound,
                     thm2_rigidity_bound, thm3_relaxed_bound, valiant_floor)
from .constructions import (Perturbation, block_decompose, diagonal_shift,
                            midrijanis_lower_report, zero_outside)
from .exact import ExactMatrix, QuadScalar, rank_exact, submatrix, weight_diff
from .hadamard import SignMatrix, is_generalized_hadamard, is_hadamard, is_symmetric, sylvester
from .oracle import (rank1_completion_feasible, rank1_rigidity_exact, rank_r_upper_search,
                     relaxed_upper_search)
from .protocol import (encode_rows, hadamard_povm_in_rowspace, regev_chain_check,
                       rowspace_isometry, success_probs, thm3_chain_check, verify_nayak)
from .spectral import orthonormal_factor, referee_chain_check
from .submatrix_verify import scan_all_submatrices

__version__ = "0.1.0"
