"""Compactly supported normalized tight frame wavelets in the plane.

For a 2x2 expansive integer matrix A with |det A| = 2, this package walks a
seven-step pipeline: conjugate A to one of six canonical forms, solve the
quadratic system for low-pass taps, form the transfer polynomial m0,
synthesize the scaling function by a truncated Fourier product, derive the
wavelet by the high-pass rule, pull it back through the conjugation, and
certify the frame identities numerically.
"""

from .errors import (DegenerateInput, FrameletError, GridTooCoarse, InvalidN0,
                     MismatchedFilter, NoConvergence, NotReducible)
from .fields import SampledField, bilinear, from_csv, to_csv
from .filters import FilterEvaluator, eval_m0, eval_m0_grid, max_abs_m0, qmf_residual
from .lattice import (CANONICAL_FORMS, LatticeData, Reduction, coset_rep, det,
                      is_expansive, parity_vector, reduce_to_canonical,
                      sigma, special_vectors)
from .lawton import (FilterCoeffs, LawtonResidual, SolverOptions, haar_pair,
                     lawton_index_set, load_filter, residuals, solve, validate)
from .scaling import (SynthesisParams, ghat_truncated, refinement_residual,
                      support_radius, synthesize_phi)
from .verify import (TestFunction, VerificationReport, click_residual,
                     coefficient, frame_ratio, gaussian_bump, indicator_box,
                     level_coefficients, l_j, make_report, standard_suite,
                     telescoping_residual, trig_windowed)
from .wavelet import WaveletSystem, build_system, highpass_taps, pull_back, synthesize_psi

__version__ = "0.1.0"

__all__ = [
    "CANONICAL_FORMS",
    "DegenerateInput",
    "FilterCoeffs",
    "FilterEvaluator",
    "FrameletError",
    "GridTooCoarse",
    "InvalidN0",
    "LatticeData",
    "LawtonResidual",
    "MismatchedFilter",
    "NoConvergence",
    "NotReducible",
    "Reduction",
    "SampledField",
    "SolverOptions",
    "SynthesisParams",
    "TestFunction",
    "VerificationReport",
    "WaveletSystem",
    "bilinear",
    "build_system",
    "click_residual",
    "coefficient",
    "coset_rep",
    "det",
    "eval_m0",
    "eval_m0_grid",
    "frame_ratio",
    "from_csv",
    "gaussian_bump",
    "ghat_truncated",
    "haar_pair",
    "highpass_taps",
    "indicator_box",
    "is_expansive",
    "lawton_index_set",
    "level_coefficients",
    "l_j",
    "load_filter",
    "make_report",
    "max_abs_m0",
    "parity_vector",
    "pull_back",
    "qmf_residual",
    "reduce_to_canonical",
    "refinement_residual",
    "residuals",
    "sigma",
    "solve",
    "special_vectors",
    "standard_suite",
    "support_radius",
    "synthesize_phi",
    "synthesize_psi",
    "telescoping_residual",
    "to_csv",
    "trig_windowed",
    "validate",
    "__version__",
]
