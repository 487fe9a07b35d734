"""Lightlike hypersurfaces of flat indefinite almost contact metric models.

Builds null frames, locates the structure vector field relative to the
screen (ascreen or inascreen), and checks the induced almost Hermitian
structure and the Gauss-Weingarten invariants numerically.
"""

from .classify import (ASCREEN, INASCREEN, Classification, ZetaDecomposition, check_independence,
                       classify, decompose_zeta, verify_calin)
from .errors import *  # noqa: F401,F403
from .gauss_weingarten import (FrameField, SecondFundamentalData, gw_convergence,
                               second_fundamental, verify_gw_identities)
from .hypersurface import (AffineHypersurface, Hypersurface, NullCone, NullFrame,
                           QuadricHypersurface, ScreenPolicy, build_null_frame,
                           check_dprime_invariance, project_to_surface)
from .induced import (InducedStructure, g_tilde, induced_phi_omega, nonexistence_witness,
                      verify_hermitian)
from .linalg import MetricTensor, Subspace, gram_det2, inner, lower_index, raise_index
from .structure import AmbientStructure, standard_model, validate_structure

__version__ = "0.1.0"
