"""Computational embedding of distributions into differential algebras of
generalized functions: Gevrey-graded mollifier nets, regularization over an
epsilon ladder, moderate/negligible classification, Fourier-decay
regularity and wave-front estimation, and a weight-function mode."""

__version__ = "0.1.0"

from .bb import (classify_net_bb, colombeau_crosscheck, fl_norm,
                 norm_equivalence_check, omega_norm_ladder)
from .distributions import (ModelDistribution, classical_wf_oracle,
                            regularize)
from .errors import (AliasingError, GfalgError, GridMismatchError,
                     ResolutionError, SaturationError)
from .estimators import (classify_net, landau_kolmogorov_check,
                         regularity_test, seminorm_ladder)
from .grids import GridSpec, forward, inverse
from .microlocal import (ConePartition, WaveFrontReport, sigma_g, wavefront,
                         wf_compare)
from .mollifier import (MollifierNet, build_mollifier, export_mollifier,
                        gevrey_bump, plateau_window, sample_phi_eps,
                        verify_mollifier)
from .nets import (EpsilonLadder, GeneralizedNumber, GeneralizedPoint,
                   NetFunction, UltradiffOperator, apply_ultradiff,
                   classify_generalized_number, combine, constant_embed,
                   point_value, scale, spectral_derivative, window_net)
from .weights import (WeightFunction, WeightSequence, assoc, assoc_inverse,
                      check_conditions, gevrey_pair, omega_check)

__all__ = [name for name in dir() if not name.startswith("_")]
