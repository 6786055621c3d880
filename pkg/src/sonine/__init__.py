"""Numerical construction of the even Sonine spaces at desk scale.

Truncated cosine / folded Dirichlet kernels, the prolate eigenbasis,
orthogonal projection onto functions vanishing with their transform on the
inner interval, and the entire structure functions E, A, B evaluated by two
independent routes.
"""

from .context import FLOAT64, context_for, hp_context
from .corpus import EvenL2Function, corpus_by_tag, corpus_function
from .engine import Workspace, workspace_for
from .errors import (AccuracyError, AccuracyWarning, ContractError,
                     DomainError, InvalidArgumentError, NumericError,
                     PoleError, SingularInputError)
from .fredholm import (ProlateBasis, fredholm_det, prolate_eigen,
                       solve_one_minus_D, solve_resolvent)
from .gammafn import gamma_completion, log_gamma
from .kernels import (DecayBound, InnerFunction, KernelMatrix,
                      build_d_lambda, build_f_lambda,
                      cosine_transform_numeric, cosine_transform_of_inner)
from .projection import (Evaluator, OuterFunction, SonineFunction, evaluator,
                         project, project_self_reciprocal,
                         project_vanishing_inner, verify_sonine)
from .quadrature import QuadratureRule, gauss_legendre
from .structure import (PsiPair, SonineDistribution, StructureEvaluation,
                        build_distributions, completed_mellin,
                        completed_mellin_sonine, compute_psi, e_theorem8,
                        e_theorem9, kernel_K, psi_for, structure_ab)
from .tails import cos_moment, cosine_power_tail, kappa_factor

__version__ = "0.1.0"
