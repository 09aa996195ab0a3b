"""Quaternionic function theory around the global operator V_q.

The Fueter variables ``mu_u(x) = x_u (1 + x0 / qvec)`` and their monomials
``mu^alpha`` span the kernel of ``V_q = d/dx0 - qvec^-1 sum_u x_u d/dx_u``.
This package evaluates them, manipulates power series in them under the
star product, builds the Arveson-type reproducing kernels, and constructs
Blaschke factors and state-space rational functions.
"""
from .errors import (BadBounds, DegreeCap, DegreeMismatch, DomainError, NotHermitian,
                     OutsideOmega1, PointOutsideOmegaA, SegmentLeavesDomain, ShapeMismatch,
                     SingularConstantTerm, SingularPencil, SingularVectorPart,
                     StencilOutOfDomain, VqError, ZeroDivisor)
from .fueter import (MultiIndex, PointH, arveson_diag, arveson_diag_tail, c_alpha_n,
                     expand_qn, in_omega_1, in_omega_rRrho, mu_alpha, mu_row, mu_u,
                     multi_indices, multi_indices_upto, zeta_alpha)
from .operators import (FDScheme, MonomialField, PowerField, SeriesField, apply_Gq, apply_Vq,
                        apply_Vq_bar, euler, euler_exponential, gleason_remainder,
                        gleason_residual)
from .quat import (QMatrix, Quaternion, complexify, is_psd, min_eigenvalue, qsolve, quat_inv,
                   quat_mul, rank1_spectral, symmetric_product, vec_part)
from .rational import (BlaschkePoint, Realization, blaschke_realization, blaschke_restriction,
                       blaschke_series, blaschke_tail, halmos, rational_restrict,
                       rational_series, rational_tail, signature)
from .rkhs import (CoefficientFamily, arveson_closed_form, backward_shift, gram_matrix,
                   kernel_eval, kernel_tail, multiplier_kernel_gram, shift, shift_adjoint,
                   structural_defect)
from .series import FueterSeries, ck_extend, evaluate, star_inverse, star_mul, star_resolvent

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
