"""Spectral enclosures for non-self-adjoint discrete Dirac operators.

The free operator ``D0`` acts on square-summable sequences of vectors in
``C^2`` as a 2x2-block tridiagonal Laurent matrix with mass ``m``.  The
package evaluates bound functions whose level sets enclose the eigenvalues
of ``D0 + V`` for complex matrix potentials ``V`` of a given norm, traces the
enclosure boundaries, and checks them against dense eigensolves.
"""
from .curves import (
    CurveSet,
    Grid,
    component_count_check,
    default_box,
    gamma_q_points,
    l1_box,
    newton_polish,
    real_axis_crossings,
    region_d_scan,
    trace_l1_boundary,
    trace_level_set,
)
from .enclosures import (
    EnclosureSpec,
    Kind,
    Topology,
    bound_function,
    classify_topology,
    conjugate_exponent,
    f_q,
    g_p,
    h_q,
    in_l1_enclosure,
    in_region_D,
    l1_boundary_function,
    l1_prefactor,
    lambda_pm,
    psi_q,
    topology_thresholds,
)
from .errors import *  # noqa: F401,F403
from .operators import (
    Potential,
    birman_schwinger_matrix,
    bs_norm_bounds,
    build_truncated_dirac,
    load_potential,
    lp_norm,
    polarize,
    truncated_spectrum,
)
from .resolvent import (
    free_truncation,
    hs_bound,
    hs_norm_closed_form,
    t0_spectral_norm,
    t1_spectral_norm,
    t_matrix,
    truncated_free_resolvent,
)
from .spectral_map import (
    KPoint,
    dist_to_spectrum,
    essential_spectrum,
    k_from_lambda,
    lambda_pair_from_k,
    on_spectrum,
)
from .verify import bs_equivalence_suite, optimality_suite, run_containment

__version__ = "0.1.0"
