"""Exact sequence algebra and a numerical range-distance probe for the skew
summation operator G on l1.

The exact layer (rational arithmetic throughout) computes G, its adjoint on
a finite bidual model, duality pairings, and selections of the normalized
duality map.  The numerical layer estimates how close G + lambda*J comes to
the constant sequence -1 and checks the estimates against the quadratic-form
lower bound that forces the closed range to be nonconvex for lambda < 4.
"""

from .duality import (
    Prop3PreconditionError,
    SelectionSpec,
    canonical_selection,
    clamp_selection,
    clamped_residual,
    duality_map_contains,
    prop3_witness,
    selection_spec,
)
from .operators import (
    BidualElem,
    bidual_norm,
    g_star_apply,
    g_star_quadratic,
    gossez_apply,
    pair1,
    t_apply,
    w_apply,
    wstar_pair,
    y_seq,
)
from .probe import (
    PatternCertificate,
    ProbeResult,
    distance_lower_bound,
    neg_e_star,
    pattern_lp,
    probe_exact,
    probe_heuristic,
    theorem_a_bound,
    theorem_consistency_check,
)
from .sequences import (
    EvConstSeq,
    SparseSeq,
    as_rational,
    e_m,
    e_star,
    format_rational,
    l1_norm,
    limit,
    pair0,
    parse_rational,
    point_mass,
    sup_norm,
)
from .simplex import LPProblem, LPSolution, lp_solve

__version__ = "0.1.0"

__all__ = [
    "BidualElem",
    "EvConstSeq",
    "LPProblem",
    "LPSolution",
    "PatternCertificate",
    "ProbeResult",
    "Prop3PreconditionError",
    "SelectionSpec",
    "SparseSeq",
    "as_rational",
    "bidual_norm",
    "canonical_selection",
    "clamp_selection",
    "clamped_residual",
    "distance_lower_bound",
    "duality_map_contains",
    "e_m",
    "e_star",
    "format_rational",
    "g_star_apply",
    "g_star_quadratic",
    "gossez_apply",
    "l1_norm",
    "limit",
    "lp_solve",
    "neg_e_star",
    "pair0",
    "pair1",
    "parse_rational",
    "pattern_lp",
    "point_mass",
    "probe_exact",
    "probe_heuristic",
    "prop3_witness",
    "selection_spec",
    "sup_norm",
    "t_apply",
    "theorem_a_bound",
    "theorem_consistency_check",
    "w_apply",
    "wstar_pair",
    "y_seq",
]
