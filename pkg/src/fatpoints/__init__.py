"""Regularity of fat point schemes in projective space, computed exactly over GF(p)."""

from .bounds import (
    LinearSystemSpec,
    bdp_bound,
    bound_report,
    fulton_bound,
    generalized_segre_bound,
    ldim,
    lvdim,
    segre_bound_p2,
    segre_bound_pn,
    vdim,
)
from .cohomology import CohomologyReport, conditions_matrix, regularity_index
from .geometry import FatPointScheme, LinearSpan, PrimePoint, gen_general, gen_rnc, span_of
from .gfp import DEFAULT_PRIME, DenseMatrix, FieldContext, rank

__all__ = [
    "DEFAULT_PRIME", "CohomologyReport", "DenseMatrix", "FatPointScheme", "FieldContext",
    "LinearSpan", "LinearSystemSpec", "PrimePoint", "bdp_bound", "bound_report",
    "conditions_matrix", "fulton_bound", "gen_general", "gen_rnc", "generalized_segre_bound",
    "ldim", "lvdim", "rank", "regularity_index", "segre_bound_p2", "segre_bound_pn",
    "span_of", "vdim",
]
