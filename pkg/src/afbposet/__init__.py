"""Order dimension of planar posets whose minimal elements are accessible from below."""

from .embedding import EmbeddedDiagram, Envelope, LensRegion, WitnessPath, afb_by_ray, afb_check, to_embedding
from .geometry import Edge, PlaneDiagram, ValidationReport, Violation, validate
from .oracle import CorpusSpec, adversarial_non_afb, cross_check, random_afb_diagram, random_zero_diagram
from .poset import (
    AlternatingCycle,
    Poset,
    Realizer,
    closure_from_covers,
    dimension_exact,
    dual,
    find_strict_alternating_cycle,
    incomparable_pairs,
    is_linear_extension,
    is_realizer,
    reverse_set,
    standard_example,
    unfold,
)
from .realizers import (
    CoverFamily,
    MinProfile,
    PairLabel,
    classify_min_pair,
    cover_min_pairs,
    dfs_extension,
    min_profile,
    realize_afb,
    realize_planar_with_zero,
)
from .reduction import reduce_to_min_covered
from .svg import render_svg

__version__ = "0.1.0"
