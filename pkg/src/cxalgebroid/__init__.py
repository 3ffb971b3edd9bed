"""Exact symbolic workbench for complex Lie algebroids over a single chart."""

from .algebroid import (
    CheckConfig,
    ChartedAlgebroid,
    Section,
    anchor_apply,
    bracket_sections,
    classify_algebroid,
    jacobiator,
    tangent_algebroid,
    zero_algebroid,
)
from .constructions import (
    check_complex_poisson,
    check_matched_pair,
    classify_vf_at,
    complex_sum,
    complexify,
    conjugate,
    decompose_complexified,
    fiberwise_bivector_compat,
    poisson_algebroid,
    pullback_at,
    vector_field_algebroid,
)
from .geometry import Bivector, OneForm, VectorField, lie_bracket_vf, parse_vector_field, schouten_trilinear
from .invariants import (
    amin_at,
    extract_real_algebroid,
    isotropy_at,
    pointwise_invariants_at,
    real_elements_at,
    scan_grid,
)
from .symexpr import GaussianRational, Point, RationalExpr, evaluate, parse

__version__ = "0.1.0"
