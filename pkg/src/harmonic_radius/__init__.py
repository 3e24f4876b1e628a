"""Injectivity and sense-preservation radii for planar harmonic mappings
f = h + conj(g) whose co-analytic part is g = w*h with |w| <= 1."""

from .certify import (
    Certificate,
    Check,
    GridSpec,
    Verdict,
    boundary_simple,
    certify_sense_preserving,
    check_growth_bound,
    check_schwarz_pick,
    check_starlike_half,
    infer_injectivity,
    injective_pairwise,
    replay,
)
from .expr import (
    Blaschke,
    ConstantFn,
    HalfPlane,
    Koebe,
    Monomial,
    build_catalog,
    derivative,
    evaluate,
    parse_catalog,
)
from .mapping import HarmonicMapping, dilatation_ratio, eval_f, f1, f2, jacobian, make_mapping, parse_mapping
from .radius import (
    RadiusResult,
    bound_U,
    bound_V,
    dU_dzeta_at1,
    dV_dzeta_at1,
    radius_n1,
    radius_n2,
    sharpness_witness,
    theorem_radius,
)
from .render import emit_svg, sample_image

__version__ = "0.1.0"
