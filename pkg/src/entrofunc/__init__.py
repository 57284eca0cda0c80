"""Tools for two entropy-type functional equations on the unit interval.

The first equation ties f(xy) + f((1-x)y) - f(y) to (f(x) + f(1-x)) * y**q;
its regular solutions are the Tsallis/Shannon entropy generators, while a
derivation on an exact rational function field supplies solutions that no
regularity assumption can reach. The second equation is the sine-style
product rule f(xy) = g(x) f(y) + g(y) f(x) for the two-power generator
g(x) = (x**alpha + x**beta) / 2, solved by anchor-based reconstruction.

Submodules: exactfield (Q(t) arithmetic and derivations), families (closed
solution forms and entropies), equations (residuals and grid scans), cocycle
(two-place Cauchy-difference system), reconstruct (anchor reconstruction),
fit (least-squares recovery), cli (command line front end).
"""

from .exactfield import (
    DEFAULT_TAU,
    DEGREE_CAP,
    BigRational,
    DegreeCapError,
    FieldElement,
    FieldParseError,
    PoleError,
    Poly,
    T,
    approx_value,
    as_field_element,
    derivation_apply,
    field_arith,
    parse_field_element,
    poly_gcd,
    random_unit_interval_element,
)
from .families import (
    CUSTOM_REGISTRY,
    Custom,
    DomainError,
    ExactDerivationAffine,
    PowerAffine,
    PowerDiff,
    PowerLog,
    ProbVector,
    SolutionFamily,
    XLogX,
    family_eval,
    format_family_literal,
    parse_family_literal,
    pos_pow,
    shannon_entropy,
    tsallis_entropy,
)
from .equations import (
    DomainDn,
    ResidualReport,
    check_additive_on_d2,
    check_logarithmic,
    check_multiplicative,
    eq1_residual,
    eq1_residual_exact,
    eq2_residual,
    generator_value,
    grid_scan,
    parse_grid_spec,
)
from .cocycle import (
    BranchMismatchError,
    CocycleMap,
    CocycleSystemReport,
    cf_map,
    check_cocycle_system,
    ng_decomposition_check,
    rf_map,
    substitution_forward,
    substitution_inverse,
)
from .reconstruct import (
    AnchorError,
    GeneratorFunction,
    IllConditionedError,
    MultiplicativeVerdict,
    ReconstructionAnchors,
    anchor_gap,
    classify_eq2_solution,
    find_anchors,
    vincze_reconstruct,
)
from .fit import (
    BranchError,
    FitResult,
    SampleSet,
    continuity_filter,
    fit_eq1,
    fit_eq2,
)
from .cli import (
    REPORT_SCHEMA,
    RunReport,
    read_exact_samples,
    read_samples,
    write_exact_samples,
    write_samples,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # exactfield
    "BigRational",
    "Poly",
    "FieldElement",
    "T",
    "DegreeCapError",
    "PoleError",
    "FieldParseError",
    "DEGREE_CAP",
    "DEFAULT_TAU",
    "as_field_element",
    "field_arith",
    "derivation_apply",
    "approx_value",
    "parse_field_element",
    "poly_gcd",
    "random_unit_interval_element",
    # families
    "DomainError",
    "PowerAffine",
    "XLogX",
    "PowerDiff",
    "PowerLog",
    "ExactDerivationAffine",
    "Custom",
    "SolutionFamily",
    "CUSTOM_REGISTRY",
    "ProbVector",
    "family_eval",
    "pos_pow",
    "shannon_entropy",
    "tsallis_entropy",
    "parse_family_literal",
    "format_family_literal",
    # equations
    "DomainDn",
    "ResidualReport",
    "eq1_residual",
    "eq1_residual_exact",
    "eq2_residual",
    "generator_value",
    "check_additive_on_d2",
    "check_multiplicative",
    "check_logarithmic",
    "grid_scan",
    "parse_grid_spec",
    # cocycle
    "CocycleMap",
    "CocycleSystemReport",
    "BranchMismatchError",
    "cf_map",
    "rf_map",
    "check_cocycle_system",
    "ng_decomposition_check",
    "substitution_forward",
    "substitution_inverse",
    # reconstruct
    "GeneratorFunction",
    "ReconstructionAnchors",
    "MultiplicativeVerdict",
    "AnchorError",
    "IllConditionedError",
    "anchor_gap",
    "find_anchors",
    "vincze_reconstruct",
    "classify_eq2_solution",
    # fit
    "SampleSet",
    "FitResult",
    "BranchError",
    "fit_eq1",
    "fit_eq2",
    "continuity_filter",
    # cli
    "RunReport",
    "REPORT_SCHEMA",
    "read_samples",
    "write_samples",
    "read_exact_samples",
    "write_exact_samples",
]
