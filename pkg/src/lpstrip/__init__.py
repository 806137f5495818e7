"""Laguerre-Polya differential operators acting on strip-rooted polynomials."""

__version__ = "0.1.0"

from .errors import DegreeCapError, DomainError, PairingError, RootFindingError
from .poly import (
    ComplexPolynomial,
    RootSet,
    StripReport,
    differentiate,
    evaluate,
    from_roots,
    monomial,
    scale_input,
    taylor_shift,
)
from .operators import (
    Cosine,
    ExpLinear,
    ExpQuadratic,
    LPDescriptor,
    PolynomialRealRoots,
    Product,
    Scaled,
    Sine,
    TaylorWindow,
    apply_cos,
    apply_gauss,
    apply_multiplier,
    apply_series,
    apply_shift,
    apply_sin,
    descriptor_from_dict,
    iterated_cos_approx,
    log_phi_eval_imag_axis,
    phi_eval,
    power_sequence,
    taylor_coeffs,
)
from .roots import find_roots, strip_width, symmetrize_conjugates
from .extremal import (
    ExtremalFamily,
    FamilyKind,
    R1Result,
    RootCase,
    apply_even_phi_fa,
    central_strip,
    laguerre_b,
    quadratic_testcase,
    r1_curve,
    solve_ga_roots,
    taylor_family,
    truncate_family,
)
from .experiments import (
    DensityReport,
    EnsembleSpec,
    SweepRecord,
    density_report,
    estimate_c_phi,
    generate_ensemble,
    measure_rprime,
    sweep,
)
