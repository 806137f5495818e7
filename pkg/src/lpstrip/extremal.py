"""Extremal cosine families and the closed-form strip widths they produce.

f_a(z) = cos(a(z - ir)) cos(a(z + ir)) = (cos 2az + cosh 2ar) / 2 and
g_a = f_a^2 have all their zeros on the lines Im z = +-r.  Because
cos(wz) is an eigenfunction of phi(D) for even phi, phi(D) f_a and
phi(D) g_a are again trigonometric and their zeros can be written down
exactly.  All ratios of hyperbolic quantities are handled as logarithms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegreeCapError, DomainError
from .logspace import LN2, acosh_exp, log_add_exp, logcosh
from .operators import (
    LPDescriptor,
    Scaled,
    apply_series,
    log_phi_eval_imag_axis,
    taylor_coeffs,
)
from .poly import MAX_DEGREE, ComplexPolynomial, StripReport, from_roots
from .roots import find_roots, strip_width

MAX_FACTORS = 40


class FamilyKind(str, enum.Enum):
    FA = "FA"
    GA = "GA"


class RootCase(str, enum.Enum):
    REAL_ROOTS = "REAL_ROOTS"
    COMPLEX_ROOTS = "COMPLEX_ROOTS"


@dataclass(frozen=True)
class ExtremalFamily:
    kind: FamilyKind
    a: float
    r: float
    m: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        if not (self.a > 0 and self.r > 0):
            raise ValueError("a and r must be positive")
        if self.m < 1:
            raise ValueError("m must be a positive integer")


@dataclass(frozen=True)
class R1Result:
    """Where the zeros of phi(D) applied to an extremal family end up.

    ``r1`` is the half-width of the new strip (0 when the zeros are real).
    In the real case ``real_offset`` is the horizontal displacement t with
    cos(2a t) equal to the ratio, so the zeros sit at (pi/2 + k pi)/a +- t.
    ``lower_bound`` is the a-dependent bound r - (log phi(2ai) + log 2)/(2a)
    for the FA family, ``None`` otherwise.
    """

    case: RootCase
    r1: float
    ratio_log: float
    real_offset: float | None = None
    lower_bound: float | None = None

    def to_dict(self) -> dict:
        out = {"case": self.case.value, "r1": self.r1, "ratio_log": self.ratio_log}
        if self.real_offset is not None:
            out["real_offset"] = self.real_offset
        if self.lower_bound is not None:
            out["lower_bound"] = self.lower_bound
        return out


def family_zeros(fam: ExtremalFamily, N: int) -> np.ndarray:
    """The 4N zeros of f_a closest to the origin (8N with multiplicity for g_a)."""
    if not 1 <= N <= MAX_FACTORS:
        raise DegreeCapError(f"N must lie in [1, {MAX_FACTORS}]")
    x = (np.pi / 2 + np.pi * np.arange(N)) / fam.a
    xs = np.concatenate([-x[::-1], x])
    zeros = np.concatenate([xs + 1j * fam.r, xs - 1j * fam.r])
    if fam.kind is FamilyKind.GA:
        zeros = np.repeat(zeros, 2)
    return zeros


def truncate_family(fam: ExtremalFamily, N: int) -> ComplexPolynomial:
    """Polynomial surrogate for f_a or g_a built from its central zeros.

    The normalization makes the constant and leading coefficients
    reciprocal in magnitude.  The product is formed in the variable z/G
    (G the geometric mean modulus of the zeros) and mapped back through
    logarithms, which keeps N up to the cap representable in doubles.
    """
    zeros = family_zeros(fam, N)
    n = zeros.size
    log_g = float(np.mean(np.log(np.abs(zeros))))
    core = from_roots(zeros / math.exp(log_g)).coeffs.real
    expo = log_g * (0.5 * n - np.arange(n + 1))
    return ComplexPolynomial(core * np.exp(expo))


def taylor_family(fam: ExtremalFamily, degree: int = 64) -> ComplexPolynomial:
    """Maclaurin polynomial of f_a or g_a up to the given even degree.

    Unlike the zero truncation, whose central zeros drift by O(1/N), this
    surrogate is accurate to rounding near the origin, which is all the
    central-column cross-checks look at.
    """
    if degree < 2 or degree % 2:
        raise ValueError("degree must be even and at least 2")
    if degree > MAX_DEGREE:
        raise DegreeCapError(f"degree {degree} exceeds cap {MAX_DEGREE}")
    a, r = fam.a, fam.r
    j = np.arange(degree // 2 + 1)
    # cos(wz) = sum (-1)^j w^(2j) z^(2j) / (2j)!
    log_fact = np.array([math.lgamma(2 * k + 1) for k in j])
    sign = (-1.0) ** j

    def cos_series(w):
        out = np.zeros(degree + 1)
        out[::2] = sign * np.exp(2 * j * math.log(w) - log_fact)
        return out

    if fam.kind is FamilyKind.FA:
        c = 0.5 * cos_series(2 * a)
        c[0] += 0.5 * math.cosh(2 * a * r)
    else:
        # g_a = 1/4 + cosh(4ar)/8 + cos(4az)/8 + cosh(2ar) cos(2az)/2
        c = cos_series(4 * a) / 8 + 0.5 * math.cosh(2 * a * r) * cos_series(2 * a)
        c[0] += 0.25 + math.cosh(4 * a * r) / 8
    return ComplexPolynomial(c)


def is_even(phi: LPDescriptor, K: int = 16, tol: float = 1e-12) -> bool:
    d = np.asarray(phi.derivatives(K), dtype=float)
    scale = max(float(np.max(np.abs(d[::2]))), 1e-300)
    return bool(np.all(np.abs(d[1::2]) <= tol * scale))


def _check_even_normalized(phi: LPDescriptor, name: str = "phi") -> None:
    if not is_even(phi):
        raise DomainError(f"{name} must be even")
    phi0 = phi.derivatives(0)[0]
    if abs(phi0 - 1.0) > 1e-12:
        raise DomainError(f"{name}(0) = {phi0} but must equal 1")


def _real_offset(ratio_log: float, a: float) -> float:
    return math.acos(min(1.0, math.exp(ratio_log))) / (2.0 * a)


def apply_even_phi_fa(phi: LPDescriptor, fam: ExtremalFamily) -> R1Result:
    """Zeros of phi(D) f_a for even phi with phi(0) = 1.

    phi(D) f_a = phi(2ai) (cos 2az + cosh(2ar) / phi(2ai)) / 2, so the
    zeros are complex with |Im| = acosh(ratio) / 2a when the ratio exceeds
    one and real otherwise.
    """
    if fam.kind is not FamilyKind.FA:
        raise ValueError("apply_even_phi_fa needs an FA family")
    _check_even_normalized(phi)
    a, r = fam.a, fam.r
    log_phi = log_phi_eval_imag_axis(phi, 2.0 * a)
    ratio_log = logcosh(2.0 * a * r) - log_phi
    bound = r - (log_phi + LN2) / (2.0 * a)
    if ratio_log <= 0.0:
        return R1Result(RootCase.REAL_ROOTS, 0.0, ratio_log,
                        real_offset=_real_offset(ratio_log, a), lower_bound=bound)
    r1 = acosh_exp(ratio_log) / (2.0 * a)
    return R1Result(RootCase.COMPLEX_ROOTS, r1, ratio_log, lower_bound=bound)


def r1_curve(phi: LPDescriptor, r: float, a_grid) -> list:
    """apply_even_phi_fa over an ascending grid of frequencies."""
    grid = [float(a) for a in a_grid]
    if not grid:
        raise ValueError("grid must be nonempty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly ascending")
    return [(a, apply_even_phi_fa(phi, ExtremalFamily(FamilyKind.FA, a, r))) for a in grid]


def solve_ga_roots(phi1: LPDescriptor, m: int, fam: ExtremalFamily) -> R1Result:
    """Zeros of phi(D) g_a for phi = z^(2m) phi1.

    A zero satisfies a quadratic in cos(2az).  The minus branch
    cos(2az) = -v with
        v = (cosh(2ar) phi1(2ai) + sqrt(cosh^2(2ar) phi1(2ai)^2
             + 2^(4m-1) phi1(4ai)^2)) / (2^(2m) phi1(4ai))
    carries the widest zeros; the plus branch always has |cos| < 1.
    """
    if fam.kind is not FamilyKind.GA:
        raise ValueError("solve_ga_roots needs a GA family")
    if m < 1:
        raise ValueError("m must be positive")
    _check_even_normalized(phi1, "phi1")
    a, r = fam.a, fam.r
    l2 = log_phi_eval_imag_axis(phi1, 2.0 * a)
    l4 = log_phi_eval_imag_axis(phi1, 4.0 * a)
    lead = logcosh(2.0 * a * r) + l2
    other = 0.5 * (4 * m - 1) * LN2 + l4
    root_term = 0.5 * log_add_exp(2.0 * lead, 2.0 * other)
    log_v = log_add_exp(lead, root_term) - (2 * m * LN2 + l4)
    if log_v <= 0.0:
        return R1Result(RootCase.REAL_ROOTS, 0.0, log_v, real_offset=_real_offset(log_v, a))
    return R1Result(RootCase.COMPLEX_ROOTS, acosh_exp(log_v) / (2.0 * a), log_v)


def laguerre_b(phi: LPDescriptor) -> float:
    """b_phi = phi'(0)^2 - phi''(0) for phi(0) = 1."""
    d = taylor_coeffs(phi, 2).derivs
    if abs(d[0] - 1.0) > 1e-12:
        raise ValueError(f"phi(0) = {d[0]}; normalize phi first")
    return d[1] * d[1] - d[2]


def quadratic_testcase(phi: LPDescriptor, a: float, r: float) -> StripReport:
    """Strip of phi(aD)(z^2 + r^2).

    The exact result is (z + a phi'(0))^2 + r^2 - b_phi a^2, so the
    half-width should be sqrt(max(0, r^2 - b_phi a^2)).
    """
    if not (a > 0 and r > 0):
        raise ValueError("a and r must be positive")
    d0 = taylor_coeffs(phi, 0).derivs[0]
    if abs(d0 - 1.0) > 1e-12:
        raise ValueError(f"phi(0) = {d0}; normalize phi first")
    g = apply_series(Scaled(phi, a), ComplexPolynomial([r * r, 0.0, 1.0]))
    if g.degree < 1:
        return StripReport(0.0, 0, 0, 1e-12)
    return strip_width(find_roots(g))


def predicted_quadratic_width(phi: LPDescriptor, a: float, r: float) -> float:
    return math.sqrt(max(0.0, r * r - laguerre_b(phi) * a * a))


def central_strip(p: ComplexPolynomial, a: float) -> float:
    """max |Im| over the roots of p in the central column |Re| < pi/a.

    Zeros of truncated families drift near the truncation edge; the column
    around the origin holds the two nearest lattice columns +-pi/(2a).
    """
    roots = find_roots(p).as_array()
    central = roots[np.abs(roots.real) < math.pi / a]
    if central.size == 0:
        return 0.0
    return float(np.max(np.abs(central.imag)))
