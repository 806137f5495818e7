"""Laguerre-Polya functions as symbolic descriptors, and phi(D) on polynomials.

A descriptor knows its derivatives at the origin, how to evaluate itself,
how to take its logarithm on the imaginary axis, and where its real zeros
are.  ``apply_series`` turns the derivatives into the terminating sum
``sum_k a_k f^(k)``; the shift/cosine/sine closed forms are provided
alongside so the two routes can be checked against each other.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import DegreeCapError, DomainError
from .poly import (
    MAX_DEGREE,
    REAL_TOL,
    ComplexPolynomial,
    from_roots,
    taylor_shift,
)

TypeValue = Union[float, str]
MAX_ITER_COS_N = 64


def _clog1p(w: complex) -> complex:
    return complex(np.log1p(np.complex128(w)))


def _log_sum_exp(u: complex, v: complex) -> complex:
    """log(e^u + e^v) on the principal branch, without overflow."""
    if u.real < v.real:
        u, v = v, u
    return u + _clog1p(cmath.exp(v - u))


def _log_diff_exp(u: complex, v: complex) -> complex:
    """log(e^u - e^v)."""
    if u.real >= v.real:
        return u + _clog1p(-cmath.exp(v - u))
    return v + 1j * math.pi + _clog1p(-cmath.exp(u - v))


def _snap(x: float) -> float:
    # cos(pi/2) and friends come out as ~6e-17; they are exact zeros
    return 0.0 if abs(x) < 1e-15 else x


class LPDescriptor:
    """Base for the built-in Laguerre-Polya families.

    Subclasses are frozen dataclasses carrying their parameters plus the
    declared growth metadata (``declared_order``, ``declared_type``,
    ``genus``).  The metadata is trusted, never estimated.
    """

    family = "abstract"

    def derivatives(self, K: int) -> np.ndarray:
        """phi^(k)(0) for k = 0..K."""
        raise NotImplementedError

    def evaluate(self, z: complex) -> complex:
        raise NotImplementedError

    def log_at_imag(self, t: float) -> complex:
        """Principal-ish log(phi(i t)); imaginary part defined mod 2 pi."""
        raise NotImplementedError

    def count_zeros(self, t: float) -> int:
        """Number of zeros (with multiplicity) in the open interval (-t, t)."""
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": self.params(),
            "declared_order": self.declared_order,
            "declared_type": self.declared_type,
            "genus": self.genus,
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def gaussian_weight(self) -> float:
        """The gamma of the exp(-gamma z^2) factor, for the convergence guard."""
        return 0.0


@dataclass(frozen=True)
class PolynomialRealRoots(LPDescriptor):
    """c z^m prod(1 - z/root) with real nonzero roots."""

    roots: tuple = ()
    c: float = 1.0
    m: int = 0
    declared_order: float = 0.0
    declared_type: TypeValue = "not-applicable"
    genus: int = 0
    family = "PolynomialRealRoots"

    def __post_init__(self):
        roots = tuple(float(r) for r in self.roots)
        if any(r == 0.0 for r in roots):
            raise ValueError("zero roots belong in m, not in roots")
        if self.c == 0:
            raise ValueError("c must be nonzero")
        if self.m < 0:
            raise ValueError("m must be nonnegative")
        if len(roots) + self.m > MAX_DEGREE:
            raise DegreeCapError("polynomial phi exceeds degree cap")
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "m", int(self.m))

    def polynomial(self) -> ComplexPolynomial:
        lead = self.c * math.prod(-1.0 / r for r in self.roots)
        p = from_roots(self.roots, lead)
        return ComplexPolynomial(np.concatenate([np.zeros(self.m), p.coeffs.real]))

    def derivatives(self, K):
        a = self.polynomial().coeffs.real
        out = np.zeros(K + 1)
        n = min(K, a.size - 1)
        for k in range(n + 1):
            out[k] = a[k] * math.factorial(k)
        return out

    def evaluate(self, z):
        z = complex(z)
        val = self.c * z**self.m
        for r in self.roots:
            val *= 1.0 - z / r
        return val

    def log_at_imag(self, t):
        acc = cmath.log(self.c)
        if self.m:
            if t == 0:
                return complex(-math.inf, 0.0)
            acc += self.m * cmath.log(1j * t)
        for r in self.roots:
            acc += cmath.log(1.0 - 1j * t / r)
        return acc

    def count_zeros(self, t):
        if t <= 0:
            return 0
        return self.m + sum(1 for r in self.roots if abs(r) < t)

    def params(self):
        return {"roots": list(self.roots), "c": self.c, "m": self.m}


@dataclass(frozen=True)
class ExpLinear(LPDescriptor):
    """exp(delta z); phi(D) is the shift by delta."""

    delta: float = 0.0
    declared_order: float = 1.0
    declared_type: TypeValue = None
    genus: int = 1
    family = "ExpLinear"

    def __post_init__(self):
        object.__setattr__(self, "delta", float(self.delta))
        if self.declared_type is None:
            object.__setattr__(self, "declared_type", abs(self.delta))

    def derivatives(self, K):
        return self.delta ** np.arange(K + 1, dtype=float)

    def evaluate(self, z):
        return cmath.exp(self.delta * complex(z))

    def log_at_imag(self, t):
        return complex(0.0, self.delta * t)

    def count_zeros(self, t):
        return 0

    def params(self):
        return {"delta": self.delta}


@dataclass(frozen=True)
class ExpQuadratic(LPDescriptor):
    """exp(-gamma z^2) with gamma >= 0."""

    gamma: float = 0.0
    declared_order: float = 2.0
    declared_type: TypeValue = None
    genus: int = 0
    family = "ExpQuadratic"

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        object.__setattr__(self, "gamma", float(self.gamma))
        if self.declared_type is None:
            object.__setattr__(self, "declared_type", self.gamma)

    def derivatives(self, K):
        out = np.zeros(K + 1)
        out[0] = 1.0
        # d_{2j+2} = d_{2j} * (-2 gamma) * (2j+1)
        for k in range(2, K + 1, 2):
            out[k] = out[k - 2] * (-2.0 * self.gamma) * (k - 1)
        return out

    def evaluate(self, z):
        return cmath.exp(-self.gamma * complex(z) ** 2)

    def log_at_imag(self, t):
        return complex(self.gamma * t * t, 0.0)

    def count_zeros(self, t):
        return 0

    def params(self):
        return {"gamma": self.gamma}

    def gaussian_weight(self):
        return self.gamma


def _trig_cycle(b: float, sine: bool) -> tuple:
    cb, sb = _snap(math.cos(b)), _snap(math.sin(b))
    if sine:
        return (sb, cb, -sb, -cb)
    return (cb, -sb, -cb, sb)


@dataclass(frozen=True)
class Cosine(LPDescriptor):
    """cos(a z + b)."""

    a: float = 1.0
    b: float = 0.0
    declared_order: float = 1.0
    declared_type: TypeValue = None
    genus: int = 1
    family = "Cosine"

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("a must be positive")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if self.declared_type is None:
            object.__setattr__(self, "declared_type", self.a)

    def derivatives(self, K):
        cyc = _trig_cycle(self.b, sine=False)
        return np.array([self.a**k * cyc[k % 4] for k in range(K + 1)])

    def evaluate(self, z):
        return cmath.cos(self.a * complex(z) + self.b)

    def log_at_imag(self, t):
        w = complex(self.b, self.a * t)
        return _log_sum_exp(1j * w, -1j * w) - math.log(2.0)

    def count_zeros(self, t):
        # zeros where a z + b = (k + 1/2) pi
        lo = (-self.a * t + self.b) / math.pi - 0.5
        hi = (self.a * t + self.b) / math.pi - 0.5
        return max(0, math.ceil(hi) - math.floor(lo) - 1)

    def params(self):
        return {"a": self.a, "b": self.b}


@dataclass(frozen=True)
class Sine(LPDescriptor):
    """sin(a z + b)."""

    a: float = 1.0
    b: float = 0.0
    declared_order: float = 1.0
    declared_type: TypeValue = None
    genus: int = 1
    family = "Sine"

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("a must be positive")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if self.declared_type is None:
            object.__setattr__(self, "declared_type", self.a)

    def derivatives(self, K):
        cyc = _trig_cycle(self.b, sine=True)
        return np.array([self.a**k * cyc[k % 4] for k in range(K + 1)])

    def evaluate(self, z):
        return cmath.sin(self.a * complex(z) + self.b)

    def log_at_imag(self, t):
        w = complex(self.b, self.a * t)
        return _log_diff_exp(1j * w, -1j * w) - complex(math.log(2.0), math.pi / 2)

    def count_zeros(self, t):
        lo = (self.b - self.a * t) / math.pi
        hi = (self.b + self.a * t) / math.pi
        return max(0, math.ceil(hi) - math.floor(lo) - 1)

    def params(self):
        return {"a": self.a, "b": self.b}


def _max_type(factors, order):
    types = [f.declared_type for f in factors if f.declared_order == order]
    if all(isinstance(v, (int, float)) for v in types):
        return float(sum(types))
    if "not-applicable" in types:
        return "not-applicable"
    return "minimal"


@dataclass(frozen=True)
class Product(LPDescriptor):
    """Pointwise product of descriptors; phi(D) is the composition."""

    factors: tuple = ()
    declared_order: float = None
    declared_type: TypeValue = None
    genus: int = None
    family = "Product"

    def __post_init__(self):
        factors = tuple(self.factors)
        if not all(isinstance(f, LPDescriptor) for f in factors):
            raise TypeError("Product factors must be LPDescriptor instances")
        object.__setattr__(self, "factors", factors)
        order = max((f.declared_order for f in factors), default=0.0)
        if self.declared_order is None:
            object.__setattr__(self, "declared_order", order)
        if self.declared_type is None:
            object.__setattr__(self, "declared_type", _max_type(factors, order))
        if self.genus is None:
            object.__setattr__(self, "genus", max((f.genus for f in factors), default=0))

    def derivatives(self, K):
        out = np.zeros(K + 1)
        out[0] = 1.0
        for f in self._merged_factors():
            out = _leibniz(out, f.derivatives(K))
        return out

    def _merged_factors(self) -> list:
        # exp(d1 z) exp(d2 z) = exp((d1 + d2) z) exactly; going through the
        # Leibniz sum instead cancels terms of size (|d1| + |d2|)^k
        delta, gamma, rest = 0.0, 0.0, []
        for f in self.factors:
            if isinstance(f, ExpLinear):
                delta += f.delta
            elif isinstance(f, ExpQuadratic):
                gamma += f.gamma
            else:
                rest.append(f)
        if delta:
            rest.append(ExpLinear(delta))
        if gamma:
            rest.append(ExpQuadratic(gamma))
        return rest

    def evaluate(self, z):
        return math.prod((f.evaluate(z) for f in self.factors), start=1 + 0j)

    def log_at_imag(self, t):
        return sum((f.log_at_imag(t) for f in self.factors), 0j)

    def count_zeros(self, t):
        return sum(f.count_zeros(t) for f in self.factors)

    def params(self):
        return {"factors": [f.to_dict() for f in self.factors]}

    def gaussian_weight(self):
        return sum(f.gaussian_weight() for f in self.factors)


@dataclass(frozen=True)
class Scaled(LPDescriptor):
    """phi(s z); realizes phi(s D) from phi(D)."""

    inner: LPDescriptor = None
    s: float = 1.0
    declared_order: float = None
    declared_type: TypeValue = None
    genus: int = None
    family = "Scaled"

    def __post_init__(self):
        if not isinstance(self.inner, LPDescriptor):
            raise TypeError("Scaled needs an inner descriptor")
        if self.s == 0:
            raise ValueError("scale must be nonzero")
        object.__setattr__(self, "s", float(self.s))
        if self.declared_order is None:
            object.__setattr__(self, "declared_order", self.inner.declared_order)
        if self.declared_type is None:
            t = self.inner.declared_type
            if isinstance(t, (int, float)):
                t = abs(self.s) ** self.inner.declared_order * t
            object.__setattr__(self, "declared_type", t)
        if self.genus is None:
            object.__setattr__(self, "genus", self.inner.genus)

    def derivatives(self, K):
        return self.inner.derivatives(K) * self.s ** np.arange(K + 1, dtype=float)

    def evaluate(self, z):
        return self.inner.evaluate(self.s * complex(z))

    def log_at_imag(self, t):
        return self.inner.log_at_imag(self.s * t)

    def count_zeros(self, t):
        return self.inner.count_zeros(abs(self.s) * t)

    def params(self):
        return {"inner": self.inner.to_dict(), "s": self.s}

    def gaussian_weight(self):
        return self.inner.gaussian_weight() * self.s**2


_FAMILIES = {
    cls.family: cls
    for cls in (PolynomialRealRoots, ExpLinear, ExpQuadratic, Cosine, Sine, Product, Scaled)
}

_SHORTHANDS = {
    "one": lambda: PolynomialRealRoots(),
    "cos": lambda: Cosine(1.0, 0.0),
    "sin": lambda: Sine(1.0, 0.0),
    "gauss": lambda: ExpQuadratic(0.5),
    "exp": lambda: ExpLinear(1.0),
}


def descriptor_from_dict(data) -> LPDescriptor:
    """Inverse of ``LPDescriptor.to_dict``; also accepts shorthand names."""
    if isinstance(data, str):
        try:
            return _SHORTHANDS[data]()
        except KeyError:
            raise ValueError(f"unknown descriptor shorthand {data!r}") from None
    if not isinstance(data, dict) or "family" not in data:
        raise ValueError("descriptor JSON needs a 'family' tag")
    fam = data["family"]
    if fam in _SHORTHANDS and "params" not in data:
        return _SHORTHANDS[fam]()
    try:
        cls = _FAMILIES[fam]
    except KeyError:
        raise ValueError(f"unknown family {fam!r}") from None
    params = dict(data.get("params", {}))
    if fam == "Product":
        params["factors"] = tuple(descriptor_from_dict(f) for f in params.get("factors", ()))
    elif fam == "Scaled":
        params["inner"] = descriptor_from_dict(params["inner"])
    elif fam == "PolynomialRealRoots":
        params["roots"] = tuple(params.get("roots", ()))
    for key in ("declared_order", "declared_type", "genus"):
        if key in data:
            params[key] = data[key]
    try:
        return cls(**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {fam}: {exc}") from None


def _leibniz(d1: np.ndarray, d2: np.ndarray) -> np.ndarray:
    """Derivatives at 0 of a product from those of the factors."""
    K = d1.size - 1
    out = np.zeros(K + 1)
    for k in range(K + 1):
        binom = np.array([math.comb(k, i) for i in range(k + 1)], dtype=float)
        out[k] = np.sum(binom * d1[: k + 1] * d2[k::-1])
    return out


@dataclass(frozen=True)
class TaylorWindow:
    """Maclaurin coefficients a_0..a_K of phi.

    ``derivs`` holds k! a_k; the series application works from these so
    that high-order coefficients do not underflow before being multiplied
    by the equally large falling factorials of f.
    """

    coeffs: tuple
    K: int
    derivs: tuple = field(default=(), repr=False)


def _over_factorial(x: float, k: int) -> float:
    if x == 0.0:
        return 0.0
    if k <= 170:
        return x / float(math.factorial(k))
    # k! overflows a double here; divide in logs and let a_k underflow
    return math.copysign(math.exp(math.log(abs(x)) - math.lgamma(k + 1)), x)


def taylor_coeffs(phi: LPDescriptor, K: int) -> TaylorWindow:
    if K < 0:
        raise ValueError("K must be nonnegative")
    if K > MAX_DEGREE:
        raise DegreeCapError(f"window order {K} exceeds cap {MAX_DEGREE}")
    d = np.asarray(phi.derivatives(K), dtype=float)
    a = [_over_factorial(float(d[k]), k) for k in range(K + 1)]
    return TaylorWindow(tuple(a), K, tuple(float(x) for x in d))


@lru_cache(maxsize=8)
def _binomial_rows(n: int) -> np.ndarray:
    """T[k, j] = C(j + k, k) for j + k <= n, exact integers rounded once."""
    T = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        b = 1
        for j in range(n + 1 - k):
            if j:
                b = b * (j + k) // j
            T[k, j] = float(b)
    T.flags.writeable = False
    return T


def _check_poly(f: ComplexPolynomial) -> None:
    if f.degree > MAX_DEGREE:
        raise DegreeCapError(f"degree {f.degree} exceeds cap {MAX_DEGREE}")


def apply_window(window: TaylorWindow, f: ComplexPolynomial) -> ComplexPolynomial:
    """sum_k a_k f^(k) using a precomputed window (K >= deg f)."""
    _check_poly(f)
    n = f.degree
    if n < 0:
        return f
    if window.K < n:
        raise ValueError(f"window order {window.K} below degree {n}")
    c = f.coeffs
    d = window.derivs
    T = _binomial_rows(n)
    out = np.zeros(n + 1, dtype=complex)
    for k in range(n + 1):
        if d[k] != 0.0:
            out[: n + 1 - k] += d[k] * T[k, : n + 1 - k] * c[k:]
    return ComplexPolynomial(out)


def convergence_guard(gamma_phi: float, gamma_f: float) -> None:
    """phi(D) f converges when gamma_phi * gamma_f < 1/4.

    Polynomial inputs carry no Gaussian factor (gamma_f = 0), so this never
    binds inside the package; it is kept for callers composing their own.
    """
    if gamma_phi * gamma_f >= 0.25:
        raise DomainError("series diverges: gamma_phi * gamma_f >= 1/4")


def apply_series(phi: LPDescriptor, f: ComplexPolynomial) -> ComplexPolynomial:
    """phi(D) f as the exactly terminating sum sum_{k<=deg f} a_k f^(k)."""
    _check_poly(f)
    convergence_guard(phi.gaussian_weight(), 0.0)
    if f.degree < 0:
        return f
    return apply_window(taylor_coeffs(phi, f.degree), f)


def apply_shift(beta: complex, f: ComplexPolynomial) -> ComplexPolynomial:
    """exp(beta D) f = f(z + beta)."""
    _check_poly(f)
    return taylor_shift(f, beta)


def _require_real(f: ComplexPolynomial) -> None:
    if not f.is_real():
        raise ValueError("closed-form cos/sin operators need a real-coefficient f")


def _realify(g: np.ndarray, scale: float) -> ComplexPolynomial:
    resid = float(np.max(np.abs(g.imag), initial=0.0))
    if resid > REAL_TOL * max(scale, 1e-300):
        raise ArithmeticError(f"imaginary residue {resid:.3e} exceeds rounding budget")
    return ComplexPolynomial(g.real)


def _shift_pair(a: float, f: ComplexPolynomial):
    plus = taylor_shift(f, 1j * a).coeffs
    minus = taylor_shift(f, -1j * a).coeffs
    scale = max(float(np.max(np.abs(plus), initial=0.0)), f.scale())
    return plus, minus, scale


def apply_cos(a: float, b: float, f: ComplexPolynomial) -> ComplexPolynomial:
    """cos(aD + b) f = (e^{ib} f(z + ia) + e^{-ib} f(z - ia)) / 2."""
    if not a > 0:
        raise ValueError("a must be positive")
    _check_poly(f)
    _require_real(f)
    if f.is_zero():
        return f
    plus, minus, scale = _shift_pair(a, f)
    e = complex(_snap(math.cos(b)), _snap(math.sin(b)))
    g = 0.5 * (e * plus + e.conjugate() * minus)
    return _realify(g, scale)


def apply_sin(a: float, b: float, f: ComplexPolynomial) -> ComplexPolynomial:
    """sin(aD + b) f = (e^{ib} f(z + ia) - e^{-ib} f(z - ia)) / (2i)."""
    if not a > 0:
        raise ValueError("a must be positive")
    _check_poly(f)
    _require_real(f)
    if f.is_zero():
        return f
    plus, minus, scale = _shift_pair(a, f)
    e = complex(_snap(math.cos(b)), _snap(math.sin(b)))
    g = (e * plus - e.conjugate() * minus) / 2j
    return _realify(g, scale)


def apply_gauss(alpha: float, f: ComplexPolynomial) -> ComplexPolynomial:
    """exp(-alpha^2 D^2 / 2) f."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return apply_series(ExpQuadratic(alpha * alpha / 2.0), f)


def iterated_cos_approx(alpha: float, n: int, f: ComplexPolynomial) -> ComplexPolynomial:
    """cos(alpha D / n) applied n^2 times; tends to apply_gauss(alpha, f)."""
    if not 1 <= n <= MAX_ITER_COS_N:
        raise ValueError(f"n must lie in [1, {MAX_ITER_COS_N}]")
    g = f
    for _ in range(n * n):
        g = apply_cos(alpha / n, 0.0, g)
    return g


def apply_multiplier(gamma, f: ComplexPolynomial) -> ComplexPolynomial:
    """sum_k gamma_k a_k z^k."""
    gamma = np.asarray(gamma, dtype=float)
    if gamma.size < f.degree + 1:
        raise ValueError(f"multiplier sequence has {gamma.size} terms, need {f.degree + 1}")
    return ComplexPolynomial(f.coeffs * gamma[: f.degree + 1])


def power_sequence(alpha: float, n: int) -> np.ndarray:
    """alpha^k for k = 0..n-1."""
    return float(alpha) ** np.arange(n, dtype=float)


def phi_eval(phi: LPDescriptor, z: complex) -> complex:
    return complex(phi.evaluate(z))


def log_phi_eval_imag_axis(phi: LPDescriptor, t: float, tol: float = 1e-9) -> float:
    """log phi(it) for phi real and positive on the imaginary axis."""
    val = phi.log_at_imag(float(t))
    if not math.isfinite(val.real):
        raise DomainError(f"phi vanishes at {t}i")
    phase = math.remainder(val.imag, 2.0 * math.pi)
    if abs(phase) > tol * max(1.0, abs(val.imag)):
        raise DomainError(f"phi({t}i) is not positive (phase {phase:.3g})")
    return val.real
