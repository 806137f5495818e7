"""Dense complex polynomials in ascending-degree storage.

``coeffs[k]`` multiplies ``z**k``.  Values are immutable; every operation
returns a new polynomial.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import DegreeCapError

MAX_DEGREE = 512
TRIM_ABS = 1e-300
REAL_TOL = 1e-12


def _check_degree(n: int) -> None:
    if n > MAX_DEGREE:
        raise DegreeCapError(f"degree {n} exceeds cap {MAX_DEGREE}")


class ComplexPolynomial:
    """Polynomial with complex coefficients, lowest degree first."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=()):
        c = np.array(coeffs, dtype=complex).ravel()
        k = c.size
        while k > 0 and abs(c[k - 1]) <= TRIM_ABS:
            k -= 1
        c = c[:k].copy()
        c.flags.writeable = False
        self._c = c

    # -- basic accessors -------------------------------------------------

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports -1."""
        return self._c.size - 1

    def is_zero(self) -> bool:
        return self._c.size == 0

    @property
    def leading(self) -> complex:
        return complex(self._c[-1]) if self._c.size else 0j

    def scale(self) -> float:
        return float(np.max(np.abs(self._c))) if self._c.size else 0.0

    def is_real(self, tol: float = REAL_TOL) -> bool:
        if self.is_zero():
            return True
        return bool(np.max(np.abs(self._c.imag)) <= tol * self.scale())

    def real_part(self) -> ComplexPolynomial:
        return ComplexPolynomial(self._c.real)

    # -- arithmetic ------------------------------------------------------

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other):
        other = _coerce(other)
        n = max(self._c.size, other._c.size)
        out = np.zeros(n, dtype=complex)
        out[: self._c.size] += self._c
        out[: other._c.size] += other._c
        return ComplexPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPolynomial(-self._c)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, ComplexPolynomial):
            if self.is_zero() or other.is_zero():
                return ComplexPolynomial()
            return ComplexPolynomial(np.convolve(self._c, other._c))
        return ComplexPolynomial(self._c * complex(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        return np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash(self._c.tobytes())

    def __repr__(self):
        return f"ComplexPolynomial({self._c.tolist()!r})"

    def allclose(self, other, rtol=1e-12, atol=0.0) -> bool:
        """Coefficientwise comparison relative to the larger scale."""
        other = _coerce(other)
        n = max(self._c.size, other._c.size)
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: self._c.size] = self._c
        b[: other._c.size] = other._c
        ref = max(self.scale(), other.scale())
        return bool(np.max(np.abs(a - b), initial=0.0) <= atol + rtol * ref)

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {"coeffs": [[c.real, c.imag] for c in self._c.tolist()]}

    @classmethod
    def from_dict(cls, data: dict) -> ComplexPolynomial:
        try:
            raw = data["coeffs"]
        except (KeyError, TypeError):
            raise ValueError("polynomial JSON needs a 'coeffs' list") from None
        out = []
        for item in raw:
            if isinstance(item, (list, tuple)):
                if len(item) != 2:
                    raise ValueError(f"coefficient {item!r} is not a [re, im] pair")
                out.append(complex(float(item[0]), float(item[1])))
            else:
                out.append(complex(float(item)))
        return cls(out)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> ComplexPolynomial:
        return cls.from_dict(json.loads(text))


def _coerce(p) -> ComplexPolynomial:
    if isinstance(p, ComplexPolynomial):
        return p
    return ComplexPolynomial([p])


def monomial(n: int, c: complex = 1.0) -> ComplexPolynomial:
    _check_degree(n)
    out = np.zeros(n + 1, dtype=complex)
    out[n] = c
    return ComplexPolynomial(out)


@dataclass(frozen=True)
class RootSet:
    """Roots of a polynomial with conjugate pairing and residual diagnostics.

    ``residuals[i]`` is ``|p(z_i)| / sum_k |c_k| |z_i|^k``, the relative
    backward error of root ``i``.
    """

    roots: tuple
    pairing: tuple = ()
    residuals: tuple = ()

    def __len__(self):
        return len(self.roots)

    def as_array(self) -> np.ndarray:
        return np.array(self.roots, dtype=complex)

    def to_dict(self) -> dict:
        return {
            "roots": [[z.real, z.imag] for z in self.roots],
            "residuals": [float(r) for r in self.residuals],
        }


@dataclass(frozen=True)
class StripReport:
    half_width: float
    n_real: int
    n_complex: int
    tolerance_used: float

    def to_dict(self) -> dict:
        return {
            "half_width": self.half_width,
            "n_real": self.n_real,
            "n_complex": self.n_complex,
            "tolerance_used": self.tolerance_used,
        }


def from_roots(roots, leading: complex = 1.0) -> ComplexPolynomial:
    """Expand ``leading * prod(z - root)`` with a balanced product tree."""
    if leading == 0:
        raise ValueError("leading coefficient must be nonzero")
    roots = [complex(r) for r in roots]
    if not all(np.isfinite(r) for r in roots):
        raise ValueError("roots must be finite")
    _check_degree(len(roots))
    if not roots:
        return ComplexPolynomial([leading])
    level = [np.array([-r, 1.0], dtype=complex) for r in roots]
    while len(level) > 1:
        nxt = [np.convolve(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return ComplexPolynomial(level[0] * complex(leading))


def differentiate(p: ComplexPolynomial, k: int = 1) -> ComplexPolynomial:
    """k-th derivative."""
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    c = p.coeffs
    n = c.size - 1
    if k == 0:
        return p
    if k > n:
        return ComplexPolynomial()
    j = np.arange(n - k + 1)
    # falling factorial (j+k)!/j!, built as a running product to stay exact
    fall = np.ones(n - k + 1)
    for i in range(1, k + 1):
        fall *= j + i
    return ComplexPolynomial(c[k:] * fall)


def evaluate(p: ComplexPolynomial, z):
    """Horner evaluation; accepts a scalar or an array of points."""
    c = p.coeffs
    if np.ndim(z) == 0:
        acc = 0j
        for ck in c[::-1]:
            acc = acc * z + ck
        return complex(acc)
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for ck in c[::-1]:
        acc = acc * z + ck
    return acc


def scale_input(p: ComplexPolynomial, s: complex) -> ComplexPolynomial:
    """Return q with q(z) = p(s z)."""
    c = p.coeffs
    if c.size == 0:
        return p
    return ComplexPolynomial(c * complex(s) ** np.arange(c.size))


def taylor_shift(p: ComplexPolynomial, beta: complex) -> ComplexPolynomial:
    """Return p(z + beta) by binomial recomposition."""
    c = p.coeffs
    n = c.size - 1
    if n < 1 or beta == 0:
        return p
    beta = complex(beta)
    powers = beta ** np.arange(n + 1)
    out = np.zeros(n + 1, dtype=complex)
    for j in range(n + 1):
        binom = np.array([comb(k, j) for k in range(j, n + 1)], dtype=float)
        out[j] = np.sum(c[j:] * binom * powers[: n + 1 - j])
    return ComplexPolynomial(out)
