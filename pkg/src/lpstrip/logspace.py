"""Overflow-safe hyperbolic helpers.

The extremal constructions need ``cosh(2ar)`` and ``acosh`` of ratios of
quantities that overflow doubles long before the interesting regime, so
everything here works with logarithms.
"""

import math

LN2 = math.log(2.0)
_ASYMPTOTIC_LOG = 30.0


def logcosh(x: float) -> float:
    """log(cosh(x)) without overflow."""
    x = abs(float(x))
    return x + math.log1p(math.exp(-2.0 * x)) - LN2


def acosh_exp(log_x: float) -> float:
    """acosh(exp(log_x)) for log_x >= 0, without forming exp(log_x).

    Small arguments go through ``expm1`` so acosh(1 + u) keeps its
    sqrt(2u) behaviour near 1; large ones use
    log(2x) + log1p((sqrt(1 - x**-2) - 1) / 2).
    """
    if log_x < 0:
        raise ValueError("acosh_exp needs log_x >= 0")
    if log_x > _ASYMPTOTIC_LOG:
        corr = (math.sqrt(-math.expm1(-2.0 * log_x)) - 1.0) / 2.0
        return log_x + LN2 + math.log1p(corr)
    u = math.expm1(log_x)
    return math.log1p(u + math.sqrt(u * (u + 2.0)))


def log_add_exp(a: float, b: float) -> float:
    if a < b:
        a, b = b, a
    if b == -math.inf:
        return a
    return a + math.log1p(math.exp(b - a))
