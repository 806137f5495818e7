"""Seeded strip-rooted ensembles and the sweeps built on them.

The sweeps measure how far phi(aD) pulls the zeros of random real
polynomials towards the real axis and compare the result with the two
quadratic bounds sqrt(r^2 - b a^2) and sqrt(r^2 - c a^2).
"""

from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import RootFindingError
from .extremal import laguerre_b
from .operators import (
    Cosine,
    LPDescriptor,
    PolynomialRealRoots,
    Product,
    Scaled,
    Sine,
    apply_series,
)
from .poly import ComplexPolynomial, from_roots
from .roots import find_roots, strip_width

log = logging.getLogger(__name__)

ROOT_SPAN = 5.0
MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class EnsembleSpec:
    """Recipe for a reproducible batch of real polynomials with zeros in S(r)."""

    count: int
    degree: int
    r: float
    seed: int = 0
    real_fraction: float = 0.0

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise ValueError("count must be a positive integer")
        if int(self.degree) != self.degree or self.degree < 2 or self.degree % 2:
            raise ValueError("degree must be an even integer >= 2")
        if not (math.isfinite(self.r) and self.r > 0):
            raise ValueError("r must be positive")
        if not 0 <= int(self.seed) <= MAX_SEED or int(self.seed) != self.seed:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not 0.0 <= self.real_fraction <= 1.0:
            raise ValueError("real_fraction must lie in [0, 1]")

    @property
    def n_real(self) -> int:
        # even, and always leaving room for the boundary pair
        n = 2 * int(self.real_fraction * self.degree / 2)
        return min(n, self.degree - 2)

    def to_dict(self) -> dict:
        return {
            "count": int(self.count),
            "degree": int(self.degree),
            "r": float(self.r),
            "seed": int(self.seed),
            "real_fraction": float(self.real_fraction),
        }


def _streams(spec: EnsembleSpec):
    """One counter-based generator per ensemble member."""
    children = np.random.SeedSequence(int(spec.seed)).spawn(spec.count)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def ensemble_roots(spec: EnsembleSpec) -> list:
    """Root arrays of the ensemble, before expansion."""
    out = []
    n_real = spec.n_real
    n_pairs = (spec.degree - n_real) // 2
    for rng in _streams(spec):
        real = rng.uniform(-ROOT_SPAN, ROOT_SPAN, n_real)
        re = rng.uniform(-ROOT_SPAN, ROOT_SPAN, n_pairs)
        # uniform on (0, r]: 1 - U maps [0, 1) onto (0, 1]
        im = spec.r * (1.0 - rng.uniform(0.0, 1.0, n_pairs))
        im[0] = spec.r
        w = re + 1j * im
        out.append(np.concatenate([real.astype(complex), w, np.conj(w)]))
    return out


def generate_ensemble(spec: EnsembleSpec) -> list:
    """Monic real polynomials whose zeros fill S(r) and touch its edge."""
    return [from_roots(z).real_part() for z in ensemble_roots(spec)]


def witness(r: float) -> ComplexPolynomial:
    """z^2 + r^2, the input that attains the b_phi bound."""
    return ComplexPolynomial([r * r, 0.0, 1.0])


def with_witness(ensemble: list, r: float) -> list:
    return [witness(r)] + list(ensemble)


@dataclass(frozen=True)
class RprimeMeasurement:
    rprime: float
    n_samples: int
    n_failed: int
    widths: tuple = ()


def measure_rprime_detailed(phi: LPDescriptor, a: float, ensemble: list) -> RprimeMeasurement:
    """Strip widths of phi(aD) f over the ensemble, skipping root-finder failures."""
    if not ensemble:
        raise ValueError("ensemble must be nonempty")
    if not a > 0:
        raise ValueError("a must be positive")
    op = Scaled(phi, a)
    widths = []
    failed = 0
    for f in ensemble:
        g = apply_series(op, f)
        if g.degree < 1:
            widths.append(0.0)
            continue
        try:
            widths.append(strip_width(find_roots(g)).half_width)
        except RootFindingError as exc:
            failed += 1
            log.warning("ensemble member skipped: %s", exc)
    if not widths:
        raise RootFindingError("root finding failed on every ensemble member")
    if failed:
        log.warning("%d of %d ensemble members excluded", failed, len(ensemble))
    return RprimeMeasurement(max(widths), len(widths), failed, tuple(widths))


def measure_rprime(phi: LPDescriptor, a: float, ensemble: list) -> float:
    """max strip half-width of phi(aD) f over the ensemble.

    An empirical lower estimate of the true r' for this phi, a and r.
    """
    return measure_rprime_detailed(phi, a, ensemble).rprime


def _check_grid(a_grid) -> list:
    grid = sorted(float(a) for a in a_grid)
    if not grid:
        raise ValueError("grid must be nonempty")
    if any(not (math.isfinite(a) and a > 0) for a in grid):
        raise ValueError("grid values must be positive")
    return grid


@dataclass(frozen=True)
class CEstimate:
    """Largest c with measured r'(a) <= sqrt(r^2 - c a^2) on the grid."""

    c_hat: float
    grid: tuple
    rprimes: tuple
    seed: int
    no_shrink: bool

    def to_dict(self) -> dict:
        return {
            "c_hat": self.c_hat,
            "grid": list(self.grid),
            "rprimes": list(self.rprimes),
            "seed": self.seed,
            "no_shrink": self.no_shrink,
        }


def _fit_c(r: float, grid, rprimes) -> tuple:
    ratios = [(r * r - rp * rp) / (a * a) for a, rp in zip(grid, rprimes)]
    no_shrink = all(rp >= r * (1.0 - 1e-12) for rp in rprimes)
    if no_shrink:
        return 0.0, True
    return max(0.0, min(ratios)), False


def estimate_c_phi(phi: LPDescriptor, r: float, a_grid, spec: EnsembleSpec) -> CEstimate:
    """Min-ratio fit of c_phi from the witness-augmented ensemble.

    Any single grid point that violates a candidate c rules it out, hence
    the minimum rather than a least-squares fit.
    """
    grid = _check_grid(a_grid)
    spec = replace(spec, r=float(r))
    ensemble = with_witness(generate_ensemble(spec), r)
    rprimes = [measure_rprime(phi, a, ensemble) for a in grid]
    c_hat, flag = _fit_c(r, grid, rprimes)
    if flag:
        log.warning("no shrink observed on the grid; c estimate set to 0")
    return CEstimate(c_hat, tuple(grid), tuple(rprimes), int(spec.seed), flag)


def phi_id(phi: LPDescriptor) -> str:
    return hashlib.sha256(phi.canonical_json().encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SweepRecord:
    phi_id: str
    a: float
    r: float
    measured_rprime: float
    bound_lower: float
    bound_upper_c: float
    n_samples: int
    seed: int

    FIELDS = (
        "phi_id", "a", "r", "measured_rprime", "bound_lower",
        "bound_upper_c", "n_samples", "seed",
    )

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.FIELDS}


def sweep(phi: LPDescriptor, r: float, a_grid, spec: EnsembleSpec) -> list:
    """One SweepRecord per grid point, ordered by a."""
    grid = _check_grid(a_grid)
    spec = replace(spec, r=float(r))
    ensemble = with_witness(generate_ensemble(spec), r)
    meas = [measure_rprime_detailed(phi, a, ensemble) for a in grid]
    c_hat, _ = _fit_c(r, grid, [m.rprime for m in meas])
    b = laguerre_b(phi)
    pid = phi_id(phi)
    return [
        SweepRecord(
            phi_id=pid,
            a=a,
            r=float(r),
            measured_rprime=m.rprime,
            bound_lower=math.sqrt(max(0.0, r * r - b * a * a)),
            bound_upper_c=math.sqrt(max(0.0, r * r - c_hat * a * a)),
            n_samples=m.n_samples,
            seed=int(spec.seed),
        )
        for a, m in zip(grid, meas)
    ]


@dataclass(frozen=True)
class DensityReport:
    t_grid: tuple
    n_of_t: tuple
    liminf_proxy: float

    def to_dict(self) -> dict:
        return {
            "t_grid": list(self.t_grid),
            "n_of_t": list(self.n_of_t),
            "liminf_proxy": self.liminf_proxy,
        }


def _has_real_lattice(phi: LPDescriptor) -> bool:
    if isinstance(phi, (PolynomialRealRoots, Cosine, Sine)):
        return True
    if isinstance(phi, Product):
        return all(_has_real_lattice(f) for f in phi.factors)
    if isinstance(phi, Scaled):
        return _has_real_lattice(phi.inner)
    return False


def density_report(phi: LPDescriptor, t_max: float, steps: int = 100) -> DensityReport:
    """Zero counts n(t) on (-t, t) over an even grid up to t_max."""
    if not _has_real_lattice(phi):
        raise ValueError(f"zero counting is not supported for family {phi.family}")
    if not (math.isfinite(t_max) and t_max > 0):
        raise ValueError("t_max must be positive")
    if int(steps) != steps or steps < 2:
        raise ValueError("steps must be an integer >= 2")
    t = np.linspace(t_max / steps, t_max, int(steps))
    n = [int(phi.count_zeros(float(x))) for x in t]
    tail = slice(len(t) // 2, None)
    proxy = float(np.min(np.asarray(n[tail], dtype=float) / t[tail]))
    return DensityReport(tuple(float(x) for x in t), tuple(n), proxy)
