"""Simultaneous-iteration root finding and strip measurement.

Roots come from Aberth-Ehrlich iteration started on a rotated circle,
followed by a guarded Newton polish and post hoc clustering of
numerically coincident roots.  For real polynomials the result is made
exactly conjugate-closed.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DegreeCapError, PairingError, RootFindingError
from .poly import MAX_DEGREE, ComplexPolynomial, RootSet, StripReport

log = logging.getLogger(__name__)

EPS = np.finfo(float).eps
MAX_ITER = 200
CLUSTER_RADIUS = 1e-7
PAIR_TOL = 1e-6
SPAN_RESCALE = 1e8
# fixed start angle, irrational in units of pi, so no start lands on a symmetry axis
START_ANGLE = math.sqrt(2.0) / 3.0


def _horner_pair(c: np.ndarray, z: np.ndarray):
    """p(z), p'(z) and sum |c_k| |z|^k at every point of z."""
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    bound = np.zeros(z.shape)
    az = np.abs(z)
    for ck in c[::-1]:
        dp = dp * z + p
        p = p * z + ck
        bound = bound * az + abs(ck)
    return p, dp, bound


def _newton_terms(c: np.ndarray, z: np.ndarray):
    """Newton correction p/p' and relative residual |p| / sum |c_k||z|^k.

    Points outside the unit disk are evaluated through the reversed
    polynomial in 1/z, so high degrees never overflow.
    """
    n = c.size - 1
    z = np.asarray(z, dtype=complex)
    newton = np.empty_like(z)
    resid = np.empty(z.shape)
    inside = np.abs(z) <= 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        if inside.any():
            p, dp, bound = _horner_pair(c, z[inside])
            newton[inside] = p / dp
            resid[inside] = np.where(bound > 0, np.abs(p) / bound, 0.0)
        out = ~inside
        if out.any():
            zo = z[out]
            w = 1.0 / zo
            r, dr, bound = _horner_pair(c[::-1], w)
            # p = z^n r(w), p' = z^(n-1) (n r(w) - w r'(w))
            newton[out] = zo * r / (n * r - w * dr)
            resid[out] = np.where(bound > 0, np.abs(r) / bound, 0.0)
    return newton, resid


def _prescale(c: np.ndarray):
    """Normalize coefficients; substitute z -> lam w when they span widely.

    Both the substitution and the normalization use powers of two, applied
    to binary exponents, so no coefficient picks up rounding and sets whose
    direct rescaling would overflow stay representable.
    """
    n = c.size - 1
    mags = np.abs(c)
    nz = mags > 0
    _, ex = np.frexp(np.where(nz, mags, 1.0))
    ex = ex.astype(np.int64)
    k = np.arange(c.size)
    s = 0
    if ex[nz].max() - ex[nz].min() > math.log2(SPAN_RESCALE):
        s = int(round((ex[0] - ex[n]) / n))
    total = ex + s * k
    shift = int(total[nz].max())
    e = np.where(nz, s * k - shift, 0)
    q = np.ldexp(c.real, e) + 1j * np.ldexp(c.imag, e)
    return q, math.ldexp(1.0, s)


def _start_points(q: np.ndarray) -> np.ndarray:
    """Rotated circles whose radii come from the Newton polygon of q.

    Each edge of the upper convex hull of (k, log|q_k|) spanning k_i..k_j
    predicts k_j - k_i roots of modulus exp((log|q_ki| - log|q_kj|) / (k_j - k_i)).
    """
    n = q.size - 1
    mags = np.abs(q)
    ks = np.flatnonzero(mags > 0)
    pts = [(int(k), math.log(mags[k])) for k in ks]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    out = np.empty(n, dtype=complex)
    pos = 0
    for (k0, y0), (k1, y1) in zip(hull, hull[1:]):
        cnt = k1 - k0
        radius = math.exp((y0 - y1) / cnt)
        ang = 2.0 * np.pi * np.arange(cnt) / cnt + START_ANGLE + 2.0 * np.pi * k0 / n
        out[pos:pos + cnt] = radius * np.exp(1j * ang)
        pos += cnt
    return out


def _aberth(q: np.ndarray, max_iter: int):
    """Aberth-Ehrlich sweeps until every correction stalls at rounding level.

    Returns the iterate, the sweep count and whether every root meets the
    backward-error budget.
    """
    n = q.size - 1
    z = _start_points(q)
    done = np.zeros(n, dtype=bool)
    it = 0
    for it in range(1, max_iter + 1):
        act = np.flatnonzero(~done)
        if act.size == 0:
            break
        newton, resid = _newton_terms(q, z[act])
        tight = resid <= 2.0 * EPS
        done[act[tight]] = True
        act, newton = act[~tight], newton[~tight]
        if act.size == 0:
            break
        diff = z[act][:, None] - z[None, :]
        diff[np.arange(act.size), act] = np.inf
        with np.errstate(divide="ignore", invalid="ignore"):
            repulse = np.sum(1.0 / diff, axis=1)
            step = newton / (1.0 - newton * repulse)
        bad = ~np.isfinite(step)
        if bad.any():
            # p' vanished: nudge off the critical point deterministically
            step[bad] = 1e-3 * (1.0 + np.abs(z[act][bad])) * np.exp(1j * START_ANGLE)
        z[act] = z[act] - step
        done[act[np.abs(step) <= 2.0 * EPS * np.abs(z[act])]] = True
    _, resid = _newton_terms(q, z)
    ok = bool(np.all(resid <= 16.0 * (n + 1) * EPS))
    return z, it, ok


def _polish(q: np.ndarray, z: np.ndarray, steps: int = 2) -> np.ndarray:
    """Newton steps kept only when short and residual-reducing.

    A step longer than a tenth of the gap to the nearest other root could
    hop onto a neighbour, so it is refused.
    """
    z = z.copy()
    if z.size < 2:
        return z
    for _ in range(steps):
        gap = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(gap, np.inf)
        gap = gap.min(axis=1)
        step, resid = _newton_terms(q, z)
        ok = np.isfinite(step) & (np.abs(step) < 0.1 * gap)
        trial = np.where(ok, z - np.where(ok, step, 0), z)
        _, resid_t = _newton_terms(q, trial)
        z = np.where(ok & (resid_t < resid), trial, z)
    return z


def _cluster(z: np.ndarray, radius: float) -> np.ndarray:
    """Replace groups of numerically coincident roots by their mean."""
    n = z.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= radius * max(1.0, abs(z[i])):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = z.copy()
    for members in groups.values():
        if len(members) > 1:
            out[members] = np.mean(z[members])
    return out


def relative_residuals(p: ComplexPolynomial, roots) -> np.ndarray:
    """|p(z)| / sum |c_k| |z|^k at each root (scale invariant)."""
    q, lam = _prescale(p.coeffs)
    _, resid = _newton_terms(q, np.asarray(roots, dtype=complex) / lam)
    return resid


def find_roots(p: ComplexPolynomial, max_iter: int = MAX_ITER) -> RootSet:
    """All deg p roots of p, with multiplicity.

    Raises RootFindingError, carrying the best iterate, when the iteration
    does not meet its backward-error budget within ``max_iter`` sweeps.
    """
    n = p.degree
    if n < 1:
        raise ValueError("find_roots needs degree >= 1")
    if n > MAX_DEGREE:
        raise DegreeCapError(f"degree {n} exceeds cap {MAX_DEGREE}")
    c = p.coeffs
    nzero = int(np.argmax(c != 0))
    core = c[nzero:]
    found = np.zeros(nzero, dtype=complex)
    if core.size == 2:
        found = np.append(found, -core[0] / core[1])
    elif core.size > 2:
        q, lam = _prescale(core)
        w, iters, ok = _aberth(q, max_iter)
        if not ok:
            raise RootFindingError(
                f"Aberth iteration did not converge in {max_iter} sweeps",
                best=w * lam,
                iterations=iters,
            )
        w = _polish(q, w)
        found = np.append(found, w * lam)
    found = _cluster(found, CLUSTER_RADIUS)
    rs = RootSet(
        roots=tuple(complex(x) for x in found),
        residuals=tuple(float(r) for r in relative_residuals(p, found)),
    )
    if p.is_real():
        try:
            sym = symmetrize_conjugates(rs)
            rs = RootSet(
                roots=sym.roots,
                pairing=sym.pairing,
                residuals=tuple(float(r) for r in relative_residuals(p, sym.roots)),
            )
        except PairingError as exc:
            log.warning("conjugate pairing skipped: %s", exc)
    return rs


def default_real_tol(roots) -> float:
    mags = [abs(z) for z in roots]
    return max(1e-9 * max(mags, default=0.0), 1e-12)


def strip_width(rs: RootSet, real_tol: float | None = None) -> StripReport:
    """Half-width of the smallest horizontal strip holding the roots."""
    if real_tol is None:
        real_tol = default_real_tol(rs.roots)
    if not real_tol > 0:
        raise ValueError("real_tol must be positive")
    ims = np.abs(np.array([z.imag for z in rs.roots], dtype=float))
    cplx = ims >= real_tol
    upper = sum(1 for z in rs.roots if z.imag >= real_tol)
    lower = sum(1 for z in rs.roots if -z.imag >= real_tol)
    return StripReport(
        half_width=float(ims[cplx].max()) if cplx.any() else 0.0,
        n_real=int((~cplx).sum()),
        n_complex=min(upper, lower),
        tolerance_used=float(real_tol),
    )


def symmetrize_conjugates(rs: RootSet, real_tol: float | None = None,
                          pair_tol: float = PAIR_TOL) -> RootSet:
    """Force the root multiset to be exactly closed under conjugation.

    Near-real roots are snapped to the axis; the rest are matched
    upper-to-lower by minimum total distance and each pair is replaced by
    its average and that average's conjugate.
    """
    z = rs.as_array()
    res = np.array(rs.residuals if rs.residuals else [0.0] * z.size, dtype=float)
    if real_tol is None:
        real_tol = default_real_tol(z)
    real_idx = np.flatnonzero(np.abs(z.imag) < real_tol)
    up = np.flatnonzero(z.imag >= real_tol)
    lo = np.flatnonzero(z.imag <= -real_tol)
    if up.size != lo.size:
        raise PairingError(f"{up.size} upper vs {lo.size} lower roots cannot pair")
    roots, resid, pairs = [], [], []
    for i in sorted(real_idx, key=lambda i: (z[i].real, i)):
        roots.append(complex(z[i].real, 0.0))
        resid.append(res[i])
    if up.size:
        cost = np.abs(z[up][:, None] - np.conj(z[lo])[None, :])
        rows, cols = linear_sum_assignment(cost)
        merged = []
        for r, c in zip(rows, cols):
            u, l = z[up[r]], z[lo[c]]
            if abs(u - np.conj(l)) > pair_tol * max(1.0, abs(u)):
                raise PairingError(f"no conjugate partner for {u} (closest {np.conj(l)})")
            w = (u + np.conj(l)) / 2.0
            merged.append((w.real, abs(w.imag), max(res[up[r]], res[lo[c]])))
        for re, im, rr in sorted(merged):
            k = len(roots)
            roots.extend([complex(re, im), complex(re, -im)])
            resid.extend([rr, rr])
            pairs.append((k, k + 1))
    return RootSet(roots=tuple(roots), pairing=tuple(pairs), residuals=tuple(resid))
