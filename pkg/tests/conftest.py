import numpy as np
import pytest
from hypothesis import settings
from scipy.optimize import linear_sum_assignment

from lpstrip import from_roots

# fixed example sequence so every run reports the same cases
settings.register_profile("repro", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("repro")


def strip_roots(rng, degree, r, real_fraction=0.5, span=5.0):
    """Roots of a random real polynomial with zeros in S(r).

    Real parts sit on a jittered lattice so the test inputs are well
    separated; uniformly random dense roots are ill-conditioned for any
    double-precision root finder.
    """
    n_pairs = degree // 2 if degree % 2 == 0 else (degree - 1) // 2
    n_pairs = int(round(n_pairs * (1 - real_fraction))) if degree > 1 else 0
    n_real = degree - 2 * n_pairs
    slots = np.linspace(-span, span, n_real + n_pairs) if n_real + n_pairs > 1 else np.zeros(1)
    gap = 2 * span / max(n_real + n_pairs, 1)
    x = rng.permutation(slots + rng.uniform(-0.3, 0.3, slots.size) * gap)
    real = x[:n_real]
    w = x[n_real:] + 1j * rng.uniform(0.05, 1.0, n_pairs) * r
    if n_pairs:
        w[0] = x[n_real] + 1j * r
    return np.concatenate([real.astype(complex), w, np.conj(w)])


def strip_poly(rng, degree, r, real_fraction=0.5):
    return from_roots(strip_roots(rng, degree, r, real_fraction)).real_part()


def matched_error(got, want):
    """Max relative distance after optimal matching of two multisets."""
    got = np.asarray(got, dtype=complex)
    want = np.asarray(want, dtype=complex)
    assert got.size == want.size
    cost = np.abs(got[:, None] - want[None, :])
    i, j = linear_sum_assignment(cost)
    return float(np.max(cost[i, j] / np.maximum(1.0, np.abs(want[j]))))


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
