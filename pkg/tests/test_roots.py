import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpstrip import (
    ComplexPolynomial,
    PairingError,
    RootFindingError,
    RootSet,
    apply_cos,
    differentiate,
    find_roots,
    from_roots,
    strip_width,
    symmetrize_conjugates,
)
from lpstrip.extremal import ExtremalFamily, family_zeros, truncate_family
from lpstrip.roots import default_real_tol

from conftest import matched_error, strip_poly, strip_roots
from oracles import companion_roots, hull_distance

seeds = st.integers(0, 2**32 - 1)


def P(*c):
    return ComplexPolynomial(c)


class TestFindRoots:
    def test_unit_pair(self):
        assert matched_error(find_roots(P(1, 0, 1)).as_array(), [1j, -1j]) < 1e-15

    def test_double_root_clusters(self):
        rs = find_roots(P(1, -2, 1))
        assert np.allclose(rs.as_array(), [1, 1], atol=1e-7)

    def test_linear_and_zero_roots(self):
        assert find_roots(P(2, 4)).roots == (-0.5,)
        rs = find_roots(P(0, 0, -1, 1))
        assert sorted(rs.as_array().real) == [0, 0, 1]

    def test_rejects_constant(self):
        with pytest.raises(ValueError):
            find_roots(P(3))

    def test_degree_20_roundtrip(self, rng):
        re = np.linspace(-4, 4, 10) + rng.uniform(-0.2, 0.2, 10)
        w = re + 1j * rng.uniform(0.05, 1, 10)
        roots = np.concatenate([w, w.conj()])
        assert matched_error(find_roots(from_roots(roots)).as_array(), roots) <= 1e-7

    def test_nonconvergence_carries_best(self):
        p = from_roots(np.arange(1, 30))
        with pytest.raises(RootFindingError) as info:
            find_roots(p, max_iter=1)
        assert info.value.best is not None
        assert info.value.best.size == 29

    def test_agrees_with_companion(self, rng):
        for _ in range(20):
            p = ComplexPolynomial(rng.normal(size=12) + 1j * rng.normal(size=12))
            assert matched_error(find_roots(p).as_array(), companion_roots(p.coeffs)) < 1e-9

    def test_high_degree_family(self):
        # degree 320 with coefficients spanning hundreds of orders of magnitude
        fam = ExtremalFamily("GA", 1.0, 1.0)
        p = truncate_family(fam, 40)
        rs = find_roots(p)
        assert len(rs) == 320
        # double roots far out are ill-conditioned; backward error is what
        # the solver controls, and the central lattice points are stable
        assert max(rs.residuals) <= 1e-12
        got = rs.as_array()
        for z in (np.pi / 2 + 1j, -np.pi / 2 - 1j):
            assert np.sort(np.abs(got - z))[1] < 1e-5

    def test_deterministic(self, rng):
        p = strip_poly(rng, 14, 1.0)
        assert find_roots(p).roots == find_roots(p).roots

    @settings(max_examples=100, deadline=None)
    @given(seeds, st.integers(2, 64))
    def test_residuals_small(self, seed, n):
        rng = np.random.default_rng(seed)
        p = from_roots(strip_roots(rng, n, 1.0))
        assert max(find_roots(p).residuals) <= 1e-9

    @settings(max_examples=200, deadline=None)
    @given(seeds, st.integers(1, 24))
    def test_vieta_sum(self, seed, n):
        rng = np.random.default_rng(seed)
        p = ComplexPolynomial(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))
        c = p.coeffs
        want = -c[-2] / c[-1] if n >= 1 else 0
        got = np.sum(find_roots(p).as_array())
        scale = max(1.0, np.sum(np.abs(find_roots(p).as_array())))
        assert abs(got - want) <= 1e-8 * scale

    @settings(max_examples=200, deadline=None)
    @given(seeds, st.integers(2, 16))
    def test_gauss_lucas(self, seed, n):
        rng = np.random.default_rng(seed)
        p = ComplexPolynomial(rng.normal(size=n + 1))
        roots = find_roots(p).as_array()
        for w in find_roots(differentiate(p)).as_array():
            assert hull_distance(roots, w) <= 1e-7

    @settings(max_examples=200, deadline=None)
    @given(seeds, st.integers(1, 24))
    def test_conjugate_closure(self, seed, n):
        rng = np.random.default_rng(seed)
        p = ComplexPolynomial(rng.normal(size=n + 1))
        roots = find_roots(p).as_array()
        nonreal = roots[roots.imag != 0]
        assert sorted(map(complex, nonreal.conj()), key=lambda z: (z.real, z.imag)) == \
            sorted(map(complex, nonreal), key=lambda z: (z.real, z.imag))


class TestStripWidth:
    def test_examples(self):
        assert strip_width(RootSet((1j, -1j))).half_width == 1
        rep = strip_width(RootSet((1, 2, 3)))
        assert (rep.half_width, rep.n_real, rep.n_complex) == (0, 3, 0)

    def test_empty(self):
        rep = strip_width(RootSet(()))
        assert (rep.half_width, rep.n_real, rep.n_complex) == (0, 0, 0)

    def test_cos_quadratic(self):
        rep = strip_width(find_roots(apply_cos(1, 0, P(4, 0, 1))))
        assert abs(rep.half_width - math.sqrt(3)) <= 1e-8
        assert rep.n_complex == 1

    def test_tolerance(self):
        rs = RootSet((1 + 1e-10j, 1 - 1e-10j))
        assert strip_width(rs).half_width == 0
        assert strip_width(rs, real_tol=1e-12).half_width == 1e-10

    def test_default_tol(self):
        assert default_real_tol([]) == 1e-12
        assert default_real_tol([1e6]) == pytest.approx(1e-3)

    def test_rejects_bad_tol(self):
        with pytest.raises(ValueError):
            strip_width(RootSet((1,)), real_tol=0)


class TestSymmetrize:
    def test_snap(self):
        assert symmetrize_conjugates(RootSet((1 + 1e-13j,))).roots == (1,)

    def test_average(self):
        rs = RootSet((0.5 + 1j * (1 + 1e-10), 0.5 - 1j * (1 - 1e-10)))
        out = symmetrize_conjugates(rs).as_array()
        assert np.allclose(out, [0.5 + 1j, 0.5 - 1j], rtol=0, atol=1e-15)
        assert out[0] == out[1].conjugate()

    def test_unpaired(self):
        with pytest.raises(PairingError):
            symmetrize_conjugates(RootSet((1 + 1j, 2 + 1j)))
        with pytest.raises(PairingError):
            symmetrize_conjugates(RootSet((1 + 1j, 5 - 1j)))

    def test_pairing_indices(self):
        out = symmetrize_conjugates(RootSet((2 - 1j, 3, 2 + 1j)))
        for i, j in out.pairing:
            assert out.roots[i] == out.roots[j].conjugate()

    def test_serialization(self):
        rs = find_roots(P(1, 0, 1))
        d = rs.to_dict()
        assert set(d) == {"roots", "residuals"}
        assert sorted(d["roots"]) == [[0.0, -1.0], [0.0, 1.0]]
