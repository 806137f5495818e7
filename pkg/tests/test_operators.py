import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpstrip import (
    ComplexPolynomial,
    Cosine,
    DegreeCapError,
    DomainError,
    ExpLinear,
    ExpQuadratic,
    PolynomialRealRoots,
    Product,
    Scaled,
    Sine,
    apply_cos,
    apply_gauss,
    apply_multiplier,
    apply_series,
    apply_shift,
    apply_sin,
    descriptor_from_dict,
    evaluate,
    find_roots,
    from_roots,
    iterated_cos_approx,
    log_phi_eval_imag_axis,
    monomial,
    phi_eval,
    power_sequence,
    taylor_coeffs,
)
from lpstrip.operators import convergence_guard

from conftest import matched_error, strip_poly
from oracles import hermite_prob, max_coeff_error

COS = Cosine(1.0, 0.0)
GAUSS = ExpQuadratic(0.5)
ONE = PolynomialRealRoots()
seeds = st.integers(0, 2**32 - 1)


def P(*c):
    return ComplexPolynomial(c)


def max_abs_imag(p):
    return float(np.max(np.abs(find_roots(p).as_array().imag)))


class TestTaylorCoeffs:
    def test_cosine(self):
        assert np.allclose(taylor_coeffs(COS, 4).coeffs, [1, 0, -0.5, 0, 1 / 24], rtol=0, atol=1e-16)

    def test_gaussian(self):
        assert np.allclose(taylor_coeffs(GAUSS, 4).coeffs, [1, 0, -0.5, 0, 0.125], rtol=0, atol=1e-16)

    def test_product_of_cosines(self):
        w = taylor_coeffs(Product((COS, COS)), 2).coeffs
        assert np.allclose(w, [1, 0, -1], atol=1e-16)

    def test_exp_linear(self):
        w = taylor_coeffs(ExpLinear(2.0), 5).coeffs
        assert np.allclose(w, [2**k / math.factorial(k) for k in range(6)])

    def test_real_rooted_expands(self):
        phi = PolynomialRealRoots((1.0, -2.0), c=3.0, m=1)
        # 3 z (1 - z)(1 + z/2) = 3z - 1.5 z^2 - 1.5 z^3
        assert np.allclose(taylor_coeffs(phi, 5).coeffs, [0, 3, -1.5, -1.5, 0, 0])

    def test_scaled(self):
        w = taylor_coeffs(Scaled(COS, 2.0), 2).coeffs
        assert np.allclose(w, [1, 0, -2])

    def test_cap(self):
        with pytest.raises(DegreeCapError):
            taylor_coeffs(COS, 513)

    def test_high_order_no_underflow(self):
        w = taylor_coeffs(COS, 400)
        assert abs(w.derivs[400]) == 1.0
        # 1/170! is about 1.4e-307, still a normal double
        assert w.coeffs[170] == pytest.approx(-1.0 / float(math.factorial(170)), rel=1e-12)
        assert w.coeffs[400] == 0.0


class TestApplySeries:
    def test_gauss_on_quadratic(self):
        assert apply_series(GAUSS, P(4, 0, 1)).allclose(P(3, 0, 1))

    def test_cos_on_quadratic(self):
        assert apply_series(COS, P(4, 0, 1)).allclose(P(3, 0, 1))

    def test_identity(self):
        f = P(1, -2, 3, 4)
        assert apply_series(ONE, f) == f

    def test_zero_input(self):
        assert apply_series(COS, P()).is_zero()

    def test_degree_cap(self):
        with pytest.raises(DegreeCapError):
            apply_series(COS, ComplexPolynomial(np.ones(514)))

    def test_convergence_guard(self):
        convergence_guard(10.0, 0.0)
        with pytest.raises(DomainError):
            convergence_guard(1.0, 0.25)

    @settings(max_examples=100, deadline=None)
    @given(seeds, st.integers(0, 16))
    def test_linearity(self, seed, n):
        rng = np.random.default_rng(seed)
        phi = _random_phi(rng)
        f = ComplexPolynomial(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))
        g = ComplexPolynomial(rng.normal(size=n + 1))
        al, be = rng.normal(), rng.normal()
        lhs = apply_series(phi, al * f + be * g)
        rhs = al * apply_series(phi, f) + be * apply_series(phi, g)
        assert lhs.allclose(rhs, rtol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(seeds, st.integers(0, 16))
    def test_composition(self, seed, n):
        rng = np.random.default_rng(seed)
        p1, p2 = _random_phi(rng), _random_phi(rng)
        f = ComplexPolynomial(rng.normal(size=n + 1))
        lhs = apply_series(Product((p1, p2)), f)
        rhs = apply_series(p1, apply_series(p2, f))
        assert lhs.allclose(rhs, rtol=1e-10)


def _random_phi(rng):
    kind = rng.integers(5)
    if kind == 0:
        return Cosine(rng.uniform(0.1, 2), rng.uniform(-3, 3))
    if kind == 1:
        return Sine(rng.uniform(0.1, 2), rng.uniform(-3, 3))
    if kind == 2:
        return ExpQuadratic(rng.uniform(0, 1))
    if kind == 3:
        return ExpLinear(rng.uniform(-2, 2))
    roots = tuple(rng.choice([-1, 1]) * rng.uniform(0.5, 3, rng.integers(0, 4)))
    return PolynomialRealRoots(roots, c=rng.uniform(0.5, 2), m=int(rng.integers(0, 2)))


class TestShift:
    def test_square(self):
        assert apply_shift(1, monomial(2)) == P(1, 2, 1)

    def test_zero_shift(self):
        f = P(1, 2, 3)
        assert apply_shift(0, f) == f

    def test_translates_roots(self):
        g = apply_shift(1j, P(1, 0, 1))
        assert matched_error(find_roots(g).as_array(), [0, -2j]) < 1e-12

    def test_matches_exp_series(self):
        f = P(1, -2, 0.5, 3, 1)
        assert apply_shift(0.7, f).allclose(apply_series(ExpLinear(0.7), f), rtol=1e-13)


class TestCosSin:
    def test_cos_examples(self):
        assert apply_cos(1, 0, P(4, 0, 1)).allclose(P(3, 0, 1))
        assert apply_cos(2, 0, P(4, 0, 1)).allclose(P(0, 0, 1), atol=1e-14)
        assert apply_cos(1, 0, P(1)) == P(1)

    def test_sin_examples(self):
        assert apply_sin(1, math.pi / 2, P(4, 0, 1)).allclose(apply_cos(1, 0, P(4, 0, 1)), rtol=1e-15)
        assert apply_sin(1, 0, monomial(2)).allclose(P(0, 2))
        assert apply_sin(1, 0, P(1)).is_zero()

    def test_requires_real(self):
        with pytest.raises(ValueError):
            apply_cos(1, 0, P(1j, 1))
        with pytest.raises(ValueError):
            apply_cos(0, 0, P(1, 1))

    def test_output_real(self):
        g = apply_cos(0.7, 1.3, P(1, 2, 3, 4, 5))
        assert np.all(g.coeffs.imag == 0)

    @settings(max_examples=100, deadline=None)
    @given(seeds, st.integers(1, 32), st.floats(0.1, 3), st.floats(-4, 4))
    def test_closed_form_matches_series(self, seed, n, a, b):
        rng = np.random.default_rng(seed)
        f = ComplexPolynomial(rng.normal(size=n + 1))
        assert apply_cos(a, b, f).allclose(apply_series(Cosine(a, b), f), rtol=1e-10)
        assert apply_sin(a, b, f).allclose(apply_series(Sine(a, b), f), rtol=1e-10)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.1, 3), st.floats(0.1, 3), st.complex_numbers(max_magnitude=5, allow_nan=False))
    def test_eigenfunction_expansion(self, a, c, z):
        # cos(aD)(z^2 + c^2) = z^2 + c^2 - a^2 from cos(aD) = 1 - a^2 D^2 / 2 + ...
        f = from_roots([1j * c, -1j * c]).real_part()
        got = evaluate(apply_cos(a, 0, f), z)
        want = z * z + c * c - a * a
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))

    @settings(max_examples=150, deadline=None)
    @given(seeds, st.integers(1, 12), st.sampled_from([0.5, 1.0, 2.0]),
           st.floats(0.05, 0.95), st.floats(-3, 3))
    def test_strip_shrink(self, seed, n, r, frac, b):
        rng = np.random.default_rng(seed)
        f = strip_poly(rng, n, r)
        a = frac * r
        bound = math.sqrt(r * r - a * a) + 1e-6
        g = apply_cos(a, b, f)
        if g.degree >= 1:
            assert max_abs_imag(g) <= bound
        h = apply_sin(a, b, f)
        if h.degree >= 1:
            assert max_abs_imag(h) <= bound


class TestGauss:
    @pytest.mark.parametrize("n", range(11))
    def test_hermite(self, n):
        got = apply_gauss(1.0, monomial(n)).coeffs
        want = hermite_prob(n)
        assert max_coeff_error(got, want) <= 1e-12 * np.max(np.abs(want))

    def test_quadratic(self):
        assert apply_gauss(1.0, P(4, 0, 1)).allclose(P(3, 0, 1))

    @settings(max_examples=100, deadline=None)
    @given(seeds, st.integers(1, 12), st.sampled_from([0.5, 1.0, 2.0]), st.floats(0.05, 0.95))
    def test_strip_shrink(self, seed, n, r, frac):
        rng = np.random.default_rng(seed)
        f = strip_poly(rng, n, r)
        a = frac * r
        g = apply_gauss(a, f)
        assert max_abs_imag(g) <= math.sqrt(r * r - a * a) + 1e-6


class TestIteratedCos:
    def test_single_application(self):
        assert iterated_cos_approx(1, 1, monomial(2)).allclose(P(-1, 0, 1))

    def test_constant_fixed(self):
        assert iterated_cos_approx(1.7, 5, P(3)) == P(3)

    def test_converges_to_gauss(self):
        target = apply_gauss(1.0, monomial(4)).coeffs
        errs = [max_coeff_error(iterated_cos_approx(1, n, monomial(4)).coeffs, target) for n in (2, 4, 8, 16)]
        assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
        assert errs[-1] <= 1e-2

    def test_cap(self):
        with pytest.raises(ValueError):
            iterated_cos_approx(1, 65, P(1))


class TestMultiplier:
    def test_examples(self):
        f = P(1, 0, 1)
        assert apply_multiplier(power_sequence(2, 3), f) == P(1, 0, 4)
        assert apply_multiplier(np.ones(3), f) == f
        assert apply_multiplier([0, 1, 2], f) == P(0, 0, 2)

    def test_too_short(self):
        with pytest.raises(ValueError):
            apply_multiplier([1, 1], P(1, 0, 1))

    @settings(max_examples=100, deadline=None)
    @given(seeds, st.integers(1, 16), st.floats(1.1, 10))
    def test_scaling(self, seed, n, alpha):
        rng = np.random.default_rng(seed)
        f = strip_poly(rng, n, 1.0)
        g = apply_multiplier(power_sequence(alpha, n + 1), f)
        want = find_roots(f).as_array() / alpha
        assert matched_error(find_roots(g).as_array(), want) <= 1e-8


class TestEvaluation:
    def test_phi_eval(self):
        assert abs(phi_eval(COS, 2j) - 3.7621956910836314) < 1e-14
        assert abs(phi_eval(PolynomialRealRoots((1.0, -1.0)), 2j) - 5) < 1e-14

    def test_log_large(self):
        assert abs(log_phi_eval_imag_axis(COS, 200.0) - (200 - math.log(2))) <= 1e-9

    def test_log_huge_argument(self):
        v = log_phi_eval_imag_axis(COS, 1e5)
        assert abs(v - (1e5 - math.log(2))) <= 1e-9 * 1e5

    def test_log_rejects_nonpositive(self):
        # sin(it) = i sinh t is not positive
        with pytest.raises(DomainError):
            log_phi_eval_imag_axis(Sine(1.0, 0.0), 1.0)
        # z^2 is negative on the imaginary axis
        with pytest.raises(DomainError):
            log_phi_eval_imag_axis(PolynomialRealRoots((), c=1.0, m=2), 1.0)

    def test_log_matches_direct(self):
        for t in (0.0, 0.3, 2.0, 10.0):
            assert abs(log_phi_eval_imag_axis(COS, t) - math.log(math.cosh(t))) < 1e-12
            assert abs(log_phi_eval_imag_axis(GAUSS, t) - t * t / 2) < 1e-12


class TestDescriptorJson:
    @pytest.mark.parametrize("phi", [
        COS, Sine(2.0, 0.5), GAUSS, ExpLinear(-1.5),
        PolynomialRealRoots((1.0, -2.0), c=2.0, m=1),
        Product((COS, GAUSS)), Scaled(COS, 3.0),
    ])
    def test_roundtrip(self, phi):
        back = descriptor_from_dict(phi.to_dict())
        assert back == phi
        assert back.canonical_json() == phi.canonical_json()

    def test_shorthands(self):
        assert descriptor_from_dict("cos") == COS
        assert descriptor_from_dict({"family": "gauss"}) == GAUSS

    def test_declared_metadata(self):
        assert COS.to_dict()["declared_order"] == 1.0
        assert GAUSS.declared_order == 2.0
        assert PolynomialRealRoots((1.0,)).declared_order == 0.0
        assert Product((COS, GAUSS)).declared_order == 2.0

    @pytest.mark.parametrize("bad", [{"family": "nope"}, {"params": {}}, "nope",
                                     {"family": "Cosine", "params": {"a": -1}},
                                     {"family": "Cosine", "params": {"q": 1}}])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            descriptor_from_dict(bad)
