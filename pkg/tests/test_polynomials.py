"""Exact polynomial arithmetic, substitution, and determinant tests."""

import random
from fractions import Fraction

import pytest

from subriemann.polynomials import (
    Polynomial,
    PolynomialError,
    format_polynomial,
    parse_polynomial,
    poly_det,
)


def random_poly(rng, dim, max_terms=4, max_deg=3, max_coef=5):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        e = tuple(rng.randint(0, max_deg) for _ in range(dim))
        c = Fraction(rng.randint(-max_coef, max_coef), rng.randint(1, 4))
        if c:
            terms[e] = terms.get(e, Fraction(0)) + c
    return Polynomial(dim, terms)


def random_point(rng, dim, max_num=6):
    return [Fraction(rng.randint(-max_num, max_num), rng.randint(1, 5)) for _ in range(dim)]


class TestArithmetic:
    def test_ring_laws_random(self):
        rng = random.Random(7)
        for _ in range(60):
            dim = rng.randint(1, 3)
            a = random_poly(rng, dim)
            b = random_poly(rng, dim)
            c = random_poly(rng, dim)
            assert a + b == b + a
            assert a * b == b * a
            assert (a + b) * c == a * c + b * c
            assert a - a == Polynomial.zero(dim)

    def test_eval_is_a_homomorphism(self):
        rng = random.Random(11)
        for _ in range(60):
            dim = rng.randint(1, 3)
            a = random_poly(rng, dim)
            b = random_poly(rng, dim)
            pt = random_point(rng, dim)
            assert (a + b).eval(pt) == a.eval(pt) + b.eval(pt)
            assert (a * b).eval(pt) == a.eval(pt) * b.eval(pt)

    def test_pow(self):
        x = Polynomial.variable(2, 1)
        y = Polynomial.variable(2, 2)
        p = (x + y) ** 3
        assert p.eval([2, 3]) == Fraction(125)
        assert p.total_degree() == 3

    def test_partial_product_rule(self):
        rng = random.Random(3)
        for _ in range(40):
            dim = rng.randint(1, 3)
            a = random_poly(rng, dim)
            b = random_poly(rng, dim)
            j = rng.randint(1, dim)
            assert (a * b).partial(j) == a.partial(j) * b + a * b.partial(j)

    def test_constant_and_zero_predicates(self):
        z = Polynomial.zero(2)
        assert z.is_zero() and z.is_constant()
        c = Polynomial.constant(2, Fraction(3, 4))
        assert c.is_constant() and c.constant_value() == Fraction(3, 4)
        assert not Polynomial.variable(2, 1).is_constant()


class TestSubstitution:
    def test_compose_matches_pointwise(self):
        rng = random.Random(19)
        for _ in range(30):
            dim = rng.randint(1, 3)
            inner_dim = rng.randint(1, 3)
            p = random_poly(rng, dim)
            maps = [random_poly(rng, inner_dim) for _ in range(dim)]
            pt = random_point(rng, inner_dim)
            composed = p.compose(maps)
            assert composed.eval(pt) == p.eval([m.eval(pt) for m in maps])

    def test_substitute_value(self):
        p = parse_polynomial("x1^2*x2 + 3*x2", 2)
        q = p.substitute_value(1, Fraction(1, 2))
        assert q == parse_polynomial("13/4*x2", 2)

    def test_lift_keeps_values(self):
        p = parse_polynomial("x1*x2 - 1", 2)
        lifted = p.lift(4, offset=1)
        assert lifted.eval([99, 2, 3, 99]) == p.eval([2, 3])


class TestHomogeneity:
    def test_dilate_adds_t_variable(self):
        p = parse_polynomial("x1^2 + x2", 2)
        d = p.dilate([1, 2])
        # both monomials acquire t-degree 2
        assert d.homogeneity_degree([0, 0, 1]) == 2

    def test_homogeneity_degree_mixed(self):
        p = parse_polynomial("x1 + x2", 2)
        assert p.homogeneity_degree([1, 2]) is None
        assert p.is_dt_homogeneous([1, 1], 1)
        assert not p.is_dt_homogeneous([1, 2], 1)

    def test_zero_is_vacuously_homogeneous(self):
        assert Polynomial.zero(3).is_dt_homogeneous([1, 2, 3], 5)


class TestTextForm:
    def test_round_trip_random(self):
        rng = random.Random(23)
        for _ in range(60):
            dim = rng.randint(1, 4)
            p = random_poly(rng, dim)
            assert parse_polynomial(format_polynomial(p), dim) == p

    def test_rational_coefficients(self):
        p = parse_polynomial("1/3*x1 - 5/2", 1)
        assert p.eval([3]) == Fraction(-3, 2)

    def test_rejects_garbage(self):
        with pytest.raises(PolynomialError):
            parse_polynomial("x1 ** 2", 1)
        with pytest.raises(PolynomialError):
            parse_polynomial("x5", 2)


class TestDeterminant:
    def test_matches_numeric_determinant(self):
        import numpy as np

        rng = random.Random(31)
        for _ in range(20):
            n = rng.randint(1, 4)
            mat = [[random_poly(rng, 2, max_terms=2, max_deg=1) for _ in range(n)]
                   for _ in range(n)]
            pt = random_point(rng, 2)
            det = poly_det(mat)
            num = np.array([[float(mat[i][j].eval(pt)) for j in range(n)]
                            for i in range(n)])
            assert abs(float(det.eval(pt)) - float(np.linalg.det(num))) < 1e-6

    def test_alternating(self):
        rng = random.Random(37)
        mat = [[random_poly(rng, 2) for _ in range(3)] for _ in range(3)]
        swapped = [mat[1], mat[0], mat[2]]
        assert poly_det(swapped) == -poly_det(mat)

    def test_singular(self):
        row = [parse_polynomial("x1", 2), parse_polynomial("x2", 2)]
        assert poly_det([row, row]).is_zero()
