"""Ball-volume polynomial: exact coefficients, scaling, level sets."""

import itertools
import json
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from subriemann.fields import FieldError, homogeneous_dimension
from subriemann.nsw import (
    BudgetExceeded,
    DomainSpec,
    build_nsw,
    eval_lambda,
    evaluation_table_csv,
    level_set_probe,
    metivier_report,
    nu_tilde,
    parse_domain_spec,
    pointwise_nu,
)

from test_polynomials import random_point


def brute_force_lambda(basis, x, r):
    """Independent oracle: sum |det| over all ordered n-tuples, numerically."""
    n = basis.system.dim
    cols = [[float(c.eval(x)) for c in e.vf.coeffs] for e in basis.entries]
    degs = [e.degree for e in basis.entries]
    total = 0.0
    for tup in itertools.permutations(range(len(cols)), n):
        mat = np.array([cols[i] for i in tup]).T
        det = abs(np.linalg.det(mat))
        if det > 1e-12:
            total += det * float(r) ** sum(degs[i] for i in tup)
    return total


class TestAssembly:
    def test_matches_brute_force(self, bases, nsw_polys):
        rng = random.Random(41)
        for name in ("euclidean2", "heisenberg1", "grushin-1-1-2", "martinet"):
            basis = bases[name]
            nsw = nsw_polys[name]
            for _ in range(5):
                x = random_point(rng, basis.system.dim, max_num=2)
                r = Fraction(rng.randint(1, 4), rng.randint(1, 4))
                exact = float(eval_lambda(nsw, x, r))
                brute = brute_force_lambda(basis, x, r)
                assert math.isclose(exact, brute, rel_tol=1e-9), name

    def test_tuple_counts_martinet(self, nsw_polys):
        assert nsw_polys["martinet"].degree_counts() == {4: 12, 5: 12}

    def test_top_slot_is_constant(self, systems, nsw_polys):
        for name, nsw in nsw_polys.items():
            q = homogeneous_dimension(systems[name])
            assert nsw.Q == q
            consts = [e for e in nsw.slots[q] if e.poly.is_constant()]
            assert consts, name

    def test_budget_cap(self, bases):
        with pytest.raises(BudgetExceeded):
            build_nsw(bases["r4-fourfields"], tuple_cap=10)
        # allow_over_cap proceeds anyway
        nsw = build_nsw(bases["martinet"], tuple_cap=1, allow_over_cap=True)
        assert nsw.Q == 5

    def test_json_dump(self, nsw_polys):
        payload = json.loads(nsw_polys["grushin-1-1-2"].to_json())
        assert payload["schema_version"] == 1
        assert payload["homogeneous_dimension"] == 4
        assert set(payload["degrees"]) == {"2", "3", "4"}


class TestEvaluation:
    def test_grushin_closed_form(self, nsw_polys):
        # f_2 = 6 x^2, f_3 = 24|x|, f_4 = 24 for (d_x, 3x^2 d_y)
        nsw = nsw_polys["grushin-1-1-2"]
        x = [Fraction(1, 2), Fraction(7)]
        assert nsw.f_k(2, x) == Fraction(3, 2)
        assert nsw.f_k(3, x) == 12
        assert nsw.f_k(4, x) == 24
        assert eval_lambda(nsw, [0, 0], Fraction(1, 2)) == Fraction(24, 16)

    def test_martinet_at_origin(self, nsw_polys):
        nsw = nsw_polys["martinet"]
        assert eval_lambda(nsw, [0, 0, 0], Fraction(1, 2)) == Fraction(3, 4)
        assert nsw.f_k(4, [1, 0, 0]) == 24

    def test_scaling_identity_random(self, systems, nsw_polys):
        rng = random.Random(43)
        for name, nsw in nsw_polys.items():
            system = systems[name]
            for _ in range(5):
                x = random_point(rng, system.dim, max_num=3)
                r = Fraction(rng.randint(1, 5), rng.randint(1, 5))
                t = Fraction(rng.randint(1, 4), rng.randint(1, 4))
                lhs = eval_lambda(nsw, system.dilation(x, t), t * r)
                rhs = t ** nsw.Q * eval_lambda(nsw, x, r)
                assert lhs == rhs, name

    def test_radius_must_be_positive(self, nsw_polys):
        with pytest.raises(ValueError):
            eval_lambda(nsw_polys["martinet"], [0, 0, 0], 0)

    def test_csv_table(self, nsw_polys):
        text = evaluation_table_csv(
            nsw_polys["grushin-1-1-2"], [([Fraction(0), Fraction(0)], Fraction(1))]
        )
        lines = text.strip().splitlines()
        assert lines[0] == "x1,x2,r,lambda"
        assert lines[1].endswith(",24")


class TestPointwiseNu:
    def test_matches_flag_nu(self, bases, nsw_polys):
        from subriemann.fields import flag_at

        rng = random.Random(47)
        for name, nsw in nsw_polys.items():
            basis = bases[name]
            for _ in range(20):
                pt = random_point(rng, basis.system.dim, max_num=3)
                assert pointwise_nu(nsw, pt) == flag_at(basis, pt).nu, name

    def test_known_values(self, nsw_polys):
        assert pointwise_nu(nsw_polys["martinet"], [0, 0, 0]) == 5
        assert pointwise_nu(nsw_polys["martinet"], [1, 0, 0]) == 4
        assert pointwise_nu(nsw_polys["grushin-1-1-2"], [0, 5]) == 4
        assert pointwise_nu(nsw_polys["grushin-1-1-2"], [Fraction(1, 3), 0]) == 2


class TestLevelSets:
    H_AXIS_1 = ("grushin-1-1-2", "bony3", "martinet", "r4-fourfields", "example6")

    def test_maximal_level_set_is_x1_zero(self, nsw_polys):
        rng = random.Random(53)
        for name in self.H_AXIS_1:
            nsw = nsw_polys[name]
            dim = nsw.n
            samples = [random_point(rng, dim, max_num=3) for _ in range(40)]
            samples += [[0] + random_point(rng, dim - 1, max_num=3) for _ in range(20)]
            rep = level_set_probe(nsw, lambda pt: pt[0] == 0, samples)
            assert rep.ok, (name, str(rep))

    def test_probe_reports_counterexamples(self, nsw_polys):
        rep = level_set_probe(
            nsw_polys["martinet"], lambda pt: pt[1] == 0, [[0, 1, 0]]
        )
        assert not rep.ok
        assert rep.counterexamples

    def test_metivier(self, nsw_polys):
        rng = random.Random(59)
        h_samples = [random_point(rng, 3) for _ in range(20)]
        assert metivier_report(nsw_polys["heisenberg1"], h_samples)
        assert not metivier_report(nsw_polys["grushin-1-1-2"], [[1, 0]])


class TestDomainSpec:
    def test_parse_and_nu_tilde(self, nsw_polys):
        text = (
            "dim = 3\n"
            "box = 0,1 ; -1,1 ; -1,1\n"
            "interior = 1/2, 0, 0\n"
            "closure = 0, 0, 0\n"
        )
        dom = parse_domain_spec(text)
        assert dom.dim == 3
        assert dom.predicate([Fraction(1, 2), 0, 0])
        assert not dom.predicate([2, 0, 0])
        assert nu_tilde(nsw_polys["ex31"], dom) == 6

    def test_interior_sample_must_satisfy_predicate(self):
        with pytest.raises(ValueError):
            parse_domain_spec("dim = 1\nbox = 0,1\ninterior = 2\n")

    def test_rejects_malformed(self):
        with pytest.raises(ValueError):
            parse_domain_spec("box = 0,1\n")
        with pytest.raises(ValueError):
            parse_domain_spec("dim = 1\nbox = 0,1\nwhatever = 3\n")

    def test_domain_spec_tags(self):
        with pytest.raises(ValueError):
            DomainSpec(1, lambda p: True, [(Fraction(0), Fraction(1))],
                       [((Fraction(0),), "edge")])
