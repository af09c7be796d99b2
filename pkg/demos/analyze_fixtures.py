"""Walk through every built-in system: hypotheses, Q, brackets, nu.

Run from the repository root:

    python demos/analyze_fixtures.py
"""

from fractions import Fraction

from subriemann import fixtures as fx
from subriemann.fields import check_h1, check_h2, enumerate_commutators, flag_at
from subriemann.nsw import build_nsw, eval_lambda, pointwise_nu


def main():
    for name, make in fx.ALL_BUILDERS.items():
        system = make()
        basis = enumerate_commutators(system)
        nsw = build_nsw(basis)
        print("=" * 60)
        print(f"{name}: dim {system.dim}, {system.m} fields, "
              f"weights {system.weights}, Q = {nsw.Q}")
        print(" ", check_h1(system).__str__().splitlines()[0])
        print(" ", check_h2(system, basis))
        print(f"  bracket entries per degree: {basis.canonical_degrees()}")
        print(f"  ball polynomial tuple counts: {nsw.degree_counts()}")

        origin = [0] * system.dim
        probe = [Fraction(1, 2)] + [0] * (system.dim - 1)
        for pt in (origin, probe):
            fd = flag_at(basis, pt)
            print(f"  at {tuple(map(str, pt))}: nu = {fd.nu}, "
                  f"flag {fd.nu_j}, weights {fd.weights}")
        lam = eval_lambda(nsw, origin, Fraction(1, 2))
        print(f"  Lambda(0, 1/2) = {lam} = {float(lam):.6g}")
        assert pointwise_nu(nsw, origin) == flag_at(basis, origin).nu


if __name__ == "__main__":
    main()
