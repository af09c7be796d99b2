"""The Nagel-Stein-Wainger ball-volume polynomial and its level sets.

Lambda(x, r) = sum_I |lambda_I(x)| r^d(I), where I ranges over ordered
n-tuples of commutator basis entries and lambda_I is the exact
determinant of their coefficient matrix.  The signed determinants are
stored symbolically; absolute values are applied only at evaluation, so
the symbolic layer stays exact.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .fields import CommutatorBasis, FieldError, rational_rank
from .polynomials import Polynomial, format_polynomial, poly_det

DEFAULT_TUPLE_CAP = 2_000_000


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class LambdaEntry:
    """One determinant lambda_I with its degree and ordered-tuple count.

    ``multiplicity`` is the number of ordered n-tuples sharing this
    (sorted) index combination: n! for distinct indices.  Tuples with a
    repeated index have zero determinant and are skipped outright.
    """

    indices: tuple[int, ...]
    poly: Polynomial
    degree: int
    multiplicity: int


class BallPolynomial:
    """Coefficient family {f_k}, k in [n, Q], of Lambda(x, r)."""

    def __init__(self, basis: CommutatorBasis, slots: dict[int, list[LambdaEntry]]):
        self.basis = basis
        self.n = basis.system.dim
        self.Q = sum(basis.system.weights)
        self.slots = {k: list(v) for k, v in sorted(slots.items())}
        top = self.slots.get(self.Q, [])
        if not any(e.poly.is_constant() and not e.poly.is_zero() for e in top):
            raise FieldError("degree-Q slot must contain a nonzero constant")

    def f_k(self, k: int, x) -> Fraction:
        """Exact f_k(x) = sum over tuples of |lambda_I(x)|."""
        total = Fraction(0)
        for e in self.slots.get(k, []):
            total += e.multiplicity * abs(e.poly.eval(x))
        return total

    def entry_polynomials(self, k: int) -> list[Polynomial]:
        return [e.poly for e in self.slots.get(k, [])]

    def degree_counts(self) -> dict[int, int]:
        """Ordered-tuple counts per degree k."""
        return {k: sum(e.multiplicity for e in v) for k, v in self.slots.items()}

    def to_json(self) -> str:
        payload = {
            "schema_version": 1,
            "dim": self.n,
            "homogeneous_dimension": self.Q,
            "degrees": {
                str(k): [
                    {
                        "indices": list(e.indices),
                        "multiplicity": e.multiplicity,
                        "lambda": format_polynomial(e.poly),
                    }
                    for e in v
                ]
                for k, v in self.slots.items()
            },
        }
        return json.dumps(payload, indent=2)


def build_nsw(
    basis: CommutatorBasis,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
    allow_over_cap: bool = False,
) -> BallPolynomial:
    """Assemble the ball-volume polynomial from a commutator basis.

    Iterates over all ordered n-tuples of basis indices.  Repeated-index
    tuples determine singular matrices and are skipped; the remaining
    ordered tuples are grouped by sorted combination (the determinant is
    sign-invariant under column permutation and only |lambda_I| enters),
    each carrying multiplicity n!.
    """
    system = basis.system
    n = system.dim
    q = len(basis.entries)
    if q ** n > tuple_cap and not allow_over_cap:
        raise BudgetExceeded(
            f"{q}^{n} ordered tuples exceed the cap of {tuple_cap}; "
            "pass allow_over_cap=True to proceed"
        )
    slots: dict[int, list[LambdaEntry]] = {}
    perm = math.factorial(n)
    for combo in itertools.combinations(range(q), n):
        entries = [basis.entries[i] for i in combo]
        matrix = [list(e.vf.coeffs) for e in entries]
        det = poly_det(matrix)
        if det.is_zero():
            continue
        degree = sum(e.degree for e in entries)
        slots.setdefault(degree, []).append(
            LambdaEntry(tuple(i + 1 for i in combo), det, degree, perm)
        )
    return BallPolynomial(basis, slots)


def eval_lambda(nsw: BallPolynomial, x, r) -> Fraction:
    """Exact Lambda(x, r) for rational x and r > 0."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("radius must be positive")
    total = Fraction(0)
    for k in nsw.slots:
        fk = nsw.f_k(k, x)
        if fk:
            total += fk * r ** k
    return total


def pointwise_nu(nsw: BallPolynomial, x) -> int:
    """nu(x) = min{ d(I) : lambda_I(x) != 0 }, decided exactly."""
    for k in nsw.slots:
        if nsw.f_k(k, x) != 0:
            return k
    raise FieldError(f"all lambda_I vanish at {x}; Hormander fails there")


@dataclass
class DomainSpec:
    """A domain given by a membership predicate, box, and sample points.

    Samples are rational points tagged 'interior' or 'closure'.  All
    closure-based quantities computed from a DomainSpec are certificates
    over the sample set, not decisions about the uncountable closure.
    """

    dim: int
    predicate: Callable[[Sequence[Fraction]], bool]
    box: list[tuple[Fraction, Fraction]]
    samples: list[tuple[tuple[Fraction, ...], str]] = field(default_factory=list)

    def __post_init__(self):
        for pt, tag in self.samples:
            if len(pt) != self.dim:
                raise ValueError("sample dimension mismatch")
            if tag not in ("interior", "closure"):
                raise ValueError(f"unknown sample tag {tag!r}")
            if tag == "interior" and not self.predicate(pt):
                raise ValueError(f"interior sample {pt} fails the membership predicate")

    def sample_points(self):
        return [pt for pt, _ in self.samples]


def parse_domain_spec(text: str) -> DomainSpec:
    """Domain spec file: a rational box plus tagged sample points.

        dim = 3
        box = 0,1 ; -1,1 ; -1,1
        interior = 1/2, 0, 0
        closure = 0, 0, 0

    Membership is closed-box containment; `interior` and `closure`
    lines (repeatable) list sample points with their tags.
    """
    dim = None
    box = None
    samples: list[tuple[tuple[Fraction, ...], str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "dim":
            dim = int(value)
        elif key == "box":
            box = []
            for part in value.split(";"):
                lo, hi = (Fraction(v.strip()) for v in part.split(","))
                box.append((lo, hi))
        elif key in ("interior", "closure"):
            pt = tuple(Fraction(v.strip()) for v in value.split(","))
            samples.append((pt, key))
        else:
            raise ValueError(f"unrecognized line in domain spec: {raw!r}")
    if dim is None or box is None:
        raise ValueError("domain spec must declare dim and box")
    if len(box) != dim:
        raise ValueError("box must have one interval per coordinate")

    def member(pt, _box=tuple(box)):
        return all(lo <= Fraction(x) <= hi for x, (lo, hi) in zip(pt, _box))

    return DomainSpec(dim, member, box, samples)


def nu_tilde(nsw: BallPolynomial, domain: DomainSpec) -> int:
    """Max of nu over the closure samples: a lower-bound certificate."""
    pts = domain.sample_points()
    if not pts:
        raise ValueError("domain has no sample points")
    return max(pointwise_nu(nsw, pt) for pt in pts)


@dataclass
class LevelSetReport:
    ok: bool
    counterexamples: list  # (point, nu, candidate verdict)

    def __str__(self) -> str:
        if self.ok:
            return "level set candidate PASS"
        return "level set candidate FAIL at " + ", ".join(str(p) for p, _, _ in self.counterexamples[:5])


def level_set_probe(
    nsw: BallPolynomial,
    candidate: Callable[[Sequence[Fraction]], bool],
    samples: Sequence[Sequence[Fraction]],
) -> LevelSetReport:
    """Check nu(x) = Q <=> candidate(x) on every sample point."""
    bad = []
    for pt in samples:
        pt = tuple(Fraction(v) for v in pt)
        nu = pointwise_nu(nsw, pt)
        inside = bool(candidate(pt))
        if (nu == nsw.Q) != inside:
            bad.append((pt, nu, inside))
    return LevelSetReport(not bad, bad)


def metivier_report(nsw: BallPolynomial, samples: Sequence[Sequence[Fraction]]) -> bool:
    """True iff nu = Q at every sample (evidence for equiregularity)."""
    return all(pointwise_nu(nsw, pt) == nsw.Q for pt in samples)


def evaluation_table_csv(nsw: BallPolynomial, rows) -> str:
    """CSV of (x..., r, Lambda) evaluations; floats to 12 significant digits."""
    out = []
    header = [f"x{i + 1}" for i in range(nsw.n)] + ["r", "lambda"]
    out.append(",".join(header))
    for x, r in rows:
        lam = eval_lambda(nsw, x, r)
        out.append(
            ",".join([f"{float(v):.12g}" for v in x] + [f"{float(r):.12g}", f"{float(lam):.12g}"])
        )
    return "\n".join(out) + "\n"
