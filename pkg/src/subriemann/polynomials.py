"""Exact multivariate polynomial arithmetic over the rationals.

Coefficients are `fractions.Fraction` throughout; floating point never
enters this layer, so sign and vanishing decisions are exact.  Monomials
are stored sparsely as a map from exponent tuples to nonzero coefficients,
which makes structural equality a canonical-form comparison.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class PolynomialError(ValueError):
    pass


def _grlex_key(exponents: tuple[int, ...]) -> tuple:
    return (sum(exponents), exponents)


class Polynomial:
    """Sparse polynomial in ``dim`` variables with Fraction coefficients.

    Immutable by convention: no public method mutates ``terms`` after
    construction, so instances can be shared freely across workers.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[tuple[int, ...], Fraction | int] | None = None):
        if dim < 0:
            raise PolynomialError("dimension must be non-negative")
        self.dim = dim
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != dim:
                    raise PolynomialError(f"exponent tuple {exps} does not match dimension {dim}")
                if any(e < 0 for e in exps):
                    raise PolynomialError(f"negative exponent in {exps}")
                c = Fraction(coeff)
                if c != 0:
                    clean[exps] = clean.get(exps, Fraction(0)) + c
                    if clean[exps] == 0:
                        del clean[exps]
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls(dim, {})

    @classmethod
    def constant(cls, dim: int, value) -> "Polynomial":
        return cls(dim, {(0,) * dim: Fraction(value)})

    @classmethod
    def variable(cls, dim: int, j: int) -> "Polynomial":
        """The monomial x_j (1-based index)."""
        if not 1 <= j <= dim:
            raise PolynomialError(f"variable index {j} out of range 1..{dim}")
        exps = [0] * dim
        exps[j - 1] = 1
        return cls(dim, {tuple(exps): Fraction(1)})

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise PolynomialError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        """Degree of the zero polynomial is reported as -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, j: int) -> int:
        if not 1 <= j <= self.dim:
            raise PolynomialError(f"axis {j} out of range 1..{self.dim}")
        if not self.terms:
            return -1
        return max(e[j - 1] for e in self.terms)

    # -- arithmetic ---------------------------------------------------

    def _check_dim(self, other: "Polynomial") -> None:
        if self.dim != other.dim:
            raise PolynomialError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.dim, other)
        self._check_dim(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        res = Polynomial.__new__(Polynomial)
        res.dim = self.dim
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        res = Polynomial.__new__(Polynomial)
        res.dim = self.dim
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.dim, other)
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return Polynomial.zero(self.dim)
            res = Polynomial.__new__(Polynomial)
            res.dim = self.dim
            res.terms = {e: k * c for e, k in self.terms.items()}
            return res
        self._check_dim(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        res = Polynomial.__new__(Polynomial)
        res.dim = self.dim
        res.terms = out
        return res

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise PolynomialError("negative power")
        out = Polynomial.constant(self.dim, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.dim, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.dim, frozenset(self.terms.items())))

    # -- calculus -----------------------------------------------------

    def partial(self, j: int) -> "Polynomial":
        """Exact partial derivative with respect to x_j (1-based)."""
        if not 1 <= j <= self.dim:
            raise PolynomialError(f"axis {j} out of range 1..{self.dim}")
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            k = e[j - 1]
            if k == 0:
                continue
            ne = list(e)
            ne[j - 1] = k - 1
            out[tuple(ne)] = c * k
        return Polynomial(self.dim, out)

    def eval(self, point: Sequence) -> Fraction:
        """Exact evaluation at a rational point."""
        if len(point) != self.dim:
            raise PolynomialError(f"point length {len(point)} != dimension {self.dim}")
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def eval_float(self, point: Sequence[float]) -> float:
        if len(point) != self.dim:
            raise PolynomialError(f"point length {len(point)} != dimension {self.dim}")
        total = 0.0
        for e, c in self.terms.items():
            v = float(c)
            for x, k in zip(point, e):
                if k:
                    v *= float(x) ** k
            total += v
        return total

    def eval_grid(self, coords):
        """Evaluate on numpy coordinate arrays (broadcast together)."""
        import numpy as np

        if len(coords) != self.dim:
            raise PolynomialError("coordinate count mismatch")
        shape = np.broadcast_shapes(*(np.shape(c) for c in coords)) if coords else ()
        total = np.zeros(shape)
        for e, c in self.terms.items():
            term = np.full(shape, float(c))
            for x, k in zip(coords, e):
                if k:
                    term = term * np.asarray(x, dtype=float) ** k
            total = total + term
        return total

    # -- dilation and homogeneity ------------------------------------

    def dilate(self, weights: Sequence[int]) -> "Polynomial":
        """Return p(t^a1 x1, ..., t^an xn) in n+1 variables, t last."""
        if len(weights) != self.dim:
            raise PolynomialError("weight count mismatch")
        w = [int(a) for a in weights]
        if any(a <= 0 for a in w):
            raise PolynomialError("weights must be positive integers")
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            tdeg = sum(a * k for a, k in zip(w, e))
            out[e + (tdeg,)] = c
        return Polynomial(self.dim + 1, out)

    def homogeneity_degree(self, weights: Sequence[int]) -> int | None:
        """Common weighted degree of all monomials, or None if mixed.

        The zero polynomial returns None (it is vacuously homogeneous of
        every degree; callers flag that case separately).
        """
        if len(weights) != self.dim:
            raise PolynomialError("weight count mismatch")
        degs = {sum(a * k for a, k in zip(weights, e)) for e in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_dt_homogeneous(self, weights: Sequence[int], sigma: int) -> bool:
        if self.is_zero():
            return True
        return self.homogeneity_degree(weights) == sigma

    def inhomogeneous_monomials(self, weights: Sequence[int], sigma: int) -> list[tuple[int, ...]]:
        """Exponent tuples whose weighted degree differs from sigma."""
        return sorted(
            e for e in self.terms if sum(a * k for a, k in zip(weights, e)) != sigma
        )

    # -- substitution -------------------------------------------------

    def compose(self, maps: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute x_j -> maps[j-1]; all maps share one dimension."""
        if len(maps) != self.dim:
            raise PolynomialError("substitution needs one polynomial per variable")
        if not maps:
            return Polynomial(0, dict(self.terms))
        new_dim = maps[0].dim
        for m in maps:
            if m.dim != new_dim:
                raise PolynomialError("substitution maps must share a dimension")
        # cache powers of each map
        powers: list[dict[int, Polynomial]] = [
            {0: Polynomial.constant(new_dim, 1)} for _ in maps
        ]
        result = Polynomial.zero(new_dim)
        for e, c in self.terms.items():
            term = Polynomial.constant(new_dim, c)
            for j, k in enumerate(e):
                if k == 0:
                    continue
                cache = powers[j]
                if k not in cache:
                    p = max(cache)
                    acc = cache[p]
                    while p < k:
                        acc = acc * maps[j]
                        p += 1
                        cache[p] = acc
                term = term * cache[k]
            result = result + term
        return result

    def lift(self, new_dim: int, offset: int = 0) -> "Polynomial":
        """Embed into ``new_dim`` variables, shifting x_j to x_{j+offset}."""
        if offset + self.dim > new_dim:
            raise PolynomialError("lift target too small")
        out = {}
        for e, c in self.terms.items():
            ne = (0,) * offset + e + (0,) * (new_dim - offset - self.dim)
            out[ne] = c
        return Polynomial(new_dim, out)

    def substitute_value(self, j: int, value) -> "Polynomial":
        """Set x_j = value (a rational constant), keeping the dimension."""
        if not 1 <= j <= self.dim:
            raise PolynomialError(f"axis {j} out of range 1..{self.dim}")
        v = Fraction(value)
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            k = e[j - 1]
            ne = list(e)
            ne[j - 1] = 0
            ne = tuple(ne)
            add = c * v ** k if k else c
            s = out.get(ne, Fraction(0)) + add
            if s == 0:
                out.pop(ne, None)
            else:
                out[ne] = s
        return Polynomial(self.dim, out)

    # -- printing / parsing ------------------------------------------

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.dim}, '{format_polynomial(self)}')"


# ---------------------------------------------------------------------
# text form: `c * x1^a * x2^b` terms joined by + / -, rationals as p/q
# ---------------------------------------------------------------------


def format_polynomial(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for exps in sorted(p.terms, key=_grlex_key, reverse=True):
        c = p.terms[exps]
        factors = [
            f"x{j + 1}" if k == 1 else f"x{j + 1}^{k}"
            for j, k in enumerate(exps)
            if k > 0
        ]
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = str(mag) + "*" + "*".join(factors)
        pieces.append(("- " if c < 0 else "+ ") + body)
    first = pieces[0]
    out = ("-" + first[2:]) if first.startswith("- ") else first[2:]
    for piece in pieces[1:]:
        out += " " + piece
    return out


_TERM_SPLIT = re.compile(r"(?=[+-])")
_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_polynomial(text: str, dim: int) -> Polynomial:
    """Parse the canonical text syntax back into a polynomial."""
    s = text.strip()
    if not s:
        raise PolynomialError("empty polynomial text")
    if s == "0":
        return Polynomial.zero(dim)
    s = s.replace(" ", "")
    terms: dict[tuple[int, ...], Fraction] = {}
    for chunk in (c for c in _TERM_SPLIT.split(s) if c):
        sign = Fraction(1)
        if chunk[0] == "+":
            chunk = chunk[1:]
        elif chunk[0] == "-":
            sign = Fraction(-1)
            chunk = chunk[1:]
        if not chunk:
            raise PolynomialError(f"dangling sign in {text!r}")
        coeff = sign
        exps = [0] * dim
        for factor in chunk.split("*"):
            m = _FACTOR.match(factor)
            if m:
                j = int(m.group(1))
                if not 1 <= j <= dim:
                    raise PolynomialError(f"variable x{j} out of range for dimension {dim}")
                exps[j - 1] += int(m.group(2) or 1)
            else:
                try:
                    coeff *= Fraction(factor)
                except ValueError as exc:
                    raise PolynomialError(f"bad factor {factor!r} in {text!r}") from exc
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return Polynomial(dim, terms)


# ---------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------


def _divexact(num: Polynomial, den: Polynomial) -> Polynomial:
    """Exact polynomial division; caller guarantees divisibility."""
    if den.is_zero():
        raise PolynomialError("division by zero polynomial")
    if den.is_constant():
        return num * (1 / den.constant_value())
    den_lead = max(den.terms, key=_grlex_key)
    den_c = den.terms[den_lead]
    quotient = Polynomial.zero(num.dim)
    rem = num
    while not rem.is_zero():
        lead = max(rem.terms, key=_grlex_key)
        exps = tuple(a - b for a, b in zip(lead, den_lead))
        if any(e < 0 for e in exps):
            raise PolynomialError("inexact polynomial division")
        t = Polynomial(num.dim, {exps: rem.terms[lead] / den_c})
        quotient = quotient + t
        rem = rem - t * den
    return quotient


def poly_det(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Exact determinant of a square polynomial matrix.

    Cofactor expansion for size <= 5, fraction-free Bareiss elimination
    above (keeps intermediate coefficient growth polynomial).
    """
    n = len(matrix)
    if n == 0:
        raise PolynomialError("empty matrix")
    for row in matrix:
        if len(row) != n:
            raise PolynomialError("matrix is not square")
    dim = matrix[0][0].dim
    for row in matrix:
        for p in row:
            if p.dim != dim:
                raise PolynomialError("matrix entries have mixed dimensions")
    if n <= 5:
        return _det_cofactor([list(row) for row in matrix])
    return _det_bareiss([list(row) for row in matrix])


def _det_cofactor(m: list[list[Polynomial]]) -> Polynomial:
    n = len(m)
    dim = m[0][0].dim
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = Polynomial.zero(dim)
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [[m[i][k] for k in range(n) if k != j] for i in range(1, n)]
        cof = m[0][j] * _det_cofactor(minor)
        total = total + cof if j % 2 == 0 else total - cof
    return total


def _det_bareiss(m: list[list[Polynomial]]) -> Polynomial:
    n = len(m)
    dim = m[0][0].dim
    sign = 1
    prev = Polynomial.constant(dim, 1)
    for k in range(n - 1):
        pivot_row = k
        while m[pivot_row][k].is_zero():
            pivot_row += 1
            if pivot_row == n:
                return Polynomial.zero(dim)
        if pivot_row != k:
            m[pivot_row], m[k] = m[k], m[pivot_row]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = _divexact(num, prev)
            m[i][k] = Polynomial.zero(dim)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det
