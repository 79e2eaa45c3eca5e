"""
Polynomials on (g*)^N.

A PhaseSpace owns one sympy polynomial ring over QQ whose generators are
the coordinate functions x_{s,a}(xi) = xi_s(J_a), one block of dim g
generators per site s. PolynomialOnDual wraps a ring element together with
its phase space so arity mismatches can be detected.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, ring

from gaudin_lab import exact
from gaudin_lab.liealg import InvariantForm, SimpleLieAlgebra, dual_bases, trace_form


class PhaseSpace:
    """The Poisson manifold (g*)^N with Kirillov-Kostant structure per factor."""

    def __init__(self, algebra: SimpleLieAlgebra, n_sites: int = 1,
                 form: Optional[InvariantForm] = None):
        self.algebra = algebra
        self.n_sites = n_sites
        self.form = form or trace_form(algebra)
        names = [f"x{s}_{label}" for s in range(n_sites) for label in algebra.labels]
        self.ring, *self.gens = ring(",".join(names), QQ)

    def __repr__(self) -> str:
        return f"PhaseSpace({self.algebra.label}, sites={self.n_sites})"

    def index(self, site: int, a: int) -> int:
        return site * self.algebra.dim + a

    def coordinate(self, site: int, a: int) -> PolyElement:
        return self.gens[self.index(site, a)]

    def ground(self, value: Any) -> Any:
        q = exact.frac(value)
        return QQ(q.numerator, q.denominator)

    @cached_property
    def dual_matrix(self) -> np.ndarray:
        return dual_bases(self.algebra, self.form).dual

    def dual_coordinate(self, site: int, a: int) -> PolyElement:
        """x^a = xi(J^a) expressed through the x_c."""
        total = self.ring.zero
        for c, v in enumerate(self.dual_matrix[:, a]):
            if v != 0:
                total += self.coordinate(site, c) * self.ground(v)
        return total

    def matrix_point(self, site: int) -> np.ndarray:
        """X = sum_a x_{site,a} rho(J^a) as a matrix of ring elements."""
        g = self.algebra
        n = g.matrix_size
        x_mat = np.empty((n, n), dtype=object)
        x_mat.fill(self.ring.zero)
        for a in range(g.dim):
            dual_rep = g.matrix(self.dual_matrix[:, a])
            coord = self.coordinate(site, a)
            for i, j in zip(*np.nonzero(dual_rep != 0)):
                x_mat[i, j] = x_mat[i, j] + coord * self.ground(dual_rep[i, j])
        return x_mat

    def linear(self, site: int, coefficients: Sequence[Any]) -> PolyElement:
        """sum_a c_a x_{site,a}."""
        total = self.ring.zero
        for a, c in enumerate(coefficients):
            if c != 0:
                total += self.coordinate(site, a) * self.ground(c)
        return total

    def constant(self, value: Any) -> "PolynomialOnDual":
        return PolynomialOnDual(self, self.ring.ground_new(self.ground(value)))

    def wrap(self, poly: PolyElement) -> "PolynomialOnDual":
        return PolynomialOnDual(self, poly)


def to_fraction(coeff: Any) -> Fraction:
    return Fraction(int(QQ.numer(coeff)), int(QQ.denom(coeff)))


@dataclass(frozen=True, eq=False)
class PolynomialOnDual:
    """A polynomial with exact rational coefficients on a phase space."""
    space: PhaseSpace
    poly: PolyElement

    @property
    def arity(self) -> int:
        return self.space.n_sites

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.poly:
            return -1
        return max(sum(m) for m in self.poly.monoms())

    def is_zero(self) -> bool:
        return not self.poly

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.poly.monoms()}) <= 1

    def homogeneous_part(self, degree: int) -> "PolynomialOnDual":
        terms = {m: c for m, c in self.poly.terms() if sum(m) == degree}
        return PolynomialOnDual(self.space, self.space.ring.from_dict(terms) if terms
                                else self.space.ring.zero)

    def top(self) -> "PolynomialOnDual":
        return self.homogeneous_part(max(self.degree, 0))

    def terms(self) -> Iterator[Tuple[Tuple[int, ...], Fraction]]:
        for monom, coeff in self.poly.terms():
            yield monom, to_fraction(coeff)

    def diff(self, site: int, a: int) -> "PolynomialOnDual":
        return PolynomialOnDual(self.space, self.poly.diff(self.space.coordinate(site, a)))

    def evaluate(self, point: Sequence[Any]) -> Fraction:
        """Evaluate at a point given as N*dim exact coordinates."""
        values = [exact.frac(v) for v in point]
        total = Fraction(0)
        for monom, coeff in self.terms():
            term = coeff
            for v, k in zip(values, monom):
                if k:
                    term *= v ** k
            total += term
        return total

    def evaluate_numeric(self, point: Sequence[complex]) -> complex:
        total = 0j
        for monom, coeff in self.terms():
            term = complex(coeff)
            for v, k in zip(point, monom):
                if k:
                    term *= complex(v) ** k
            total += term
        return total

    def _coerce(self, other: Any) -> PolyElement:
        if isinstance(other, PolynomialOnDual):
            return other.poly
        return self.space.ring.ground_new(self.space.ground(other))

    def __add__(self, other: Any) -> "PolynomialOnDual":
        return PolynomialOnDual(self.space, self.poly + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other: Any) -> "PolynomialOnDual":
        return PolynomialOnDual(self.space, self.poly - self._coerce(other))

    def __rsub__(self, other: Any) -> "PolynomialOnDual":
        return PolynomialOnDual(self.space, self._coerce(other) - self.poly)

    def __neg__(self) -> "PolynomialOnDual":
        return PolynomialOnDual(self.space, -self.poly)

    def __mul__(self, other: Any) -> "PolynomialOnDual":
        return PolynomialOnDual(self.space, self.poly * self._coerce(other))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PolynomialOnDual):
            return self.poly == other.poly
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.poly)

    def __repr__(self) -> str:
        return f"PolynomialOnDual({self.poly.as_expr()})"

    def to_json(self) -> List[List[Any]]:
        """List of [exponent vector, "p/q"] pairs in ring order."""
        return [[list(m), exact.fraction_str(c)] for m, c in sorted(self.terms())]


def same_space(*polys: PolynomialOnDual) -> bool:
    return len({id(p.space) for p in polys}) == 1
