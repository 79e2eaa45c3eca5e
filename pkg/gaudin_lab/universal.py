"""
Elements of U(g)^{(x)N} as linear combinations of words.

A word is a tuple of letters (site, a) standing for the ordered product of
basis elements J_a placed in tensor factor ``site``. No normal ordering is
attempted: two elements are compared through their realizations or their
symbols, never through their word expansions.
"""
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Mapping, Sequence, Tuple

from gaudin_lab import exact
from gaudin_lab.liealg import SimpleLieAlgebra
from gaudin_lab.polynomials import PhaseSpace, PolynomialOnDual

Letter = Tuple[int, int]
Word = Tuple[Letter, ...]


def _clean(terms: Mapping[Word, Any]) -> Dict[Word, Any]:
    return {w: c for w, c in terms.items() if c != 0}


@dataclass(frozen=True, eq=False)
class UniversalElement:
    """A finite sum of coefficient * word in U(g)^{(x)n_sites}."""
    algebra: SimpleLieAlgebra
    terms: Dict[Word, Any] = field(default_factory=dict)
    n_sites: int = 1

    @classmethod
    def zero(cls, algebra: SimpleLieAlgebra, n_sites: int = 1) -> "UniversalElement":
        return cls(algebra, {}, n_sites)

    @classmethod
    def scalar(cls, algebra: SimpleLieAlgebra, value: Any, n_sites: int = 1) -> "UniversalElement":
        return cls(algebra, _clean({(): value}), n_sites)

    @classmethod
    def generator(cls, algebra: SimpleLieAlgebra, a: int, site: int = 0,
                  n_sites: int = 1) -> "UniversalElement":
        return cls(algebra, {((site, a),): Fraction(1)}, n_sites)

    @classmethod
    def from_element(cls, algebra: SimpleLieAlgebra, coords: Sequence[Any], site: int = 0,
                     n_sites: int = 1) -> "UniversalElement":
        """The image of x = sum x_a J_a placed at one site."""
        return cls(algebra, _clean({((site, a),): c for a, c in enumerate(coords)}), n_sites)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    @property
    def is_exact(self) -> bool:
        return all(exact.is_exact(c) for c in self.terms.values())

    def is_zero(self) -> bool:
        return not self.terms

    def _combine(self, other: "UniversalElement", sign: int) -> "UniversalElement":
        if other.n_sites != self.n_sites:
            raise ValueError("elements live on different tensor powers")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + sign * c
        return UniversalElement(self.algebra, _clean(out), self.n_sites)

    def __add__(self, other: "UniversalElement") -> "UniversalElement":
        return self._combine(other, 1)

    def __sub__(self, other: "UniversalElement") -> "UniversalElement":
        return self._combine(other, -1)

    def __neg__(self) -> "UniversalElement":
        return self.scale(-1)

    def scale(self, value: Any) -> "UniversalElement":
        return UniversalElement(self.algebra, _clean({w: value * c for w, c in self.terms.items()}),
                                self.n_sites)

    def __mul__(self, other: Any) -> "UniversalElement":
        if not isinstance(other, UniversalElement):
            return self.scale(other)
        if other.n_sites != self.n_sites:
            raise ValueError("elements live on different tensor powers")
        out: Dict[Word, Any] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return UniversalElement(self.algebra, _clean(out), self.n_sites)

    def __rmul__(self, other: Any) -> "UniversalElement":
        return self.scale(other)

    def commutator(self, other: "UniversalElement") -> "UniversalElement":
        return self * other - other * self

    def diagonal(self, n_sites: int) -> "UniversalElement":
        """Iterated coproduct of a single-site element: J_a -> sum_s J_a^(s)."""
        if self.n_sites != 1:
            raise ValueError("the coproduct is taken of single-site elements")
        out: Dict[Word, Any] = {}
        for word, c in self.terms.items():
            for sites in itertools.product(range(n_sites), repeat=len(word)):
                w = tuple((s, a) for s, (_, a) in zip(sites, word))
                out[w] = out.get(w, 0) + c
        return UniversalElement(self.algebra, _clean(out), n_sites)

    def at_site(self, site: int, n_sites: int) -> "UniversalElement":
        """Place a single-site element in one tensor factor."""
        if self.n_sites != 1:
            raise ValueError("only single-site elements can be placed")
        terms = {tuple((site, a) for _, a in w): c for w, c in self.terms.items()}
        return UniversalElement(self.algebra, terms, n_sites)

    def symbol(self, space: PhaseSpace = None, full: bool = False) -> PolynomialOnDual:
        """
        Symbol: each word maps to the product of its coordinates.

        Only top-degree words contribute unless ``full`` is set.
        """
        space = space or PhaseSpace(self.algebra, self.n_sites)
        top = self.degree
        poly = space.ring.zero
        for word, c in self.terms.items():
            if not full and len(word) != top:
                continue
            term = space.ring.ground_new(space.ground(c))
            for site, a in word:
                term = term * space.coordinate(site, a)
            poly += term
        return PolynomialOnDual(space, poly)

    def __repr__(self) -> str:
        return f"UniversalElement({self.algebra.label}, {len(self.terms)} words, degree {self.degree})"


def symmetrize(letters: Sequence[Letter]) -> Dict[Word, Fraction]:
    """Average of the ordered products over all permutations of ``letters``."""
    k = len(letters)
    out: Dict[Word, Fraction] = {}
    weight = Fraction(1, math.factorial(k))
    for perm in itertools.permutations(letters):
        out[perm] = out.get(perm, Fraction(0)) + weight
    return out


def from_polynomial(poly: PolynomialOnDual) -> UniversalElement:
    """Symmetrization map S(g)^{(x)N} -> U(g)^{(x)N}."""
    space = poly.space
    dim = space.algebra.dim
    out: Dict[Word, Any] = {}
    for monom, coeff in poly.terms():
        letters = []
        for var, power in enumerate(monom):
            letters.extend([(var // dim, var % dim)] * power)
        for word, w in symmetrize(letters).items():
            out[word] = out.get(word, Fraction(0)) + coeff * w
    return UniversalElement(space.algebra, _clean(out), space.n_sites)
