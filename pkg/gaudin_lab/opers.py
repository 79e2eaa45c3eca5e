"""
Opers, Cartan Connections and the Miura Transformation

An oper here is a connection d/dt + p_{-1} + b(t) with b valued in the
Borel subalgebra, taken up to gauge by unipotent loops. Every class has a
unique canonical representative d/dt + p_{-1} + sum_j v_j(t) p_j where the
p_j span ker(ad p_1) and p_1 itself is the first of them.

Coefficients are ``RationalFunction`` objects, so the whole reduction is
exact when the input is.

Topics covered:
- Graded gauge elimination (canonical form) and gauge transformations
- Cartan connections of Bethe solutions and their expansion at infinity
- Miura transformation and m-residues at marked points
- The eigenvalue function of the quadratic Gaudin generating function
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from gaudin_lab import exact
from gaudin_lab.bethe import BetheProblem, BetheSolution, equations
from gaudin_lab.errors import BetheResidualError, ResidueOrderError
from gaudin_lab.liealg import (
    InvariantForm,
    SimpleLieAlgebra,
    principal_data,
    trace_form,
    weight_inner_product,
    weight_to_cartan,
)
from gaudin_lab.rational import RationalFunction, as_rational

logger = logging.getLogger(__name__)

Vector = List[RationalFunction]

INFINITY = "inf"


# -- vectors of rational functions -----------------------------------------------


def _lift(values: Sequence[Any]) -> Vector:
    return [as_rational(v) for v in values]


def _add(x: Sequence[RationalFunction], y: Sequence[Any], scale: Any = 1) -> Vector:
    return [a + as_rational(b).scale(scale) for a, b in zip(x, y)]


def _is_zero_vector(x: Sequence[Any]) -> bool:
    return all(as_rational(v).is_zero() for v in x)


def _exp_ad(g: SimpleLieAlgebra, n: Sequence[Any], x: Sequence[Any]) -> Vector:
    """exp(ad n) x for nilpotent n."""
    total = _lift(x)
    term = total
    for k in range(1, g.coxeter_number + 1):
        term = [v.scale(Fraction(1, k)) for v in _lift(g.bracket(n, term))]
        if _is_zero_vector(term):
            break
        total = _add(total, term)
    return total


def _log_derivative(g: SimpleLieAlgebra, n: Sequence[RationalFunction]) -> Vector:
    """(exp n)' exp(-n) = sum_k (ad n)^k n' / (k+1)!."""
    term = [v.derivative() for v in n]
    total = list(term)
    for k in range(1, g.coxeter_number + 1):
        term = _lift(g.bracket(n, term))
        if _is_zero_vector(term):
            break
        total = _add(total, term, Fraction(1, factorial(k + 1)))
    return total


# -- canonical form ----------------------------------------------------------------


def oper_basis(g: SimpleLieAlgebra) -> Tuple[np.ndarray, ...]:
    """Canonical directions p_1, p_2, ...; the first is p_1 of the principal triple."""
    data = principal_data(g)
    return (data.p_1,) + tuple(data.canonical[1:])


@lru_cache(maxsize=None)
def _gauge_tables(g: SimpleLieAlgebra) -> Dict[int, Dict[str, Any]]:
    """
    Per principal degree d, the inverse of (n, c) -> [p_-1, n] + c from
    g_{d+1} (+) span(canonical of degree d) onto g_d.
    """
    data = principal_data(g)
    basis = oper_basis(g)
    tables: Dict[int, Dict[str, Any]] = {}
    for d in sorted(k for k in data.gradation if k >= 0):
        rows = list(data.gradation[d])
        upper = list(data.gradation.get(d + 1, ()))
        canon = [j for j, deg in enumerate(data.canonical_degrees) if deg == d]
        columns = []
        for a in upper:
            image = g.bracket(data.p_minus1, g.basis(a))
            columns.append([image[r] for r in rows])
        for j in canon:
            columns.append([basis[j][r] for r in rows])
        M = exact.as_exact(np.array(columns, dtype=object).T.reshape(len(rows), len(columns)))
        tables[d] = {"rows": rows, "upper": upper, "canonical": canon,
                     "inverse": exact.inverse(M)}
    return tables


def gauge_transform(g: SimpleLieAlgebra, b: Sequence[Any], n: Sequence[Any]) -> Vector:
    """
    Borel part of exp(n) . (d/dt + p_-1 + b) for n valued in n_+.

    The gauge action is g A g^{-1} - g' g^{-1}.
    """
    p_minus1 = principal_data(g).p_minus1
    n = _lift(n)
    moved = _exp_ad(g, n, _add(_lift(p_minus1), b))
    moved = _add(moved, _log_derivative(g, n), -1)
    return _add(moved, p_minus1, -1)


@dataclass(frozen=True, eq=False)
class CanonicalOper:
    """
    Canonical representative d/dt + p_-1 + sum_j v_j(t) p_j.

    Attributes:
        algebra: The Lie algebra (its own Langlands dual in type A).
        coefficients: v_1..v_l as rational functions.
        degrees: Exponents d_j of the p_j.
        points: Marked points by name, e.g. ``{"z1": 0, "w1": (0.5+0j)}``.
    """
    algebra: SimpleLieAlgebra
    coefficients: Tuple[RationalFunction, ...]
    degrees: Tuple[int, ...]
    points: Dict[str, Any] = field(default_factory=dict)

    @property
    def is_exact(self) -> bool:
        return all(v.is_exact for v in self.coefficients)

    def singular_points(self, tol: float = 0.0) -> List[Any]:
        found = []
        for v in self.coefficients:
            for p in v.points:
                if v.pole_order(p, tol) and p not in found:
                    found.append(p)
        return found

    def singularity_order(self, point: Any, tol: float = 0.0) -> int:
        """Smallest m with v_j = O(t^{-m(d_j+1)}) at ``point`` for every j."""
        order = 0
        for v, d in zip(self.coefficients, self.degrees):
            k = v.pole_order(point, tol)
            order = max(order, -(-k // (d + 1)))
        return order

    def chop(self, tol: float) -> "CanonicalOper":
        return CanonicalOper(self.algebra, tuple(v.chop(tol) for v in self.coefficients),
                             self.degrees, dict(self.points))

    def close_to(self, other: "CanonicalOper", tol: float) -> bool:
        return all(a.close_to(b, tol) for a, b in zip(self.coefficients, other.coefficients))

    def element(self, t: complex) -> np.ndarray:
        """Coordinates of p_-1 + sum_j v_j(t) p_j at a numeric point."""
        g = self.algebra
        out = exact.to_complex(principal_data(g).p_minus1)
        for v, p in zip(self.coefficients, oper_basis(g)):
            out = out + complex(v(t)) * exact.to_complex(p)
        return out

    def matrix(self, t: complex) -> np.ndarray:
        """Defining-representation matrix of the connection at t."""
        g = self.algebra
        coords = self.element(t)
        return sum(c * exact.to_complex(g.matrices[a]) for a, c in enumerate(coords) if c != 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CanonicalOper):
            return NotImplemented
        return self.coefficients == other.coefficients

    __hash__ = None

    def to_json(self) -> Dict[str, Any]:
        return {
            "algebra": self.algebra.label,
            "degrees": list(self.degrees),
            "coefficients": [v.to_json() for v in self.coefficients],
            "points": {k: exact.scalar_json(p) for k, p in sorted(self.points.items())},
        }


def canonicalize(g: SimpleLieAlgebra, b: Sequence[Any],
                 points: Optional[Dict[str, Any]] = None) -> CanonicalOper:
    """
    Canonical form of d/dt + p_-1 + b(t).

    Degree by degree, the degree-d part of b is split as [p_-1, n_{d+1}] + c_d
    with c_d canonical, and exp(n_{d+1}) is applied; lower degrees are never
    touched again.

    Args:
        g: The Lie algebra.
        b: Borel-valued coefficients (scalars or RationalFunctions), one per basis vector.
        points: Optional registry of marked points carried to the result.

    Raises:
        ValueError: If b has a component along some f_alpha.
    """
    if len(b) != g.dim:
        raise ValueError(f"expected {g.dim} coefficients, got {len(b)}")
    b = _lift(b)
    for a in range(g.dim):
        if g.basis_kind(a)[0] == "f" and not b[a].is_zero():
            raise ValueError(f"b has a component along {g.labels[a]}; it must be Borel-valued")
    coefficients: Dict[int, RationalFunction] = {}
    for d, table in _gauge_tables(g).items():
        rows, upper, canon = table["rows"], table["upper"], table["canonical"]
        inv = table["inverse"]
        solution = []
        for k in range(len(upper) + len(canon)):
            total = RationalFunction()
            for r, row in enumerate(rows):
                if inv[k, r] != 0:
                    total = total + b[row].scale(inv[k, r])
            solution.append(total)
        for offset, j in enumerate(canon):
            coefficients[j] = solution[len(upper) + offset]
        if upper and not all(x.is_zero() for x in solution[:len(upper)]):
            n = [RationalFunction()] * g.dim
            for a, x in zip(upper, solution):
                n[a] = x
            b = gauge_transform(g, b, n)
    data = principal_data(g)
    return CanonicalOper(g, tuple(coefficients[j] for j in range(len(data.canonical))),
                         data.canonical_degrees, dict(points or {}))


def slice_coordinates(g: SimpleLieAlgebra, x: Sequence[Any]) -> Tuple[Any, ...]:
    """Canonical coordinates of p_-1 + x for a constant Borel element x."""
    oper = canonicalize(g, list(x))
    return tuple(v.poly[0] if v.poly else Fraction(0) for v in oper.coefficients)


def regular_oper_residue(g: SimpleLieAlgebra) -> Tuple[Any, ...]:
    """Residue of an oper regular at a point: the class of p_-1 - rho-check."""
    data = principal_data(g)
    return slice_coordinates(g, [-v / 2 for v in data.two_rho_check])


# -- Cartan connections --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CartanConnection:
    """
    An h*-valued rational function nu(t), stored through its coroot
    pairings <nu(t), alpha_i^vee>, with a registry of marked points.
    """
    algebra: SimpleLieAlgebra
    components: Tuple[RationalFunction, ...]
    points: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def zero(cls, g: SimpleLieAlgebra) -> "CartanConnection":
        return cls(g, tuple(RationalFunction() for _ in range(g.rank)))

    @classmethod
    def from_bethe(cls, problem: BetheProblem, w: Sequence[Any]) -> "CartanConnection":
        """
        lambda(t) = -chi + sum_i lambda_i/(t - z_i) - sum_j alpha_{i_j}/(t - w_j).
        """
        g = problem.algebra
        comps = []
        for k in range(g.rank):
            f = RationalFunction.constant(-problem.chi[k])
            for z, weight in zip(problem.points, problem.weights):
                f = f + RationalFunction.pole(z, 1, weight[k])
            for wj, c in zip(w, problem.coloring):
                f = f - RationalFunction.pole(wj, 1, g.cartan_matrix[k][c])
            comps.append(f)
        registry = {f"z{i + 1}": z for i, z in enumerate(problem.points)}
        registry.update({f"w{j + 1}": wj for j, wj in enumerate(w)})
        return cls(g, tuple(comps), registry)

    def residue(self, point: Any) -> Tuple[Any, ...]:
        return tuple(f.laurent_coefficient(point, -1) for f in self.components)

    def finite_residue_sum(self) -> Tuple[Any, ...]:
        total: List[Any] = [Fraction(0)] * self.algebra.rank
        points = {p for f in self.components for p in f.points}
        for p in points:
            total = [t + r for t, r in zip(total, self.residue(p))]
        return tuple(total)

    def to_cartan(self, form: Optional[InvariantForm] = None) -> Vector:
        """iota(nu(t)) in h_i coordinates."""
        g = self.algebra
        inv = (form or trace_form(g)).cartan_gram_inverse
        out = []
        for i in range(g.rank):
            total = RationalFunction()
            for k, f in enumerate(self.components):
                if inv[i, k] != 0:
                    total = total + f.scale(inv[i, k])
            out.append(total)
        return out

    def to_json(self) -> Dict[str, Any]:
        return {
            "components": [f.to_json() for f in self.components],
            "points": {k: exact.scalar_json(p) for k, p in sorted(self.points.items())},
        }


def infinity_expansion(connection: CartanConnection) -> CartanConnection:
    """
    The connection in the coordinate s = 1/t:
    lambda_inf(s) = -s^{-2} lambda(1/s) - 2 rho / s.
    """
    g = connection.algebra
    inv_square = RationalFunction.pole(Fraction(0), 2, Fraction(-1))
    comps = []
    for f, r in zip(connection.components, g.rho):
        comps.append(inv_square * f.compose_inverse() - RationalFunction.pole(Fraction(0), 1, 2 * r))
    return CartanConnection(g, tuple(comps), {INFINITY: Fraction(0)})


def residue_sum_rule(connection: CartanConnection) -> Tuple[Tuple[Any, ...], Tuple[Any, ...]]:
    """(residue at infinity, -2 rho - sum of finite residues)."""
    at_infinity = infinity_expansion(connection).residue(Fraction(0))
    finite = connection.finite_residue_sum()
    expected = tuple(-2 * r - s for r, s in zip(connection.algebra.rho, finite))
    return at_infinity, expected


def miura(connection: CartanConnection, form: Optional[InvariantForm] = None) -> CanonicalOper:
    """Canonical form of d/dt + p_-1 - iota(nu(t))."""
    g = connection.algebra
    b: Vector = [RationalFunction() for _ in range(g.dim)]
    for i, f in enumerate(connection.to_cartan(form)):
        b[i] = -f
    return canonicalize(g, b, connection.points)


# -- residues --------------------------------------------------------------------------


def residue_m(oper: CanonicalOper, point: Any, m: int) -> Tuple[Any, ...]:
    """
    m-residue at a finite point: with v_j = t^{-m(d_j+1)} u_j(t) in the
    local coordinate, returns (u_1(0) + delta_{m,1}/4, u_2(0), ...).

    Raises:
        ResidueOrderError: If some v_j has a pole of order above m(d_j+1).
    """
    if m < 1:
        raise ValueError("residue order must be positive")
    out = []
    for j, (v, d) in enumerate(zip(oper.coefficients, oper.degrees)):
        bound = m * (d + 1)
        order = v.pole_order(point)
        if order > bound:
            raise ResidueOrderError(point, order, bound)
        value = v.laurent_coefficient(point, -bound)
        if j == 0 and m == 1:
            value = value + Fraction(1, 4)
        out.append(value)
    return tuple(out)


def oper_at_infinity(oper: CanonicalOper) -> CanonicalOper:
    """
    The same oper in the coordinate s = 1/t; v_j is a (d_j+1)-differential,
    so it becomes (-s^{-2})^{d_j+1} v_j(1/s).
    """
    coefficients = []
    for v, d in zip(oper.coefficients, oper.degrees):
        factor = RationalFunction.pole(Fraction(0), 2 * (d + 1), Fraction(-1) ** (d + 1))
        coefficients.append(factor * v.compose_inverse())
    return CanonicalOper(oper.algebra, tuple(coefficients), oper.degrees, {INFINITY: Fraction(0)})


def infinity_residue(g: SimpleLieAlgebra, chi: Sequence[Any],
                     form: Optional[InvariantForm] = None) -> Tuple[Any, ...]:
    """Expected 2-residue at infinity for connection chi: slice coordinates of -iota(chi)."""
    x = [Fraction(0)] * g.dim
    for i, c in enumerate(weight_to_cartan(g, chi, form)):
        x[i] = -c
    return slice_coordinates(g, x)


def point_residue(g: SimpleLieAlgebra, weight: Sequence[Any],
                  form: Optional[InvariantForm] = None) -> Tuple[Any, ...]:
    """Expected 1-residue at a marked point with highest weight lambda: the class of -(lambda + rho)."""
    shifted = [exact.frac(x) + r for x, r in zip(weight, g.rho)]
    x = [Fraction(0)] * g.dim
    for i, c in enumerate(weight_to_cartan(g, shifted, form)):
        x[i] = -c
    return slice_coordinates(g, x)


# -- Bethe opers -----------------------------------------------------------------------


def oper_from_bethe(problem: BetheProblem, solution: BetheSolution, tol: float = 1e-8,
                    chop: Optional[float] = None) -> CanonicalOper:
    """
    Miura oper of the Cartan connection of a Bethe solution.

    Numeric pole coefficients at the w_j below ``chop`` are dropped.

    Raises:
        BetheResidualError: If the solution does not satisfy the Bethe equations.
    """
    w = list(solution.w)
    res = float(np.max(np.abs(equations(problem, np.array(w, dtype=complex))))) if w else 0.0
    if res > tol:
        raise BetheResidualError(res, tol)
    exact_roots = [x for x in w if exact.is_exact(x)]
    if len(exact_roots) == len(w):
        w = [exact.frac(x) for x in w]
    oper = miura(CartanConnection.from_bethe(problem, w))
    if chop is not None:
        oper = oper.chop(chop)
    logger.debug("Bethe oper for coloring %s: singular points %s",
                 problem.coloring, oper.singular_points(chop or 0.0))
    return oper


def eigenvalue_normalization(g: SimpleLieAlgebra, form: Optional[InvariantForm] = None) -> Fraction:
    """kappa(p_-1, p_1)."""
    data = principal_data(g)
    return (form or trace_form(g)).pair(data.p_minus1, data.p_1)


def eigenvalue_function(problem: BetheProblem, energies: Sequence[Any],
                        form: Optional[InvariantForm] = None) -> RationalFunction:
    """
    sum_i Delta_i/(u - z_i)^2 + sum_i E_i/(u - z_i) + (chi, chi)/2 with
    Delta_i = (lambda_i, lambda_i + 2 rho)/2 and E_i the eigenvalues of the
    shifted Gaudin Hamiltonians.
    """
    g = problem.algebra
    total = RationalFunction.constant(weight_inner_product(g, problem.chi, problem.chi, form) / 2)
    for z, weight, energy in zip(problem.points, problem.weights, energies):
        shifted = [x + 2 * r for x, r in zip(weight, g.rho)]
        delta = weight_inner_product(g, weight, shifted, form) / 2
        total = total + RationalFunction.pole(z, 2, delta) + RationalFunction.pole(z, 1, energy)
    return total


def oper_eigenvalue_function(oper: CanonicalOper, form: Optional[InvariantForm] = None) -> RationalFunction:
    """kappa(p_-1, p_1) v_1(u)."""
    return oper.coefficients[0].scale(eigenvalue_normalization(oper.algebra, form))
