"""
Classical Layer on g* and (g*)^N

Lie-Poisson brackets, shift-of-argument generators, Jacobian-rank
independence, the classical Gaudin L-operator with an irregular point at
infinity, Vinberg quadratic elements and symbol checks against quantum
operators. All computations are exact polynomial arithmetic over QQ.

Topics covered:
- Kirillov-Kostant bracket extended by Leibniz
- Directional derivatives D_chi and the shift-of-argument algebra
- Regularity of chi and exact Jacobian ranks
- Partial-fraction coefficients of P_k(eta(u))
- Quantization symbol checks and the generation identities
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from gaudin_lab import exact
from gaudin_lab.errors import ArityMismatchError, NonRegularElementError, UnsupportedAlgebraError
from gaudin_lab.hamiltonians import check_points, check_regular
from gaudin_lab.liealg import (
    InvariantForm,
    SimpleLieAlgebra,
    algebra_to_dual,
    dual_to_algebra,
    invariant_polynomials,
    root_length_squared,
    weight_to_cartan,
)
from gaudin_lab.polynomials import PhaseSpace, PolynomialOnDual
from gaudin_lab.rational import RationalFunction
from gaudin_lab.universal import UniversalElement

logger = logging.getLogger(__name__)

INFINITY = "inf"


def poisson_bracket(f: PolynomialOnDual, g: PolynomialOnDual) -> PolynomialOnDual:
    """
    Lie-Poisson bracket: {x_a, x_b} = x_[J_a, J_b] on each factor, zero across factors.

    Raises:
        ArityMismatchError: If f and g live on phase spaces of different arity.
    """
    if f.arity != g.arity:
        raise ArityMismatchError([f.arity, g.arity])
    if f.space is not g.space:
        raise ValueError("polynomials belong to different phase spaces")
    space = f.space
    alg = space.algebra
    sc = alg.structure_constants
    result = space.ring.zero
    for s in range(space.n_sites):
        df = [f.poly.diff(space.coordinate(s, a)) for a in range(alg.dim)]
        dg = [g.poly.diff(space.coordinate(s, b)) for b in range(alg.dim)]
        for a in range(alg.dim):
            if not df[a]:
                continue
            for b in range(alg.dim):
                if not dg[b] or not sc[a][b]:
                    continue
                linear = space.ring.zero
                for c, v in sc[a][b]:
                    linear += space.coordinate(s, c) * space.ground(v)
                result += df[a] * dg[b] * linear
    return PolynomialOnDual(space, result)


def directional_derivative(p: PolynomialOnDual, direction: Sequence[Any],
                           site: int = 0) -> PolynomialOnDual:
    """D_xi p = d/du p(x + u xi) at u = 0, xi given in g* coordinates."""
    space = p.space
    total = space.ring.zero
    for a, v in enumerate(direction):
        if v != 0:
            total += p.poly.diff(space.coordinate(site, a)) * space.ground(v)
    return PolynomialOnDual(space, total)


def iterated_derivative(p: PolynomialOnDual, direction: Sequence[Any], n: int,
                        site: int = 0) -> PolynomialOnDual:
    for _ in range(n):
        p = directional_derivative(p, direction, site)
    return p


def cartan_direction(g: SimpleLieAlgebra, cartan: Sequence[Any],
                     form: Optional[InvariantForm] = None) -> np.ndarray:
    """g* coordinates kappa(y, J_a) of y = sum c_i h_i."""
    y = exact.zeros(g.dim)
    for i, c in enumerate(cartan):
        y[i] = exact.frac(c)
    return algebra_to_dual(g, y, form)


def element_direction(g: SimpleLieAlgebra, x: Sequence[Any],
                      form: Optional[InvariantForm] = None) -> np.ndarray:
    return algebra_to_dual(g, x, form)


def centralizer_dimension(g: SimpleLieAlgebra, chi: Sequence[Any],
                          form: Optional[InvariantForm] = None) -> int:
    """dim ker ad(chi-hat) for chi in g* coordinates."""
    chi_hat = dual_to_algebra(g, [exact.frac(c) for c in chi], form)
    return g.dim - exact.rank(g.ad_matrix(chi_hat))


def is_regular(g: SimpleLieAlgebra, chi: Sequence[Any],
               form: Optional[InvariantForm] = None) -> bool:
    return centralizer_dimension(g, chi, form) == g.rank


def shift_arg_generators(g: SimpleLieAlgebra, chi: Sequence[Any],
                         form: Optional[InvariantForm] = None, strict: bool = True,
                         space: Optional[PhaseSpace] = None) -> List[PolynomialOnDual]:
    """
    D_chi^n P_i for i = 1..l and n = 0..d_i.

    Args:
        g: The Lie algebra.
        chi: Point of g* in coordinates chi(J_a).
        strict: Reject non-regular chi; otherwise log a warning and proceed.

    Raises:
        NonRegularElementError: With the centralizer dimension defect.
    """
    defect = centralizer_dimension(g, chi, form) - g.rank
    if defect:
        if strict:
            raise NonRegularElementError(
                f"chi is not regular: centralizer exceeds rank by {defect}", defect=defect)
        logger.warning("shift of argument at non-regular chi (defect %d); experimental output",
                       defect)
    space = space or PhaseSpace(g, 1, form)
    gens = []
    for p, d in zip(invariant_polynomials(g, form, space), g.exponents):
        current = p
        for n in range(d + 1):
            gens.append(current)
            current = directional_derivative(current, chi)
    logger.debug("%d shift-of-argument generators for %s", len(gens), g.label)
    return gens


def independence_rank(generators: Sequence[PolynomialOnDual], point: Sequence[Any]) -> int:
    """Exact rank of the Jacobian of the generators at a rational point."""
    if not generators:
        return 0
    space = generators[0].space
    n_vars = len(space.gens)
    jac = exact.zeros(len(generators), n_vars)
    for r, p in enumerate(generators):
        for v in range(n_vars):
            d = PolynomialOnDual(space, p.poly.diff(space.gens[v]))
            jac[r, v] = d.evaluate(point)
    return exact.rank(jac)


def commutation_defects(generators: Sequence[PolynomialOnDual]) -> List[Tuple[int, int]]:
    """Index pairs whose Poisson bracket is nonzero."""
    bad = []
    for i, j in itertools.combinations(range(len(generators)), 2):
        if not poisson_bracket(generators[i], generators[j]).is_zero():
            bad.append((i, j))
    return bad


# -- classical Gaudin ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LOperatorP1:
    """
    eta(u) = sum_i A_i/(u - z_i) - chi with A_i the coordinates of site i.

    ``chi`` is a point of g* (coordinates chi(J_a)).
    """
    space: PhaseSpace
    points: Tuple[Any, ...]
    chi: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        check_points(self.points)
        if len(self.points) != self.space.n_sites:
            raise ValueError("one point per site is required")

    @classmethod
    def build(cls, g: SimpleLieAlgebra, points: Sequence[Any], chi: Optional[Sequence[Any]] = None,
              form: Optional[InvariantForm] = None) -> "LOperatorP1":
        chi = chi if chi is not None else [0] * g.dim
        return cls(PhaseSpace(g, len(points), form),
                   tuple(exact.frac(z) for z in points),
                   tuple(exact.frac(c) for c in chi))

    def eta_at(self, u: Any) -> np.ndarray:
        """g*-valued polynomial vector eta(u) at an exact u not equal to any z_i."""
        space = self.space
        dim = space.algebra.dim
        out = []
        for a in range(dim):
            value = space.ring.ground_new(space.ground(-self.chi[a]))
            for i, z in enumerate(self.points):
                value += space.coordinate(i, a) * space.ground(1 / (exact.frac(u) - z))
            out.append(value)
        return np.array(out, dtype=object)


def _constant_matrix(space: PhaseSpace, xi: Sequence[Any]) -> np.ndarray:
    """Matrix sum_a xi_a rho(J^a) with ring-element entries."""
    g = space.algebra
    total = exact.zeros(g.matrix_size, g.matrix_size)
    for a, v in enumerate(xi):
        if v != 0:
            total = total + g.matrix(space.dual_matrix[:, a]) * v
    out = np.empty(total.shape, dtype=object)
    for idx, v in np.ndenumerate(total):
        out[idx] = space.ring.ground_new(space.ground(v))
    return out


def classical_gaudin_generators(L: LOperatorP1) -> Dict[Tuple[Any, int, int], PolynomialOnDual]:
    """
    Partial-fraction coefficients of P_k(eta(u)).

    Keys are (site, k, power) for the coefficient of (u - z_site)^{-power}
    and ("inf", k, n) for the coefficient of u^n; k runs over 1..l.
    """
    space = L.space
    g = space.algebra
    if g.series != "A":
        raise UnsupportedAlgebraError(g.label)
    mats = [space.matrix_point(i) for i in range(space.n_sites)]
    mats.append(-_constant_matrix(space, L.chi))
    scalars = [RationalFunction.pole(z, 1, Fraction(1)) for z in L.points]
    scalars.append(RationalFunction.constant(Fraction(1)))
    site_of = {z: i for i, z in enumerate(L.points)}

    result: Dict[Tuple[Any, int, int], Any] = {}
    for k in range(1, g.rank + 1):
        degree = k + 1
        for seq in itertools.product(range(len(mats)), repeat=degree):
            prod = mats[seq[0]]
            scalar = scalars[seq[0]]
            for s in seq[1:]:
                prod = prod @ mats[s]
                scalar = scalar * scalars[s]
            trace = sum(prod.diagonal(), space.ring.zero)
            if not trace:
                continue
            trace = trace * space.ground(Fraction(1, degree))
            for z, coeffs in scalar.poles.items():
                for power, c in enumerate(coeffs, start=1):
                    if c != 0:
                        key = (site_of[z], k, power)
                        result[key] = result.get(key, space.ring.zero) + trace * space.ground(c)
            for n, c in enumerate(scalar.poly):
                if c != 0:
                    key = (INFINITY, k, n)
                    result[key] = result.get(key, space.ring.zero) + trace * space.ground(c)
    return {key: PolynomialOnDual(space, poly) for key, poly in sorted(
        result.items(), key=lambda kv: (str(kv[0][0]), kv[0][1], kv[0][2])) if poly}


def vinberg_quadratic(g: SimpleLieAlgebra, gamma: Sequence[Any], chi: Sequence[Any],
                      form: Optional[InvariantForm] = None,
                      space: Optional[PhaseSpace] = None) -> PolynomialOnDual:
    """
    sum_alpha alpha(gamma) (alpha, alpha) / alpha(chi) x_{e_alpha} x_{f_alpha}.

    gamma, chi in h_i coordinates.

    Raises:
        NonRegularElementError: If alpha(chi) = 0 for some positive root.
    """
    check_regular(g, chi)
    space = space or PhaseSpace(g, 1, form)
    total = space.ring.zero
    for root in g.positive_roots:
        weight = (g.root_value(root, gamma) * root_length_squared(g, root, form)
                  / g.root_value(root, chi))
        if weight != 0:
            total += (space.coordinate(0, g.e_index(root)) * space.coordinate(0, g.f_index(root))
                      * space.ground(weight))
    return PolynomialOnDual(space, total)


@dataclass(frozen=True)
class SymbolVerdict:
    """Outcome of comparing a quantum operator's symbol with a polynomial."""
    equal: bool
    quantum_degree: int
    classical_degree: int
    message: str = ""


def symbol_check(quantum: UniversalElement, classical: PolynomialOnDual,
                 full: bool = False) -> SymbolVerdict:
    """
    Compare the symbol of ``quantum`` with ``classical``.

    With ``full`` every word contributes and the whole polynomial is compared;
    otherwise only top degrees are. A degree mismatch is reported in the
    verdict, never raised.
    """
    symbol = quantum.symbol(classical.space, full=full)
    if symbol.degree != classical.degree:
        message = f"degree mismatch: quantum {symbol.degree}, classical {classical.degree}"
        logger.warning("symbol check: %s", message)
        return SymbolVerdict(False, symbol.degree, classical.degree, message)
    equal = symbol == (classical if full else classical.top())
    return SymbolVerdict(equal, symbol.degree, classical.degree,
                         "" if equal else "symbols differ")


# -- identities --------------------------------------------------------------------


def quadratic_component(p: PolynomialOnDual, chi_direction: Sequence[Any]) -> PolynomialOnDual:
    """p^(2)_chi = D_chi^{n-2} p / (n-2)! for p homogeneous of degree n."""
    n = p.degree
    return iterated_derivative(p, chi_direction, n - 2) * Fraction(1, factorial(n - 2))


def restrict_to_cartan(p: PolynomialOnDual) -> PolynomialOnDual:
    """Pull back of p|_h along g* -> h*: root coordinates set to zero."""
    space = p.space
    g = space.algebra
    subs = [(space.coordinate(0, a), space.ring.zero) for a in range(g.rank, g.dim)]
    return PolynomialOnDual(space, p.poly.compose(subs))


def cartan_gradient(g: SimpleLieAlgebra, q: PolynomialOnDual, chi: Sequence[Any],
                    form: Optional[InvariantForm] = None) -> Tuple[Fraction, ...]:
    """gamma_q in h with kappa(gamma_q, y) = D_y q(chi) for y in h."""
    point = cartan_direction(g, chi, form)
    pairings = []
    for i in range(g.rank):
        unit = [Fraction(1) if k == i else Fraction(0) for k in range(g.rank)]
        pairings.append(directional_derivative(q, cartan_direction(g, unit, form)).evaluate(point))
    return weight_to_cartan(g, pairings, form)


@dataclass(frozen=True)
class IdentityCheck:
    """Both sides of an exact identity."""
    lhs: Any
    rhs: Any

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def root_derivative_identity(g: SimpleLieAlgebra, p: PolynomialOnDual, chi: Sequence[Any],
                     root: Sequence[int], form: Optional[InvariantForm] = None) -> IdentityCheck:
    """alpha(chi) D_{e_alpha} D_{f_alpha} p^(2)_chi against D_{h_alpha} p at chi."""
    direction = cartan_direction(g, chi, form)
    p2 = quadratic_component(p, direction)
    e_dir = element_direction(g, g.basis(g.e_index(root)), form)
    f_dir = element_direction(g, g.basis(g.f_index(root)), form)
    h_alpha = g.bracket(g.basis(g.e_index(root)), g.basis(g.f_index(root)))
    second = directional_derivative(directional_derivative(p2, f_dir), e_dir)
    lhs = g.root_value(root, chi) * second.evaluate(direction)
    rhs = directional_derivative(p, element_direction(g, h_alpha, form)).evaluate(direction)
    return IdentityCheck(lhs, rhs)


def generation_identity(g: SimpleLieAlgebra, p: PolynomialOnDual, chi: Sequence[Any],
                        form: Optional[InvariantForm] = None) -> IdentityCheck:
    """
    p^(2)_chi = q^(2)_chi + 1/2 T_{gamma_q}(chi) with q = p restricted to h.

    The factor 1/2 comes from the symbol of C_alpha carrying (alpha, alpha)
    while the coefficient of x_e x_f in p^(2) carries 2/(alpha, alpha).
    """
    direction = cartan_direction(g, chi, form)
    p2 = quadratic_component(p, direction)
    q = restrict_to_cartan(p)
    q2 = quadratic_component(q, direction)
    gamma_q = cartan_gradient(g, q, chi, form)
    t_bar = vinberg_quadratic(g, gamma_q, chi, form, p.space)
    return IdentityCheck(p2, q2 + t_bar * Fraction(1, 2))


def expansion_identity(p: PolynomialOnDual, chi: Sequence[Any]) -> bool:
    """P(x + u chi) = sum_m u^m / m! D_chi^m P(x), as an identity in (x, u)."""
    space = p.space
    names = [str(x) for x in space.gens] + ["u"]
    big, *gens = ring(",".join(names), QQ)
    u = gens[-1]
    lifted = p.poly.set_ring(big)
    subs = []
    for a, c in enumerate(chi):
        if c != 0:
            x = gens[a]
            subs.append((x, x + u * space.ground(c)))
    lhs = lifted.compose(subs) if subs else lifted
    rhs = big.zero
    current = p
    m = 0
    while not current.is_zero():
        rhs += current.poly.set_ring(big) * u ** m * QQ(1, factorial(m))
        current = directional_derivative(current, chi)
        m += 1
    return lhs == rhs
