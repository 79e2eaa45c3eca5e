"""
Simple Lie Algebras in a Chevalley Basis

Root data, structure constants, invariant forms and principal sl2 data for
the simple Lie algebras used throughout the package. Type A_l is realized
by traceless (l+1)x(l+1) matrices; every derived quantity (structure
constants, Gram matrices, canonical subspaces) is computed from that
realization in exact rational arithmetic.

Topics covered:
- Chevalley basis ordering and labels
- Structure constants and brackets with generic coefficients
- Trace and critical invariant forms, dual bases
- The h* <-> h identification through the invariant form
- Invariant polynomials on g*
- Principal sl2 triple, principal gradation and the canonical subspace
"""
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from gaudin_lab import exact
from gaudin_lab.errors import NotARootError, SingularFormError, UnsupportedAlgebraError

logger = logging.getLogger(__name__)

Root = Tuple[int, ...]
Weight = Tuple[Fraction, ...]

JSON_VERSION = 1
_LABEL = re.compile(r"^\s*([A-Ga-g])\s*_?\s*(\d+)\s*$")


@dataclass(frozen=True, eq=False)
class SimpleLieAlgebra:
    """
    A simple Lie algebra with a fixed Chevalley basis.

    Basis order is h_1..h_l, then e_alpha for the positive roots sorted by
    height and then lexicographically, then f_alpha in the same order.
    Roots are tuples of simple-root coordinates; weights are tuples of
    coroot pairings.

    Attributes:
        series: Cartan type letter.
        rank: Rank l.
        cartan_matrix: A with A[i][j] = alpha_j(h_i).
        positive_roots: Positive roots in basis order.
        matrices: Defining-representation matrix of every basis element.
    """
    series: str
    rank: int
    cartan_matrix: Tuple[Tuple[int, ...], ...]
    positive_roots: Tuple[Root, ...]
    matrices: Tuple[np.ndarray, ...]

    @property
    def label(self) -> str:
        return f"{self.series}{self.rank}"

    @property
    def n_roots(self) -> int:
        return len(self.positive_roots)

    @property
    def dim(self) -> int:
        return self.rank + 2 * self.n_roots

    @property
    def matrix_size(self) -> int:
        return self.matrices[0].shape[0]

    def __repr__(self) -> str:
        return f"SimpleLieAlgebra({self.label})"

    # -- basis bookkeeping -------------------------------------------------

    def h_index(self, i: int) -> int:
        return i

    def e_index(self, root: Sequence[int]) -> int:
        return self.rank + self.root_position(root)

    def f_index(self, root: Sequence[int]) -> int:
        return self.rank + self.n_roots + self.root_position(root)

    def simple_root(self, i: int) -> Root:
        return tuple(1 if k == i else 0 for k in range(self.rank))

    def root_position(self, root: Sequence[int]) -> int:
        try:
            return self._root_positions[tuple(root)]
        except KeyError:
            raise NotARootError(root) from None

    @cached_property
    def _root_positions(self) -> Dict[Root, int]:
        return {root: k for k, root in enumerate(self.positive_roots)}

    def is_root(self, root: Sequence[int]) -> bool:
        return tuple(root) in self._root_positions

    def basis_kind(self, a: int) -> Tuple[str, Optional[Root]]:
        """Return ``("h", None)``, ``("e", root)`` or ``("f", root)``."""
        if a < self.rank:
            return "h", None
        if a < self.rank + self.n_roots:
            return "e", self.positive_roots[a - self.rank]
        return "f", self.positive_roots[a - self.rank - self.n_roots]

    @cached_property
    def labels(self) -> Tuple[str, ...]:
        names = [f"h{i + 1}" for i in range(self.rank)]
        for prefix in ("e", "f"):
            for root in self.positive_roots:
                names.append(prefix + "".join(str(i + 1) * k for i, k in enumerate(root)))
        return tuple(names)

    @staticmethod
    def height(root: Sequence[int]) -> int:
        return int(sum(root))

    def root_pairings(self, root: Sequence[int]) -> Weight:
        """Coroot pairings <alpha, alpha_i^vee> = sum_j k_j A_ij."""
        return tuple(
            Fraction(sum(k * self.cartan_matrix[i][j] for j, k in enumerate(root)))
            for i in range(self.rank)
        )

    def basis_weight(self, a: int) -> Weight:
        """Weight of a basis element under the adjoint action of the Cartan."""
        kind, root = self.basis_kind(a)
        if kind == "h":
            return tuple(Fraction(0) for _ in range(self.rank))
        pairing = self.root_pairings(root)
        return pairing if kind == "e" else tuple(-p for p in pairing)

    def basis_degree(self, a: int) -> int:
        """Principal degree: 0 on the Cartan, +height on e_alpha, -height on f_alpha."""
        kind, root = self.basis_kind(a)
        if kind == "h":
            return 0
        return self.height(root) if kind == "e" else -self.height(root)

    # -- root data ---------------------------------------------------------

    @cached_property
    def rho(self) -> Weight:
        return tuple(Fraction(1) for _ in range(self.rank))

    @cached_property
    def rho_check(self) -> Tuple[Fraction, ...]:
        """Coordinates of rho-check in the h_i basis (alpha_j(rho-check) = 1)."""
        a_t = exact.as_exact(np.array(self.cartan_matrix, dtype=object).T)
        ones = exact.as_exact([1] * self.rank)
        return tuple(exact.solve(a_t, ones))

    @cached_property
    def exponents(self) -> Tuple[int, ...]:
        counts: Dict[int, int] = {}
        for root in self.positive_roots:
            counts[self.height(root)] = counts.get(self.height(root), 0) + 1
        result: List[int] = []
        for k in sorted(counts):
            result.extend([k] * (counts[k] - counts.get(k + 1, 0)))
        return tuple(result)

    @property
    def coxeter_number(self) -> int:
        return max(self.height(r) for r in self.positive_roots) + 1

    @property
    def dual_coxeter_number(self) -> int:
        if self.series == "A":
            return self.rank + 1
        raise UnsupportedAlgebraError(self.label)

    def root_value(self, root: Sequence[int], cartan: Sequence[Any]) -> Any:
        """alpha(gamma) for gamma = sum_i c_i h_i."""
        return exact.dot(self.root_pairings(root), cartan)

    # -- structure constants -------------------------------------------------

    def decompose(self, matrix: np.ndarray) -> np.ndarray:
        """Coordinates of a traceless matrix in the Chevalley basis (type A)."""
        n = self.matrix_size
        out = exact.zeros(self.dim)
        for root in self.positive_roots:
            i = root.index(1)
            j = i + self.height(root)
            out[self.e_index(root)] = exact.frac(matrix[i, j])
            out[self.f_index(root)] = exact.frac(matrix[j, i])
        running = Fraction(0)
        for k in range(n - 1):
            running += exact.frac(matrix[k, k])
            out[k] = running
        return out

    @cached_property
    def structure_constants(self) -> Tuple[Tuple[Tuple[Tuple[int, Fraction], ...], ...], ...]:
        """``sc[a][b]`` lists ``(c, value)`` with [J_a, J_b] = sum value J_c."""
        table = []
        for a in range(self.dim):
            row = []
            for b in range(self.dim):
                coords = self.decompose(exact.commutator(self.matrices[a], self.matrices[b]))
                row.append(tuple((c, v) for c, v in enumerate(coords) if v != 0))
            table.append(tuple(row))
        logger.debug("structure constants of %s computed", self.label)
        return tuple(table)

    @cached_property
    def ad(self) -> Tuple[np.ndarray, ...]:
        """Adjoint matrices: ``ad[a][c, b]`` is the J_c coefficient of [J_a, J_b]."""
        mats = []
        for a in range(self.dim):
            m = exact.zeros(self.dim, self.dim)
            for b in range(self.dim):
                for c, v in self.structure_constants[a][b]:
                    m[c, b] = v
            mats.append(m)
        return tuple(mats)

    def bracket(self, x: Sequence[Any], y: Sequence[Any]) -> np.ndarray:
        """
        Bracket of two coordinate vectors.

        Coefficients may be Fractions, complex numbers or any ring elements
        supporting ``+`` and ``*`` with Fractions (e.g. RationalFunction).
        """
        out: List[Any] = [Fraction(0)] * self.dim
        for a, xa in enumerate(x):
            if _is_zero(xa):
                continue
            row = self.structure_constants[a]
            for b, yb in enumerate(y):
                if _is_zero(yb):
                    continue
                for c, v in row[b]:
                    out[c] = out[c] + v * (xa * yb)
        result = np.empty(self.dim, dtype=object)
        result[:] = out
        return result

    def ad_matrix(self, x: Sequence[Any]) -> np.ndarray:
        m = exact.zeros(self.dim, self.dim)
        for a, xa in enumerate(x):
            if xa != 0:
                m = m + self.ad[a] * exact.frac(xa)
        return m

    def matrix(self, x: Sequence[Any]) -> np.ndarray:
        """Defining-representation matrix of a coordinate vector."""
        out = np.empty((self.matrix_size, self.matrix_size), dtype=object)
        out.fill(Fraction(0))
        for a, xa in enumerate(x):
            if not _is_zero(xa):
                out = out + self.matrices[a] * xa
        return out

    def basis(self, a: int) -> np.ndarray:
        return exact.basis_vector(self.dim, a)


def _is_zero(value: Any) -> bool:
    if isinstance(value, (int, Fraction, float, complex)):
        return value == 0
    return bool(getattr(value, "is_zero", lambda: False)())


def from_type(label: str) -> SimpleLieAlgebra:
    """
    Build a simple Lie algebra from a label such as ``"A2"``.

    Args:
        label: Series letter followed by the rank.

    Returns:
        The algebra with its Chevalley basis realized by matrices.

    Raises:
        UnsupportedAlgebraError: For any series other than A, or rank < 1.
    """
    match = _LABEL.match(str(label))
    if match is None:
        raise UnsupportedAlgebraError(str(label))
    series, rank = match.group(1).upper(), int(match.group(2))
    if series != "A" or rank < 1:
        raise UnsupportedAlgebraError(str(label))

    n = rank + 1
    cartan = tuple(
        tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(rank))
        for i in range(rank)
    )
    roots = []
    for i in range(rank):
        for j in range(i, rank):
            roots.append(tuple(1 if i <= k <= j else 0 for k in range(rank)))
    roots.sort(key=lambda r: (sum(r), tuple(-c for c in r)))

    def unit(i: int, j: int) -> np.ndarray:
        m = exact.zeros(n, n)
        m[i, j] = Fraction(1)
        return m

    mats: List[np.ndarray] = []
    for i in range(rank):
        mats.append(unit(i, i) - unit(i + 1, i + 1))
    for root in roots:
        i = root.index(1)
        mats.append(unit(i, i + sum(root)))
    for root in roots:
        i = root.index(1)
        mats.append(unit(i + sum(root), i))

    g = SimpleLieAlgebra("A", rank, cartan, tuple(roots), tuple(mats))
    logger.debug("built %s: dim %d, %d positive roots", g.label, g.dim, g.n_roots)
    return g


# -- invariant forms -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class InvariantForm:
    """An ad-invariant symmetric bilinear form given by its Gram matrix."""
    algebra: SimpleLieAlgebra
    gram: np.ndarray
    normalization: str

    def pair(self, x: Sequence[Any], y: Sequence[Any]) -> Any:
        return exact.dot(x, self.gram @ np.asarray(y, dtype=object))

    @cached_property
    def cartan_gram(self) -> np.ndarray:
        ell = self.algebra.rank
        return self.gram[:ell, :ell]

    @cached_property
    def cartan_gram_inverse(self) -> np.ndarray:
        return exact.inverse(self.cartan_gram)

    @cached_property
    def gram_inverse(self) -> np.ndarray:
        return exact.inverse(self.gram)


def trace_form(g: SimpleLieAlgebra) -> InvariantForm:
    """kappa_0(x, y) = tr(xy) in the defining representation; (theta, theta) = 2."""
    gram = exact.zeros(g.dim, g.dim)
    for a in range(g.dim):
        for b in range(g.dim):
            gram[a, b] = sum((g.matrices[a] @ g.matrices[b]).diagonal(), Fraction(0))
    return InvariantForm(g, gram, "trace")


def critical_form(g: SimpleLieAlgebra) -> InvariantForm:
    """kappa_c = -h^vee kappa_0, equal to minus half the Killing form."""
    base = trace_form(g)
    return InvariantForm(g, base.gram * Fraction(-g.dual_coxeter_number), "critical")


@dataclass(frozen=True, eq=False)
class DualBasisPair:
    """
    The Chevalley basis {J_a} with its kappa-dual basis {J^a}.

    ``dual[:, b]`` holds the coordinates of J^b.
    """
    form: InvariantForm
    dual: np.ndarray

    def dual_vector(self, b: int) -> np.ndarray:
        return self.dual[:, b]


def dual_bases(g: SimpleLieAlgebra, form: Optional[InvariantForm] = None) -> DualBasisPair:
    """
    Dual basis with kappa(J_a, J^b) = delta_ab.

    Raises:
        SingularFormError: If the Gram matrix is degenerate.
    """
    form = form or trace_form(g)
    r = exact.rank(form.gram)
    if r < g.dim:
        raise SingularFormError(r, g.dim)
    return DualBasisPair(form, form.gram_inverse)


def casimir_matrix(g: SimpleLieAlgebra, rep: Sequence[np.ndarray],
                   form: Optional[InvariantForm] = None) -> np.ndarray:
    """sum_a rho(J_a) rho(J^a) for representation matrices ``rep`` of the basis."""
    pair = dual_bases(g, form)
    n = rep[0].shape[0]
    total = exact.zeros(n, n)
    for a in range(g.dim):
        dual = exact.zeros(n, n)
        for c, v in enumerate(pair.dual_vector(a)):
            if v != 0:
                dual = dual + rep[c] * v
        total = total + rep[a] @ dual
    return total


# -- h* <-> h ------------------------------------------------------------------


def weight_to_cartan(g: SimpleLieAlgebra, mu: Sequence[Any],
                     form: Optional[InvariantForm] = None) -> Tuple[Any, ...]:
    """
    The element of h representing mu under kappa, in h_i coordinates.

    mu is given by its coroot pairings m_i = <mu, alpha_i^vee>; the result c
    solves K c = m with K the Cartan block of the Gram matrix.
    """
    form = form or trace_form(g)
    inv = form.cartan_gram_inverse
    return tuple(exact.dot(inv[i], mu) for i in range(g.rank))


def cartan_to_weight(g: SimpleLieAlgebra, cartan: Sequence[Any],
                     form: Optional[InvariantForm] = None) -> Tuple[Any, ...]:
    form = form or trace_form(g)
    k = form.cartan_gram
    return tuple(exact.dot(cartan, k[:, i]) for i in range(g.rank))


def weight_inner_product(g: SimpleLieAlgebra, mu: Sequence[Any], nu: Sequence[Any],
                         form: Optional[InvariantForm] = None) -> Any:
    """(mu, nu) induced on h* by kappa."""
    return exact.dot(mu, weight_to_cartan(g, nu, form))


def weight_to_dual(g: SimpleLieAlgebra, mu: Sequence[Any]) -> np.ndarray:
    """Extend mu in h* by zero on root spaces; returns g* coordinates xi(J_a)."""
    out = exact.zeros(g.dim)
    for i, m in enumerate(mu):
        out[i] = m
    return out


def dual_to_algebra(g: SimpleLieAlgebra, xi: Sequence[Any],
                    form: Optional[InvariantForm] = None) -> np.ndarray:
    """The element x of g with kappa(x, J_a) = xi_a."""
    form = form or trace_form(g)
    return form.gram_inverse @ np.asarray(xi, dtype=object)


def algebra_to_dual(g: SimpleLieAlgebra, x: Sequence[Any],
                    form: Optional[InvariantForm] = None) -> np.ndarray:
    form = form or trace_form(g)
    return form.gram @ np.asarray(x, dtype=object)


# -- invariant polynomials -----------------------------------------------------


def invariant_polynomials(g: SimpleLieAlgebra, form: Optional[InvariantForm] = None,
                          space: Any = None) -> List[Any]:
    """
    Generators P_1..P_l of S(g)^g as polynomials on g*.

    P_i = tr(X^(d_i+1)) / (d_i+1) with X = sum_a x_a rho(J^a), where x_a are
    the coordinates xi(J_a) of a point of g*. P_1 is then
    1/2 sum_a x_a x^a.

    Args:
        g: A type A algebra.
        form: Invariant form used for the dual basis (trace form by default).
        space: Optional single-site PhaseSpace to build the polynomials in.

    Raises:
        UnsupportedAlgebraError: Outside type A.
    """
    from gaudin_lab.polynomials import PhaseSpace, PolynomialOnDual

    if g.series != "A":
        raise UnsupportedAlgebraError(g.label)
    space = space or PhaseSpace(g, 1, form)
    x_mat = space.matrix_point(0)
    result = []
    power = x_mat
    for d in range(2, g.rank + 2):
        power = power @ x_mat
        trace = sum(power.diagonal(), space.ring.zero)
        result.append(PolynomialOnDual(space, trace * space.ground(Fraction(1, d))))
    return result


# -- principal data ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PrincipalData:
    """
    Principal sl2 triple {p_-1, 2 rho-check, p_1} and the canonical subspace.

    ``canonical[j]`` spans the degree ``canonical_degrees[j]`` part of
    ker(ad p_1); ``gradation`` maps a principal degree to its basis indices.
    """
    algebra: SimpleLieAlgebra
    p_minus1: np.ndarray
    two_rho_check: np.ndarray
    p_1: np.ndarray
    canonical: Tuple[np.ndarray, ...]
    canonical_degrees: Tuple[int, ...]
    gradation: Dict[int, Tuple[int, ...]]


def principal_gradation(g: SimpleLieAlgebra) -> Dict[int, int]:
    """Dimension table d -> dim g_d of the principal gradation."""
    table: Dict[int, int] = {}
    for a in range(g.dim):
        d = g.basis_degree(a)
        table[d] = table.get(d, 0) + 1
    return dict(sorted(table.items()))


def principal_data(g: SimpleLieAlgebra) -> PrincipalData:
    """
    Principal sl2 data.

    Canonical vectors are normalized so their first nonzero coordinate is 1;
    the top one is therefore e_theta.
    """
    p_minus1 = exact.zeros(g.dim)
    p_1 = exact.zeros(g.dim)
    two_rho_check = exact.zeros(g.dim)
    for i in range(g.rank):
        coeff = 2 * g.rho_check[i]
        p_minus1[g.f_index(g.simple_root(i))] = Fraction(1)
        p_1[g.e_index(g.simple_root(i))] = coeff
        two_rho_check[i] = coeff

    gradation: Dict[int, List[int]] = {}
    for a in range(g.dim):
        gradation.setdefault(g.basis_degree(a), []).append(a)

    canonical: List[np.ndarray] = []
    degrees: List[int] = []
    ad_p1 = g.ad_matrix(p_1)
    for d in sorted(set(g.exponents)):
        source = gradation[d]
        target = gradation.get(d + 1, [])
        block = ad_p1[np.ix_(target, source)] if target else exact.zeros(0, len(source))
        for vec in exact.nullspace(block):
            lead = next(v for v in vec if v != 0)
            full = exact.zeros(g.dim)
            for idx, v in zip(source, vec):
                full[idx] = v / lead
            canonical.append(full)
            degrees.append(d)
    return PrincipalData(
        g, p_minus1, two_rho_check, p_1, tuple(canonical), tuple(degrees),
        {d: tuple(idx) for d, idx in sorted(gradation.items())},
    )


def sl2_triple_for_root(g: SimpleLieAlgebra, root: Sequence[int],
                        form: Optional[InvariantForm] = None,
                        scale: Any = 1) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Root sl2 triple (e_alpha, f_alpha, h_alpha) with e scaled by ``scale``.

    Raises:
        NotARootError: If ``root`` is not a positive root.
    """
    if not g.is_root(root):
        raise NotARootError(root)
    scale = exact.frac(scale)
    e = g.basis(g.e_index(root)) * scale
    f = g.basis(g.f_index(root)) / scale
    return e, f, g.bracket(e, f)


def root_length_squared(g: SimpleLieAlgebra, root: Sequence[int],
                        form: Optional[InvariantForm] = None) -> Fraction:
    return weight_inner_product(g, g.root_pairings(root), g.root_pairings(root), form)


def to_json(g: SimpleLieAlgebra) -> Dict[str, Any]:
    """Versioned JSON document; structure constants as [a, b, c, "p/q"]."""
    triples = []
    for a in range(g.dim):
        for b in range(g.dim):
            for c, v in g.structure_constants[a][b]:
                triples.append([a, b, c, exact.fraction_str(v)])
    return {
        "version": JSON_VERSION,
        "type": g.label,
        "rank": g.rank,
        "basis": list(g.labels),
        "cartan_matrix": [list(row) for row in g.cartan_matrix],
        "positive_roots": [list(r) for r in g.positive_roots],
        "exponents": list(g.exponents),
        "structure_constants": triples,
    }
