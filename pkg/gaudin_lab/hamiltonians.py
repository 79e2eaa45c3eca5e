"""
Quantum Gaudin and DMT Hamiltonians

Operators are first written as elements of U(g)^{(x)N} (see
``gaudin_lab.universal``) and then realized exactly on the weight blocks of
a tensor product. Every Hamiltonian built here commutes with the diagonal
Cartan action, so realizing block by block loses nothing.

Topics covered:
- Split Casimir, quadratic Gaudin and chi-shifted Gaudin operators
- Truncated Casimirs of root sl2 subalgebras and DMT Hamiltonians
- Exact commutator diagnostics and dense spectra per block
- Symmetrization quantization of polynomials on g*
- JSON report records
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from gaudin_lab import exact
from gaudin_lab.errors import BlockMismatchError, CoincidentPointsError, NonRegularElementError
from gaudin_lab.liealg import (
    InvariantForm,
    SimpleLieAlgebra,
    dual_bases,
    root_length_squared,
    sl2_triple_for_root,
    weight_inner_product,
    weight_to_cartan,
)
from gaudin_lab.polynomials import PolynomialOnDual
from gaudin_lab.representations import IrrepSpace, TensorSpace, WeightKey
from gaudin_lab.universal import UniversalElement, from_polynomial

logger = logging.getLogger(__name__)

DEFAULT_BLOCK_CAP = 512


@dataclass(frozen=True, eq=False)
class WeightOperator:
    """
    A linear operator restricted to one total-weight block.

    ``matrix`` is an object array of Fractions when exact, complex otherwise;
    rows and columns follow ``space.blocks[block]``.
    """
    space: TensorSpace
    block: WeightKey
    matrix: np.ndarray
    provenance: Dict[str, Any] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_exact(self) -> bool:
        return self.matrix.dtype == object

    def numeric(self) -> np.ndarray:
        return exact.to_complex(self.matrix) if self.is_exact else self.matrix

    def apply(self, vector: np.ndarray) -> np.ndarray:
        return self.numeric() @ np.asarray(vector, dtype=complex)

    def __repr__(self) -> str:
        name = self.provenance.get("formula", "operator")
        return f"WeightOperator({name}, block={self.block}, dim={self.dim})"


OperatorFamily = Dict[WeightKey, WeightOperator]


@dataclass(frozen=True)
class CommutatorResidual:
    """Max-abs entry of [A, B]; ``exact_zero`` is None for float inputs."""
    block: WeightKey
    norm: float
    exact_zero: Optional[bool]

    @property
    def vanishes(self) -> bool:
        return bool(self.exact_zero) if self.exact_zero is not None else False


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues with multiplicities on one block, plus eigen-residual norms."""
    block: WeightKey
    eigenvalues: Tuple[complex, ...]
    multiplicities: Tuple[int, ...]
    residuals: Tuple[float, ...]

    @property
    def dim(self) -> int:
        return sum(self.multiplicities)

    def to_json(self) -> Dict[str, Any]:
        return {
            "eigenvalues": [[v.real, v.imag] for v in self.eigenvalues],
            "multiplicities": list(self.multiplicities),
            "max_residual": max(self.residuals, default=0.0),
        }


# -- realization -----------------------------------------------------------------


def realize(element: UniversalElement, space: TensorSpace, block: Sequence[Any],
            provenance: Optional[Mapping[str, Any]] = None) -> WeightOperator:
    """Matrix of a U(g)^{(x)N} element on one weight block of ``space``."""
    key = space.block_key(block)
    basis = space.blocks[key]
    index = {m: k for k, m in enumerate(basis)}
    numeric = not element.is_exact
    mat = np.zeros((len(basis), len(basis)), dtype=complex if numeric else object)
    if not numeric:
        mat.fill(Fraction(0))
    for col, multi in enumerate(basis):
        for word, coeff in element.terms.items():
            for target, value in space.apply_word(word, multi).items():
                row = index.get(target)
                if row is None:
                    raise BlockMismatchError([key, space.weight_of(target)])
                mat[row, col] = mat[row, col] + coeff * value
    return WeightOperator(space, key, mat, dict(provenance or {}))


def realize_blocks(element: UniversalElement, space: TensorSpace,
                   blocks: Optional[Sequence[Sequence[Any]]] = None,
                   provenance: Optional[Mapping[str, Any]] = None,
                   block_cap: int = DEFAULT_BLOCK_CAP) -> OperatorFamily:
    keys = [space.block_key(b) for b in blocks] if blocks is not None else list(space.blocks)
    family: OperatorFamily = {}
    for key in keys:
        size = len(space.blocks[key])
        if size > block_cap:
            logger.warning("skipping block %s of dimension %d above cap %d", key, size, block_cap)
            continue
        family[key] = realize(element, space, key, provenance)
    return family


# -- quadratic Gaudin ------------------------------------------------------------


def check_points(points: Sequence[Any]) -> None:
    """Raise CoincidentPointsError unless the points are pairwise distinct."""
    for i, a in enumerate(points):
        for b in points[i + 1:]:
            if a == b:
                raise CoincidentPointsError(points)


def split_casimir(g: SimpleLieAlgebra, i: int, j: int, n_sites: int,
                  form: Optional[InvariantForm] = None) -> UniversalElement:
    """Omega^(ij) = sum_a J_a^(i) J^{a(j)}."""
    dual = dual_bases(g, form).dual
    terms: Dict[Any, Any] = {}
    for a in range(g.dim):
        for c in range(g.dim):
            v = dual[c, a]
            if v != 0:
                terms[((i, a), (j, c))] = v
    return UniversalElement(g, terms, n_sites)


def casimir_element(g: SimpleLieAlgebra, site: Union[int, str] = 0, n_sites: int = 1,
                    form: Optional[InvariantForm] = None) -> UniversalElement:
    """Delta = 1/2 sum_a J_a J^a at a site, or its diagonal image."""
    single = split_casimir(g, 0, 0, 1, form).scale(Fraction(1, 2))
    if site == "diagonal":
        return single.diagonal(n_sites)
    return single.at_site(int(site), n_sites)


def cartan_element(g: SimpleLieAlgebra, cartan: Sequence[Any], site: Union[int, str] = 0,
                   n_sites: int = 1) -> UniversalElement:
    """sum_k c_k h_k at one site or diagonally."""
    coords = [Fraction(0)] * g.dim
    for k, c in enumerate(cartan):
        coords[k] = c
    single = UniversalElement.from_element(g, coords)
    if site == "diagonal":
        return single.diagonal(n_sites)
    return single.at_site(int(site), n_sites)


def gaudin_element(g: SimpleLieAlgebra, z: Sequence[Any], i: int,
                   form: Optional[InvariantForm] = None) -> UniversalElement:
    """Xi_i = sum_{j != i} Omega^(ij) / (z_i - z_j)."""
    check_points(z)
    n = len(z)
    total = UniversalElement.zero(g, n)
    for j in range(n):
        if j != i:
            total = total + split_casimir(g, i, j, n, form).scale(_inverse(z[i] - z[j]))
    return total


def shifted_gaudin_element(g: SimpleLieAlgebra, z: Sequence[Any], chi: Sequence[Any], i: int,
                           form: Optional[InvariantForm] = None) -> UniversalElement:
    """Xi_{i,chi} = Xi_i + chi^(i), chi in h* identified with h through kappa."""
    chi_hat = weight_to_cartan(g, chi, form)
    return gaudin_element(g, z, i, form) + cartan_element(g, chi_hat, i, len(z))


def _inverse(value: Any) -> Any:
    if exact.is_exact(value):
        return 1 / exact.frac(value)
    return 1 / complex(value)


def gaudin(T: TensorSpace, z: Sequence[Any], i: int, form: Optional[InvariantForm] = None,
           blocks: Optional[Sequence[Sequence[Any]]] = None) -> OperatorFamily:
    """
    Quadratic Gaudin Hamiltonian Xi_i on every weight block.

    Raises:
        CoincidentPointsError: If the z's are not distinct.
    """
    element = gaudin_element(T.algebra, z, i, form)
    return realize_blocks(element, T, blocks, {"formula": "gaudin", "site": i,
                                               "z": [exact.scalar_json(x) for x in z]})


def gaudin_shifted(T: TensorSpace, z: Sequence[Any], chi: Sequence[Any], i: int,
                   form: Optional[InvariantForm] = None,
                   blocks: Optional[Sequence[Sequence[Any]]] = None) -> OperatorFamily:
    """Shifted Gaudin Hamiltonian Xi_{i,chi} on every weight block."""
    element = shifted_gaudin_element(T.algebra, z, chi, i, form)
    return realize_blocks(element, T, blocks, {
        "formula": "gaudin_shifted", "site": i,
        "z": [exact.scalar_json(x) for x in z],
        "chi": [exact.scalar_json(x) for x in chi],
    })


def casimir(T: TensorSpace, site: Union[int, str] = "diagonal",
            form: Optional[InvariantForm] = None,
            blocks: Optional[Sequence[Sequence[Any]]] = None) -> OperatorFamily:
    element = casimir_element(T.algebra, site, T.n_sites, form)
    return realize_blocks(element, T, blocks, {"formula": "casimir", "site": site})


def cartan_action(T: TensorSpace, cartan: Sequence[Any],
                  blocks: Optional[Sequence[Sequence[Any]]] = None) -> OperatorFamily:
    element = cartan_element(T.algebra, cartan, "diagonal", T.n_sites)
    return realize_blocks(element, T, blocks, {"formula": "cartan",
                                               "h": [exact.scalar_json(c) for c in cartan]})


def quadratic_generating_function(T: TensorSpace, z: Sequence[Any], chi: Sequence[Any],
                                  u: complex, block: Sequence[Any],
                                  form: Optional[InvariantForm] = None) -> np.ndarray:
    """
    sum_i Delta^(i)/(u - z_i)^2 + sum_i Xi_{i,chi}/(u - z_i) + 1/2 (chi, chi)
    as a complex matrix on one block.
    """
    g = T.algebra
    n = T.n_sites
    total = np.zeros((T.block_dimension(block),) * 2, dtype=complex)
    for i in range(n):
        d = complex(u) - complex(z[i])
        delta = realize(casimir_element(g, i, n, form), T, block).numeric()
        xi = realize(shifted_gaudin_element(g, z, chi, i, form), T, block).numeric()
        total += delta / d ** 2 + xi / d
    constant = complex(weight_inner_product(g, chi, chi, form)) / 2
    return total + constant * np.eye(total.shape[0])


# -- DMT Hamiltonians --------------------------------------------------------------


def truncated_casimir(g: SimpleLieAlgebra, root: Sequence[int],
                      form: Optional[InvariantForm] = None, scale: Any = 1) -> UniversalElement:
    """C_alpha = ((alpha, alpha)/2)(e_alpha f_alpha + f_alpha e_alpha)."""
    e, f, _ = sl2_triple_for_root(g, root, form, scale)
    e_el = UniversalElement.from_element(g, e)
    f_el = UniversalElement.from_element(g, f)
    return (e_el * f_el + f_el * e_el).scale(root_length_squared(g, root, form) / 2)


def check_regular(g: SimpleLieAlgebra, chi: Sequence[Any]) -> None:
    """
    Raise NonRegularElementError naming the first root with alpha(chi) = 0.

    ``chi`` is given in h_i coordinates.
    """
    for root in g.positive_roots:
        if g.root_value(root, chi) == 0:
            raise NonRegularElementError(f"alpha(chi) = 0 for root {root}", root=root)


def dmt_element(g: SimpleLieAlgebra, gamma: Sequence[Any], chi: Sequence[Any],
                form: Optional[InvariantForm] = None) -> UniversalElement:
    """
    T_gamma(chi) = sum_alpha alpha(gamma) / alpha(chi) * C_alpha.

    gamma and chi are elements of h in h_i coordinates.

    Raises:
        NonRegularElementError: If alpha(chi) = 0 for some positive root.
    """
    check_regular(g, chi)
    total = UniversalElement.zero(g)
    for root in g.positive_roots:
        weight = g.root_value(root, gamma) / g.root_value(root, chi)
        if weight != 0:
            total = total + truncated_casimir(g, root, form).scale(weight)
    return total


def dmt_derivative_element(g: SimpleLieAlgebra, gamma: Sequence[Any], direction: Sequence[Any],
                           chi: Sequence[Any], form: Optional[InvariantForm] = None) -> UniversalElement:
    """
    d/dt T_gamma(chi + t direction) at t = 0.

    The derivative of 1/alpha(chi) along delta is -alpha(delta)/alpha(chi)^2.
    """
    check_regular(g, chi)
    total = UniversalElement.zero(g)
    for root in g.positive_roots:
        a_chi = g.root_value(root, chi)
        weight = -g.root_value(root, gamma) * g.root_value(root, direction) / a_chi ** 2
        if weight != 0:
            total = total + truncated_casimir(g, root, form).scale(weight)
    return total


def dmt_curvature_element(g: SimpleLieAlgebra, gamma: Sequence[Any], gamma_prime: Sequence[Any],
                          chi: Sequence[Any],
                          form: Optional[InvariantForm] = None) -> UniversalElement:
    """
    [nabla_gamma, nabla_gamma'] for nabla_gamma = d_gamma - T_gamma(chi).

    Expands to d_gamma' T_gamma - d_gamma T_gamma' + [T_gamma, T_gamma'].
    """
    t = dmt_element(g, gamma, chi, form)
    t_prime = dmt_element(g, gamma_prime, chi, form)
    return (dmt_derivative_element(g, gamma, gamma_prime, chi, form)
            - dmt_derivative_element(g, gamma_prime, gamma, chi, form)
            + t.commutator(t_prime))


def _as_tensor(module: Union[IrrepSpace, TensorSpace]) -> TensorSpace:
    return module if isinstance(module, TensorSpace) else TensorSpace([module])


def dmt(module: Union[IrrepSpace, TensorSpace], gamma: Sequence[Any], chi: Sequence[Any],
        form: Optional[InvariantForm] = None,
        blocks: Optional[Sequence[Sequence[Any]]] = None) -> OperatorFamily:
    """DMT Hamiltonian T_gamma(chi); on a tensor product it acts diagonally."""
    T = _as_tensor(module)
    element = dmt_element(T.algebra, gamma, chi, form)
    if T.n_sites > 1:
        element = element.diagonal(T.n_sites)
    return realize_blocks(element, T, blocks, {
        "formula": "dmt",
        "gamma": [exact.scalar_json(x) for x in gamma],
        "chi": [exact.scalar_json(x) for x in chi],
    })


def dmt_curvature(module: Union[IrrepSpace, TensorSpace], gamma: Sequence[Any],
                  gamma_prime: Sequence[Any], chi: Sequence[Any],
                  form: Optional[InvariantForm] = None,
                  blocks: Optional[Sequence[Sequence[Any]]] = None) -> OperatorFamily:
    """
    Curvature of the DMT connection in the directions gamma, gamma' on every block.

    The connection is flat at chi iff every returned matrix is zero.
    """
    T = _as_tensor(module)
    element = dmt_curvature_element(T.algebra, gamma, gamma_prime, chi, form)
    if T.n_sites > 1:
        element = element.diagonal(T.n_sites)
    return realize_blocks(element, T, blocks, {
        "formula": "dmt_curvature",
        "gamma": [exact.scalar_json(x) for x in gamma],
        "gamma_prime": [exact.scalar_json(x) for x in gamma_prime],
        "chi": [exact.scalar_json(x) for x in chi],
    })


# -- diagnostics -----------------------------------------------------------------


def commutator_residual(A: WeightOperator, B: WeightOperator) -> CommutatorResidual:
    """
    Max-abs entry of AB - BA.

    Raises:
        BlockMismatchError: If the operators act on different blocks.
    """
    if A.block != B.block or A.space is not B.space:
        raise BlockMismatchError([A.block, B.block])
    if A.is_exact and B.is_exact:
        comm = exact.commutator(A.matrix, B.matrix)
        zero = exact.is_zero(comm)
        return CommutatorResidual(A.block, 0.0 if zero else exact.max_abs(comm), zero)
    comm = exact.commutator(A.numeric(), B.numeric())
    norm = float(np.max(np.abs(comm))) if comm.size else 0.0
    return CommutatorResidual(A.block, norm, None)


def family_commutators(first: OperatorFamily, second: OperatorFamily) -> List[CommutatorResidual]:
    return [commutator_residual(first[k], second[k]) for k in first if k in second]


def spectrum(op: WeightOperator, tol: float = 1e-8) -> SpectralData:
    """Dense eigen-decomposition, eigenvalues clustered within ``tol``."""
    mat = op.numeric()
    if mat.shape[0] == 0:
        return SpectralData(op.block, (), (), ())
    values, vectors = scipy.linalg.eig(mat)
    residuals = [float(np.linalg.norm(mat @ vectors[:, k] - values[k] * vectors[:, k]))
                 for k in range(len(values))]
    order = np.lexsort((values.imag, values.real))
    clusters: List[List[complex]] = []
    for k in order:
        v = complex(values[k])
        if clusters and abs(clusters[-1][0] - v) <= tol * max(1.0, abs(v)):
            clusters[-1].append(v)
        else:
            clusters.append([v])
    eigenvalues = tuple(complex(np.mean(c)) for c in clusters)
    return SpectralData(op.block, eigenvalues, tuple(len(c) for c in clusters), tuple(residuals))


def symmetrize_quantize(poly: PolynomialOnDual) -> UniversalElement:
    """Symmetrization quantization; its symbol is ``poly`` exactly."""
    return from_polynomial(poly)


def report(formula: str, parameters: Mapping[str, Any], family: OperatorFamily,
           commutators: Optional[Mapping[WeightKey, Sequence[CommutatorResidual]]] = None,
           with_spectrum: bool = True) -> List[Dict[str, Any]]:
    """JSON-ready records, one per block."""
    records = []
    for key, op in family.items():
        residuals = (commutators or {}).get(key, [])
        records.append({
            "formula": formula,
            "parameters": dict(parameters),
            "block_weight": [exact.fraction_str(w) for w in key],
            "dim": op.dim,
            "commutator_residuals": [
                {"norm": r.norm, "exact_zero": r.exact_zero} for r in residuals
            ],
            "spectrum": spectrum(op).to_json() if with_spectrum else None,
        })
    return records
