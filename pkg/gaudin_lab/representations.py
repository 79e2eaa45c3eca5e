"""
Highest Weight Modules in Explicit Weight Bases

Truncated Verma modules are handled through PBW monomials
f_{b_1} f_{b_2} ... f_{b_k} v_lambda with the positive roots b_1 <= ... <= b_k
in basis order. Finite-dimensional irreducibles are built as quotients of
Verma weight spaces by the kernel of the Shapovalov form, so every
generator matrix is exact.

Topics covered:
- Kostant partitions and PBW bases
- Normal ordering of U(n_-) monomials under the action of g
- Shapovalov Gram matrices and determinants
- Irreducible quotients with exact generator matrices
- Tensor products with per-site and diagonal actions
"""
import itertools
import logging
from fractions import Fraction
from functools import cached_property, reduce
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from gaudin_lab import exact
from gaudin_lab.errors import SiteError, WeightError
from gaudin_lab.liealg import SimpleLieAlgebra, weight_inner_product

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
WeightKey = Tuple[Fraction, ...]
Defect = Tuple[int, ...]
VermaVector = Dict[Monomial, Any]


def _accumulate(target: VermaVector, source: VermaVector, scale: Any = 1) -> None:
    for m, c in source.items():
        value = target.get(m, 0) + scale * c
        if value == 0:
            target.pop(m, None)
        else:
            target[m] = value


class VermaTruncation:
    """
    The Verma module M_lambda up to a depth bound.

    Weight spaces are labelled by their defect beta, the simple-root
    coordinates of lambda - mu; the truncation keeps every weight space with
    height(beta) <= depth, so each kept weight space is complete. The action
    of g never needs the bound: it is only used to enumerate bases.
    """

    def __init__(self, algebra: SimpleLieAlgebra, highest_weight: Sequence[Any], depth: int):
        if depth < 0:
            raise ValueError("depth must be non-negative")
        self.algebra = algebra
        self.highest_weight: WeightKey = tuple(exact.frac(x) for x in highest_weight)
        self.depth = depth
        self._act_cache: Dict[Tuple[int, Monomial], VermaVector] = {}
        self._partition_cache: Dict[Defect, List[Monomial]] = {}

    def __repr__(self) -> str:
        return (f"VermaTruncation({self.algebra.label}, lambda={self.highest_weight}, "
                f"depth={self.depth})")

    # -- weights and bases ---------------------------------------------------

    def defect_of(self, monomial: Monomial) -> Defect:
        g = self.algebra
        out = [0] * g.rank
        for r in monomial:
            for i, k in enumerate(g.positive_roots[r]):
                out[i] += k
        return tuple(out)

    def weight_of_defect(self, defect: Sequence[int]) -> WeightKey:
        g = self.algebra
        shift = g.root_pairings(defect)
        return tuple(l - s for l, s in zip(self.highest_weight, shift))

    def weight_of(self, monomial: Monomial) -> WeightKey:
        return self.weight_of_defect(self.defect_of(monomial))

    def monomials(self, defect: Sequence[int]) -> List[Monomial]:
        """PBW monomials of the given defect (Kostant partitions), sorted."""
        defect = tuple(defect)
        if defect not in self._partition_cache:
            self._partition_cache[defect] = sorted(self._partitions(defect, 0))
        return self._partition_cache[defect]

    def _partitions(self, defect: Defect, start: int) -> Iterable[Monomial]:
        if not any(defect):
            yield ()
            return
        for r in range(start, self.algebra.n_roots):
            root = self.algebra.positive_roots[r]
            rest = tuple(d - k for d, k in zip(defect, root))
            if min(rest) < 0:
                continue
            for tail in self._partitions(rest, r):
                yield (r,) + tail

    def defects(self) -> List[Defect]:
        """All defects of height <= depth, by height then lexicographically."""
        out = [b for b in itertools.product(range(self.depth + 1), repeat=self.algebra.rank)
               if sum(b) <= self.depth]
        return sorted(out, key=lambda b: (sum(b), tuple(-x for x in b)))

    def dimension(self, defect: Sequence[int]) -> int:
        return len(self.monomials(defect))

    # -- action ----------------------------------------------------------------

    def act(self, a: int, monomial: Monomial) -> VermaVector:
        """Basis element J_a applied to a PBW monomial, as a normal-ordered vector."""
        key = (a, monomial)
        cached = self._act_cache.get(key)
        if cached is not None:
            return cached
        result = self._act(a, monomial)
        self._act_cache[key] = result
        return result

    def _act(self, a: int, monomial: Monomial) -> VermaVector:
        g = self.algebra
        kind, _ = g.basis_kind(a)
        if kind == "h":
            value = self.weight_of(monomial)[a]
            return {monomial: value} if value != 0 else {}
        if not monomial:
            if kind == "e":
                return {}
            return {(a - g.rank - g.n_roots,): Fraction(1)}
        first, rest = monomial[0], monomial[1:]
        first_index = g.rank + g.n_roots + first
        if kind == "f" and a - g.rank - g.n_roots <= first:
            return {(a - g.rank - g.n_roots,) + monomial: Fraction(1)}
        # x f_first rest = f_first (x rest) + [x, f_first] rest
        out: VermaVector = {}
        for m, c in self.act(a, rest).items():
            _accumulate(out, self.act(first_index, m), c)
        for c_index, v in g.structure_constants[a][first_index]:
            _accumulate(out, self.act(c_index, rest), v)
        return out

    def apply(self, a: int, vector: VermaVector) -> VermaVector:
        out: VermaVector = {}
        for m, c in vector.items():
            _accumulate(out, self.act(a, m), c)
        return out

    def apply_word(self, word: Sequence[int], vector: VermaVector) -> VermaVector:
        """Apply J_{w_0} J_{w_1} ... J_{w_k}; the rightmost letter acts first."""
        for a in reversed(word):
            vector = self.apply(a, vector)
        return vector

    # -- Shapovalov form ---------------------------------------------------------

    def shapovalov_entry(self, left: Monomial, right: Monomial) -> Fraction:
        """<sigma(left) right v> with sigma(f_b) = e_b an anti-involution."""
        g = self.algebra
        vector: VermaVector = {right: Fraction(1)}
        for r in left:
            vector = self.apply(g.rank + r, vector)
        return vector.get((), Fraction(0))

    def shapovalov(self, defect: Sequence[int]) -> np.ndarray:
        basis = self.monomials(defect)
        gram = exact.zeros(len(basis), len(basis))
        for i, left in enumerate(basis):
            for j, right in enumerate(basis):
                if j < i:
                    gram[i, j] = gram[j, i]
                else:
                    gram[i, j] = exact.frac(self.shapovalov_entry(left, right))
        return gram


def build_verma_truncated(g: SimpleLieAlgebra, highest_weight: Sequence[Any],
                          depth: int) -> VermaTruncation:
    return VermaTruncation(g, highest_weight, depth)


def shapovalov_determinant(verma: VermaTruncation, defect: Sequence[int]) -> Fraction:
    return exact.determinant(verma.shapovalov(defect))


def weyl_dimension(g: SimpleLieAlgebra, highest_weight: Sequence[Any]) -> int:
    """prod over positive roots of (lambda + rho, alpha) / (rho, alpha)."""
    shifted = [exact.frac(l) + r for l, r in zip(highest_weight, g.rho)]
    value = Fraction(1)
    for root in g.positive_roots:
        pairing = g.root_pairings(root)
        value *= weight_inner_product(g, shifted, pairing) / weight_inner_product(g, g.rho, pairing)
    return int(value)


class IrrepSpace:
    """
    The irreducible module V_lambda as a quotient of M_lambda.

    For each weight a maximal set of PBW monomials with invertible
    Shapovalov Gram block is kept; a Verma vector x is mapped to the
    quotient coordinates c solving G_BB c = S(B, x).

    Attributes:
        algebra: The Lie algebra.
        highest_weight: Coroot pairings of lambda.
        defects: Defects of the nonzero weight spaces in basis order.
        basis: ``(defect, monomial)`` for every basis vector.
    """

    def __init__(self, algebra: SimpleLieAlgebra, highest_weight: Sequence[Any]):
        self.algebra = algebra
        self.highest_weight: WeightKey = tuple(exact.frac(x) for x in highest_weight)
        self.verma = VermaTruncation(algebra, self.highest_weight, 0)
        self.defects: List[Defect] = []
        self.basis: List[Tuple[Defect, Monomial]] = []
        self._blocks: Dict[Defect, Dict[str, Any]] = {}
        self._build_weight_spaces()
        self.matrices: Tuple[np.ndarray, ...] = tuple(
            self._generator_matrix(a) for a in range(algebra.dim)
        )
        logger.debug("built irrep %s of %s, dim %d",
                     self.highest_weight, algebra.label, self.dim)

    def __repr__(self) -> str:
        return f"IrrepSpace({self.algebra.label}, lambda={self.highest_weight}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _build_weight_spaces(self) -> None:
        g = self.algebra
        level: List[Defect] = [tuple([0] * g.rank)]
        while level:
            next_level: List[Defect] = []
            for defect in level:
                monomials = self.verma.monomials(defect)
                gram = self.verma.shapovalov(defect)
                chosen = exact.independent_columns(gram)
                if not chosen:
                    continue
                keep = [monomials[k] for k in chosen]
                self._blocks[defect] = {
                    "offset": len(self.basis),
                    "monomials": keep,
                    "all": monomials,
                    "rows": gram[chosen, :],
                    "inverse": exact.inverse(gram[np.ix_(chosen, chosen)]),
                }
                self.defects.append(defect)
                self.basis.extend((defect, m) for m in keep)
                for i in range(g.rank):
                    child = tuple(d + (1 if k == i else 0) for k, d in enumerate(defect))
                    if child not in next_level:
                        next_level.append(child)
            level = sorted(next_level, key=lambda b: tuple(-x for x in b))

    def weight_of_index(self, index: int) -> WeightKey:
        return self.verma.weight_of_defect(self.basis[index][0])

    @cached_property
    def basis_weights(self) -> Tuple[WeightKey, ...]:
        return tuple(self.weight_of_index(k) for k in range(self.dim))

    def weight_multiplicities(self) -> Dict[WeightKey, int]:
        return {self.verma.weight_of_defect(d): len(self._blocks[d]["monomials"])
                for d in self.defects}

    def project(self, vector: VermaVector) -> np.ndarray:
        """Image in V_lambda (full coordinate vector) of a weight vector of M_lambda."""
        out = exact.zeros(self.dim)
        if not vector:
            return out
        defect = self.verma.defect_of(next(iter(vector)))
        block = self._blocks.get(defect)
        if block is None:
            return out
        index = {m: k for k, m in enumerate(block["all"])}
        x = exact.zeros(len(block["all"]))
        for m, c in vector.items():
            x[index[m]] = exact.frac(c)
        coords = block["inverse"] @ (block["rows"] @ x)
        offset = block["offset"]
        out[offset:offset + len(coords)] = coords
        return out

    def _generator_matrix(self, a: int) -> np.ndarray:
        mat = exact.zeros(self.dim, self.dim)
        for col, (_, monomial) in enumerate(self.basis):
            image = self.verma.act(a, monomial)
            if image:
                mat[:, col] = self.project(image)
        return mat

    def matrix_of(self, x: Sequence[Any]) -> np.ndarray:
        out = exact.zeros(self.dim, self.dim)
        for a, xa in enumerate(x):
            if xa != 0:
                out = out + self.matrices[a] * xa
        return out

    @cached_property
    def complex_matrices(self) -> Tuple[np.ndarray, ...]:
        return tuple(exact.to_complex(m) for m in self.matrices)

    @cached_property
    def sparse_columns(self) -> Tuple[Tuple[Tuple[Tuple[int, Fraction], ...], ...], ...]:
        """``sparse_columns[a][col]`` lists ``(row, value)`` of nonzero entries."""
        table = []
        for m in self.matrices:
            cols = []
            for col in range(self.dim):
                cols.append(tuple((row, m[row, col]) for row in range(self.dim)
                                  if m[row, col] != 0))
            table.append(tuple(cols))
        return tuple(table)

    def verma_to_vector(self, vector: VermaVector) -> np.ndarray:
        """Project a Verma vector that may mix weights."""
        by_defect: Dict[Defect, VermaVector] = {}
        for m, c in vector.items():
            by_defect.setdefault(self.verma.defect_of(m), {})[m] = c
        out = exact.zeros(self.dim)
        for part in by_defect.values():
            out = out + self.project(part)
        return out


def build_irrep(g: SimpleLieAlgebra, highest_weight: Sequence[Any]) -> IrrepSpace:
    """
    Build V_lambda.

    Raises:
        WeightError: If lambda is not integral dominant.
    """
    values = []
    for x in highest_weight:
        try:
            values.append(exact.frac(x))
        except TypeError:
            raise WeightError("entries must be exact rationals", highest_weight) from None
    if len(values) != g.rank:
        raise WeightError(f"expected {g.rank} coroot pairings", highest_weight)
    if any(v.denominator != 1 for v in values):
        raise WeightError("not integral", highest_weight)
    if any(v < 0 for v in values):
        raise WeightError("not dominant", highest_weight)
    return IrrepSpace(g, values)


class TensorSpace:
    """
    Tensor product of irreducible modules with an index of weight blocks.

    Vectors are dense numpy arrays (object dtype for exact, complex for
    numeric) over the product basis in row-major multi-index order.
    """

    def __init__(self, factors: Sequence[IrrepSpace]):
        if not factors:
            raise ValueError("a tensor product needs at least one factor")
        algebra = factors[0].algebra
        if any(f.algebra is not algebra and f.algebra.label != algebra.label for f in factors):
            raise ValueError("factors are modules over different algebras")
        self.algebra = algebra
        self.factors: Tuple[IrrepSpace, ...] = tuple(factors)
        self.shape = tuple(f.dim for f in self.factors)
        self.dim = int(np.prod(self.shape))

    def __repr__(self) -> str:
        return f"TensorSpace({self.algebra.label}, shape={self.shape})"

    @property
    def n_sites(self) -> int:
        return len(self.factors)

    def multi_index(self, flat: int) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.unravel_index(flat, self.shape))

    def flat_index(self, multi: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(multi), self.shape))

    def weight_of(self, multi: Sequence[int]) -> WeightKey:
        total = [Fraction(0)] * self.algebra.rank
        for factor, k in zip(self.factors, multi):
            total = [t + w for t, w in zip(total, factor.basis_weights[k])]
        return tuple(total)

    @cached_property
    def blocks(self) -> Dict[WeightKey, Tuple[Tuple[int, ...], ...]]:
        """Total weight -> multi-indices of the block, in flat order."""
        table: Dict[WeightKey, List[Tuple[int, ...]]] = {}
        for multi in itertools.product(*(range(d) for d in self.shape)):
            table.setdefault(self.weight_of(multi), []).append(multi)
        top = self.highest_weight
        a_inv = exact.inverse(exact.as_exact(self.algebra.cartan_matrix))

        def depth(w: WeightKey) -> Tuple[Any, ...]:
            shift = [t - x for t, x in zip(top, w)]
            defect = a_inv @ exact.as_exact(shift)
            return (sum(defect), tuple(-d for d in defect))

        return {w: tuple(table[w]) for w in sorted(table, key=depth)}

    @property
    def highest_weight(self) -> WeightKey:
        return self.weight_of([0] * self.n_sites)

    def block_dimension(self, weight: Sequence[Any]) -> int:
        return len(self.blocks.get(tuple(exact.frac(x) for x in weight), ()))

    def block_key(self, weight: Sequence[Any]) -> WeightKey:
        key = tuple(exact.frac(x) for x in weight)
        if key not in self.blocks:
            raise KeyError(f"no weight block {key} in {self!r}")
        return key

    def _check_site(self, site: Union[int, str]) -> None:
        if site == "diagonal":
            return
        if not isinstance(site, (int, np.integer)) or not 0 <= site < self.n_sites:
            raise SiteError(site, self.n_sites)

    def site_matrix(self, x: Union[int, Sequence[Any]], site: int, numeric: bool) -> np.ndarray:
        factor = self.factors[site]
        if isinstance(x, (int, np.integer)):
            m = factor.matrices[x]
        else:
            m = factor.matrix_of(x)
        return exact.to_complex(m) if numeric else m

    def act(self, x: Union[int, Sequence[Any]], site: Union[int, str],
            vector: np.ndarray) -> np.ndarray:
        """
        Apply an algebra element at one site or diagonally.

        Args:
            x: Basis index or coordinate vector of the element.
            site: Factor index, or ``"diagonal"`` for the sum over sites.
            vector: Dense vector over the product basis.

        Raises:
            SiteError: If the site is out of range.
        """
        self._check_site(site)
        if site == "diagonal":
            total = None
            for s in range(self.n_sites):
                part = self.act(x, s, vector)
                total = part if total is None else total + part
            return total
        numeric = np.asarray(vector).dtype != object
        m = self.site_matrix(x, site, numeric)
        tensor = np.asarray(vector).reshape(self.shape)
        moved = np.tensordot(m, tensor, axes=([1], [site]))
        return np.moveaxis(moved, 0, site).reshape(self.dim)

    def product_vector(self, vectors: Sequence[np.ndarray]) -> np.ndarray:
        return reduce(np.kron, vectors)

    def highest_vector(self) -> np.ndarray:
        out = exact.zeros(self.dim)
        out[0] = Fraction(1)
        return out

    def apply_word(self, word: Sequence[Tuple[int, int]],
                   multi: Tuple[int, ...]) -> Dict[Tuple[int, ...], Fraction]:
        """
        Apply a word of (site, basis index) letters to a product basis vector.

        The rightmost letter acts first.
        """
        state: Dict[Tuple[int, ...], Any] = {tuple(multi): Fraction(1)}
        for site, a in reversed(word):
            self._check_site(site)
            columns = self.factors[site].sparse_columns[a]
            new: Dict[Tuple[int, ...], Any] = {}
            for idx, c in state.items():
                for row, v in columns[idx[site]]:
                    target = idx[:site] + (row,) + idx[site + 1:]
                    value = new.get(target, 0) + c * v
                    if value == 0:
                        new.pop(target, None)
                    else:
                        new[target] = value
            state = new
            if not state:
                break
        return state

    def block_vector(self, weight: Sequence[Any], vector: np.ndarray) -> np.ndarray:
        """Restrict a full vector to the coordinates of a weight block."""
        key = self.block_key(weight)
        return np.array([vector[self.flat_index(m)] for m in self.blocks[key]],
                        dtype=np.asarray(vector).dtype)

    def embed_block(self, weight: Sequence[Any], coords: np.ndarray) -> np.ndarray:
        key = self.block_key(weight)
        out = np.zeros(self.dim, dtype=np.asarray(coords).dtype)
        if out.dtype == object:
            out.fill(Fraction(0))
        for m, c in zip(self.blocks[key], coords):
            out[self.flat_index(m)] = c
        return out

    def operator_to_json(self, operator: Any) -> Dict[str, Any]:
        """Sparse (row, col, value) triplets of a WeightOperator."""
        matrix = operator.matrix
        entries = []
        for i in range(matrix.shape[0]):
            for j in range(matrix.shape[1]):
                v = matrix[i, j]
                if v != 0:
                    entries.append([i, j, exact.scalar_json(v)])
        return {
            "block_weight": [exact.fraction_str(w) for w in operator.block],
            "dim": int(matrix.shape[0]),
            "entries": entries,
        }


def tensor(sites: Sequence[IrrepSpace]) -> TensorSpace:
    return TensorSpace(sites)
