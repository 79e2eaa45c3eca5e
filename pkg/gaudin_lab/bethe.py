"""
Bethe Ansatz with an Irregular Point at Infinity

The Bethe equations attached to marked points z_i with highest weights
lambda_i, a regular chi in h* and a coloring (i_1..i_m) of the Bethe roots
by simple roots read, for every j,

    sum_i <a_{i_j}^vee, lambda_i>/(w_j - z_i)
        - sum_{s != j} <a_{i_j}^vee, a_{i_s}>/(w_j - w_s) - <a_{i_j}^vee, chi> = 0.

The chi here is the one of the Cartan connection. The matching quantum
operators are the Xi_{i,chi'} with chi' = -chi (see ``hamiltonian_chi``).

Topics covered:
- Residuals and analytic Jacobians of the Bethe equations
- Damped Newton with multistart seeds and homotopy in chi
- Deduplication of solutions up to same-color permutations
- Bethe vectors from ordered partitions
- Eigenvector verification and completeness census
"""
import csv
import itertools
import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment, root

from gaudin_lab import exact
from gaudin_lab.errors import CollisionError, NonRegularElementError, WeightError
from gaudin_lab.hamiltonians import WeightOperator, check_points, gaudin_shifted
from gaudin_lab.liealg import SimpleLieAlgebra
from gaudin_lab.representations import TensorSpace, WeightKey, build_irrep

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10
DEDUP_RADIUS = 1e-6
SEPARATION_FLOOR = 1e-8
EIGEN_TOL = 1e-8
DEGENERATE_CONDITION = 1e10


@dataclass(frozen=True, eq=False)
class BetheProblem:
    """
    Data of one system of Bethe equations.

    Attributes:
        algebra: The Lie algebra.
        points: Marked points z_1..z_N.
        weights: Highest weights as coroot pairings.
        chi: Coroot pairings <a_i^vee, chi> of the connection chi.
        coloring: Simple-root index (0-based) of every Bethe root.
    """
    algebra: SimpleLieAlgebra
    points: Tuple[Any, ...]
    weights: Tuple[WeightKey, ...]
    chi: Tuple[Any, ...]
    coloring: Tuple[int, ...]

    def __post_init__(self) -> None:
        check_points(self.points)
        if len(self.points) != len(self.weights):
            raise ValueError("one highest weight per marked point is required")
        for w in self.weights:
            if len(w) != self.algebra.rank:
                raise WeightError(f"expected {self.algebra.rank} coroot pairings", w)
        if len(self.chi) != self.algebra.rank:
            raise ValueError(f"chi needs {self.algebra.rank} coroot pairings")
        if any(not 0 <= c < self.algebra.rank for c in self.coloring):
            raise ValueError(f"coloring {self.coloring} uses an unknown simple root")

    @classmethod
    def for_block(cls, g: SimpleLieAlgebra, points: Sequence[Any], weights: Sequence[Sequence[Any]],
                  chi: Sequence[Any], block_weight: Sequence[Any]) -> "BetheProblem":
        """The unique coloring whose target weight is ``block_weight``."""
        total = [sum(exact.frac(w[i]) for w in weights) for i in range(g.rank)]
        shift = [t - exact.frac(b) for t, b in zip(total, block_weight)]
        a_inv = exact.inverse(exact.as_exact(g.cartan_matrix))
        counts = a_inv @ exact.as_exact(shift)
        if any(c.denominator != 1 or c < 0 for c in counts):
            raise WeightError("block is not below the total highest weight", block_weight)
        coloring = tuple(i for i, c in enumerate(counts) for _ in range(int(c)))
        return cls(g, tuple(points), tuple(tuple(exact.frac(x) for x in w) for w in weights),
                   tuple(chi), coloring)

    @property
    def m(self) -> int:
        return len(self.coloring)

    @property
    def n_sites(self) -> int:
        return len(self.points)

    @property
    def target_weight(self) -> WeightKey:
        g = self.algebra
        total = [sum(w[i] for w in self.weights) for i in range(g.rank)]
        for c in self.coloring:
            total = [t - a for t, a in zip(total, g.root_pairings(g.simple_root(c)))]
        return tuple(exact.frac(t) for t in total)

    def color_groups(self) -> List[List[int]]:
        groups: Dict[int, List[int]] = {}
        for j, c in enumerate(self.coloring):
            groups.setdefault(c, []).append(j)
        return [groups[c] for c in sorted(groups)]

    @property
    def z_array(self) -> np.ndarray:
        return np.array([complex(z) for z in self.points])

    @property
    def level_matrix(self) -> np.ndarray:
        """l[j, i] = <a_{i_j}^vee, lambda_i>."""
        return np.array([[float(w[c]) for w in self.weights] for c in self.coloring]).reshape(
            self.m, self.n_sites)

    @property
    def cartan_block(self) -> np.ndarray:
        """a[j, s] = <a_{i_j}^vee, a_{i_s}>."""
        A = self.algebra.cartan_matrix
        return np.array([[float(A[c][d]) for d in self.coloring] for c in self.coloring]).reshape(
            self.m, self.m)

    @property
    def chi_vector(self) -> np.ndarray:
        return np.array([complex(self.chi[c]) for c in self.coloring])

    def rescale(self, c: Any) -> "BetheProblem":
        """(z, chi) -> (c z, chi / c); solutions map by w -> c w."""
        return replace(self, points=tuple(c * z for z in self.points),
                       chi=tuple(x / c for x in self.chi))

    def to_json(self) -> Dict[str, Any]:
        return {
            "algebra": self.algebra.label,
            "points": [exact.scalar_json(z) for z in self.points],
            "weights": [[exact.fraction_str(x) for x in w] for w in self.weights],
            "chi": [exact.scalar_json(x) for x in self.chi],
            "coloring": list(self.coloring),
        }


def hamiltonian_chi(problem: BetheProblem) -> Tuple[Any, ...]:
    """chi of the quantum operators Xi_{i,chi} whose spectrum the problem describes."""
    return tuple(-x for x in problem.chi)


def check_regular_weight(g: SimpleLieAlgebra, chi: Sequence[Any]) -> None:
    """Raise unless <chi, alpha^vee> != 0 for every positive root."""
    for root in g.positive_roots:
        if sum(k * complex(c) for k, c in zip(root, chi)) == 0:
            raise NonRegularElementError(f"<chi, alpha^vee> = 0 for root {root}", root=root)


# -- equations -------------------------------------------------------------------


def separations(problem: BetheProblem, w: Sequence[complex]) -> Tuple[float, float]:
    """(min |w_j - w_s|, min |w_j - z_i|); infinity when empty."""
    w = np.asarray(w, dtype=complex)
    roots = min((abs(w[j] - w[s]) for j, s in itertools.combinations(range(len(w)), 2)),
                default=float("inf"))
    z = problem.z_array
    points = min((abs(wj - zi) for wj in w for zi in z), default=float("inf"))
    return float(roots), float(points)


def equations(problem: BetheProblem, w: np.ndarray, chi_scale: float = 1.0) -> np.ndarray:
    """Complex left-hand sides F_j(w)."""
    w = np.asarray(w, dtype=complex)
    if problem.m == 0:
        return np.zeros(0, dtype=complex)
    l = problem.level_matrix
    a = problem.cartan_block
    dz = w[:, None] - problem.z_array[None, :]
    dw = w[:, None] - w[None, :]
    np.fill_diagonal(dw, 1.0)
    coupling = a / dw
    np.fill_diagonal(coupling, 0.0)
    return (l / dz).sum(axis=1) - coupling.sum(axis=1) - chi_scale * problem.chi_vector


def jacobian(problem: BetheProblem, w: np.ndarray) -> np.ndarray:
    """Complex Jacobian dF_j/dw_k."""
    w = np.asarray(w, dtype=complex)
    l = problem.level_matrix
    a = problem.cartan_block
    dz = w[:, None] - problem.z_array[None, :]
    dw = w[:, None] - w[None, :]
    np.fill_diagonal(dw, 1.0)
    off = -a / dw ** 2
    np.fill_diagonal(off, 0.0)
    diag = -(l / dz ** 2).sum(axis=1) - off.sum(axis=1)
    jac = off
    jac[np.diag_indices_from(jac)] = diag
    return jac


def residual(problem: BetheProblem, w: Sequence[complex],
             floor: float = SEPARATION_FLOOR) -> np.ndarray:
    """
    |F_j(w)| for every Bethe root.

    Raises:
        CollisionError: If roots collide with each other or with marked points.
    """
    w = np.asarray(w, dtype=complex)
    if problem.m == 0:
        return np.zeros(0)
    distance = min(separations(problem, w))
    if distance < floor:
        raise CollisionError(distance, floor)
    return np.abs(equations(problem, w))


# -- solver ----------------------------------------------------------------------


@dataclass(frozen=True)
class SolverStrategy:
    """Multistart/homotopy settings of ``solve``."""
    seed: int = 0
    n_random: int = 32
    perturbative: bool = True
    homotopy: bool = False
    homotopy_start: float = 50.0
    homotopy_steps: int = 25
    max_iterations: int = 80
    residual_tol: float = RESIDUAL_TOL
    dedup_radius: float = DEDUP_RADIUS
    separation_floor: float = SEPARATION_FLOOR


@dataclass(frozen=True)
class BetheSolution:
    """
    A solution of the Bethe equations up to same-color permutations.

    Attributes:
        w: Bethe roots.
        residual: |F_j(w)|.
        root_separation: min |w_j - w_s|.
        point_separation: min |w_j - z_i|.
        class_id: Index of the permutation class within its problem.
        degenerate: The Jacobian is numerically singular at w.
    """
    w: Tuple[complex, ...]
    residual: Tuple[float, ...]
    root_separation: float
    point_separation: float
    class_id: int = 0
    degenerate: bool = False

    @property
    def max_residual(self) -> float:
        return max(self.residual, default=0.0)

    def to_json(self) -> Dict[str, Any]:
        return {
            "class_id": self.class_id,
            "w": [[v.real, v.imag] for v in self.w],
            "residual": list(self.residual),
            "root_separation": _finite(self.root_separation),
            "point_separation": _finite(self.point_separation),
            "degenerate": self.degenerate,
        }


def _finite(x: float) -> Optional[float]:
    return None if not np.isfinite(x) else x


@dataclass
class SolveReport:
    """Solutions plus solver diagnostics."""
    solutions: List[BetheSolution] = field(default_factory=list)
    attempts: int = 0
    converged: int = 0
    duplicates: int = 0
    failures: int = 0


def _newton(problem: BetheProblem, w0: np.ndarray, strategy: SolverStrategy,
            chi_scale: float = 1.0) -> Tuple[np.ndarray, bool]:
    """Damped complex Newton; steps are halved until |F| decreases."""
    w = np.array(w0, dtype=complex)
    with np.errstate(all="ignore"):
        F = equations(problem, w, chi_scale)
        norm = float(np.max(np.abs(F)))
        for it in range(strategy.max_iterations):
            if not np.isfinite(norm):
                return w, False
            if norm < strategy.residual_tol:
                return w, True
            J = jacobian(problem, w)
            try:
                step = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError:
                return w, False
            t = 1.0
            while t > 1e-6:
                trial = w + t * step
                F_trial = equations(problem, trial, chi_scale)
                n_trial = float(np.max(np.abs(F_trial)))
                if np.isfinite(n_trial) and n_trial < norm:
                    break
                t /= 2
            else:
                logger.debug("line search stalled at iteration %d, |F| = %.3e", it, norm)
                return w, False
            w, F, norm = trial, F_trial, n_trial
    return w, norm < strategy.residual_tol


def _polish(problem: BetheProblem, w: np.ndarray) -> np.ndarray:
    """A few steps of scipy's hybrid method on the real-ified system."""
    m = problem.m

    def fun(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        wc = x[:m] + 1j * x[m:]
        F = equations(problem, wc)
        J = jacobian(problem, wc)
        real_jac = np.block([[J.real, -J.imag], [J.imag, J.real]])
        return np.concatenate([F.real, F.imag]), real_jac

    with np.errstate(all="ignore"):
        sol = root(fun, np.concatenate([w.real, w.imag]), jac=True, method="hybr",
                   options={"xtol": 1e-14})
    candidate = sol.x[:m] + 1j * sol.x[m:]
    with np.errstate(all="ignore"):
        before = np.max(np.abs(equations(problem, w)))
        after = np.max(np.abs(equations(problem, candidate)))
    return candidate if np.isfinite(after) and after <= before else w


def _scale(problem: BetheProblem) -> float:
    z = problem.z_array
    spread = float(np.max(np.abs(z - z.mean()))) if len(z) > 1 else 0.0
    ratio = max((abs(l / c) for l, c in zip(problem.level_matrix.max(axis=1),
                                            problem.chi_vector) if c != 0), default=1.0)
    return max(spread, ratio, 1.0)


def perturbative_seeds(problem: BetheProblem, chi_scale: float = 1.0,
                       limit: int = 64) -> List[np.ndarray]:
    """
    Seeds from the large-|chi| regime: roots sit near the points with
    w ~ z_i + k l/c for the k-th root attached to z_i.
    """
    m = problem.m
    if m == 0:
        return [np.zeros(0, dtype=complex)]
    l = problem.level_matrix
    c = problem.chi_vector * chi_scale
    z = problem.z_array
    seeds = []
    for assignment in itertools.islice(itertools.product(range(problem.n_sites), repeat=m), limit):
        w = np.empty(m, dtype=complex)
        used: Dict[Tuple[int, int], int] = {}
        for j, i in enumerate(assignment):
            key = (i, problem.coloring[j])
            k = used.get(key, 0)
            used[key] = k + 1
            level = l[j, i] if l[j, i] != 0 else 1.0
            w[j] = z[i] + (1 + k) * level / c[j] * (1 + 0.1j * k)
        seeds.append(w)
    return seeds


def random_seeds(problem: BetheProblem, rng: np.random.Generator, count: int) -> List[np.ndarray]:
    z = problem.z_array
    centre = z.mean() if len(z) else 0j
    scale = _scale(problem)
    return [centre + scale * (rng.normal(size=problem.m) + 1j * rng.normal(size=problem.m))
            for _ in range(count)]


def _homotopy(problem: BetheProblem, seed: np.ndarray,
              strategy: SolverStrategy) -> Tuple[np.ndarray, bool]:
    """Track a solution from chi_scale = homotopy_start down to 1."""
    scales = np.geomspace(strategy.homotopy_start, 1.0, strategy.homotopy_steps)
    w = seed
    for s in scales:
        w, ok = _newton(problem, w, strategy, float(s))
        if not ok:
            logger.debug("homotopy lost the path at chi scale %.3g", s)
            return w, False
    return w, True


def same_class(problem: BetheProblem, w1: Sequence[complex], w2: Sequence[complex],
               radius: float) -> bool:
    """True if w2 is a same-color permutation of w1 up to ``radius``."""
    w1 = np.asarray(w1)
    w2 = np.asarray(w2)
    for group in problem.color_groups():
        cost = np.abs(w1[group][:, None] - w2[group][None, :])
        rows, cols = linear_sum_assignment(cost)
        if cost[rows, cols].max() > radius:
            return False
    return True


def canonical_order(problem: BetheProblem, w: np.ndarray) -> np.ndarray:
    """Sort roots within each color group by (real, imag)."""
    out = np.array(w, dtype=complex)
    for group in problem.color_groups():
        vals = sorted(out[group], key=lambda v: (round(v.real, 9), round(v.imag, 9)))
        out[group] = vals
    return out


def solve_with_diagnostics(problem: BetheProblem,
                           strategy: Optional[SolverStrategy] = None) -> SolveReport:
    """
    Multistart solve of the Bethe equations.

    Raises:
        NonRegularElementError: If chi is not regular.
    """
    strategy = strategy or SolverStrategy()
    check_regular_weight(problem.algebra, problem.chi)
    report = SolveReport()
    if problem.m == 0:
        report.solutions.append(BetheSolution((), (), float("inf"), float("inf")))
        report.attempts = report.converged = 1
        return report

    rng = np.random.default_rng(strategy.seed)
    candidates: List[Tuple[np.ndarray, bool]] = []
    if strategy.perturbative:
        for seed in perturbative_seeds(problem):
            candidates.append(_newton(problem, seed, strategy))
    if strategy.homotopy:
        for seed in perturbative_seeds(problem, strategy.homotopy_start):
            candidates.append(_homotopy(problem, seed, strategy))
    for seed in random_seeds(problem, rng, strategy.n_random):
        candidates.append(_newton(problem, seed, strategy))

    accepted: List[np.ndarray] = []
    for w, ok in candidates:
        report.attempts += 1
        if not ok:
            report.failures += 1
            continue
        w = _polish(problem, w)
        roots_sep, point_sep = separations(problem, w)
        if min(roots_sep, point_sep) < strategy.separation_floor:
            report.failures += 1
            continue
        with np.errstate(all="ignore"):
            res = np.abs(equations(problem, w))
        if not np.all(np.isfinite(res)) or res.max() > strategy.residual_tol:
            report.failures += 1
            continue
        report.converged += 1
        if any(same_class(problem, w, other, strategy.dedup_radius) for other in accepted):
            report.duplicates += 1
            continue
        accepted.append(canonical_order(problem, w))

    accepted.sort(key=lambda w: tuple((round(v.real, 8), round(v.imag, 8)) for v in w))
    for k, w in enumerate(accepted):
        res = np.abs(equations(problem, w))
        roots_sep, point_sep = separations(problem, w)
        cond = np.linalg.cond(jacobian(problem, w))
        report.solutions.append(BetheSolution(
            tuple(complex(v) for v in w), tuple(float(r) for r in res),
            roots_sep, point_sep, k, bool(cond > DEGENERATE_CONDITION)))
    logger.info("Bethe solve %s m=%d: %d classes from %d attempts (%d failed, %d duplicates)",
                problem.coloring, problem.m, len(report.solutions), report.attempts,
                report.failures, report.duplicates)
    return report


def solve(problem: BetheProblem, strategy: Optional[SolverStrategy] = None) -> List[BetheSolution]:
    """Deduplicated Bethe solutions; an empty list when nothing converges."""
    return solve_with_diagnostics(problem, strategy).solutions


def rescale_solution(solution: BetheSolution, c: Any) -> Tuple[complex, ...]:
    return tuple(complex(c) * w for w in solution.w)


# -- Bethe vectors -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BetheVector:
    """
    A Bethe vector in the tensor product of irreducibles.

    ``vector`` is the full complex vector; ``block`` the target weight and
    ``coordinates`` the restriction to that block.
    """
    problem: BetheProblem
    solution: BetheSolution
    space: TensorSpace
    vector: np.ndarray
    block: WeightKey
    coordinates: np.ndarray
    verma_components: Optional[Dict[Tuple[Any, ...], complex]] = None

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coordinates))

    @property
    def is_zero(self) -> bool:
        return self.norm < 1e-12


def ordered_partitions(m: int, n_parts: int):
    """
    Ordered partitions (I^1..I^N) of {0..m-1}; the order inside each part
    matters, so there are m! * C(m + N - 1, N - 1) of them.
    """
    for perm in itertools.permutations(range(m)):
        for cuts in itertools.combinations(range(m + n_parts - 1), n_parts - 1):
            sizes = []
            prev = -1
            for c in cuts + (m + n_parts - 1,):
                sizes.append(c - prev - 1)
                prev = c
            parts = []
            start = 0
            for size in sizes:
                parts.append(perm[start:start + size])
                start += size
            yield tuple(parts)


def default_space(problem: BetheProblem) -> TensorSpace:
    return TensorSpace([build_irrep(problem.algebra, w) for w in problem.weights])


def bethe_vector(problem: BetheProblem, solution: BetheSolution,
                 space: Optional[TensorSpace] = None, in_verma: bool = False) -> BetheVector:
    """
    Sum over ordered partitions of tensor products of chains
    prod_s f_{i_s} / (w_s - w_next) v_{lambda_k}, the last denominator being
    w - z_k. A zero result is returned and flagged, never dropped.
    """
    space = space or default_space(problem)
    g = problem.algebra
    m, n = problem.m, problem.n_sites
    w = [complex(x) for x in solution.w]
    z = [complex(x) for x in problem.points]
    f_index = [g.f_index(g.simple_root(c)) for c in problem.coloring]

    projections: List[Dict[Tuple[int, ...], np.ndarray]] = [{} for _ in range(n)]
    verma_total: Dict[Tuple[Any, ...], complex] = {}
    total = np.zeros(space.dim, dtype=complex)
    for parts in ordered_partitions(m, n):
        coeff = 1 + 0j
        factor_vectors = []
        factor_monomials = []
        for k, chain in enumerate(parts):
            for pos, s in enumerate(chain):
                nxt = w[chain[pos + 1]] if pos + 1 < len(chain) else z[k]
                coeff /= (w[s] - nxt)
            word = tuple(f_index[s] for s in chain)
            factor = space.factors[k]
            cache = projections[k]
            if word not in cache:
                verma_vec = factor.verma.apply_word(word, {(): Fraction(1)})
                cache[word] = (exact.to_complex(factor.verma_to_vector(verma_vec)), verma_vec)
            factor_vectors.append(cache[word][0])
            factor_monomials.append(cache[word][1])
        total += coeff * space.product_vector(factor_vectors)
        if in_verma:
            for combo in itertools.product(*(v.items() for v in factor_monomials)):
                key = tuple(mon for mon, _ in combo)
                value = coeff * np.prod([complex(c) for _, c in combo])
                verma_total[key] = verma_total.get(key, 0j) + value

    block = problem.target_weight
    coords = space.block_vector(block, total)
    vec = BetheVector(problem, solution, space, total, block, coords,
                      verma_total if in_verma else None)
    if vec.is_zero:
        logger.warning("zero Bethe vector for coloring %s, class %d",
                       problem.coloring, solution.class_id)
    return vec


def bethe_vector_one_site(problem: BetheProblem, solution: BetheSolution,
                          space: Optional[TensorSpace] = None) -> np.ndarray:
    """
    Single-module formula: sum over permutations sigma of
    f_{sigma_1} ... f_{sigma_m} v / ((w_{sigma_1} - w_{sigma_2}) ... (w_{sigma_m} - z)).
    """
    if problem.n_sites != 1:
        raise ValueError("the one-site formula needs exactly one marked point")
    space = space or default_space(problem)
    g = problem.algebra
    factor = space.factors[0]
    w = [complex(x) for x in solution.w]
    z = complex(problem.points[0])
    total = np.zeros(space.dim, dtype=complex)
    for perm in itertools.permutations(range(problem.m)):
        denom = 1 + 0j
        for pos, s in enumerate(perm):
            denom *= w[s] - (w[perm[pos + 1]] if pos + 1 < len(perm) else z)
        word = tuple(g.f_index(g.simple_root(problem.coloring[s])) for s in perm)
        vec = factor.verma_to_vector(factor.verma.apply_word(word, {(): Fraction(1)}))
        total += exact.to_complex(vec) / denom
    return total


# -- verification -------------------------------------------------------------------


@dataclass(frozen=True)
class EigenCheck:
    """Rayleigh eigenvalues and eigen-residuals of one Bethe vector."""
    eigenvalues: Tuple[complex, ...]
    residuals: Tuple[float, ...]
    passed: bool
    zero_vector: bool
    message: str = ""

    def to_json(self) -> Dict[str, Any]:
        return {
            "eigenvalues": [[v.real, v.imag] for v in self.eigenvalues],
            "residuals": list(self.residuals),
            "passed": self.passed,
            "zero_vector": self.zero_vector,
        }


def eigen_check(problem: BetheProblem, solution: BetheSolution,
                operators: Sequence[WeightOperator], tol: float = EIGEN_TOL,
                vector: Optional[BetheVector] = None) -> EigenCheck:
    """
    Check that the Bethe vector is a joint eigenvector of ``operators``.

    Each operator must act on the target block of the problem.
    """
    space = operators[0].space if operators else None
    vector = vector or bethe_vector(problem, solution, space)
    phi = vector.coordinates
    if vector.is_zero:
        return EigenCheck((), (), False, True, "zero Bethe vector")
    norm = np.linalg.norm(phi)
    values, residuals = [], []
    for op in operators:
        if op.block != vector.block:
            raise ValueError(f"operator block {op.block} is not the target block {vector.block}")
        image = op.apply(phi)
        mu = complex(np.vdot(phi, image) / np.vdot(phi, phi))
        values.append(mu)
        residuals.append(float(np.linalg.norm(image - mu * phi) / norm))
    passed = all(r <= tol for r in residuals)
    if not passed:
        logger.warning("eigen check failed for coloring %s: max residual %.3e",
                       problem.coloring, max(residuals))
    return EigenCheck(tuple(values), tuple(residuals), passed, False)


def hamiltonians_for(problem: BetheProblem, space: TensorSpace,
                     block: Optional[Sequence[Any]] = None) -> List[WeightOperator]:
    """Xi_{i,chi'} (chi' = -chi) on the target block, one per site."""
    block = tuple(block) if block is not None else problem.target_weight
    chi_h = hamiltonian_chi(problem)
    return [gaudin_shifted(space, problem.points, chi_h, i, blocks=[block])[block]
            for i in range(problem.n_sites)]


@dataclass
class CensusCounts:
    """Census of one weight block."""
    block: WeightKey
    m: int
    coloring: Tuple[int, ...]
    solution_classes: int
    block_dimension: int
    matched_eigenvectors: int
    zero_vectors: int
    solutions: List[BetheSolution] = field(default_factory=list)
    eigen_checks: List[EigenCheck] = field(default_factory=list)
    joint_eigenvalues: List[Tuple[complex, ...]] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.solution_classes == self.block_dimension == self.matched_eigenvectors

    @property
    def eigenvalues_in_spectrum(self) -> bool:
        """Every joint eigenvalue found by the Bethe Ansatz occurs in the spectrum."""
        return self.matched_eigenvectors == len(self.joint_eigenvalues)

    def to_json(self) -> Dict[str, Any]:
        return {
            "block_weight": [exact.fraction_str(x) for x in self.block],
            "m": self.m,
            "coloring": list(self.coloring),
            "bethe_solution_classes": self.solution_classes,
            "block_dimension": self.block_dimension,
            "matched_eigenvectors": self.matched_eigenvectors,
            "zero_vectors": self.zero_vectors,
            "solutions": [s.to_json() for s in self.solutions],
            "eigen_checks": [c.to_json() for c in self.eigen_checks],
        }


def joint_spectrum(operators: Sequence[WeightOperator], rng: np.random.Generator) -> List[Tuple[complex, ...]]:
    """Joint eigenvalues from a generic linear combination of the operators."""
    mats = [op.numeric() for op in operators]
    combo = sum(r * m for r, m in zip(rng.uniform(0.5, 1.5, size=len(mats)), mats))
    _, vectors = np.linalg.eig(combo)
    out = []
    for k in range(vectors.shape[1]):
        v = vectors[:, k]
        out.append(tuple(complex(np.vdot(v, m @ v) / np.vdot(v, v)) for m in mats))
    return out


def _match(found: Sequence[Tuple[complex, ...]], reference: Sequence[Tuple[complex, ...]],
           tol: float) -> int:
    if not found or not reference:
        return 0
    cost = np.array([[max(abs(a - b) for a, b in zip(f, r)) for r in reference] for f in found])
    rows, cols = linear_sum_assignment(cost)
    return int(sum(cost[r, c] <= tol * max(1.0, max(abs(x) for x in reference[c]))
                   for r, c in zip(rows, cols)))


def census(g: SimpleLieAlgebra, weights: Sequence[Sequence[Any]], points: Sequence[Any],
           chi: Sequence[Any], block_weight: Sequence[Any],
           strategy: Optional[SolverStrategy] = None,
           space: Optional[TensorSpace] = None, tol: float = EIGEN_TOL) -> CensusCounts:
    """
    Compare Bethe solution classes with the spectrum on one weight block.

    Equality of the three counts is an expectation for generic chi, never
    asserted here; mismatches are logged.
    """
    strategy = strategy or SolverStrategy()
    problem = BetheProblem.for_block(g, points, weights, chi, block_weight)
    space = space or default_space(problem)
    block = problem.target_weight
    dim = space.block_dimension(block)
    solutions = solve(problem, strategy) if dim else []
    counts = CensusCounts(block, problem.m, problem.coloring, len(solutions), dim, 0, 0, solutions)
    if not dim:
        return counts
    operators = hamiltonians_for(problem, space, block)
    for sol in solutions:
        vec = bethe_vector(problem, sol, space)
        check = eigen_check(problem, sol, operators, tol, vec)
        counts.eigen_checks.append(check)
        if check.zero_vector:
            counts.zero_vectors += 1
        elif check.passed:
            counts.joint_eigenvalues.append(check.eigenvalues)
    reference = joint_spectrum(operators, np.random.default_rng(strategy.seed))
    counts.matched_eigenvectors = _match(counts.joint_eigenvalues, reference, max(tol, 1e-6))
    if not counts.complete:
        logger.warning("census block %s: %d classes, dim %d, %d matched", block,
                       counts.solution_classes, dim, counts.matched_eigenvectors)
    return counts


def full_census(space: TensorSpace, points: Sequence[Any], chi: Sequence[Any],
                strategy: Optional[SolverStrategy] = None,
                tol: float = EIGEN_TOL) -> List[CensusCounts]:
    """Census of every weight block of a tensor product."""
    weights = [f.highest_weight for f in space.factors]
    return [census(space.algebra, weights, points, chi, block, strategy, space, tol)
            for block in space.blocks]


def counts_by_m(results: Sequence[CensusCounts]) -> Dict[int, int]:
    table: Dict[int, int] = {}
    for r in results:
        table[r.m] = table.get(r.m, 0) + r.solution_classes
    return dict(sorted(table.items()))


CSV_COLUMNS = ("block", "class_id", "root", "color", "w_re", "w_im", "residual")


def solutions_to_rows(problem: BetheProblem, solutions: Sequence[BetheSolution]) -> List[Dict[str, Any]]:
    rows = []
    block = " ".join(exact.fraction_str(x) for x in problem.target_weight)
    for sol in solutions:
        for j, (w, r) in enumerate(zip(sol.w, sol.residual)):
            rows.append({"block": block, "class_id": sol.class_id, "root": j,
                         "color": problem.coloring[j] + 1, "w_re": repr(w.real),
                         "w_im": repr(w.imag), "residual": repr(r)})
    return rows


def solutions_to_csv(rows: Sequence[Dict[str, Any]], path: str) -> None:
    """Write solution rows with the frozen CSV column set."""
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
