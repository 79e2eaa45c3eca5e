"""
Batch Pipelines

Each pipeline reads an ``ExperimentConfig``, runs one family of checks and
appends ``Check`` records to a ``PipelineReport``. A check names the
operation it exercises and the property it asserts; the report passes iff
every check passes. ``full`` runs all of them in order and shares the
Bethe census between the Bethe, oper and monodromy stages.

Topics covered:
- Exact commutativity of shifted Gaudin and DMT Hamiltonians
- Shift-of-argument generators, independence and quantization symbols
- Bethe census, opers of Bethe solutions and their monodromy
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from gaudin_lab import exact
from gaudin_lab.bethe import (
    BetheProblem,
    CensusCounts,
    SolverStrategy,
    census,
    counts_by_m,
    solutions_to_rows,
)
from gaudin_lab.classical import (
    LOperatorP1,
    classical_gaudin_generators,
    commutation_defects,
    generation_identity,
    independence_rank,
    is_regular,
    root_derivative_identity,
    shift_arg_generators,
    symbol_check,
    vinberg_quadratic,
)
from gaudin_lab.config import ExperimentConfig
from gaudin_lab.hamiltonians import (
    OperatorFamily,
    cartan_action,
    dmt,
    dmt_curvature,
    dmt_element,
    family_commutators,
    gaudin_shifted,
    report,
    shifted_gaudin_element,
)
from gaudin_lab.liealg import (
    SimpleLieAlgebra,
    algebra_to_dual,
    invariant_polynomials,
    principal_data,
    weight_to_cartan,
    weight_to_dual,
)
from gaudin_lab.monodromy import Loop, composite_monodromy, default_radius, monodromy
from gaudin_lab.opers import (
    CanonicalOper,
    CartanConnection,
    eigenvalue_function,
    infinity_residue,
    miura,
    oper_at_infinity,
    oper_eigenvalue_function,
    oper_from_bethe,
    point_residue,
    residue_m,
)
from gaudin_lab.polynomials import PhaseSpace
from gaudin_lab.rational import RationalFunction
from gaudin_lab.representations import TensorSpace, build_irrep

logger = logging.getLogger(__name__)

POLE_CHOP_FACTOR = 1e3
RANK_SWEEP = 20
CHI_CONVENTION = "operators use chi = -connection_chi"


@dataclass
class Check:
    """
    One asserted property.

    ``anchor`` names the mathematical statement the check rests on.
    """
    operation: str
    claim: str
    anchor: str
    passed: bool
    detail: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {"operation": self.operation, "claim": self.claim, "anchor": self.anchor,
                "passed": self.passed, "detail": self.detail}


@dataclass
class PipelineReport:
    """Checks, JSON sections and CSV tables produced by a run."""
    pipeline: str
    config: ExperimentConfig
    checks: List[Check] = field(default_factory=list)
    sections: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, operation: str, claim: str, passed: bool, *, anchor: str,
            **detail: Any) -> Check:
        if not anchor:
            raise ValueError(f"check {operation!r} needs an anchor")
        check = Check(operation, claim, anchor, bool(passed), detail)
        self.checks.append(check)
        if not check.passed:
            logger.warning("check failed: %s (%s) [%s]", operation, claim, anchor)
        return check

    def to_json(self) -> Dict[str, Any]:
        return {
            "pipeline": self.pipeline,
            "config": self.config.to_json(),
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "sections": self.sections,
        }


@dataclass
class BetheOper:
    """A Bethe solution with its problem, eigenvalues and oper."""
    problem: BetheProblem
    class_id: int
    energies: Tuple[complex, ...]
    oper: CanonicalOper


class Context:
    """Shared state of one run: the algebra, module and derived data."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.tol = config.tolerances
        self.algebra: SimpleLieAlgebra = config.lie_algebra
        self.rng = np.random.default_rng(config.seed)
        self._space: Optional[TensorSpace] = None
        self.census: Optional[List[CensusCounts]] = None
        self.opers: Optional[List[BetheOper]] = None

    @property
    def space(self) -> TensorSpace:
        if self._space is None:
            self._space = TensorSpace([build_irrep(self.algebra, w) for w in self.config.weights])
        return self._space

    @property
    def blocks(self) -> List[Tuple[Fraction, ...]]:
        return [b for b, basis in self.space.blocks.items() if len(basis) <= self.tol.block_cap]

    @property
    def chi_h(self) -> Tuple[Fraction, ...]:
        """chi of the quantum Hamiltonians: the negative of the configured chi."""
        return tuple(-x for x in self.config.chi)

    @property
    def strategy(self) -> SolverStrategy:
        return SolverStrategy(seed=self.config.seed, n_random=self.config.n_random,
                              homotopy=self.config.homotopy, residual_tol=self.tol.residual,
                              dedup_radius=self.tol.dedup_radius,
                              separation_floor=self.tol.separation_floor)

    def random_rational(self, size: int, bound: int = 5) -> List[Fraction]:
        numerators = self.rng.integers(-bound * 6, bound * 6 + 1, size=size)
        return [Fraction(int(n), 6) for n in numerators]


def _residual_summary(residuals) -> Dict[str, Any]:
    norms = [r.norm for r in residuals]
    return {"pairs": len(residuals), "max_norm": max(norms, default=0.0),
            "all_exact_zero": all(r.exact_zero for r in residuals)}


def _commuting(residuals, tol: float) -> bool:
    return all(r.exact_zero if r.exact_zero is not None else r.norm <= tol for r in residuals)


# -- pipelines ----------------------------------------------------------------------


def _chi_params(ctx: Context) -> Dict[str, Any]:
    """The chi of the operators next to the configured chi they are built from."""
    return {
        "chi": [exact.fraction_str(x) for x in ctx.chi_h],
        "connection_chi": [exact.fraction_str(x) for x in ctx.config.chi],
        "chi_convention": CHI_CONVENTION,
    }


def run_commute(ctx: Context, out: PipelineReport) -> None:
    g, T, config = ctx.algebra, ctx.space, ctx.config
    z = config.points
    blocks = ctx.blocks
    shifted = [gaudin_shifted(T, z, ctx.chi_h, i, blocks=blocks) for i in range(T.n_sites)]
    cartans = [cartan_action(T, [Fraction(int(i == k)) for k in range(g.rank)], blocks=blocks)
               for i in range(g.rank)]

    residuals = []
    per_block: Dict[Any, List[Any]] = {}
    for a, b in itertools.combinations(shifted + cartans, 2):
        for r in family_commutators(a, b):
            residuals.append(r)
            per_block.setdefault(r.block, []).append(r)
    out.add("hamiltonians.gaudin_shifted",
            "shifted Gaudin Hamiltonians commute pairwise and with the diagonal Cartan action",
            _commuting(residuals, ctx.tol.eigen),
            anchor="commutativity of the Gaudin algebra with an irregular point at infinity",
            **_residual_summary(residuals))

    total = cartan_action(T, weight_to_cartan(g, ctx.chi_h), blocks=blocks)
    worst = 0.0
    for key, op in total.items():
        diff = sum((family[key].numeric() for family in shifted), np.zeros((op.dim, op.dim))) \
            - op.numeric()
        worst = max(worst, float(np.max(np.abs(diff))) if diff.size else 0.0)
    out.add("hamiltonians.gaudin_shifted",
            "the shifted Hamiltonians sum to the diagonal action of chi",
            worst <= ctx.tol.eigen,
            anchor="sum rule of the shifted Gaudin Hamiltonians",
            max_deviation=worst)

    params = dict(_chi_params(ctx), points=[exact.scalar_json(x) for x in z])
    records = []
    for i, family in enumerate(shifted):
        records.extend(report(f"gaudin_shifted[{i + 1}]", params, family, per_block))
    out.sections["hamiltonians"] = records


def run_dmt(ctx: Context, out: PipelineReport) -> None:
    g, T = ctx.algebra, ctx.space
    chi_hat = weight_to_cartan(g, ctx.chi_h)
    gammas = ctx.config.gammas or tuple(
        tuple(Fraction(int(i == k)) for k in range(g.rank)) for i in range(g.rank))
    blocks = ctx.blocks
    families: List[OperatorFamily] = [dmt(T, gamma, chi_hat, blocks=blocks) for gamma in gammas]
    cartans = [cartan_action(T, [Fraction(int(i == k)) for k in range(g.rank)], blocks=blocks)
               for i in range(g.rank)]
    residuals = [r for a, b in itertools.combinations(families + cartans, 2)
                 for r in family_commutators(a, b)]
    out.add("hamiltonians.dmt", "DMT Hamiltonians commute pairwise and with the Cartan action",
            _commuting(residuals, ctx.tol.eigen),
            anchor="commutativity of the DMT Hamiltonians at regular chi",
            **_residual_summary(residuals))

    curvature_norms = []
    for a, b in itertools.combinations(gammas, 2):
        for op in dmt_curvature(T, a, b, chi_hat, blocks=blocks).values():
            curvature_norms.append(0.0 if exact.is_zero(op.matrix) else exact.max_abs(op.matrix))
    out.add("hamiltonians.dmt_curvature",
            "the DMT connection d - T(chi) has zero curvature on every block",
            all(n == 0 for n in curvature_norms),
            anchor="flatness of the DMT connection",
            pairs=len(curvature_norms), max_norm=max(curvature_norms, default=0.0))

    space = PhaseSpace(g, 1)
    identities = []
    for p in invariant_polynomials(g, space=space):
        check = generation_identity(g, p, chi_hat)
        identities.append(check.holds)
    out.add("classical.generation_identity",
            "the quadratic part of each invariant is its Cartan part plus half a DMT symbol",
            all(identities),
            anchor="quadratic parts of shifted invariants are generated by DMT symbols",
            degrees=[d + 1 for d in g.exponents])

    per_root = []
    for p in invariant_polynomials(g, space=space):
        for root in g.positive_roots:
            per_root.append(root_derivative_identity(g, p, chi_hat, root).holds)
    out.add("classical.root_derivative_identity",
            "alpha(chi) D_e D_f of the quadratic part equals D_h_alpha of the invariant",
            all(per_root),
            anchor="root derivative identity for shifted invariants")

    params = dict(_chi_params(ctx), chi_cartan=[exact.fraction_str(x) for x in chi_hat])
    out.sections["dmt"] = [rec for gamma, fam in zip(gammas, families)
                           for rec in report(f"dmt{[exact.fraction_str(x) for x in gamma]}",
                                             params, fam)]


def _random_regular(ctx: Context) -> List[Fraction]:
    """A random regular semisimple element of g*, seeded by the run."""
    g = ctx.algebra
    while True:
        chi_dual = weight_to_dual(g, ctx.random_rational(g.rank))
        if is_regular(g, chi_dual):
            return chi_dual


def run_shift(ctx: Context, out: PipelineReport) -> None:
    g = ctx.algebra
    chi_dual = weight_to_dual(g, ctx.config.chi)
    dim_b = (g.dim + g.rank) // 2
    space = PhaseSpace(g, 1)
    gens = shift_arg_generators(g, chi_dual, space=space)
    out.add("classical.shift_arg_generators", "there are dim b generators",
            len(gens) == dim_b,
            anchor="the shift-of-argument algebra is free in dim b generators",
            count=len(gens), expected=dim_b)
    defects = commutation_defects(gens)
    out.add("classical.poisson_bracket", "shift-of-argument generators Poisson commute",
            not defects,
            anchor="Poisson commutativity of the shift-of-argument algebra",
            defects=[list(d) for d in defects])
    rank = independence_rank(gens, ctx.random_rational(g.dim))
    out.add("classical.independence_rank", "the generators are independent at a random point",
            rank == dim_b,
            anchor="the shift-of-argument algebra is free in dim b generators",
            rank=rank)

    sweep = []
    for _ in range(RANK_SWEEP):
        sample = shift_arg_generators(g, _random_regular(ctx), space=space)
        sweep.append(independence_rank(sample, ctx.random_rational(g.dim)))
    full_rank = sum(r == dim_b for r in sweep)
    out.add("classical.independence_rank",
            "the generators are independent at every sampled regular chi",
            full_rank == len(sweep),
            anchor="the shift-of-argument algebra is free in dim b generators",
            samples=len(sweep), full_rank=full_rank)

    nilpotent = algebra_to_dual(g, principal_data(g).p_1)
    nil_gens = shift_arg_generators(g, nilpotent, space=space)
    nil_rank = independence_rank(nil_gens, ctx.random_rational(g.dim))
    out.add("classical.independence_rank",
            "the generators are independent at a regular nilpotent shift", nil_rank == dim_b,
            anchor="the shift-of-argument algebra is free in dim b generators",
            rank=nil_rank)

    zero_gens = shift_arg_generators(g, [0] * g.dim, strict=False, space=space)
    zero_rank = independence_rank(zero_gens, ctx.random_rational(g.dim))
    out.add("classical.independence_rank", "at chi = 0 only the invariants survive",
            zero_rank == g.rank,
            anchor="invariant polynomials are algebraically independent",
            rank=zero_rank)

    chi_hat = weight_to_cartan(g, ctx.chi_h)
    verdicts = []
    for i in range(g.rank):
        gamma = [Fraction(int(i == k)) for k in range(g.rank)]
        verdict = symbol_check(dmt_element(g, gamma, chi_hat),
                               vinberg_quadratic(g, gamma, chi_hat, space=space))
        verdicts.append(verdict.equal)
    out.add("classical.symbol_check", "the symbol of each DMT Hamiltonian is its classical quadratic",
            all(verdicts),
            anchor="DMT Hamiltonians quantize the Vinberg quadratic elements")

    if ctx.config.exact_points:
        L = LOperatorP1.build(g, ctx.config.points, weight_to_dual(g, ctx.config.chi))
        coefficients = classical_gaudin_generators(L)
        matches = []
        for i in range(len(ctx.config.points)):
            quantum = shifted_gaudin_element(g, ctx.config.points, ctx.chi_h, i)
            matches.append(symbol_check(quantum, coefficients[(i, 1, 1)], full=True).equal)
        out.add("classical.symbol_check",
                "the symbol of each shifted Gaudin Hamiltonian is its classical Gaudin residue",
                all(matches),
                anchor="the Gaudin algebra quantizes the classical Gaudin algebra")
    else:
        logger.info("complex points: classical Gaudin symbol check skipped")

    out.sections["shift"] = {
        "generators": len(gens),
        "rank_at_chi": rank,
        "rank_sweep": {"samples": len(sweep), "full_rank": full_rank,
                       "min_rank": min(sweep, default=0)},
        "rank_at_nilpotent": nil_rank,
        "rank_at_zero": zero_rank,
    }


def run_census(ctx: Context, out: PipelineReport) -> None:
    config = ctx.config
    weights = [f.highest_weight for f in ctx.space.factors]
    g = ctx.algebra
    results = []
    for block in ctx.blocks:
        results.append(census(g, weights, config.points, config.chi, block,
                              ctx.strategy, ctx.space, ctx.tol.eigen))
    ctx.census = results

    out.add("bethe.eigen_check", "every Bethe vector is a joint eigenvector",
            all(c.passed for r in results for c in r.eigen_checks),
            anchor="Bethe vectors are eigenvectors of the Gaudin algebra",
            zero_vectors=sum(r.zero_vectors for r in results))
    out.add("bethe.census", "joint eigenvalues of Bethe vectors lie in the spectrum",
            all(r.eigenvalues_in_spectrum for r in results),
            anchor="Bethe vectors are eigenvectors of the Gaudin algebra",
            matched=sum(r.matched_eigenvectors for r in results))

    totals = counts_by_m(results)
    complete = all(r.complete for r in results)
    if not complete:
        logger.warning("census incomplete: solution classes, block dimensions and matches differ")
    out.sections["census"] = [r.to_json() for r in results]
    out.sections["census_counts"] = {
        "counts_by_m": {str(k): v for k, v in totals.items()},
        "total_classes": sum(r.solution_classes for r in results),
        "total_dimension": sum(r.block_dimension for r in results),
        "complete": complete,
    }
    rows = []
    for r in results:
        problem = BetheProblem.for_block(g, config.points, config.weights, config.chi, r.block)
        rows.extend(solutions_to_rows(problem, r.solutions))
    out.tables["bethe_solutions"] = rows


def _ensure_census(ctx: Context, out: PipelineReport) -> None:
    if ctx.census is None:
        run_census(ctx, out)


def run_opers(ctx: Context, out: PipelineReport) -> None:
    _ensure_census(ctx, out)
    g, config = ctx.algebra, ctx.config
    chop = ctx.tol.residual * POLE_CHOP_FACTOR
    tol = ctx.tol.oper_match
    bethe_opers: List[BetheOper] = []
    regular, residues, infinity, eigen, distinct = [], [], [], [], []
    expected_inf = infinity_residue(g, config.chi)
    for r in ctx.census or []:
        problem = BetheProblem.for_block(g, config.points, config.weights, config.chi, r.block)
        block_opers = []
        for sol, check in zip(r.solutions, r.eigen_checks):
            oper = oper_from_bethe(problem, sol, tol=ctx.tol.residual * 100, chop=chop)
            regular.append(all(oper.singularity_order(w, chop) == 0 for w in sol.w))
            for z, weight in zip(problem.points, problem.weights):
                got = residue_m(oper, z, 1)
                want = point_residue(g, weight)
                residues.append(max(abs(complex(a) - complex(b)) for a, b in zip(got, want)))
            got_inf = residue_m(oper_at_infinity(oper), Fraction(0), 2)
            infinity.append(max(abs(complex(a) - complex(b)) for a, b in zip(got_inf, expected_inf)))
            if check.passed:
                predicted = eigenvalue_function(problem, check.eigenvalues)
                gap = (predicted - oper_eigenvalue_function(oper)).max_coefficient()
                eigen.append(gap)
            for other in block_opers:
                distinct.append(not oper.close_to(other, tol))
            block_opers.append(oper)
            bethe_opers.append(BetheOper(problem, sol.class_id, check.eigenvalues, oper))
    ctx.opers = bethe_opers

    out.add("opers.miura", "Bethe opers are regular at every Bethe root", all(regular),
            anchor="Bethe equations are the regularity conditions of the Miura oper")
    out.add("opers.residue_m", "1-residues at marked points are the classes of -(lambda + rho)",
            all(d <= tol for d in residues),
            anchor="residues of Bethe opers at the marked points",
            max_deviation=max(residues, default=0.0))
    out.add("opers.residue_m", "2-residues at infinity are the class of -chi",
            all(d <= tol for d in infinity),
            anchor="residue of Bethe opers at the irregular point at infinity",
            max_deviation=max(infinity, default=0.0))
    out.add("opers.oper_from_bethe", "oper v_1 reproduces the quadratic eigenvalue function",
            all(d <= tol for d in eigen),
            anchor="joint eigenvalues of the Gaudin algebra are encoded by opers",
            max_deviation=max(eigen, default=0.0))
    out.add("opers.oper_from_bethe", "distinct Bethe classes give distinct opers", all(distinct),
            anchor="the map from Bethe solutions to opers is injective")
    out.sections["opers"] = [
        {"block_weight": [exact.fraction_str(x) for x in b.problem.target_weight],
         "class_id": b.class_id, "oper": b.oper.to_json()}
        for b in bethe_opers
    ]


def control_oper(g: SimpleLieAlgebra, kappa: Fraction) -> CanonicalOper:
    """Miura oper of 2 kappa rho / t; its monodromy at 0 is trivial iff 2 kappa - 1 is an integer."""
    comps = tuple(RationalFunction.pole(Fraction(0), 1, 2 * kappa) for _ in range(g.rank))
    return miura(CartanConnection(g, comps, {"z1": Fraction(0)}))


def run_monodromy(ctx: Context, out: PipelineReport) -> None:
    if ctx.opers is None:
        run_opers(ctx, out)
    rtol = ctx.tol.integrator_rtol
    local, composite, rows = [], [], []
    for b in ctx.opers or []:
        points = list(b.oper.points.values())
        radius = default_radius(points)
        for name, p in sorted(b.oper.points.items()):
            result = monodromy(b.oper, Loop.circle(complex(p), radius), rtol)
            local.append(result.projective_distance)
            rows.append({"block": " ".join(exact.fraction_str(x) for x in b.problem.target_weight),
                         "class_id": b.class_id, "point": name,
                         "distance": repr(result.projective_distance),
                         "error_estimate": repr(result.error_estimate)})
        if b.oper.singular_points():
            composite.append(composite_monodromy(b.oper, points, radius, rtol).product_distance)
    out.add("monodromy.monodromy", "Bethe opers have trivial local monodromy",
            all(d <= ctx.tol.monodromy_local for d in local),
            anchor="Bethe opers have no monodromy",
            max_distance=max(local, default=0.0))
    out.add("monodromy.composite_monodromy",
            "local monodromies compose to the monodromy of an enclosing loop",
            all(d <= ctx.tol.monodromy_global for d in composite),
            anchor="Bethe opers have no monodromy",
            max_distance=max(composite, default=0.0))

    kappa = ctx.config.control_kappa
    control = monodromy(control_oper(ctx.algebra, kappa), Loop.circle(0, 1.0), rtol)
    nontrivial = (2 * kappa - 1).denominator != 1
    out.add("monodromy.monodromy", "the control oper has the predicted monodromy",
            (control.projective_distance > ctx.tol.monodromy_local) == nontrivial,
            anchor="local monodromy of a regular singular oper is fixed by its residue",
            distance=control.projective_distance, kappa=exact.fraction_str(kappa))
    out.sections["monodromy"] = {"control": control.to_json(), "local_distances": local,
                                 "composite_distances": composite}
    out.tables["monodromy"] = rows


def run_full(ctx: Context, out: PipelineReport) -> None:
    for name in ("commute", "dmt", "shift", "bethe-census", "opers", "monodromy"):
        logger.info("stage %s", name)
        RUNNERS[name](ctx, out)


Runner = Callable[[Context, PipelineReport], None]

RUNNERS: Dict[str, Runner] = {
    "commute": run_commute,
    "dmt": run_dmt,
    "shift": run_shift,
    "bethe-census": run_census,
    "opers": run_opers,
    "monodromy": run_monodromy,
    "full": run_full,
}


def run_pipeline(config: ExperimentConfig) -> PipelineReport:
    """Run the configured pipeline; errors of the package propagate."""
    ctx = Context(config)
    out = PipelineReport(config.pipeline, config)
    logger.info("running %s on %s with %d sites", config.pipeline, config.algebra,
                len(config.points))
    RUNNERS[config.pipeline](ctx, out)
    logger.info("%s: %d checks, %d failed", config.pipeline, len(out.checks), len(out.failures))
    return out
