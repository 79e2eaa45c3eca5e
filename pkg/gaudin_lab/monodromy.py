"""
Numerical monodromy of canonical opers.

Horizontal sections of d/dt + A(t) satisfy Y' = -A(t) Y. Transport is done
along piecewise-smooth loops with scipy's DOP853 on the complex state, in
the defining representation.
"""
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from gaudin_lab.errors import IntegrationError
from gaudin_lab.opers import CanonicalOper

logger = logging.getLogger(__name__)

RTOL = 1e-10
ATOL = 1e-12
APPROACH_FLOOR = 1e-6


@dataclass(frozen=True)
class Loop:
    """
    A closed path t(s), s in [0, 1], made of segments and circle arcs.

    ``pieces`` holds ``("segment", start, end)`` and
    ``("circle", centre, radius, start_angle)`` entries.
    """
    base: complex
    pieces: Tuple[Tuple[Any, ...], ...]
    description: str

    @classmethod
    def circle(cls, centre: complex, radius: float, start_angle: float = 0.0) -> "Loop":
        centre = complex(centre)
        base = centre + radius * np.exp(1j * start_angle)
        return cls(base, (("circle", centre, float(radius), float(start_angle)),),
                   f"circle(centre={centre}, radius={radius})")

    @classmethod
    def based(cls, base: complex, centre: complex, radius: float) -> "Loop":
        """Go from ``base`` to a small circle around ``centre``, once around it, and back."""
        base, centre = complex(base), complex(centre)
        direction = base - centre
        angle = float(np.angle(direction))
        touch = centre + radius * np.exp(1j * angle)
        return cls(base, (("segment", base, touch),
                          ("circle", centre, float(radius), angle),
                          ("segment", touch, base)),
                   f"based(base={base}, centre={centre}, radius={radius})")

    def _piece_path(self, piece: Tuple[Any, ...]) -> Tuple[Callable[[float], complex],
                                                           Callable[[float], complex]]:
        if piece[0] == "segment":
            start, end = piece[1], piece[2]
            return (lambda s: start + s * (end - start)), (lambda s: end - start)
        _, centre, radius, phi = piece
        return ((lambda s: centre + radius * np.exp(1j * (phi + 2 * np.pi * s))),
                (lambda s: 2j * np.pi * radius * np.exp(1j * (phi + 2 * np.pi * s))))

    def paths(self) -> List[Tuple[Callable[[float], complex], Callable[[float], complex]]]:
        return [self._piece_path(p) for p in self.pieces]

    def sample(self, n: int = 400) -> np.ndarray:
        out = []
        for path, _ in self.paths():
            out.extend(path(s) for s in np.linspace(0.0, 1.0, n))
        return np.array(out)

    def closest_approach(self, points: Sequence[Any]) -> float:
        if not points:
            return float("inf")
        samples = self.sample()
        return float(min(np.min(np.abs(samples - complex(p))) for p in points))


def default_radius(points: Sequence[Any]) -> float:
    """A quarter of the smallest gap between marked points."""
    values = [complex(p) for p in points]
    gaps = [abs(a - b) for i, a in enumerate(values) for b in values[i + 1:]]
    return min(gaps) / 4 if gaps else 0.25


def projective_distance(M: np.ndarray) -> float:
    """min over scalars c of ||M - c I|| / ||M|| (Frobenius)."""
    n = M.shape[0]
    c = np.trace(M) / n
    return float(np.linalg.norm(M - c * np.eye(n)) / np.linalg.norm(M))


@dataclass(frozen=True)
class MonodromyResult:
    """Transport of the identity around one loop."""
    base_point: complex
    loop: str
    matrix: np.ndarray
    projective_distance: float
    error_estimate: float
    det_error: float
    closest_approach: float

    def trivial(self, tol: float) -> bool:
        return self.projective_distance <= tol

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.matrix)

    def to_json(self) -> Dict[str, Any]:
        return {
            "base_point": [self.base_point.real, self.base_point.imag],
            "loop": self.loop,
            "matrix": [[[v.real, v.imag] for v in row] for row in self.matrix],
            "projective_distance": self.projective_distance,
            "error_estimate": self.error_estimate,
            "det_error": self.det_error,
            "closest_approach": self.closest_approach,
        }


def _transport(oper: CanonicalOper, loop: Loop, rtol: float) -> np.ndarray:
    n = oper.algebra.matrix_size
    Y = np.eye(n, dtype=complex)
    for path, speed in loop.paths():
        def rhs(s: float, y: np.ndarray) -> np.ndarray:
            A = oper.matrix(path(s))
            return (-(A @ y.reshape(n, n)) * speed(s)).ravel()

        sol = solve_ivp(rhs, (0.0, 1.0), Y.ravel(), method="DOP853", rtol=rtol, atol=ATOL)
        if sol.status != 0:
            raise IntegrationError(sol.message, loop.closest_approach(oper.singular_points()))
        Y = sol.y[:, -1].reshape(n, n)
    return Y


def monodromy(oper: CanonicalOper, loop: Loop, rtol: float = RTOL,
              floor: float = APPROACH_FLOOR) -> MonodromyResult:
    """
    Monodromy of a canonical oper along a loop.

    The error estimate compares with a run at a hundred times looser
    tolerance; det should be 1 since the connection is traceless.

    Raises:
        IntegrationError: If the loop passes within ``floor`` of a singular
            point or the integrator fails.
    """
    singular = oper.singular_points()
    approach = loop.closest_approach(singular)
    if approach < floor:
        raise IntegrationError("loop passes through a singular point", approach)
    with np.errstate(all="ignore"):
        M = _transport(oper, loop, rtol)
        rough = _transport(oper, loop, rtol * 100)
    if not np.all(np.isfinite(M)):
        raise IntegrationError("transport blew up", approach)
    result = MonodromyResult(
        base_point=loop.base, loop=loop.description, matrix=M,
        projective_distance=projective_distance(M),
        error_estimate=float(np.linalg.norm(M - rough)),
        det_error=float(abs(np.linalg.det(M) - 1)),
        closest_approach=approach,
    )
    logger.debug("monodromy %s: distance %.3e, error %.1e", loop.description,
                 result.projective_distance, result.error_estimate)
    return result


@dataclass(frozen=True)
class CompositeMonodromy:
    """Local loops around every finite point against one enclosing circle."""
    local: Tuple[MonodromyResult, ...]
    enclosing: MonodromyResult
    product_distance: float

    def to_json(self) -> Dict[str, Any]:
        return {
            "local": [r.to_json() for r in self.local],
            "enclosing": self.enclosing.to_json(),
            "product_distance": self.product_distance,
        }


def composite_monodromy(oper: CanonicalOper, points: Optional[Sequence[Any]] = None,
                        radius: Optional[float] = None, rtol: float = RTOL) -> CompositeMonodromy:
    """
    Product of based loops around the finite points compared with a large
    counterclockwise circle through the same base point.
    """
    points = [complex(p) for p in (points if points is not None else oper.singular_points())]
    radius = radius or default_radius(points)
    centre = np.mean(points) if points else 0j
    big = 2 * max((abs(p - centre) for p in points), default=1.0) + 1.0
    outer = Loop.circle(centre, big)
    base = outer.base
    # counterclockwise order of the rays seen from the base point, starting upwards
    order = sorted(points, key=lambda p: (np.angle((p - base) / 1j)) % (2 * np.pi))
    local = tuple(monodromy(oper, Loop.based(base, p, radius), rtol) for p in order)
    product = np.eye(oper.algebra.matrix_size, dtype=complex)
    for r in local:
        product = r.matrix @ product
    enclosing = monodromy(oper, outer, rtol)
    distance = projective_distance(np.linalg.solve(product, enclosing.matrix))
    return CompositeMonodromy(local, enclosing, distance)
