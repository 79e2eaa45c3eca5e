"""
Exception hierarchy for gaudin_lab.

Every error derives from GaudinLabError and keeps the offending datum as an
attribute, so callers (and the CLI report) can point at what went wrong
without parsing the message.
"""
from typing import Any, Optional, Sequence


class GaudinLabError(Exception):
    """Base class for all errors raised by this package."""


class UnsupportedAlgebraError(GaudinLabError):
    """Raised for a Lie algebra label outside the supported series."""

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"unsupported Lie algebra label: {label!r}")


class SingularFormError(GaudinLabError):
    """Raised when an invariant form is degenerate."""

    def __init__(self, rank: int, dim: int):
        self.rank = rank
        self.dim = dim
        super().__init__(f"invariant form is singular: rank {rank} < dim {dim}")


class WeightError(GaudinLabError):
    """Raised for a highest weight that is not integral dominant."""

    def __init__(self, message: str, weight: Sequence[Any]):
        self.message = message
        self.weight = tuple(weight)
        super().__init__(f"weight {self.weight}: {message}")


class SiteError(GaudinLabError):
    """Raised when a tensor site index is out of range."""

    def __init__(self, site: Any, n_sites: int):
        self.site = site
        self.n_sites = n_sites
        super().__init__(f"site {site!r} out of range for {n_sites} factors")


class CoincidentPointsError(GaudinLabError):
    """Raised when marked points are not pairwise distinct."""

    def __init__(self, points: Sequence[Any]):
        self.points = tuple(points)
        super().__init__(f"marked points are not pairwise distinct: {self.points}")


class NonRegularElementError(GaudinLabError):
    """
    Raised for a non-regular χ.

    Either ``root`` (a positive root with α(χ) = 0) or ``defect`` (excess
    dimension of the centralizer over the rank) is set.
    """

    def __init__(self, message: str, root: Optional[Sequence[int]] = None,
                 defect: Optional[int] = None):
        self.message = message
        self.root = tuple(root) if root is not None else None
        self.defect = defect
        super().__init__(message)


class NotARootError(GaudinLabError):
    """Raised when a vector is not a positive root."""

    def __init__(self, root: Sequence[int]):
        self.root = tuple(root)
        super().__init__(f"{self.root} is not a positive root")


class BlockMismatchError(GaudinLabError):
    """Raised when two operators live on different weight blocks."""

    def __init__(self, blocks: Sequence[Any]):
        self.blocks = tuple(blocks)
        super().__init__(f"operators act on different weight blocks: {self.blocks}")


class ArityMismatchError(GaudinLabError):
    """Raised when polynomials live on phase spaces of different site arity."""

    def __init__(self, arities: Sequence[int]):
        self.arities = tuple(arities)
        super().__init__(f"polynomials have different site arities: {self.arities}")


class CollisionError(GaudinLabError):
    """Raised when Bethe roots collide with each other or with marked points."""

    def __init__(self, distance: float, floor: float):
        self.distance = distance
        self.floor = floor
        super().__init__(
            f"Bethe roots closer than the separation floor: {distance:.3e} < {floor:.1e}"
        )


class ResidueOrderError(GaudinLabError):
    """Raised when an oper is more singular than the requested residue order."""

    def __init__(self, point: Any, order: int, bound: int):
        self.point = point
        self.order = order
        self.bound = bound
        super().__init__(f"pole of order {order} at {point!r} exceeds bound {bound}")


class IntegrationError(GaudinLabError):
    """Raised when monodromy transport fails along a loop."""

    def __init__(self, message: str, closest_approach: float):
        self.message = message
        self.closest_approach = closest_approach
        super().__init__(f"{message} (closest approach {closest_approach:.3e})")


class BetheResidualError(GaudinLabError):
    """Raised when a Bethe solution does not satisfy the equations."""

    def __init__(self, residual: float, tol: float):
        self.residual = residual
        self.tol = tol
        super().__init__(f"Bethe residual {residual:.3e} exceeds tolerance {tol:.1e}")


class ConfigError(GaudinLabError):
    """Raised for an invalid experiment configuration."""

    def __init__(self, message: str, field: str):
        self.message = message
        self.field = field
        super().__init__(f"{field}: {message}")
