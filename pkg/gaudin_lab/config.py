"""
Experiment configuration.

An experiment is one JSON document; ``ExperimentConfig.from_dict`` checks
every field and reports the first bad one through ``ConfigError`` with a
JSON pointer such as ``/weights/1``.
"""
from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from gaudin_lab import exact
from gaudin_lab.errors import ConfigError, GaudinLabError
from gaudin_lab.liealg import SimpleLieAlgebra, from_type

PIPELINES = ("commute", "dmt", "shift", "bethe-census", "opers", "monodromy", "full")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

Point = Union[Fraction, complex]


@dataclass(frozen=True)
class Tolerances:
    """Numeric thresholds used by the pipelines."""
    residual: float = 1e-10
    dedup_radius: float = 1e-6
    separation_floor: float = 1e-8
    eigen: float = 1e-8
    monodromy_local: float = 1e-5
    monodromy_global: float = 1e-4
    integrator_rtol: float = 1e-10
    oper_match: float = 1e-6
    block_cap: int = 512

    def scaled(self, factor: float) -> "Tolerances":
        """Multiply every acceptance threshold by ``factor``; the block cap is kept."""
        if factor <= 0:
            raise ConfigError("tolerance scale must be positive", "/tol_scale")
        return replace(self, **{f.name: getattr(self, f.name) * factor
                                for f in fields(self) if f.name != "block_cap"})

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One batch experiment.

    ``chi`` is the chi of the Bethe equations and of the Cartan
    connection, given by coroot pairings; the quantum Hamiltonians use -chi.
    """
    algebra: str
    weights: Tuple[Tuple[Fraction, ...], ...]
    points: Tuple[Point, ...]
    chi: Tuple[Fraction, ...]
    pipeline: str
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 0
    n_random: int = 32
    homotopy: bool = False
    gammas: Tuple[Tuple[Fraction, ...], ...] = ()
    control_kappa: Fraction = Fraction(1, 3)
    log_level: str = "INFO"

    @property
    def lie_algebra(self) -> SimpleLieAlgebra:
        return from_type(self.algebra)

    @property
    def exact_points(self) -> bool:
        return all(isinstance(z, Fraction) for z in self.points)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ExperimentConfig":
        """
        Validate and build a config.

        Raises:
            ConfigError: For the first invalid field, with its JSON pointer.
        """
        if not isinstance(data, Mapping):
            raise ConfigError("experiment must be a JSON object", "")
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(f"unknown field {key!r}", f"/{key}")

        label = _required(data, "algebra")
        if not isinstance(label, str):
            raise ConfigError("algebra must be a label such as 'A1'", "/algebra")
        try:
            g = from_type(label)
        except GaudinLabError as exc:
            raise ConfigError(str(exc), "/algebra") from exc

        pipeline = _required(data, "pipeline")
        if pipeline not in PIPELINES:
            raise ConfigError(f"pipeline must be one of {', '.join(PIPELINES)}", "/pipeline")

        weights_raw = _required(data, "weights")
        if not isinstance(weights_raw, list) or not weights_raw:
            raise ConfigError("weights must be a non-empty list", "/weights")
        weights = tuple(_weight(w, g.rank, f"/weights/{i}") for i, w in enumerate(weights_raw))

        points_raw = _required(data, "points")
        if not isinstance(points_raw, list) or len(points_raw) != len(weights):
            raise ConfigError(f"expected {len(weights)} points, one per weight", "/points")
        points = tuple(_point(z, f"/points/{i}") for i, z in enumerate(points_raw))
        for i, z in enumerate(points):
            if z in points[:i]:
                raise ConfigError("marked points must be distinct", f"/points/{i}")

        chi = _weight(_required(data, "chi"), g.rank, "/chi", dominant=False)

        gammas = tuple(_weight(v, g.rank, f"/gammas/{i}", dominant=False)
                       for i, v in enumerate(data.get("gammas", [])))

        tolerances = Tolerances()
        overrides = data.get("tolerances", {})
        if not isinstance(overrides, Mapping):
            raise ConfigError("tolerances must be an object", "/tolerances")
        allowed = {f.name for f in fields(Tolerances)}
        for key, value in overrides.items():
            pointer = f"/tolerances/{key}"
            if key not in allowed:
                raise ConfigError(f"unknown tolerance {key!r}", pointer)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
                raise ConfigError("tolerance must be a positive number", pointer)
        if overrides:
            tolerances = replace(tolerances, **overrides)

        seed = _integer(data.get("seed", 0), "/seed")
        n_random = _integer(data.get("n_random", 32), "/n_random")
        homotopy = data.get("homotopy", False)
        if not isinstance(homotopy, bool):
            raise ConfigError("homotopy must be true or false", "/homotopy")
        log_level = data.get("log_level", "INFO")
        if log_level not in LOG_LEVELS:
            raise ConfigError(f"log_level must be one of {', '.join(LOG_LEVELS)}", "/log_level")
        control_kappa = _rational(data.get("control_kappa", "1/3"), "/control_kappa")

        return cls(label, weights, points, chi, pipeline, tolerances, seed, n_random,
                   homotopy, gammas, control_kappa, log_level)

    def with_overrides(self, seed: Optional[int] = None,
                       tol_scale: Optional[float] = None) -> "ExperimentConfig":
        """Apply the ``--seed`` and ``--tol-scale`` command-line flags."""
        config = self
        if seed is not None:
            config = replace(config, seed=seed)
        if tol_scale is not None:
            config = replace(config, tolerances=config.tolerances.scaled(tol_scale))
        return config

    def to_json(self) -> Dict[str, Any]:
        return {
            "algebra": self.algebra,
            "pipeline": self.pipeline,
            "weights": [[exact.fraction_str(x) for x in w] for w in self.weights],
            "points": [exact.scalar_json(z) for z in self.points],
            "chi": [exact.fraction_str(x) for x in self.chi],
            "gammas": [[exact.fraction_str(x) for x in v] for v in self.gammas],
            "seed": self.seed,
            "n_random": self.n_random,
            "homotopy": self.homotopy,
            "control_kappa": exact.fraction_str(self.control_kappa),
            "tolerances": self.tolerances.to_json(),
        }


def _required(data: Mapping[str, Any], key: str) -> Any:
    if key not in data:
        raise ConfigError("missing required field", f"/{key}")
    return data[key]


def _integer(value: Any, pointer: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ConfigError("expected a non-negative integer", pointer)
    return value


def _rational(value: Any, pointer: str) -> Fraction:
    """JSON numbers (decimal floats read exactly) or ``"p/q"`` strings."""
    if isinstance(value, bool):
        raise ConfigError("expected a rational number", pointer)
    if isinstance(value, float):
        return Fraction(repr(value))
    try:
        return exact.frac(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"expected a rational number, got {value!r}", pointer) from exc


def _point(value: Any, pointer: str) -> Point:
    if isinstance(value, list):
        if len(value) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                                      for v in value):
            raise ConfigError("complex points are [re, im] pairs", pointer)
        return complex(value[0], value[1])
    return _rational(value, pointer)


def _weight(value: Any, rank: int, pointer: str, dominant: bool = True) -> Tuple[Fraction, ...]:
    if not isinstance(value, list) or len(value) != rank:
        raise ConfigError(f"expected {rank} coroot pairings", pointer)
    out = tuple(_rational(v, f"{pointer}/{k}") for k, v in enumerate(value))
    if dominant:
        for k, v in enumerate(out):
            if v.denominator != 1 or v < 0:
                raise ConfigError("highest weights must be dominant integral", f"{pointer}/{k}")
    return out

