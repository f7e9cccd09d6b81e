"""
Dataclasses holding every tunable of the solvers, the verifier, sweeps and
command line runs, plus the factory that reads a run from a flat JSON file.

A run file is a single JSON object with flat keys, for example::

    {
        "model": "cap",
        "n": 2,
        "K": 1.0,
        "R": 1.2,
        "method": "finite_difference",
        "grid_points": 2048
    }

Command line flags override values read from the file.
"""
import json
import logging
import math

from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from smart_open import open as smart_open

import dirichlet_bounds.const as const
from dirichlet_bounds.const import Method, OutputFormat
from dirichlet_bounds.errors import ConfigError

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("bounds", "verify-xi", "solve", "verify", "sweep")


class _Serializable:
    def as_dict(self) -> Dict[str, Any]:
        """Serialize the config attrs to a dict"""
        return asdict(self)

    def save(self, path: str) -> str:
        with smart_open(path, "w") as fout:
            json.dump(self.as_dict(), fout, indent=2)
        return path


@dataclass
class SolverConfig(_Serializable):
    """Settings shared by both eigenvalue solvers."""

    method: str = Method.SHOOTING.value
    """``shooting`` or ``finite_difference``."""

    grid_points: int = const.DEFAULT_GRID_POINTS
    """Uniform grid size on [0, R]. Shooting adds pole-graded steps below the
    first uniform node; finite differences multiply it by each refinement.
    """

    tolerance: float = const.DEFAULT_TOLERANCE
    """Relative tolerance on lambda for bisection and inverse iteration."""

    pole_offset: Optional[float] = None
    """Shooting start point epsilon. ``None`` means ``1e-8 * R``."""

    max_iterations: int = 200
    """Cap on bisection steps and on inverse iterations per grid."""

    pole_grading: float = 0.01
    """Shooting step near the pole is ``pole_grading * r`` until it reaches
    the uniform step.
    """

    refinements: Tuple[int, ...] = (1, 2, 4)
    """Grid multipliers for Richardson extrapolation of the finite difference
    eigenvalue. Each entry must double the previous one.
    """

    def __post_init__(self):
        try:
            self.method = Method(self.method).value
        except ValueError as err:
            raise ConfigError(f"Unknown solver method: {self.method}") from err
        if int(self.grid_points) != self.grid_points or self.grid_points < 64:
            raise ConfigError(f"grid_points must be an integer >= 64, got {self.grid_points}")
        self.grid_points = int(self.grid_points)
        if not (100 * np.finfo(np.float64).eps <= self.tolerance < 1):
            raise ConfigError(
                f"tolerance must lie in [100 * machine epsilon, 1), got {self.tolerance}"
            )
        if self.pole_offset is not None and not self.pole_offset > 0:
            raise ConfigError(f"pole_offset must be > 0, got {self.pole_offset}")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")
        if not 0 < self.pole_grading <= 0.1:
            raise ConfigError(f"pole_grading must lie in (0, 0.1], got {self.pole_grading}")
        self.refinements = tuple(int(r) for r in self.refinements)
        if not self.refinements or self.refinements[0] < 1:
            raise ConfigError("refinements must start with a positive multiplier")
        for prev, cur in zip(self.refinements, self.refinements[1:]):
            if cur != 2 * prev:
                raise ConfigError(f"refinements must double, got {self.refinements}")

    def epsilon(self, R: float) -> float:
        if self.pole_offset is None:
            return const.DEFAULT_POLE_OFFSET * R
        return self.pole_offset


@dataclass
class VerifierConfig(_Serializable):
    """Tolerances and switches for the estimate checks."""

    b_sequence: Tuple[float, ...] = const.DEFAULT_B_SEQUENCE
    """Values of b > 1 approaching 1, used by the gradient and Z checks."""

    buckets: int = const.DEFAULT_BUCKETS
    """Number of t buckets on [0, pi/2] for the empirical Z."""

    z_tolerance: float = 1e-3
    """Slack on Z <= z comparisons, covers bucket interpolation."""

    z_one_tolerance: float = 1e-6
    """Slack on Z <= 1."""

    gradient_tolerance: float = 1e-4
    grid_factor: float = 10.0
    """The gradient check allows ``lambda * grid_factor * (max dr / R)^2`` for
    discretization error on top of ``gradient_tolerance``.
    """

    bound_slack: float = 1e-6
    """Relative slack on eigenvalue lower bounds (main theorem, yang, reilly)."""

    lichnerowicz_slack: float = 1e-8
    chain_tolerance: float = 1e-6
    witness_tolerance: float = 1e-9
    force_hypotheses: bool = False
    """Run gated checks even when their hypotheses fail. Results are then
    labeled out-of-hypothesis.
    """

    def __post_init__(self):
        self.b_sequence = tuple(float(b) for b in self.b_sequence)
        if not self.b_sequence or any(not b > 1 for b in self.b_sequence):
            raise ConfigError(f"every b must be > 1, got {self.b_sequence}")
        if int(self.buckets) != self.buckets or self.buckets < 16:
            raise ConfigError(f"buckets must be an integer >= 16, got {self.buckets}")
        self.buckets = int(self.buckets)
        for name in (
            "z_tolerance",
            "z_one_tolerance",
            "gradient_tolerance",
            "grid_factor",
            "bound_slack",
            "lichnerowicz_slack",
            "chain_tolerance",
            "witness_tolerance",
        ):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ConfigError(f"{name} must be finite and >= 0, got {value}")


@dataclass
class SweepConfig(_Serializable):
    """A family of models plus the settings each row is solved and checked with."""

    model: str = "cap"
    """Family: ``cap``, ``ball`` or ``interval``."""

    n_values: List[int] = field(default_factory=lambda: [2])
    K_values: List[float] = field(default_factory=lambda: [1.0])
    R_count: int = 20
    R_min: float = 0.1
    R_max: Optional[float] = None
    """Largest radius. ``None`` means the hemisphere pi / (2 sqrt(K)) for caps
    and 1 otherwise.
    """

    parallelism: float = 1
    """Worker count semantics of ``get_num_workers``: 1 is serial, <= 0 means
    CPUs + x, a float is a fraction of the CPUs.
    """

    progress: bool = False
    """Show a tqdm progress bar."""

    solver: SolverConfig = field(default_factory=SolverConfig)
    verifier: VerifierConfig = field(default_factory=VerifierConfig)

    def __post_init__(self):
        if self.model not in ("cap", "ball", "interval"):
            raise ConfigError(f"sweep model must be cap, ball or interval, got {self.model}")
        if self.R_count < 0:
            raise ConfigError("R_count must be >= 0")
        if not self.R_min > 0:
            raise ConfigError(f"R_min must be > 0, got {self.R_min}")
        if self.R_max is not None and self.R_max < self.R_min:
            raise ConfigError("R_max must be >= R_min")
        self.n_values = [int(n) for n in _as_list(self.n_values)]
        self.K_values = [float(k) for k in _as_list(self.K_values)]
        if self.model == "cap" and not all(k > 0 for k in self.K_values):
            raise ConfigError(f"sweep_K values must be > 0 for the cap model, got {self.K_values}")


def _as_list(value) -> list:
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


@dataclass
class RunConfig(_Serializable):
    """Everything a command line run needs, flat so it maps one to one onto
    the keys of a run file.
    """

    subcommand: Optional[str] = None

    # model
    model: Optional[str] = None
    n: Optional[int] = None
    K: Optional[float] = None
    R: Optional[float] = None
    L: Optional[float] = None
    d: Optional[float] = None
    d_tilde: Optional[float] = None
    warp: Optional[str] = None
    warp_param: Optional[float] = None
    warp_coeffs: Optional[List[float]] = None
    warp_r: Optional[List[float]] = None
    warp_f: Optional[List[float]] = None

    # solver
    method: str = Method.SHOOTING.value
    grid_points: int = const.DEFAULT_GRID_POINTS
    tolerance: Optional[float] = None
    """Solver tolerance for solve / verify / sweep, property suite tolerance
    for verify-xi. ``None`` picks the default of the command.
    """
    pole_offset: Optional[float] = None
    max_iterations: int = 200

    # verifier
    buckets: int = const.DEFAULT_BUCKETS
    b_sequence: Tuple[float, ...] = const.DEFAULT_B_SEQUENCE
    samples: int = const.DEFAULT_XI_GRID
    force_hypotheses: bool = False

    # sweep
    sweep_model: str = "cap"
    sweep_n: Any = 2
    sweep_K: Any = 1.0
    sweep_R_count: int = 20
    sweep_R_min: float = 0.1
    sweep_R_max: Optional[float] = None
    parallelism: float = 1
    progress: bool = False

    # output
    output: Optional[str] = None
    format: Optional[str] = None

    def __post_init__(self):
        if self.subcommand is not None and self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"Unknown subcommand: {self.subcommand}")
        if self.format is not None:
            try:
                self.format = OutputFormat(self.format).value
            except ValueError as err:
                raise ConfigError(f"format must be csv or report, got {self.format}") from err
        if isinstance(self.b_sequence, str):
            self.b_sequence = parse_float_list(self.b_sequence)
        self.b_sequence = tuple(self.b_sequence)

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            method=self.method,
            grid_points=self.grid_points,
            tolerance=const.DEFAULT_TOLERANCE if self.tolerance is None else self.tolerance,
            pole_offset=self.pole_offset,
            max_iterations=self.max_iterations,
        )

    def verifier_config(self) -> VerifierConfig:
        return VerifierConfig(
            b_sequence=self.b_sequence,
            buckets=self.buckets,
            force_hypotheses=self.force_hypotheses,
        )

    def sweep_config(self) -> SweepConfig:
        return SweepConfig(
            model=self.sweep_model,
            n_values=self.sweep_n,
            K_values=self.sweep_K,
            R_count=self.sweep_R_count,
            R_min=self.sweep_R_min,
            R_max=self.sweep_R_max,
            parallelism=self.parallelism,
            progress=self.progress,
            solver=self.solver_config(),
            verifier=self.verifier_config(),
        )

    def model_spec(self) -> Dict[str, Any]:
        """The model keys, ready for ``model_from_dict``."""
        keys = ("model", "n", "K", "R", "L", "warp", "warp_param", "warp_coeffs", "warp_r", "warp_f")
        return {k: getattr(self, k) for k in keys if getattr(self, k) is not None}


RUN_CONFIG_KEYS = {f.name for f in fields(RunConfig)}


def parse_float_list(text: str) -> Tuple[float, ...]:
    """Parse ``"1.01,1.001"`` into floats."""
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as err:
        raise ConfigError(f"expected comma separated numbers, got {text!r}") from err


def load_config_file(path: str) -> Dict[str, Any]:
    """Read a flat JSON run file.

    Raises:
        ConfigError: if the file cannot be read, is not a JSON object, or
            holds unknown keys.
    """
    try:
        with smart_open(path, "r") as fin:
            params = json.load(fin)
    except (OSError, ValueError) as err:
        raise ConfigError(f"Could not read config file {path}: {err}") from err
    if not isinstance(params, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object")
    unknown = sorted(set(params) - RUN_CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"Unknown config keys in {path}: {', '.join(unknown)}")
    return params


def run_config_from_file(path: str, **overrides) -> RunConfig:
    """Factory that reads a run file and applies non-None ``overrides`` on top."""
    params = load_config_file(path)
    params.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**params)
    except TypeError as err:
        raise ConfigError(str(err)) from err
