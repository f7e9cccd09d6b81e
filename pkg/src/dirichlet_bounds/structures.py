"""
Result datastructures shared between the bound catalog, the barrier suite,
the solvers and the verifier.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

import dirichlet_bounds.const as const

ArrayLike = Union[float, np.ndarray]


@dataclass
class BoundResult:
    """A single closed-form lower bound for the first Dirichlet eigenvalue."""

    name: str
    """One of ``reilly``, ``zhong_yang``, ``yang`` or ``ling``."""

    value: float
    """The bound itself, finite and nonnegative."""

    hypotheses_met: List[Tuple[str, bool]] = field(default_factory=list)
    """Hypothesis flags, e.g. ``("positive_K", True)``. Violations are
    recorded here instead of raising.
    """

    @property
    def all_hypotheses_met(self) -> bool:
        return all(flag for _, flag in self.hypotheses_met)


@dataclass
class DeltaResult:
    """The constant delta = alpha / lambda with alpha = (n - 1) K / 2."""

    delta: float
    delta_max: float
    """(n - 1) / (2n), the largest delta compatible with lambda >= nK."""

    @property
    def exceeds_max(self) -> bool:
        return self.delta > self.delta_max


@dataclass
class XiEvaluation:
    """Values of xi and its first three derivatives at ``t``."""

    t: ArrayLike
    value: ArrayLike
    d1: ArrayLike
    d2: ArrayLike
    d3: ArrayLike


@dataclass
class PropertyOutcome:
    property_id: str
    equation_tag: str
    max_residual: float
    """Largest residual, or the negated worst margin for sign checks."""
    threshold: float
    grid_size: int
    passed: bool


@dataclass
class XiReport:
    properties: List[PropertyOutcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def add(self, outcome: PropertyOutcome):
        self.properties.append(outcome)

    def failed(self) -> List[PropertyOutcome]:
        return [p for p in self.properties if not p.passed]

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(
            [asdict(p) for p in self.properties], columns=const.XI_REPORT_COLUMNS
        )


@dataclass
class RadialEigenSolution:
    """First Dirichlet eigenpair of a radial model.

    ``v`` is normalized so that ``max v = v(0) = 1`` and ``v(R) = 0``.
    """

    lambda_: float
    r_grid: np.ndarray
    v: np.ndarray
    v_prime: np.ndarray
    d_tilde: float
    method: str
    grid_points: int = 0
    extrapolated: bool = False

    @property
    def radius(self) -> float:
        return float(self.r_grid[-1])

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"r": self.r_grid, "v": self.v, "v_prime": self.v_prime},
            columns=const.SOLUTION_COLUMNS,
        )


@dataclass
class EmpiricalZ:
    """Bucketed maxima of |grad v|^2 / ((b^2 - v^2) lambda) over t = arcsin(v / b).

    Buckets split [0, pi/2]; buckets above arcsin(1 / b) stay empty (NaN).
    """

    b: float
    t_edges: np.ndarray
    t_grid: np.ndarray
    """The t at which each bucket maximum is attained."""
    Z_values: np.ndarray

    @property
    def occupied(self) -> np.ndarray:
        return ~np.isnan(self.Z_values)

    @property
    def max_Z(self) -> float:
        if not self.occupied.any():
            return float("nan")
        return float(np.nanmax(self.Z_values))


@dataclass
class CheckResult:
    check_id: str
    equation_tag: str
    margin: float
    threshold: float
    passed: bool
    skipped: bool = False
    out_of_hypothesis: bool = False
    detail: str = ""
    inputs: Dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.skipped:
            return const.CHECK_SKIP
        return const.CHECK_PASS if self.passed else const.CHECK_FAIL


@dataclass
class VerificationReport:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed or c.skipped for c in self.checks)

    def add(self, check: CheckResult):
        self.checks.append(check)

    def get(self, check_id: str) -> Optional[CheckResult]:
        for check in self.checks:
            if check.check_id == check_id:
                return check
        return None

    def to_dataframe(self) -> pd.DataFrame:
        records = []
        for check in self.checks:
            record = asdict(check)
            record.pop("inputs")
            records.append(record)
        return pd.DataFrame(records, columns=const.REPORT_COLUMNS)

    def to_lines(self) -> List[str]:
        """One check per line: id, equation tag, margin, status."""
        return [
            f"{c.check_id},{c.equation_tag},{c.margin:.17g},{c.status}"
            for c in self.checks
        ]
