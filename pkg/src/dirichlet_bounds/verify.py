"""
Checks that confront a computed eigenpair with the estimates behind the
sharpened lower bound: the gradient estimate, Z <= 1, barrier domination
Z <= z, the integral chain and the final bound itself.

Every check returns a ``CheckResult``. Mathematical failures are recorded in
the result, never raised. Checks whose hypotheses (Ricci and boundary mean
curvature signs) do not hold are skipped unless ``force_hypotheses`` is set,
in which case they run and carry the ``out_of_hypothesis`` label.
"""
import logging
import math

from dataclasses import dataclass
from typing import Iterable, List, Optional

import numpy as np
import pandas as pd

import dirichlet_bounds.const as const
from dirichlet_bounds.barrier import (
    barrier_inequality_rhs,
    inverse_sqrt_z_integral,
    offset_rhs,
    xi,
    z_eval,
    z_integral,
)
from dirichlet_bounds.bounds import (
    GeometryData,
    all_bounds,
    ling_bound,
    reilly_bound,
    yang_bound,
    zhong_yang_bound,
)
from dirichlet_bounds.config import VerifierConfig
from dirichlet_bounds.const import HALF_PI, PI_SQUARED, Variant
from dirichlet_bounds.errors import (
    InvalidBError,
    InvalidGeometryError,
    NonpositiveZError,
)
from dirichlet_bounds.models import (
    ModelManifold,
    boundary_mean_curvature,
    ricci_lower,
)
from dirichlet_bounds.structures import (
    BoundResult,
    CheckResult,
    EmpiricalZ,
    RadialEigenSolution,
    VerificationReport,
)

logger = logging.getLogger(__name__)

MEAN_CURVATURE_TOL = 1e-12

LICHNEROWICZ = "lichnerowicz"
DELTA_RANGE = "delta_range"
GRADIENT = "gradient_estimate"
GRADIENT_TREND = "gradient_trend"
Z_BOUND = "z_bound"
DOMINATION = "barrier_domination"
CHAIN = "integral_chain"
MAIN_THEOREM = "main_theorem"
WITNESS = "barrier_witness"


@dataclass
class ModelFacts:
    """Hypothesis data of a solved model."""

    n: int
    K: float
    """Ricci lower bound of the model, Ric >= (n - 1) K."""

    mean_curvature: float
    lambda_: float
    d_tilde: float

    @property
    def positive_K(self) -> bool:
        return self.K > 0

    @property
    def nonnegative_K(self) -> bool:
        return self.K >= 0

    @property
    def nonnegative_mean_curvature(self) -> bool:
        return self.mean_curvature >= -MEAN_CURVATURE_TOL

    @property
    def delta(self) -> float:
        """delta = (n - 1) K / (2 lambda), clamped at 0 for negative curvature."""
        return max(0.0, 0.5 * (self.n - 1) * self.K / self.lambda_)

    @property
    def delta_max(self) -> float:
        return (self.n - 1) / (2.0 * self.n)


def model_facts(solution: RadialEigenSolution, model: ModelManifold) -> ModelFacts:
    return ModelFacts(
        n=model.n,
        K=ricci_lower(model),
        mean_curvature=boundary_mean_curvature(model),
        lambda_=solution.lambda_,
        d_tilde=model.d_tilde,
    )


def geometry_for_model(
    model: ModelManifold, K: Optional[float] = None
) -> GeometryData:
    """Bound inputs of a ball model. Negative Ricci lower bounds are clamped to 0.

    Caps larger than a hemisphere have d_tilde = 2R above their diameter pi / sqrt(K);
    their diameter is left out so only the d_tilde bounds apply.
    """
    K = ricci_lower(model) if K is None else K
    return GeometryData(
        n=model.n,
        K=max(K, 0.0),
        d=model.length if model.length >= model.d_tilde else None,
        d_tilde=model.d_tilde,
        boundary_mean_curvature=boundary_mean_curvature(model),
    )


def bounds_for_model(model: ModelManifold) -> List[BoundResult]:
    """All four bounds for a model, with its own curvature data as hypotheses.

    The interval only has the diameter bound. Negative Ricci lower bounds are
    clamped to 0 for the formulas and flagged through the hypotheses.
    """
    if model.variant == Variant.INTERVAL:
        return [
            BoundResult(
                name="zhong_yang",
                value=zhong_yang_bound(model.length),
                hypotheses_met=[("nonnegative_K", True)],
            )
        ]
    K = ricci_lower(model)
    results = all_bounds(geometry_for_model(model, K))
    if K < 0:
        for result in results:
            result.hypotheses_met.append(("nonnegative_ricci", False))
    return results


#################
# Gating
#################


def _gate(
    check_id: str,
    tag: str,
    conditions: dict,
    config: VerifierConfig,
) -> Optional[CheckResult]:
    """Returns a skipped result when a hypothesis fails and the run is not forced.

    The dimension condition cannot be forced, the formulas need n >= 2.
    """
    failed = [name for name, ok in conditions.items() if not ok]
    if not failed:
        return None
    if config.force_hypotheses and "dimension_at_least_2" not in failed:
        logger.warning(
            f"{check_id}: running outside its hypotheses ({', '.join(failed)} not met)"
        )
        return None
    return CheckResult(
        check_id=check_id,
        equation_tag=tag,
        margin=float("nan"),
        threshold=float("nan"),
        passed=False,
        skipped=True,
        detail=f"hypotheses not met: {', '.join(failed)}",
    )


def _out_of_hypothesis(conditions: dict) -> bool:
    return not all(conditions.values())


def _strict_conditions(facts: ModelFacts) -> dict:
    return {
        "positive_K": facts.positive_K,
        "nonnegative_mean_curvature": facts.nonnegative_mean_curvature,
        "dimension_at_least_2": facts.n >= 2,
    }


def _weak_conditions(facts: ModelFacts) -> dict:
    return {
        "nonnegative_K": facts.nonnegative_K,
        "nonnegative_mean_curvature": facts.nonnegative_mean_curvature,
    }


def _check_b(b: float):
    if not b > 1:
        raise InvalidBError(f"b must be > 1, got {b}")


#################
# Checks
#################


def check_lichnerowicz(
    solution: RadialEigenSolution,
    model: ModelManifold,
    config: Optional[VerifierConfig] = None,
) -> CheckResult:
    """lambda >= nK when Ric >= (n - 1) K > 0 and the boundary is mean convex."""
    config = config or VerifierConfig()
    facts = model_facts(solution, model)
    conditions = _strict_conditions(facts)
    skipped = _gate(LICHNEROWICZ, const.EQ_REILLY, conditions, config)
    if skipped:
        return skipped
    bound = facts.n * facts.K
    margin = solution.lambda_ - bound
    threshold = -config.lichnerowicz_slack * solution.lambda_
    return CheckResult(
        check_id=LICHNEROWICZ,
        equation_tag=const.EQ_REILLY,
        margin=margin,
        threshold=threshold,
        passed=margin >= threshold,
        out_of_hypothesis=_out_of_hypothesis(conditions),
        inputs={"lambda": solution.lambda_, "nK": bound},
    )


def check_delta_range(
    solution: RadialEigenSolution,
    model: ModelManifold,
    config: Optional[VerifierConfig] = None,
) -> CheckResult:
    """delta = (n - 1) K / (2 lambda) <= (n - 1) / (2n), i.e. lambda >= nK restated."""
    config = config or VerifierConfig()
    facts = model_facts(solution, model)
    conditions = _strict_conditions(facts)
    skipped = _gate(DELTA_RANGE, const.EQ_DELTA_RANGE, conditions, config)
    if skipped:
        return skipped
    margin = facts.delta_max - facts.delta
    threshold = -config.bound_slack
    return CheckResult(
        check_id=DELTA_RANGE,
        equation_tag=const.EQ_DELTA_RANGE,
        margin=margin,
        threshold=threshold,
        passed=margin >= threshold,
        out_of_hypothesis=_out_of_hypothesis(conditions),
        inputs={"delta": facts.delta, "delta_max": facts.delta_max},
    )


def gradient_ratio(solution: RadialEigenSolution, b: float) -> float:
    """max over the grid of v'^2 / (b^2 - v^2)."""
    _check_b(b)
    v = solution.v
    return float(np.max(solution.v_prime**2 / (b * b - v * v)))


def _gradient_threshold(solution: RadialEigenSolution, config: VerifierConfig) -> float:
    spacing = float(np.max(np.diff(solution.r_grid))) / solution.radius
    return solution.lambda_ * (
        1.0 + config.gradient_tolerance + config.grid_factor * spacing * spacing
    )


def check_gradient_estimate(
    solution: RadialEigenSolution,
    model: ModelManifold,
    b: float,
    config: Optional[VerifierConfig] = None,
) -> CheckResult:
    """max v'^2 / (b^2 - v^2) <= lambda, up to tolerance and a grid term.

    Raises:
        InvalidBError: if b <= 1.
    """
    config = config or VerifierConfig()
    ratio = gradient_ratio(solution, b)
    check_id = f"{GRADIENT}[b={b:g}]"
    conditions = _weak_conditions(model_facts(solution, model))
    skipped = _gate(check_id, const.EQ_GRADIENT, conditions, config)
    if skipped:
        return skipped
    threshold = _gradient_threshold(solution, config)
    margin = threshold - ratio
    return CheckResult(
        check_id=check_id,
        equation_tag=const.EQ_GRADIENT,
        margin=margin,
        threshold=threshold,
        passed=margin >= 0,
        out_of_hypothesis=_out_of_hypothesis(conditions),
        inputs={"b": b, "max_ratio": ratio, "lambda": solution.lambda_},
    )


def check_gradient_trend(
    solution: RadialEigenSolution,
    model: ModelManifold,
    config: Optional[VerifierConfig] = None,
) -> CheckResult:
    """The measured maxima grow as b decreases toward 1 and stay below lambda."""
    config = config or VerifierConfig()
    conditions = _weak_conditions(model_facts(solution, model))
    skipped = _gate(GRADIENT_TREND, const.EQ_GRADIENT, conditions, config)
    if skipped:
        return skipped
    b_values = sorted(config.b_sequence)
    ratios = [gradient_ratio(solution, b) for b in b_values]
    monotone = all(
        later <= earlier * (1.0 + 1e-12) for earlier, later in zip(ratios, ratios[1:])
    )
    threshold = _gradient_threshold(solution, config)
    margin = threshold - ratios[0]
    return CheckResult(
        check_id=GRADIENT_TREND,
        equation_tag=const.EQ_GRADIENT,
        margin=margin,
        threshold=threshold,
        passed=monotone and margin >= 0,
        out_of_hypothesis=_out_of_hypothesis(conditions),
        detail="" if monotone else "maxima not monotone in b",
        inputs={"b": b_values, "max_ratio": ratios},
    )


def empirical_Z(
    solution: RadialEigenSolution, b: float, buckets: int = const.DEFAULT_BUCKETS
) -> EmpiricalZ:
    """Bucket maxima of Z = |v'|^2 / ((b^2 - v^2) lambda) over t = arcsin(v / b).

    Buckets split [0, pi/2] evenly. Since v <= 1 < b, buckets above
    arcsin(1 / b) stay empty and are reported as NaN.

    Raises:
        InvalidBError: if b <= 1.
    """
    _check_b(b)
    if buckets < 16:
        raise InvalidBError(f"need at least 16 buckets, got {buckets}")
    v = solution.v
    t = np.arcsin(np.clip(v / b, 0.0, 1.0))
    z_points = solution.v_prime**2 / ((b * b - v * v) * solution.lambda_)
    edges = np.linspace(0.0, HALF_PI, buckets + 1)
    index = np.minimum((t / HALF_PI * buckets).astype(int), buckets - 1)

    frame = pd.DataFrame({"bucket": index, "t": t, "Z": z_points})
    top = frame.loc[frame.groupby("bucket")["Z"].idxmax()].set_index("bucket")
    top = top.reindex(range(buckets))
    return EmpiricalZ(
        b=b,
        t_edges=edges,
        t_grid=top["t"].to_numpy(dtype=np.float64),
        Z_values=top["Z"].to_numpy(dtype=np.float64),
    )


def check_z_bound(
    solution: RadialEigenSolution,
    model: ModelManifold,
    b: float,
    config: Optional[VerifierConfig] = None,
) -> CheckResult:
    """Z <= 1 in every bucket."""
    config = config or VerifierConfig()
    check_id = f"{Z_BOUND}[b={b:g}]"
    conditions = _weak_conditions(model_facts(solution, model))
    skipped = _gate(check_id, const.EQ_Z_BOUND, conditions, config)
    if skipped:
        return skipped
    ez = empirical_Z(solution, b, config.buckets)
    margin = 1.0 - ez.max_Z
    threshold = -config.z_one_tolerance
    return CheckResult(
        check_id=check_id,
        equation_tag=const.EQ_Z_BOUND,
        margin=margin,
        threshold=threshold,
        passed=bool(margin >= threshold),
        out_of_hypothesis=_out_of_hypothesis(conditions),
        inputs={"b": b, "max_Z": ez.max_Z},
    )


def check_barrier_domination(
    solution: RadialEigenSolution,
    model: ModelManifold,
    config: Optional[VerifierConfig] = None,
    delta: Optional[float] = None,
) -> CheckResult:
    """Z(t) <= z(t) = 1 + delta xi(t) bucket-wise for every b in the sequence.

    ``delta`` overrides the value derived from the solution. A delta that makes
    z(0) <= 0 is reported as a failure of the z(t0) > 0 condition.
    """
    config = config or VerifierConfig()
    facts = model_facts(solution, model)
    conditions = _weak_conditions(facts)
    skipped = _gate(DOMINATION, const.EQ_DOMINATION, conditions, config)
    if skipped:
        return skipped
    delta = facts.delta if delta is None else delta
    base = dict(
        check_id=DOMINATION,
        equation_tag=const.EQ_DOMINATION,
        threshold=-config.z_tolerance,
        out_of_hypothesis=_out_of_hypothesis(conditions),
    )
    try:
        # the barrier is tested at its lowest point first
        z0, z1, z2 = z_eval(0.0, delta)
        barrier_inequality_rhs(0.0, z0, z1, z2, delta)
    except (NonpositiveZError, InvalidGeometryError) as err:
        return CheckResult(
            margin=float("-inf"),
            passed=False,
            detail=f"barrier invalid at delta={delta}: {err}",
            inputs={"delta": delta},
            **base,
        )

    worst_margin = math.inf
    worst_t = float("nan")
    worst_b = float("nan")
    for b in config.b_sequence:
        ez = empirical_Z(solution, b, config.buckets)
        t = ez.t_grid[ez.occupied]
        if len(t) == 0:
            continue
        margins = 1.0 + delta * xi(t) - ez.Z_values[ez.occupied]
        k = int(np.argmin(margins))
        if margins[k] < worst_margin:
            worst_margin = float(margins[k])
            worst_t = float(t[k])
            worst_b = b
    return CheckResult(
        margin=worst_margin,
        passed=worst_margin >= -config.z_tolerance,
        detail=f"worst at t={worst_t:.6g}, b={worst_b:g}",
        inputs={"delta": delta, "t": worst_t, "b": worst_b},
        **base,
    )


def check_integral_chain(
    solution: RadialEigenSolution,
    model: ModelManifold,
    config: Optional[VerifierConfig] = None,
    delta: Optional[float] = None,
) -> CheckResult:
    """Each link of

        sqrt(lambda) d_tilde / 2 >= int dt / sqrt(z) >= (pi/2)^{3/2} / sqrt(int z)

    and the final form lambda (1 - delta) >= pi^2 / d_tilde^2. The reported
    margin is that of the first link.
    """
    config = config or VerifierConfig()
    facts = model_facts(solution, model)
    delta = facts.delta if delta is None else delta
    conditions = _weak_conditions(facts)
    conditions["delta_in_range"] = 0.0 <= delta <= max(facts.delta_max, 0.0) + config.bound_slack
    skipped = _gate(CHAIN, const.EQ_CHAIN, conditions, config)
    if skipped:
        return skipped
    base = dict(
        check_id=CHAIN,
        equation_tag=const.EQ_CHAIN,
        threshold=-config.chain_tolerance,
        out_of_hypothesis=_out_of_hypothesis(conditions),
    )
    lhs = math.sqrt(solution.lambda_) * facts.d_tilde / 2.0
    try:
        inverse_root = inverse_sqrt_z_integral(delta)
        power_mean = HALF_PI**1.5 / math.sqrt(z_integral(delta))
    except (NonpositiveZError, InvalidGeometryError) as err:
        return CheckResult(
            margin=float("-inf"),
            passed=False,
            detail=str(err),
            inputs={"delta": delta},
            **base,
        )
    final = solution.lambda_ * (1.0 - delta) - PI_SQUARED / facts.d_tilde**2
    links = [lhs - inverse_root, inverse_root - power_mean]
    passed = all(m >= -config.chain_tolerance for m in links) and (
        final >= -config.bound_slack * solution.lambda_
    )
    return CheckResult(
        margin=links[0],
        passed=passed,
        detail=(
            f"power_mean_margin={links[1]:.17g}, final_margin={final:.17g}"
        ),
        inputs={
            "delta": delta,
            "sqrt_lambda_half_d_tilde": lhs,
            "inverse_sqrt_z_integral": inverse_root,
            "power_mean": power_mean,
            "final_margin": final,
        },
        **base,
    )


def check_main_theorem(
    solution: RadialEigenSolution,
    model: ModelManifold,
    config: Optional[VerifierConfig] = None,
) -> CheckResult:
    """lambda >= (n - 1) K / 2 + pi^2 / d_tilde^2, up to a relative slack."""
    config = config or VerifierConfig()
    facts = model_facts(solution, model)
    conditions = _strict_conditions(facts)
    skipped = _gate(MAIN_THEOREM, const.EQ_MAIN, conditions, config)
    if skipped:
        return skipped
    K = max(facts.K, 0.0)
    ling = ling_bound(facts.n, K, facts.d_tilde)
    reilly = reilly_bound(facts.n, K)
    yang = yang_bound(facts.n, K, facts.d_tilde)
    margin = solution.lambda_ - ling
    threshold = -config.bound_slack * solution.lambda_
    return CheckResult(
        check_id=MAIN_THEOREM,
        equation_tag=const.EQ_MAIN,
        margin=margin,
        threshold=threshold,
        passed=margin >= threshold,
        out_of_hypothesis=_out_of_hypothesis(conditions),
        detail=f"beats_reilly={ling > reilly}, beats_yang={ling > yang}",
        inputs={
            "lambda": solution.lambda_,
            "ling": ling,
            "reilly": reilly,
            "yang": yang,
        },
    )


def check_barrier_witness(
    deltas: Optional[Iterable[float]] = None,
    ts: Optional[Iterable[float]] = None,
    offsets: Iterable[float] = (1e-3, 0.1),
    tolerance: float = 1e-9,
) -> CheckResult:
    """z = 1 + delta xi turns the barrier inequality into an equality, and any
    positive constant offset makes it strictly negative.

    Defaults to 20 values of delta on [0, 0.5] times 50 values of t, the range
    delta takes for any dimension. Values of delta where z is not positive
    everywhere are passed over and left out of ``pairs``.
    """
    deltas = np.linspace(0.0, 0.5, 20) if deltas is None else np.asarray(list(deltas))
    ts = np.linspace(-HALF_PI, HALF_PI, 50) if ts is None else np.asarray(list(ts))
    worst = 0.0
    negative = True
    pairs = 0
    skipped = []
    for delta in deltas:
        z, z1, z2 = z_eval(ts, float(delta))
        if np.any(z <= 0):
            skipped.append(float(delta))
            continue
        pairs += len(ts)
        rhs = barrier_inequality_rhs(ts, z, z1, z2, float(delta))
        worst = max(worst, float(np.max(np.abs(rhs))))
        for offset in offsets:
            shifted = offset_rhs(ts, float(delta), offset)
            negative = negative and bool(np.all(shifted < 0))
    return CheckResult(
        check_id=WITNESS,
        equation_tag=const.EQ_BARRIER,
        margin=tolerance - worst,
        threshold=0.0,
        passed=pairs > 0 and worst <= tolerance and negative,
        detail="" if negative else "positive offset did not give a negative value",
        inputs={"pairs": pairs, "skipped_deltas": skipped, "max_abs_rhs": worst},
    )


def verify_solution(
    solution: RadialEigenSolution,
    model: ModelManifold,
    config: Optional[VerifierConfig] = None,
) -> VerificationReport:
    """Run every check on one solved model."""
    config = config or VerifierConfig()
    report = VerificationReport()
    report.add(check_lichnerowicz(solution, model, config))
    report.add(check_delta_range(solution, model, config))
    for b in config.b_sequence:
        report.add(check_gradient_estimate(solution, model, b, config))
    report.add(check_gradient_trend(solution, model, config))
    for b in config.b_sequence:
        report.add(check_z_bound(solution, model, b, config))
    report.add(check_barrier_domination(solution, model, config))
    report.add(check_integral_chain(solution, model, config))
    report.add(check_main_theorem(solution, model, config))
    report.add(check_barrier_witness(tolerance=config.witness_tolerance))
    return report
