"""Per-sample inner minimization by candidate enumeration.

For a fixed latency vector and multiplier lam, the per-anchor inner function

    f(xi) = sum_i alpha_i * ln(gamma2*xi + gamma3*L_i) + lam * |xi - anchor|

is a strictly increasing concave log benefit plus a V-shaped transport
penalty.  Its minimum over the support is always attained at one of at most
four candidates: the support endpoints, the anchor itself (when it lies in
the support), and the stationary point of the descending penalty branch.
The stationary point solves

    sum_i alpha_i*gamma2 / (gamma2*xi + gamma3*L_i) = lam,

whose left side is strictly decreasing in xi, so bisection finds the unique
root when it is bracketed.  The root is only admitted strictly between the
support floor and the anchor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ambiguity import SupportInterval
from .contracts import UtilityParams
from .errors import (
    NonMonotoneLatencies,
    NonPositiveLogArgument,
    ValidationError,
)

_MONOTONE_TOL = 1e-12


@dataclass(frozen=True)
class InnerSolverConfig:
    """Bisection controls for the stationary-point search."""

    bisect_tol: float = 1e-8
    max_bisect_iters: int = 64

    def __post_init__(self):
        if not self.bisect_tol > 0.0:
            raise ValidationError("bisect_tol must be > 0")
        if self.max_bisect_iters < 1:
            raise ValidationError("max_bisect_iters must be >= 1")

    def validate_for_diameter(self, diameter: float) -> None:
        """The iteration budget must cover the interval-halving depth."""
        needed = math.ceil(math.log2(max(diameter / self.bisect_tol, 1.0)))
        if self.max_bisect_iters < needed:
            raise ValidationError(
                f"max_bisect_iters={self.max_bisect_iters} cannot reach "
                f"bisect_tol={self.bisect_tol} on a diameter-{diameter} support "
                f"(needs >= {needed})"
            )


@dataclass(frozen=True)
class InnerSolution:
    """Minimizer, minimum value, and which candidate won.

    candidate_tag is one of "lo", "hi", "anchor", "stationary".
    """

    xi_star: float
    f_value: float
    candidate_tag: str


def _gamma3_latencies(latencies, params: UtilityParams):
    return [params.gamma3 * float(x) for x in latencies]


def _weighted_log(xi: float, alphas, g3l, gamma2: float) -> float:
    total = 0.0
    for a, gl in zip(alphas, g3l):
        arg = gamma2 * xi + gl
        if arg <= 0.0:
            raise NonPositiveLogArgument(
                f"log argument {arg!r} at xi={xi!r} must be > 0"
            )
        total += a * math.log(arg)
    return total


def _marginal_benefit(xi: float, alphas, g3l, gamma2: float) -> float:
    total = 0.0
    for a, gl in zip(alphas, g3l):
        total += a * gamma2 / (gamma2 * xi + gl)
    return total


def f_n(xi: float, latencies, lam: float, anchor: float, params: UtilityParams, alphas) -> float:
    """Penalized log benefit at a single quality point."""
    g3l = _gamma3_latencies(latencies, params)
    return _weighted_log(xi, list(alphas), g3l, params.gamma2) + lam * abs(xi - anchor)


def g_of_L(latencies, alphas, thetas, gamma1: float) -> float:
    """Expected reward of the constructed menu, accumulated in O(I).

    Equals dot(alphas, rewards_from_latencies(latencies)) via the telescoping
    reward recursion.
    """
    lat = [float(x) for x in latencies]
    if any(b - a < -_MONOTONE_TOL for a, b in zip(lat, lat[1:])):
        raise NonMonotoneLatencies("latencies must be nondecreasing")
    total = 0.0
    reward = 0.0
    prev = 0.0
    for lat_i, alpha_i, theta_i in zip(lat, alphas, thetas):
        reward += gamma1 * (lat_i - prev) / theta_i
        prev = lat_i
        total += alpha_i * reward
    return total


def solve_xi_p(
    latencies,
    lam: float,
    interval,
    params: UtilityParams,
    alphas,
    cfg: InnerSolverConfig,
):
    """Root of the stationarity condition inside the open interval, or None.

    The marginal benefit is strictly decreasing, so the root exists in
    (lo, hi) exactly when it is bracketed: marginal(lo) > lam > marginal(hi).
    Absence is a value, not an error.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi or lam <= 0.0:
        return None
    alphas = list(alphas)
    g3l = _gamma3_latencies(latencies, params)
    g2 = params.gamma2
    if _marginal_benefit(lo, alphas, g3l, g2) <= lam:
        return None
    if _marginal_benefit(hi, alphas, g3l, g2) >= lam:
        return None
    a, b = lo, hi
    for _ in range(cfg.max_bisect_iters):
        if b - a <= cfg.bisect_tol:
            break
        mid = 0.5 * (a + b)
        if _marginal_benefit(mid, alphas, g3l, g2) > lam:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def solve_inner(
    latencies,
    lam: float,
    anchor: float,
    support: SupportInterval,
    params: UtilityParams,
    alphas,
    cfg: InnerSolverConfig,
) -> InnerSolution:
    """Minimize the penalized log benefit over the support.

    The support endpoints are always evaluated; the anchor and the stationary
    candidate only when the anchor lies inside the support.  Skips the
    stationary search entirely for lam = 0 (the condition then has no finite
    root).  Ties break toward the smallest xi.
    """
    if lam < 0.0:
        raise ValidationError("lam must be >= 0")
    alphas = list(alphas)
    g3l = _gamma3_latencies(latencies, params)
    g2 = params.gamma2
    lo, hi = support.lo, support.hi

    candidates = [(lo, "lo")]
    if lo <= anchor <= hi:
        if lam > 0.0:
            xi_p = solve_xi_p(latencies, lam, (lo, anchor), params, alphas, cfg)
            if xi_p is not None:
                candidates.append((xi_p, "stationary"))
        candidates.append((anchor, "anchor"))
    candidates.append((hi, "hi"))

    best = None
    for xi, tag in candidates:  # ascending xi: first strict min wins ties
        value = _weighted_log(xi, alphas, g3l, g2) + lam * abs(xi - anchor)
        if best is None or value < best[1]:
            best = (xi, value, tag)
    return InnerSolution(xi_star=best[0], f_value=best[1], candidate_tag=best[2])


def s_value(inner: InnerSolution, latencies, alphas, thetas, gamma1: float) -> float:
    """Slack value: inner minimum net of the expected reward."""
    return inner.f_value - g_of_L(latencies, alphas, thetas, gamma1)
