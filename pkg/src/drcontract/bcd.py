"""Block-coordinate ascent over the slack, latency, and multiplier blocks.

Each iteration (1) refreshes the per-sample inner minimizers, (2) takes a
fixed-step approximate-gradient ascent step on the latency vector and
projects it back onto the nondecreasing cone by weighted pool-adjacent-
violators ironing, (3) takes a projected gradient step on the multiplier,
and (4) re-evaluates the objective.  The loop stops when consecutive
objective values differ by at most the convergence threshold.

The latency gradient deliberately treats the inner minimizers as constants,
so per-step objective improvement is not guaranteed and is not asserted;
in practice the trajectory climbs monotonically on the tested instances.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .ambiguity import AmbiguityConfig, QualitySampleSet
from .contracts import AspTypeProfile, ContractMenu, UtilityParams, rewards_from_latencies
from .errors import NonPositiveDenominator, SizeMismatch, ValidationError
from .inner import InnerSolverConfig, _weighted_log, g_of_L, solve_inner


@dataclass(frozen=True)
class BcdConfig:
    """Loop hyperparameters.  Defaults give the reference configuration:
    1500 iterations max, 1e-3 convergence threshold, step sizes 1e4 for the
    latency block and 1e-3 for the multiplier, all-zero initial latencies,
    initial multiplier 6."""

    max_iters: int = 1500
    conv_tol: float = 1e-3
    eta_L: float = 1e4
    eta_lambda: float = 1e-3
    L_init: object = None
    lambda_init: float = 6.0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValidationError("max_iters must be >= 1")
        if not self.conv_tol > 0.0:
            raise ValidationError("conv_tol must be > 0")
        if self.eta_L < 0.0 or self.eta_lambda < 0.0:
            raise ValidationError("step sizes must be >= 0")
        if self.lambda_init < 0.0:
            raise ValidationError("lambda_init must be >= 0")

    def initial_latencies(self, n_types: int) -> np.ndarray:
        if self.L_init is None:
            return np.zeros(n_types)
        arr = np.asarray(self.L_init, dtype=float)
        if arr.ndim == 0:
            return np.full(n_types, float(arr))
        if arr.size != n_types:
            raise ValidationError(
                f"L_init has {arr.size} entries for {n_types} types"
            )
        return arr.astype(float).copy()


@dataclass(frozen=True)
class BcdState:
    """One iterate: latencies, multiplier, inner minimizers, slacks, objective."""

    latencies: np.ndarray
    lam: float
    xi_stars: np.ndarray
    s_values: np.ndarray
    objective: float


@dataclass
class SolveReport:
    """Solver output: the contract menu plus the convergence trajectory."""

    menu: ContractMenu
    converged: bool
    iterations_used: int
    objective_trace: np.ndarray
    latency_trace: np.ndarray
    lambda_trace: np.ndarray
    final_lambda: float = 0.0

    @property
    def objective(self) -> float:
        return float(self.objective_trace[-1])


def _sample_values(samples) -> np.ndarray:
    if isinstance(samples, QualitySampleSet):
        return samples.samples
    return np.asarray(samples, dtype=float)


def objective(
    latencies,
    lam: float,
    samples,
    ambiguity: AmbiguityConfig,
    profile: AspTypeProfile,
    params: UtilityParams,
    inner_cfg: InnerSolverConfig,
):
    """Evaluate the robust objective at (latencies, lam).

    Runs the inner solver for every anchor in ascending order, forms each
    slack as the inner minimum net of the expected reward, and returns
    (objective, xi_stars, s_values) with
    objective = -lam * epsilon + mean(s_values).
    """
    if lam < 0.0:
        raise ValidationError("lam must be >= 0")
    anchors = _sample_values(samples)
    alphas = profile.alphas.tolist()
    g = g_of_L(latencies, alphas, profile.thetas.tolist(), params.gamma1)
    lat = [float(x) for x in latencies]
    n = anchors.size
    xi_stars = np.empty(n)
    s_values = np.empty(n)
    s_bar = 0.0
    for i in range(n):
        sol = solve_inner(
            lat, lam, float(anchors[i]), ambiguity.support, params, alphas, inner_cfg
        )
        s_i = sol.f_value - g
        xi_stars[i] = sol.xi_star
        s_values[i] = s_i
        s_bar += s_i / n
    return -lam * ambiguity.epsilon + s_bar, xi_stars, s_values


def _pinned_objective(
    latencies,
    lam: float,
    anchors: np.ndarray,
    profile: AspTypeProfile,
    params: UtilityParams,
):
    """Objective with the inner point pinned to each anchor (no adversary).

    Used by the sample-average and worst-case baselines; the transport
    penalty vanishes because the evaluation point equals the anchor.
    """
    alphas = profile.alphas.tolist()
    g = g_of_L(latencies, alphas, profile.thetas.tolist(), params.gamma1)
    g3l = [params.gamma3 * float(x) for x in latencies]
    n = anchors.size
    s_values = np.empty(n)
    s_bar = 0.0
    for i in range(n):
        s_i = _weighted_log(float(anchors[i]), alphas, g3l, params.gamma2) - g
        s_values[i] = s_i
        s_bar += s_i / n
    return s_bar, anchors.copy(), s_values


def grad_L(xi_stars, latencies, profile: AspTypeProfile, params: UtilityParams) -> np.ndarray:
    """Approximate latency gradient, holding the inner minimizers fixed.

    Component i is mean_n [alpha_i*gamma3/(gamma2*xi_n + gamma3*L_i)]
    minus alpha_i*gamma1/theta_i.
    """
    xi = np.asarray(xi_stars, dtype=float)
    lat = np.asarray(latencies, dtype=float)
    denom = params.gamma2 * xi[:, None] + params.gamma3 * lat[None, :]
    if np.any(denom <= 0.0):
        raise NonPositiveDenominator("gamma2*xi + gamma3*L must be > 0")
    benefit = params.gamma3 * np.mean(1.0 / denom, axis=0)
    return profile.alphas * (benefit - params.gamma1 / profile.thetas)


def grad_lambda(xi_stars, anchors, epsilon: float) -> float:
    """Multiplier gradient: mean transport distance minus the radius."""
    xi = np.asarray(xi_stars, dtype=float)
    anc = _sample_values(anchors)
    if xi.size != anc.size:
        raise SizeMismatch(f"xi_stars ({xi.size}) vs anchors ({anc.size})")
    return float(-epsilon + np.mean(np.abs(xi - anc)))


def iron_monotone(latencies, weights) -> np.ndarray:
    """Weighted least-squares projection onto the nondecreasing cone.

    Pool-adjacent-violators: scan left to right, merging any block whose
    weighted mean falls below its predecessor's.  Idempotent; inputs that
    are already nondecreasing come back unchanged.
    """
    vals = np.asarray(latencies, dtype=float)
    w = np.asarray(weights, dtype=float)
    if vals.size != w.size:
        raise SizeMismatch("latencies and weights must have equal length")
    if np.any(~np.isfinite(vals)):
        raise ValidationError("latencies must be finite")
    if np.any(w <= 0.0):
        raise ValidationError("weights must be strictly positive")
    # blocks of (weight sum, weighted value sum, member count)
    blocks = []
    for v, wt in zip(vals.tolist(), w.tolist()):
        blocks.append([wt, wt * v, 1])
        while len(blocks) > 1 and blocks[-2][1] / blocks[-2][0] > blocks[-1][1] / blocks[-1][0]:
            wt2, sv2, c2 = blocks.pop()
            blocks[-1][0] += wt2
            blocks[-1][1] += sv2
            blocks[-1][2] += c2
    out = np.empty_like(vals)
    pos = 0
    for wt, sv, count in blocks:
        out[pos : pos + count] = sv / wt
        pos += count
    return out


def bcd_step(
    state: BcdState,
    samples,
    profile: AspTypeProfile,
    params: UtilityParams,
    ambiguity: AmbiguityConfig,
    bcd_cfg: BcdConfig,
    inner_cfg: InnerSolverConfig,
) -> BcdState:
    """One loop body: slack refresh, latency step + ironing, multiplier step,
    objective re-evaluation."""
    _, xi_stars, _ = objective(
        state.latencies, state.lam, samples, ambiguity, profile, params, inner_cfg
    )
    new_lat = _latency_update(state.latencies, xi_stars, profile, params, bcd_cfg)
    g_lam = grad_lambda(xi_stars, samples, ambiguity.epsilon)
    new_lam = max(state.lam + bcd_cfg.eta_lambda * g_lam, 0.0)
    omega, xi_new, s_new = objective(
        new_lat, new_lam, samples, ambiguity, profile, params, inner_cfg
    )
    return BcdState(
        latencies=new_lat, lam=new_lam, xi_stars=xi_new, s_values=s_new, objective=omega
    )


def _latency_update(latencies, xi_stars, profile, params, bcd_cfg) -> np.ndarray:
    g = grad_L(xi_stars, latencies, profile, params)
    stepped = np.asarray(latencies, dtype=float) + bcd_cfg.eta_L * g
    # zero-probability types get a tiny ironing weight so pooling stays defined
    weights = np.maximum(profile.alphas, 1e-12)
    ironed = iron_monotone(stepped, weights)
    return np.maximum(ironed, 0.0)  # inverse latencies cannot go negative


def solve(
    samples,
    profile: AspTypeProfile,
    params: UtilityParams,
    ambiguity: AmbiguityConfig,
    bcd_cfg: BcdConfig = None,
    inner_cfg: InnerSolverConfig = None,
) -> SolveReport:
    """Run the full block-coordinate loop and return the robust menu.

    Failing to converge within the iteration budget is reported, not raised.
    Identical inputs produce bitwise-identical traces.
    """
    bcd_cfg = bcd_cfg or BcdConfig()
    inner_cfg = inner_cfg or InnerSolverConfig()
    inner_cfg.validate_for_diameter(ambiguity.support.diameter)

    def evaluate(lat, lam):
        return objective(lat, lam, samples, ambiguity, profile, params, inner_cfg)

    def refresh(lat, lam):
        _, xi_stars, _ = evaluate(lat, lam)
        return xi_stars

    anchors = _sample_values(samples)
    return _run_loop(
        anchors, profile, params, bcd_cfg, evaluate, refresh, ambiguity.epsilon
    )


def _run_loop(anchors, profile, params, bcd_cfg, evaluate, refresh, epsilon) -> SolveReport:
    """Shared ascent engine; ``evaluate``/``refresh`` fix the inner rule."""
    lat = bcd_cfg.initial_latencies(profile.n_types)
    lat = np.maximum(iron_monotone(lat, np.maximum(profile.alphas, 1e-12)), 0.0)
    lam = float(bcd_cfg.lambda_init)

    omega_star = -np.inf
    converged = False
    obj_trace, lam_trace, lat_trace = [], [], []
    for _ in range(bcd_cfg.max_iters):
        xi_stars = refresh(lat, lam)
        lat = _latency_update(lat, xi_stars, profile, params, bcd_cfg)
        g_lam = grad_lambda(xi_stars, anchors, epsilon)
        lam = max(lam + bcd_cfg.eta_lambda * g_lam, 0.0)
        assert lam >= 0.0 and not np.any(np.diff(lat) < 0.0)
        omega, _, _ = evaluate(lat, lam)
        obj_trace.append(omega)
        lam_trace.append(lam)
        lat_trace.append(lat.copy())
        if abs(omega_star - omega) <= bcd_cfg.conv_tol:
            converged = True
            break
        omega_star = omega

    rewards = rewards_from_latencies(lat, profile, params.gamma1)
    return SolveReport(
        menu=ContractMenu(latencies=lat, rewards=rewards),
        converged=converged,
        iterations_used=len(obj_trace),
        objective_trace=np.array(obj_trace),
        latency_trace=np.array(lat_trace),
        lambda_trace=np.array(lam_trace),
        final_lambda=lam,
    )


def solve_pinned(anchors, profile, params, bcd_cfg=None) -> SolveReport:
    """Ascent with the inner point pinned to each anchor and a zero radius.

    This is the shared engine behind the sample-average and worst-case
    baselines: the multiplier gradient is identically zero, so the
    multiplier stays at its initial value.
    """
    bcd_cfg = bcd_cfg or BcdConfig()
    anchors = _sample_values(anchors)

    def evaluate(lat, lam):
        return _pinned_objective(lat, lam, anchors, profile, params)

    def refresh(lat, lam):
        return anchors

    return _run_loop(anchors, profile, params, bcd_cfg, evaluate, refresh, 0.0)


def write_trace_csv(report: SolveReport, path, method: str = None) -> None:
    """Per-iteration trace: iter,objective,lambda,L_1..L_I.

    Baseline traces prepend a ``method`` column.
    """
    n_types = report.menu.n_types
    header = ["iter", "objective", "lambda"] + [f"L_{i + 1}" for i in range(n_types)]
    if method is not None:
        header = ["method"] + header
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t in range(report.iterations_used):
            row = [
                t + 1,
                repr(float(report.objective_trace[t])),
                repr(float(report.lambda_trace[t])),
            ] + [repr(float(v)) for v in report.latency_trace[t]]
            if method is not None:
                row = [method] + row
            writer.writerow(row)
