"""Sample-average and worst-case comparison solvers.

Both reuse the exact ascent engine and stopping rule of the robust solver so
that benchmark differences isolate the objective being climbed, not the
optimizer.  The sample-average solver maximizes the mean operator utility at
the observed quality scores; the worst-case solver maximizes the utility at
the support floor and ignores the samples entirely (the log benefit is
increasing in quality, so the floor is the worst point).
"""

from __future__ import annotations

import enum

import numpy as np

from .ambiguity import QualitySampleSet, SupportInterval
from .bcd import BcdConfig, SolveReport, solve_pinned
from .contracts import AspTypeProfile, UtilityParams


class BaselineKind(enum.Enum):
    StochasticProgramming = "sp"
    RobustOptimization = "ro"


def _baseline_config(bcd_cfg: BcdConfig) -> BcdConfig:
    """Same loop controls, but the multiplier starts (and stays) at zero."""
    bcd_cfg = bcd_cfg or BcdConfig()
    return BcdConfig(
        max_iters=bcd_cfg.max_iters,
        conv_tol=bcd_cfg.conv_tol,
        eta_L=bcd_cfg.eta_L,
        eta_lambda=bcd_cfg.eta_lambda,
        L_init=bcd_cfg.L_init,
        lambda_init=0.0,
    )


def solve_sp(
    samples,
    profile: AspTypeProfile,
    params: UtilityParams,
    bcd_cfg: BcdConfig = None,
) -> SolveReport:
    """Maximize the sample-average operator utility over monotone latencies.

    The latency gradient is the robust solver's with each inner minimizer
    replaced by its anchor; invariant to sample permutations.
    """
    values = samples.samples if isinstance(samples, QualitySampleSet) else np.asarray(samples, dtype=float)
    return solve_pinned(values, profile, params, _baseline_config(bcd_cfg))


def solve_ro(
    support: SupportInterval,
    profile: AspTypeProfile,
    params: UtilityParams,
    bcd_cfg: BcdConfig = None,
) -> SolveReport:
    """Maximize the operator utility at the support floor (worst case)."""
    return solve_pinned(
        np.array([support.lo]), profile, params, _baseline_config(bcd_cfg)
    )
