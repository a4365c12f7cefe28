"""Type ladder, utility models, and contract-menu feasibility machinery.

A provider of type theta earns ``theta * R - gamma1 * L`` from accepting the
bundle (L, R), where L is an inverse latency commitment and R the reward.
The operator's benefit from a bundle is ``ln(gamma2 * xi + gamma3 * L) - R``
at quality level xi.  Given a nondecreasing latency vector, the reward
recursion below makes the lowest type's participation constraint bind and
every adjacent downward self-selection constraint bind, which eliminates
rewards as free variables.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    NonMonotoneLatencies,
    NonPositiveLogArgument,
    SizeMismatch,
    ValidationError,
)

MONOTONE_TOL = 1e-12


def _as_readonly_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float).copy()
    if arr.ndim != 1:
        raise ValidationError(f"expected a 1-D vector, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class AspTypeProfile:
    """Provider type ladder: willingness values and their probabilities.

    thetas must be strictly positive and nondecreasing; alphas must be
    nonnegative and sum to one.  Duplicate thetas are allowed (bunched types
    share a marginal price in the reward recursion).
    """

    thetas: np.ndarray
    alphas: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "thetas", _as_readonly_array(self.thetas))
        object.__setattr__(self, "alphas", _as_readonly_array(self.alphas))
        if self.thetas.size < 1:
            raise ValidationError("profile needs at least one type")
        if self.thetas.size != self.alphas.size:
            raise ValidationError(
                f"thetas ({self.thetas.size}) and alphas ({self.alphas.size}) "
                "must have identical length"
            )
        if not np.all(self.thetas > 0.0):
            raise ValidationError("thetas must be strictly positive")
        if np.any(np.diff(self.thetas) < 0.0):
            raise ValidationError("thetas must be nondecreasing")
        if np.any(self.alphas < 0.0):
            raise ValidationError("alphas must be nonnegative")
        if abs(float(self.alphas.sum()) - 1.0) > 1e-12:
            raise ValidationError(
                f"alphas must sum to 1 within 1e-12, got {self.alphas.sum()!r}"
            )

    @property
    def n_types(self) -> int:
        return int(self.thetas.size)


@dataclass(frozen=True)
class UtilityParams:
    """Weighting coefficients of the two utility models.

    gamma1 maps latency to provider cost, gamma2 weights quality and gamma3
    weights latency in the operator's log benefit.  gamma3 may be zero; the
    log argument is then guarded by quality alone.
    """

    gamma1: float = 1.0
    gamma2: float = 1.0
    gamma3: float = 1.0

    def __post_init__(self):
        if not self.gamma1 > 0.0:
            raise ValidationError("gamma1 must be > 0")
        if not self.gamma2 > 0.0:
            raise ValidationError("gamma2 must be > 0")
        if self.gamma3 < 0.0:
            raise ValidationError("gamma3 must be >= 0")


@dataclass(frozen=True)
class ContractMenu:
    """Per-type bundles: inverse-latency commitments and rewards."""

    latencies: np.ndarray
    rewards: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "latencies", _as_readonly_array(self.latencies))
        object.__setattr__(self, "rewards", _as_readonly_array(self.rewards))
        if self.latencies.size != self.rewards.size:
            raise ValidationError("latencies and rewards must have equal length")
        if np.any(self.latencies < 0.0):
            raise ValidationError("latencies are inverse latencies and must be >= 0")

    @property
    def n_types(self) -> int:
        return int(self.latencies.size)


@dataclass
class FeasibilityReport:
    """Outcome of enumerating every participation and self-selection check.

    Indices are 0-based.  ``ir_violations`` holds (i, utility) pairs with
    utility < -tol; ``ic_violations`` holds (i, j, deficit) triples where
    type i strictly prefers bundle j by more than tol.
    """

    ir_violations: list = field(default_factory=list)
    ic_violations: list = field(default_factory=list)
    latencies_monotone: bool = True
    rewards_monotone: bool = True
    tol: float = 1e-9

    @property
    def feasible(self) -> bool:
        return (
            not self.ir_violations
            and not self.ic_violations
            and self.latencies_monotone
            and self.rewards_monotone
        )


def asp_utility(theta: float, bundle, params: UtilityParams) -> float:
    """Provider utility ``theta * R - gamma1 * L`` for bundle (L, R)."""
    if not theta > 0.0:
        raise ValidationError("theta must be > 0")
    latency, reward = bundle
    return theta * reward - params.gamma1 * latency


def teleop_utility(xi: float, bundle, params: UtilityParams) -> float:
    """Operator utility ``ln(gamma2*xi + gamma3*L) - R`` for bundle (L, R)."""
    latency, reward = bundle
    arg = params.gamma2 * xi + params.gamma3 * latency
    if arg <= 0.0:
        raise NonPositiveLogArgument(
            f"log argument gamma2*xi + gamma3*L = {arg!r} must be > 0"
        )
    return math.log(arg) - reward


def rewards_from_latencies(latencies, profile: AspTypeProfile, gamma1: float):
    """Rewards that bind the lowest type's participation constraint and every
    adjacent downward self-selection constraint.

    R_1 = gamma1 * L_1 / theta_1 and
    R_i = R_{i-1} + gamma1 * (L_i - L_{i-1}) / theta_i, so each increment of
    latency is priced at the marginal rate of the type receiving it.
    """
    lat = np.asarray(latencies, dtype=float)
    if lat.size != profile.n_types:
        raise SizeMismatch(
            f"latencies ({lat.size}) and profile ({profile.n_types}) differ"
        )
    if lat.size and np.any(np.diff(lat) < -MONOTONE_TOL):
        raise NonMonotoneLatencies(
            f"latencies must be nondecreasing within {MONOTONE_TOL}"
        )
    rewards = np.empty_like(lat)
    thetas = profile.thetas
    acc = gamma1 * lat[0] / thetas[0]
    rewards[0] = acc
    for i in range(1, lat.size):
        acc += gamma1 * (lat[i] - lat[i - 1]) / thetas[i]
        rewards[i] = acc
    return rewards


def check_feasibility(
    menu: ContractMenu,
    profile: AspTypeProfile,
    gamma1: float,
    tol: float = 1e-9,
) -> FeasibilityReport:
    """Enumerate all I participation and I(I-1) self-selection constraints.

    An infeasible menu yields a populated report rather than an error.
    """
    if menu.n_types != profile.n_types:
        raise SizeMismatch("menu and profile must have the same length")
    lat, rew, thetas = menu.latencies, menu.rewards, profile.thetas
    n = menu.n_types
    report = FeasibilityReport(tol=tol)
    report.latencies_monotone = not np.any(np.diff(lat) < -MONOTONE_TOL)
    report.rewards_monotone = not np.any(np.diff(rew) < -MONOTONE_TOL)
    own = thetas * rew - gamma1 * lat
    for i in range(n):
        if own[i] < -tol:
            report.ir_violations.append((i, float(own[i])))
        for j in range(n):
            if j == i:
                continue
            cross = thetas[i] * rew[j] - gamma1 * lat[j]
            if own[i] < cross - tol:
                report.ic_violations.append((i, j, float(cross - own[i])))
    return report


def expected_teleop_utility(
    menu: ContractMenu,
    profile: AspTypeProfile,
    xi: float,
    params: UtilityParams,
) -> float:
    """Type-probability-weighted operator utility at a single quality point."""
    if menu.n_types != profile.n_types:
        raise SizeMismatch("menu and profile must have the same length")
    total = 0.0
    for alpha, lat, rew in zip(profile.alphas, menu.latencies, menu.rewards):
        total += alpha * teleop_utility(xi, (lat, rew), params)
    return total


# ---------------------------------------------------------------------------
# CSV interfaces (type_index columns are 1-based)
# ---------------------------------------------------------------------------

def write_profile_csv(profile: AspTypeProfile, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["type_index", "theta", "alpha"])
        for i in range(profile.n_types):
            writer.writerow([i + 1, repr(float(profile.thetas[i])), repr(float(profile.alphas[i]))])


def read_profile_csv(path) -> AspTypeProfile:
    rows = _read_indexed_rows(path, ["type_index", "theta", "alpha"])
    thetas = [v[0] for v in rows]
    alphas = [v[1] for v in rows]
    return AspTypeProfile(thetas=np.array(thetas), alphas=np.array(alphas))


def write_menu_csv(menu: ContractMenu, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["type_index", "L", "R"])
        for i in range(menu.n_types):
            writer.writerow([i + 1, repr(float(menu.latencies[i])), repr(float(menu.rewards[i]))])


def read_menu_csv(path) -> ContractMenu:
    rows = _read_indexed_rows(path, ["type_index", "L", "R"])
    return ContractMenu(
        latencies=np.array([v[0] for v in rows]),
        rewards=np.array([v[1] for v in rows]),
    )


def _read_indexed_rows(path, expected_header):
    from .errors import ParseError

    path = Path(path)
    rows = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file", path=str(path), line=1)
        if [h.strip() for h in header] != expected_header:
            raise ParseError(
                f"expected header {','.join(expected_header)}", path=str(path), line=1
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                idx = int(row[0])
                values = tuple(float(x) for x in row[1:])
            except (ValueError, IndexError):
                raise ParseError(f"bad row {row!r}", path=str(path), line=lineno)
            if len(values) != len(expected_header) - 1:
                raise ParseError(f"bad row {row!r}", path=str(path), line=lineno)
            rows[idx] = values
    if not rows:
        raise ParseError("no data rows", path=str(path), line=1)
    ordered = [rows[i] for i in sorted(rows)]
    if sorted(rows) != list(range(1, len(rows) + 1)):
        raise ParseError("type_index must enumerate 1..I", path=str(path), line=1)
    return ordered
