"""Run configuration: flat ``key = value`` files with reference defaults.

An empty file reproduces the reference setup exactly: eight provider types
with willingness values {110, 140, 175, 200, 220, 235, 245, 250}, unit
weighting coefficients, confidence 0.99, 200 training samples on the
support [60, 100], a 1500-iteration budget with threshold 1e-3, initial
multiplier 6, and step sizes 1e4 (latencies) and 1e-3 (multiplier).

Type probabilities come from the config when given explicitly, otherwise
from a seeded symmetric Dirichlet draw (concentration 1).  The real quality
scores behind the reference experiments are external, so the bundled
generator draws a truncated normal stand-in (mean 85, sd 8 by default);
its parameters are config keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .ambiguity import AmbiguityConfig, QualitySampleSet, SupportInterval
from .bcd import BcdConfig
from .contracts import AspTypeProfile, UtilityParams
from .errors import InvalidConfidence, ParseError, ValidationError
from .inner import InnerSolverConfig
from .seeding import rng_for

DEFAULT_THETAS = (110.0, 140.0, 175.0, 200.0, 220.0, 235.0, 245.0, 250.0)
DEFAULT_SHIFTS = (0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0)
DEFAULT_EXTREME_COUNTS = (0, 50, 100)


@dataclass(frozen=True)
class RunConfig:
    thetas: tuple = DEFAULT_THETAS
    alphas: tuple = ()  # empty: draw from the seeded Dirichlet
    gamma1: float = 1.0
    gamma2: float = 1.0
    gamma3: float = 1.0
    tau: float = 0.99
    n_train: int = 200
    n_eval: int = 50
    support_lo: float = 60.0
    support_hi: float = 100.0
    itr_max: int = 1500
    conv_tol: float = 1e-3
    eta_l: float = 1e4
    eta_lambda: float = 1e-3
    lambda_init: float = 6.0
    l_init: float = 0.0
    bisect_tol: float = 1e-8
    max_bisect_iters: int = 64
    seed: int = 0
    shift_magnitudes: tuple = DEFAULT_SHIFTS
    extreme_counts: tuple = DEFAULT_EXTREME_COUNTS
    extreme_value: float = 1.0
    gen_mean: float = 85.0
    gen_sd: float = 8.0
    train_csv: str = ""
    eval_csv: str = ""
    menu_csv: str = ""
    oracle_grid_step: float = 0.05
    oracle_l_max: float = 50.0
    oracle_lambda_max: float = 10.0

    def __post_init__(self):
        # Constructing the component objects runs every invariant check.
        self.support()
        self.params()
        self.profile()
        self.bcd_config()
        self.inner_config()
        if not 0.0 < self.tau < 1.0:
            raise InvalidConfidence(f"tau must lie in (0, 1), got {self.tau}")
        if self.n_train < 1 or self.n_eval < 1:
            raise ValidationError("n_train and n_eval must be >= 1")
        if any(m < 0 for m in self.shift_magnitudes):
            raise ValidationError("shift magnitudes must be nonnegative")
        if any(c < 0 for c in self.extreme_counts):
            raise ValidationError("extreme counts must be nonnegative")
        if self.gen_sd <= 0:
            raise ValidationError("gen_sd must be > 0")

    @property
    def n_types(self) -> int:
        return len(self.thetas)

    def profile(self) -> AspTypeProfile:
        alphas = (
            np.asarray(self.alphas, dtype=float)
            if self.alphas
            else generate_alphas(self.n_types, self.seed)
        )
        return AspTypeProfile(thetas=np.asarray(self.thetas, dtype=float), alphas=alphas)

    def params(self) -> UtilityParams:
        return UtilityParams(gamma1=self.gamma1, gamma2=self.gamma2, gamma3=self.gamma3)

    def support(self) -> SupportInterval:
        return SupportInterval(lo=self.support_lo, hi=self.support_hi)

    def ambiguity_for(self, n_samples: int = None) -> AmbiguityConfig:
        return AmbiguityConfig.derive(
            self.support(), self.tau, self.n_train if n_samples is None else n_samples
        )

    def bcd_config(self) -> BcdConfig:
        return BcdConfig(
            max_iters=self.itr_max,
            conv_tol=self.conv_tol,
            eta_L=self.eta_l,
            eta_lambda=self.eta_lambda,
            L_init=self.l_init,
            lambda_init=self.lambda_init,
        )

    def inner_config(self) -> InnerSolverConfig:
        return InnerSolverConfig(
            bisect_tol=self.bisect_tol, max_bisect_iters=self.max_bisect_iters
        )

    def train_samples(self) -> QualitySampleSet:
        from .ambiguity import read_samples_csv

        if self.train_csv:
            return read_samples_csv(self.train_csv)
        return generate_quality_samples(
            self.n_train, self.seed, "train-data", self.gen_mean, self.gen_sd, self.support()
        )

    def eval_samples(self) -> QualitySampleSet:
        from .ambiguity import read_samples_csv

        if self.eval_csv:
            return read_samples_csv(self.eval_csv)
        return generate_quality_samples(
            self.n_eval, self.seed, "eval-data", self.gen_mean, self.gen_sd, self.support()
        )


def generate_alphas(n_types: int, seed: int) -> np.ndarray:
    """Symmetric Dirichlet (concentration 1) type probabilities."""
    if n_types < 1:
        raise ValidationError("n_types must be >= 1")
    rng = rng_for(seed, "alphas")
    draw = rng.dirichlet(np.ones(n_types))
    return draw / draw.sum()  # renormalize to absorb rounding


def generate_quality_samples(
    n: int,
    seed: int,
    label: str,
    mean: float,
    sd: float,
    support: SupportInterval,
) -> QualitySampleSet:
    """Truncated-normal quality scores on the support, via rejection."""
    rng = rng_for(seed, label)
    out = np.empty(n)
    filled = 0
    while filled < n:
        draw = rng.normal(mean, sd, size=2 * (n - filled) + 8)
        keep = draw[(draw >= support.lo) & (draw <= support.hi)][: n - filled]
        out[filled : filled + keep.size] = keep
        filled += keep.size
    return QualitySampleSet(samples=out, provenance=f"generated:{label}:seed={seed}")


# ---------------------------------------------------------------------------
# Config file parsing
# ---------------------------------------------------------------------------

_TUPLE_FLOAT_KEYS = {"thetas", "alphas", "shift_magnitudes"}
_TUPLE_INT_KEYS = {"extreme_counts"}
_INT_KEYS = {"n_train", "n_eval", "itr_max", "max_bisect_iters", "seed"}
_STR_KEYS = {"train_csv", "eval_csv", "menu_csv"}


def load_config(path) -> RunConfig:
    """Parse a ``key = value`` file; missing keys take the defaults above."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read config: {exc}", path=str(path))
    overrides = parse_config_text(text, source=str(path))
    try:
        return RunConfig(**overrides)
    except TypeError as exc:
        raise ValidationError(str(exc))


def parse_config_text(text: str, source: str = "<config>") -> dict:
    known = {f.name for f in fields(RunConfig)}
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw!r}", path=source, line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in known:
            raise ValidationError(f"{source}:{lineno}: unknown config key {key!r}")
        try:
            overrides[key] = _parse_value(key, value)
        except ValueError:
            raise ParseError(f"bad value for {key}: {value!r}", path=source, line=lineno)
    return overrides


def _parse_value(key: str, value: str):
    if key in _STR_KEYS:
        return value
    if key in _TUPLE_FLOAT_KEYS:
        return tuple(float(part) for part in value.split(",") if part.strip())
    if key in _TUPLE_INT_KEYS:
        return tuple(int(part) for part in value.split(",") if part.strip())
    if key in _INT_KEYS:
        return int(value)
    return float(value)


def with_seed(cfg: RunConfig, seed: int) -> RunConfig:
    return replace(cfg, seed=int(seed))
