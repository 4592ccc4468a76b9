"""Power-norm sequences s_n = ||sum lambda_i phi_i^n|| and their verdicts."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ..norms import DEFAULT_GRID, Grid, PowerNormSweep
from ..paths import PathConfig


class Verdict(str, enum.Enum):
    COMPACT = "CompactEvidence"
    NONCOMPACT = "NonCompactEvidence"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Params:
    """Thresholds shared by every criterion.  Defaults resolve the curated corpus."""

    grid: Grid = DEFAULT_GRID
    n_max: int = 256
    tol_zero: float = 1e-3
    tol_one: float = 1e-3
    conv_tol: float = 1e-3
    eq_tol: float = 1e-3
    tail_fraction: float = 0.25
    paths: PathConfig = field(default_factory=PathConfig)

    def __post_init__(self):
        for name in ("tol_zero", "tol_one", "conv_tol", "eq_tol", "tail_fraction"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.n_max < 8:
            raise ValueError("n_max must be >= 8")

    def thresholds(self):
        return {
            "tol_zero": self.tol_zero,
            "tol_one": self.tol_one,
            "conv_tol": self.conv_tol,
            "eq_tol": self.eq_tol,
            "tail_fraction": self.tail_fraction,
            "nonincrease_slack": NONINCREASE_SLACK,
            "persist_factor": PERSIST_FACTOR,
            "flat_decay_floor": FLAT_DECAY_FLOOR,
        }


NONINCREASE_SLACK = 1e-9
PERSIST_FACTOR = 10.0
FLAT_DECAY_FLOOR = 0.5


@dataclass
class SequenceFit:
    model: str  # "geometric", "power" or "zero"
    ratio: float  # geometric ratio exp(slope of log s_n in n)
    exponent: float  # p in s_n ~ C n^-p
    residual: float  # rms residual of the chosen model in log space
    geometric_residual: float
    power_residual: float

    def to_dict(self):
        return dict(self.__dict__)


def tail_length(n, fraction=0.25):
    return max(2, int(math.ceil(n * fraction)))


def fit_decay(ns, values):
    """Least-squares fits of log s_n against n (geometric) and log n (power law)."""
    ns = np.asarray(ns, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = values > 0
    if keep.sum() < 2:
        return SequenceFit("zero", 0.0, math.inf, 0.0, 0.0, 0.0)
    x, y = ns[keep], np.log(values[keep])
    g = np.polyfit(x, y, 1)
    g_res = float(np.sqrt(np.mean((np.polyval(g, x) - y) ** 2)))
    p = np.polyfit(np.log(x), y, 1)
    p_res = float(np.sqrt(np.mean((np.polyval(p, np.log(x)) - y) ** 2)))
    model = "geometric" if g_res <= p_res else "power"
    return SequenceFit(model, float(np.exp(g[0])), float(-p[0]), min(g_res, p_res), g_res, p_res)


@dataclass
class SequenceDiagnostics:
    kind: str
    values: np.ndarray
    fit: SequenceFit
    verdict: Verdict
    evidence: list
    thresholds: dict

    @property
    def ns(self):
        return np.arange(1, self.values.size + 1)

    def to_dict(self):
        return {
            "kind": self.kind,
            "n_max": int(self.values.size),
            "values": [float(v) for v in self.values],
            "fit": self.fit.to_dict(),
            "verdict": self.verdict.value,
            "evidence": list(self.evidence),
            "thresholds": dict(self.thresholds),
        }


def classify_sequence(values, tol_zero=1e-3, tail_fraction=0.25):
    """Three-valued verdict for a sequence s_1..s_N.

    CompactEvidence: s_N < tol_zero and the tail never rises by more than
    1e-9.  NonCompactEvidence: values above 10 tol_zero occur in each quarter
    of the tail and their log-linear fit loses less than half its size across
    the tail.  Anything else is Inconclusive.
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    L = tail_length(n, tail_fraction)
    ns = np.arange(1, n + 1)
    tail, tail_ns = values[-L:], ns[-L:]
    fit = fit_decay(tail_ns, tail)
    ev = []

    rises = np.diff(tail)
    nonincreasing = bool(np.all(rises <= NONINCREASE_SLACK))
    if values[-1] < tol_zero and nonincreasing:
        ev.append(f"s_{n} = {values[-1]:.6g} < tol_zero = {tol_zero:g}")
        ev.append(f"tail n = {tail_ns[0]}..{n} nonincreasing within {NONINCREASE_SLACK:g}")
        return Verdict.COMPACT, fit, ev

    big = tail > PERSIST_FACTOR * tol_zero
    blocks = np.array_split(np.arange(L), 4)
    persistent = all(big[b].any() for b in blocks if b.size)
    if persistent:
        sub = fit_decay(tail_ns[big], tail[big])
        decay_over_tail = sub.ratio ** L if sub.model != "zero" else 0.0
        if decay_over_tail >= FLAT_DECAY_FLOOR:
            ev.append(f"{int(big.sum())} of {L} tail values exceed {PERSIST_FACTOR * tol_zero:g}, in every tail quarter")
            ev.append(f"subsequence fit ratio {sub.ratio:.9g}; projected factor over the tail {decay_over_tail:.6g} >= {FLAT_DECAY_FLOOR}")
            return Verdict.NONCOMPACT, fit, ev
        ev.append(f"large tail values persist but decay by {decay_over_tail:.3g} across the tail")
    else:
        ev.append(f"s_{n} = {values[-1]:.6g}: neither below tol_zero with a monotone tail nor persistently above {PERSIST_FACTOR * tol_zero:g}")
    if not nonincreasing and values[-1] < tol_zero:
        ev.append(f"tail rises by up to {rises.max():.3g}")
    return Verdict.INCONCLUSIVE, fit, ev


def power_sequence(spec, kind="bloch", n_max=256, grid=DEFAULT_GRID, tol_zero=1e-3, tail_fraction=0.25):
    """s_n = ||sum_i lambda_i phi_i^n|| for n = 1..n_max with a verdict."""
    if n_max < 8:
        raise ValueError("n_max must be >= 8")
    sweep = PowerNormSweep(spec, kind, grid)
    values = sweep.values(n_max)
    verdict, fit, ev = classify_sequence(values, tol_zero, tail_fraction)
    thresholds = {"tol_zero": tol_zero, "tail_fraction": tail_fraction, "nonincrease_slack": NONINCREASE_SLACK,
                  "persist_factor": PERSIST_FACTOR, "flat_decay_floor": FLAT_DECAY_FLOOR}
    return SequenceDiagnostics(kind, values, fit, verdict, ev, thresholds)


def power_sequence_p(spec, kind, params):
    return power_sequence(spec, kind, params.n_max, params.grid, params.tol_zero, params.tail_fraction)
