"""Boundary-path sampling of phi_i, phi_i^# and rho_ij, index sets, and the sampled path conditions.

Term indices are 1-based everywhere in this module's public output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..disk import hyperbolic_derivative_values, rho
from ..paths import boundary_paths
from .sequence import Params, Verdict, tail_length

LAMBDA_SUM_TOL = 1e-12


def _variation(x):
    x = np.asarray(x)
    return float(max(np.ptp(x.real), np.ptp(x.imag))) if x.size else 0.0


@dataclass
class DeltaSample:
    path: object
    steps: np.ndarray  # (S,)
    values: np.ndarray  # (k, S) phi_i(z_n)
    sharp: np.ndarray  # (k, S) phi_i^#(z_n)
    rho: np.ndarray  # (k, k, S)
    tail: int
    conv_tol: float
    degenerate: bool = False
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.flags:
            self.flags = self.classify()

    @property
    def k(self):
        return self.values.shape[0]

    def classify(self):
        """Per-sequence convergence by tail variation (max - min of real and imaginary parts)."""
        t = slice(-self.tail, None)
        out = {}
        for i in range(self.k):
            out[f"phi{i + 1}"] = _variation(self.values[i, t]) < self.conv_tol
            out[f"sharp{i + 1}"] = _variation(self.sharp[i, t]) < self.conv_tol
            for j in range(self.k):
                out[f"rho{i + 1},{j + 1}"] = _variation(self.rho[i, j, t]) < self.conv_tol
        return out

    @property
    def in_delta(self):
        return bool(self.steps.size >= 4 and all(self.flags.values()))

    def limits(self):
        """Tail means of |phi_i|, phi_i^# and rho_ij."""
        t = slice(-self.tail, None)
        return (np.mean(np.abs(self.values[:, t]), axis=1),
                np.mean(self.sharp[:, t], axis=1),
                np.mean(self.rho[:, :, t], axis=2))

    def to_dict(self):
        mod, sharp, r = self.limits()
        return {
            "path": self.path.describe(),
            "in_delta": self.in_delta,
            "degenerate": self.degenerate,
            "steps_used": int(self.steps.size),
            "non_convergent": sorted(k for k, ok in self.flags.items() if not ok),
            "limit_abs_phi": [float(x) for x in mod],
            "limit_sharp": [[float(x.real), float(x.imag)] for x in sharp],
            "limit_rho": [[float(x) for x in row] for row in r],
        }


def sample_path(path, spec, params=Params()):
    z = path.steps
    vals, sharps = [], []
    for sym in spec.symbols:
        with np.errstate(all="ignore"):
            v, d = sym(z)
        vals.append(v)
        sharps.append(hyperbolic_derivative_values(z, v, d))
    vals, sharps = np.array(vals), np.array(sharps)
    bad = ~np.all(np.isfinite(sharps), axis=0)
    degenerate = bool(bad.any())
    if degenerate:
        stop = int(np.argmax(bad))
        z, vals, sharps = z[:stop], vals[:, :stop], sharps[:, :stop]
    k = vals.shape[0]
    r = np.empty((k, k, z.size))
    for i in range(k):
        for j in range(k):
            r[i, j] = 0.0 if i == j else rho(vals[i], vals[j])
    tail = tail_length(max(z.size, 1), params.tail_fraction)
    return DeltaSample(path, z, vals, sharps, r, tail, params.conv_tol, degenerate)


def sample_delta(paths, spec, params=Params()):
    """One DeltaSample per path; non-convergent paths are kept but flagged (``in_delta`` False)."""
    if not paths:
        raise ValueError("need at least one path")
    return [sample_path(p, spec, params) for p in paths]


def default_paths(spec, params=Params()):
    return boundary_paths(params.paths, spec.symbols)


@dataclass
class IndexSets:
    I: frozenset
    I_j: dict
    I_j_star: dict
    I_j_sharp: dict

    def check(self):
        for j in self.I:
            assert j in self.I_j[j]
            assert self.I_j_star[j] <= self.I_j[j] <= self.I
            assert self.I_j_sharp[j] <= self.I_j[j]

    def to_dict(self):
        s = lambda x: sorted(x)  # noqa: E731
        return {
            "I": s(self.I),
            "I_j": {str(j): s(v) for j, v in sorted(self.I_j.items())},
            "I_j_star": {str(j): s(v) for j, v in sorted(self.I_j_star.items())},
            "I_j_sharp": {str(j): s(v) for j, v in sorted(self.I_j_sharp.items())},
        }


def index_sets(sample, tol_one=1e-3, tol_zero=1e-3, eq_tol=1e-3):
    mod, sharp, r = sample.limits()
    k = sample.k
    idx = range(k)
    I = frozenset(i + 1 for i in idx if mod[i] > 1.0 - tol_one)
    I_j, star, sharp_sets = {}, {}, {}
    for j in sorted(I):
        J = frozenset(i for i in I if r[i - 1, j - 1] < tol_zero)
        I_j[j] = J
        star[j] = frozenset(i for i in J if abs(sharp[i - 1]) >= tol_zero)
        sharp_sets[j] = frozenset(i for i in J if abs(sharp[i - 1] - sharp[j - 1]) < eq_tol)
    return IndexSets(I, I_j, star, sharp_sets)


def cluster_sharp_residuals(spec, sample, sets, tol_zero=1e-3):
    """j -> tail of |sum_{i in I_j} lambda_i phi_i^#(z_n)|, and whether its max is < tol_zero."""
    lam = spec.lambdas
    out = {}
    for j in sorted(sets.I):
        members = [i - 1 for i in sorted(sets.I_j[j])]
        resid = np.abs(lam[members] @ sample.sharp[members, -sample.tail:])
        out[j] = (resid, bool(resid.max() < tol_zero))
    return out


def star_lambda_sums(spec, sets):
    """j -> (sum over I_j^* of lambda_i, holds)."""
    lam = spec.lambdas
    out = {}
    for j in sorted(sets.I):
        s = complex(sum(lam[i - 1] for i in sets.I_j_star[j]))
        out[j] = (s, abs(s) <= LAMBDA_SUM_TOL)
    return out


def sharp_lambda_sums(spec, sample, sets, tol_zero=1e-3):
    """Sums of lambda over I_j^#, only for j whose phi_j^# stays away from 0."""
    _, sharp, _ = sample.limits()
    lam = spec.lambdas
    out = {}
    for j in sorted(sets.I):
        if abs(sharp[j - 1]) < tol_zero:
            continue
        s = complex(sum(lam[i - 1] for i in sets.I_j_sharp[j]))
        out[j] = (s, abs(s) <= LAMBDA_SUM_TOL)
    return out


@dataclass
class PathConditionsReport:
    verdicts: dict  # condition name -> Verdict
    failures: dict  # condition -> list of (path label, j, detail)
    paths_total: int
    paths_in_delta: int
    per_path: list
    thresholds: dict

    def to_dict(self):
        return {
            "verdicts": {k: v.value for k, v in self.verdicts.items()},
            "failures": {k: [list(f) for f in v] for k, v in self.failures.items()},
            "paths_total": self.paths_total,
            "paths_in_delta": self.paths_in_delta,
            "per_path": self.per_path,
            "thresholds": dict(self.thresholds),
        }


def path_conditions(spec, params=Params(), samples=None):
    """Sampled boundary-sequence criteria for compactness on the Bloch space.

    A condition is NonCompactEvidence if it fails on some sampled path in
    Delta, CompactEvidence if it holds on all of them, Inconclusive when no
    sampled path qualifies.
    """
    if samples is None:
        samples = sample_delta(default_paths(spec, params), spec, params)
    failures = {"cluster_residual": [], "star_sum": [], "sharp_sum": []}
    per_path = []
    n_delta = 0
    for smp in samples:
        rec = {"label": smp.path.label, "origin": smp.path.origin, "in_delta": smp.in_delta}
        if smp.in_delta:
            n_delta += 1
            sets = index_sets(smp, params.tol_one, params.tol_zero, params.eq_tol)
            sets.check()
            c2 = cluster_sharp_residuals(spec, smp, sets, params.tol_zero)
            c3 = star_lambda_sums(spec, sets)
            c4 = sharp_lambda_sums(spec, smp, sets, params.tol_zero)
            rec["index_sets"] = sets.to_dict()
            rec["cluster_residual_max"] = {str(j): float(r.max()) for j, (r, _) in c2.items()}
            rec["cluster_residual_tail"] = {str(j): [float(x) for x in r] for j, (r, _) in c2.items()}
            rec["star_sums"] = {str(j): [s.real, s.imag] for j, (s, _) in c3.items()}
            for j, (r, ok) in c2.items():
                if not ok:
                    failures["cluster_residual"].append((smp.path.label, j, float(r.max())))
            for j, (s, ok) in c3.items():
                if not ok:
                    failures["star_sum"].append((smp.path.label, j, abs(s)))
            for j, (s, ok) in c4.items():
                if not ok:
                    failures["sharp_sum"].append((smp.path.label, j, abs(s)))
        per_path.append(rec)
    verdicts = {}
    for key, fails in failures.items():
        if fails:
            verdicts[key] = Verdict.NONCOMPACT
        elif n_delta:
            verdicts[key] = Verdict.COMPACT
        else:
            verdicts[key] = Verdict.INCONCLUSIVE
    return PathConditionsReport(verdicts, failures, len(samples), n_delta, per_path, params.thresholds())
