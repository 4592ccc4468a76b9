"""Compactness tests for single operators, differences, and structured combinations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import _kernels
from ..combination import CombinationSpec
from ..disk import hyperbolic_derivative_values, rho
from ..errors import HypothesisViolated, KTooLarge, PreconditionViolated
from ..norms import _PolarSearch, sup_norm
from ..paths import boundary_paths
from .delta import path_conditions
from .sequence import Params, SequenceDiagnostics, Verdict, power_sequence_p

SUM_TOL = 1e-12
LEVEL_DEPTH = 40
EMPTY_DEPTH = 20  # {|phi| > 1 - 2^-m} empty for all m >= 20 counts as "range inside a smaller disk"
HINF_COMPACT = 1e-6
HINF_TOUCH = 1e-9
MAX_SUBSET_K = 20


@dataclass
class BoundaryReport:
    """sup of a quantity over {|phi| > 1 - 2^-m}, m = 1..LEVEL_DEPTH, and what its limit suggests."""

    label: str
    levels: list  # (m, sup or None)
    limit: float | None
    verdict: Verdict
    evidence: list

    def to_dict(self):
        return {
            "label": self.label,
            "levels": [[m, s] for m, s in self.levels],
            "limit": self.limit,
            "verdict": self.verdict.value,
            "evidence": list(self.evidence),
        }


def _boundary_levels(label, modulus, quantity, tol_zero):
    levels = []
    for m in range(1, LEVEL_DEPTH + 1):
        mask = modulus > 1.0 - 2.0**-m
        levels.append((m, float(np.max(quantity[mask])) if mask.any() else None))
    nonempty = [m for m, s in levels if s is not None]
    if not nonempty or max(nonempty) < EMPTY_DEPTH:
        deepest = max(nonempty) if nonempty else 0
        ev = [f"no sampled point has |phi| > 1 - 2^-{deepest + 1}; region empty for small delta"]
        return BoundaryReport(label, levels, None, Verdict.COMPACT, ev)
    m_star = max(nonempty)
    lim = levels[m_star - 1][1]
    ev = [f"deepest populated level m = {m_star}: sup = {lim:.6g}"]
    if lim < tol_zero:
        v = Verdict.COMPACT
    elif lim > 10.0 * tol_zero:
        v = Verdict.NONCOMPACT
    else:
        v = Verdict.INCONCLUSIVE
    return BoundaryReport(label, levels, lim, v, ev)


def _sample_points(symbols, params):
    grid_z = _PolarSearch(params.grid).z.ravel()
    paths = boundary_paths(params.paths, symbols)
    return np.concatenate([grid_z] + [p.steps for p in paths])


def combine_routes(a, b):
    """(verdict, agreement) from two independent routes."""
    decisive = [v for v in (a, b) if v is not Verdict.INCONCLUSIVE]
    if len(decisive) == 2:
        return (a, "agree") if a is b else (Verdict.INCONCLUSIVE, "disagree")
    if len(decisive) == 1:
        return decisive[0], "partial"
    return Verdict.INCONCLUSIVE, "none"


@dataclass
class CompactnessReport:
    sequence: SequenceDiagnostics
    boundary: list
    verdict: Verdict
    agreement: str
    thresholds: dict = field(default_factory=dict)

    @property
    def boundary_verdict(self):
        vs = [b.verdict for b in self.boundary]
        if any(v is Verdict.NONCOMPACT for v in vs):
            return Verdict.NONCOMPACT
        if all(v is Verdict.COMPACT for v in vs):
            return Verdict.COMPACT
        return Verdict.INCONCLUSIVE

    def to_dict(self):
        return {
            "verdict": self.verdict.value,
            "agreement": self.agreement,
            "power_sequence": self.sequence.to_dict(),
            "boundary": [b.to_dict() for b in self.boundary],
            "boundary_verdict": self.boundary_verdict.value,
            "thresholds": dict(self.thresholds),
        }


def single_compactness_bloch(phi, params=Params()):
    """Two routes: ||phi^n||_B -> 0, and sup |phi^#| over {|phi| > 1 - delta} -> 0."""
    seq = power_sequence_p(CombinationSpec(((1.0, phi),)), "bloch", params)
    z = _sample_points([phi], params)
    with np.errstate(all="ignore"):
        v, d = phi(z)
        q = np.abs(hyperbolic_derivative_values(z, v, d))
    mod = np.abs(v)
    ok = np.isfinite(q)
    bnd = _boundary_levels("|phi^#|", mod[ok], q[ok], params.tol_zero)
    verdict, agreement = combine_routes(seq.verdict, bnd.verdict)
    return CompactnessReport(seq, [bnd], verdict, agreement, params.thresholds())


@dataclass
class HinfReport:
    verdict: Verdict
    sup: float
    witness: complex
    thresholds: dict

    def to_dict(self):
        return {"verdict": self.verdict.value, "sup": self.sup, "witness": [self.witness.real, self.witness.imag],
                "thresholds": dict(self.thresholds)}


def single_compactness_hinf(phi, params=Params()):
    """||phi^n||_inf = ||phi||_inf^n, so compactness on H^inf is sup |phi| < 1."""
    est = sup_norm(phi, params.grid)
    if est.value < 1.0 - HINF_COMPACT:
        v = Verdict.COMPACT
    elif est.value >= 1.0 - HINF_TOUCH:
        v = Verdict.NONCOMPACT
    else:
        v = Verdict.INCONCLUSIVE
    return HinfReport(v, est.value, est.witness, {"compact_below": 1.0 - HINF_COMPACT, "noncompact_from": 1.0 - HINF_TOUCH})


def difference_compactness(phi, psi, params=Params()):
    """C_phi - C_psi on the Bloch space.

    Route (a): ||phi^n - psi^n||_B.  Route (b): |phi^#| rho(phi, psi) over
    {|phi| > 1 - delta} and |psi^#| rho(phi, psi) over {|psi| > 1 - delta}
    must both tend to 0.
    """
    seq = power_sequence_p(CombinationSpec(((1.0, phi), (-1.0, psi))), "bloch", params)
    z = _sample_points([phi, psi], params)
    with np.errstate(all="ignore"):
        pv, pd = phi(z)
        qv, qd = psi(z)
        r = rho(pv, qv)
        a = np.abs(hyperbolic_derivative_values(z, pv, pd)) * r
        b = np.abs(hyperbolic_derivative_values(z, qv, qd)) * r
    reports = []
    for label, mod, q in (("|phi^#| rho", np.abs(pv), a), ("|psi^#| rho", np.abs(qv), b)):
        ok = np.isfinite(q)
        reports.append(_boundary_levels(label, mod[ok], q[ok], params.tol_zero))
    out = CompactnessReport(seq, reports, Verdict.INCONCLUSIVE, "none", params.thresholds())
    out.verdict, out.agreement = combine_routes(seq.verdict, out.boundary_verdict)
    return out


@dataclass
class CombinationReport:
    sequence: SequenceDiagnostics
    conditions: object  # PathConditionsReport
    path_verdict: Verdict
    verdict: Verdict
    agreement: str

    def to_dict(self):
        return {
            "verdict": self.verdict.value,
            "agreement": self.agreement,
            "power_sequence": self.sequence.to_dict(),
            "path_verdict": self.path_verdict.value,
            "path_conditions": self.conditions.to_dict(),
        }


def path_verdict(conditions, keys=("cluster_residual", "star_sum")):
    """NonCompact if any listed condition fails on a sampled path, Compact if all hold."""
    vs = [conditions.verdicts[k] for k in keys]
    if Verdict.NONCOMPACT in vs:
        return Verdict.NONCOMPACT
    if all(v is Verdict.COMPACT for v in vs):
        return Verdict.COMPACT
    return Verdict.INCONCLUSIVE


def combination_compactness(spec, params=Params()):
    """sum lambda_i C_phi_i on the Bloch space: power sequence against the sampled path conditions."""
    seq = power_sequence_p(spec, "bloch", params)
    cond = path_conditions(spec, params)
    pv = path_verdict(cond)
    verdict, agreement = combine_routes(seq.verdict, pv)
    return CombinationReport(seq, cond, pv, verdict, agreement)


@dataclass
class SubsetSumResult:
    ok: bool
    witness: tuple | None  # 1-based indices of a nonempty proper subset summing to 0

    def __bool__(self):
        return self.ok


def subset_sum_check(lambdas):
    """True iff no nonempty proper subset of the scalars sums to 0 (|sum| <= 1e-12)."""
    lam = np.asarray(lambdas, dtype=np.complex128).ravel()
    k = lam.size
    if k > MAX_SUBSET_K:
        raise KTooLarge(f"exhaustive subset check supports k <= {MAX_SUBSET_K}, got {k}")
    if k < 2:
        return SubsetSumResult(True, None)
    mask = _kernels.first_zero_subset(lam, SUM_TOL)
    if mask < 0:
        return SubsetSumResult(True, None)
    return SubsetSumResult(False, tuple(i + 1 for i in range(k) if (mask >> i) & 1))


@dataclass
class StructuralReport:
    verdict: Verdict
    branch: str
    lambda_sum: complex
    singles: dict  # symbol text -> Verdict
    pairs: list  # (i, j, Verdict)
    evidence: list

    def to_dict(self):
        return {
            "verdict": self.verdict.value,
            "branch": self.branch,
            "lambda_sum": [self.lambda_sum.real, self.lambda_sum.imag],
            "singles": {k: v.value for k, v in self.singles.items()},
            "pairs": [[i, j, v.value] for i, j, v in self.pairs],
            "evidence": list(self.evidence),
        }


def structural_verdict(spec, params=Params(), cache=None):
    """Compactness of sum lambda_i C_{phi_i} when no proper subset of the lambdas sums to 0.

    Under that hypothesis the operator is compact iff every C_{phi_i} is
    compact, or none is, the lambdas sum to 0 and every pairwise difference
    C_{phi_i} - C_{phi_j} is compact.  Raises HypothesisViolated otherwise.
    """
    cache = {} if cache is None else cache
    check = subset_sum_check(spec.lambdas)
    if not check.ok:
        raise HypothesisViolated(f"terms {set(check.witness)} have scalars summing to 0", check.witness)

    singles = {}
    for sym in spec.symbols:
        key = ("single", sym.text)
        if key not in cache:
            cache[key] = single_compactness_bloch(sym, params).verdict
        singles[sym.text] = cache[key]
    vs = list(singles.values())
    lam_sum = complex(np.sum(spec.lambdas))
    ev = [f"single verdicts: {', '.join(f'{t}: {v.value}' for t, v in singles.items())}"]

    if all(v is Verdict.COMPACT for v in vs):
        return StructuralReport(Verdict.COMPACT, "all-compact", lam_sum, singles, [], ev + ["every C_phi_i compact"])
    if any(v is Verdict.INCONCLUSIVE for v in vs):
        return StructuralReport(Verdict.INCONCLUSIVE, "undetermined", lam_sum, singles, [], ev)
    if any(v is Verdict.COMPACT for v in vs):
        ev.append("some but not all C_phi_i compact: the combination cannot be compact")
        return StructuralReport(Verdict.NONCOMPACT, "mixed", lam_sum, singles, [], ev)

    if abs(lam_sum) > SUM_TOL:
        ev.append(f"sum of scalars {lam_sum} != 0 with non-compact symbols")
        return StructuralReport(Verdict.NONCOMPACT, "none-compact", lam_sum, singles, [], ev)

    pairs = []
    syms = spec.symbols
    for i in range(len(syms)):
        for j in range(i + 1, len(syms)):
            key = ("diff", syms[i].text, syms[j].text)
            if key not in cache:
                cache[key] = difference_compactness(syms[i], syms[j], params).verdict
            pairs.append((i + 1, j + 1, cache[key]))
    pv = [v for _, _, v in pairs]
    if all(v is Verdict.COMPACT for v in pv):
        verdict = Verdict.COMPACT
        ev.append("scalars sum to 0 and every pairwise difference is compact")
    elif any(v is Verdict.NONCOMPACT for v in pv):
        verdict = Verdict.NONCOMPACT
        ev.append("some pairwise difference is not compact")
    else:
        verdict = Verdict.INCONCLUSIVE
    return StructuralReport(verdict, "none-compact", lam_sum, singles, pairs, ev)


@dataclass
class PairCheckReport:
    combined: Verdict
    phi: Verdict
    psi: Verdict
    conjunction: Verdict
    agree: bool

    def to_dict(self):
        return {"combined": self.combined.value, "phi": self.phi.value, "psi": self.psi.value,
                "conjunction": self.conjunction.value, "agree": self.agree}


def nonzero_sum_pair_check(lambda1, lambda2, phi, psi, params=Params()):
    """With lambda1 + lambda2 != 0, ||lambda1 phi^n + lambda2 psi^n||_B -> 0 iff both ||phi^n||_B, ||psi^n||_B -> 0."""
    if abs(complex(lambda1) + complex(lambda2)) <= SUM_TOL:
        raise PreconditionViolated("lambda1 + lambda2 must be nonzero")
    comb = power_sequence_p(CombinationSpec(((lambda1, phi), (lambda2, psi))), "bloch", params).verdict
    a = power_sequence_p(CombinationSpec(((1.0, phi),)), "bloch", params).verdict
    b = power_sequence_p(CombinationSpec(((1.0, psi),)), "bloch", params).verdict
    if a is Verdict.COMPACT and b is Verdict.COMPACT:
        conj = Verdict.COMPACT
    elif Verdict.NONCOMPACT in (a, b):
        conj = Verdict.NONCOMPACT
    else:
        conj = Verdict.INCONCLUSIVE
    return PairCheckReport(comb, a, b, conj, comb is conj)
