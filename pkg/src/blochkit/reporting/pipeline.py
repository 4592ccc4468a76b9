"""Run every diagnostic for one configuration and collect the results."""

from __future__ import annotations

import time
import warnings

from ..combination import CombinationSpec
from ..diagnostics.criteria import (
    nonzero_sum_pair_check,
    single_compactness_bloch,
    single_compactness_hinf,
    structural_verdict,
    subset_sum_check,
)
from ..diagnostics.delta import default_paths, index_sets, path_conditions, sample_delta
from ..diagnostics.sequence import Verdict, power_sequence_p
from ..errors import BlochKitError, HypothesisViolated, InvalidSelfMap, KTooLarge
from ..symbols import compile_symbol
from ..testfns import coefficient_bounds_check, frames_from_sample
from .report import Report


class _Stages:
    def __init__(self):
        self.timing = {}
        self.errors = []

    def run(self, name, fn, *args):
        t0 = time.perf_counter()
        try:
            return fn(*args)
        except (BlochKitError, ValueError, ArithmeticError) as e:
            self.errors.append({"stage": name, "error": type(e).__name__, "message": str(e)})
            return None
        finally:
            self.timing[name] = time.perf_counter() - t0


def _validate(config):
    out, symbols = [], []
    for lam, text in config.combination:
        try:
            sym = compile_symbol(text)
        except InvalidSelfMap as e:
            rep = getattr(e, "report", None)
            out.append({"symbol": text, "accepted": False, "error": str(e),
                        "report": rep.to_dict() if rep is not None else None})
            continue
        out.append({"symbol": text, "accepted": True, "report": sym.report.to_dict()})
        symbols.append((lam, sym))
    return out, symbols


def _frames(samples, spec, params, limit):
    """Frames at the first tail step of each Delta path, one per j in I, at most ``limit``."""
    frames = []
    for smp in samples:
        if not smp.in_delta:
            continue
        sets = index_sets(smp, params.tol_one, params.tol_zero, params.eq_tol)
        for j in sorted(sets.I):
            frames += frames_from_sample(smp, sets, j, [smp.steps.size - smp.tail])
            if len(frames) >= limit:
                return frames[:limit]
    return frames


def _bounds(frames, kind, cfg):
    out = []
    for fr in frames:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            out.append(coefficient_bounds_check(fr, cfg.n_trunc, cfg.n_head, kind).to_dict())
    return out


def run(config):
    """validation -> power sequence -> single verdicts -> Delta sampling and path conditions
    -> structural and pair checks -> test-function coefficient bounds."""
    st = _Stages()
    t0 = time.perf_counter()
    validation, terms = _validate(config)
    st.timing["validation"] = time.perf_counter() - t0
    report = Report(config.describe(), config.seed, validation)
    if len(terms) != len(config.combination):
        report.errors = [{"stage": "validation", "error": "InvalidSelfMap",
                          "message": "one or more symbols are not self-maps of the disk"}]
        report.timing = st.timing
        return report

    params = config.params
    spec = CombinationSpec(tuple(terms))
    thresholds = params.thresholds()
    verdicts = {}

    seq = st.run("power_sequence", power_sequence_p, spec, config.norm, params)
    if seq is not None:
        report.sequence = seq.to_dict()
        verdicts["power_sequence"] = {"verdict": seq.verdict.value, "norm": config.norm, "thresholds": thresholds}

    single = {}
    for _, sym in terms:
        if sym.text in single:
            continue
        if config.norm == "bloch":
            r = st.run(f"single:{sym.text}", single_compactness_bloch, sym, params)
        else:
            r = st.run(f"single:{sym.text}", single_compactness_hinf, sym, params)
        if r is not None:
            single[sym.text] = r.to_dict()
    verdicts["single"] = single

    samples = st.run("delta_sampling", lambda: sample_delta(default_paths(spec, params), spec, params))
    if samples is not None:
        pc = st.run("path_conditions", path_conditions, spec, params, samples)
        if pc is not None:
            report.path_conditions = pc.to_dict()
            verdicts["path_conditions"] = {k: {"verdict": v.value, "thresholds": thresholds}
                                           for k, v in pc.verdicts.items()}
            report.index_sets = [{"label": r["label"], **r["index_sets"]} for r in pc.per_path if "index_sets" in r]

    try:
        subset = subset_sum_check(spec.lambdas)
    except KTooLarge as e:
        subset = None
        st.errors.append({"stage": "structural", "error": "KTooLarge", "message": str(e)})
    if subset is not None:
        if subset.ok:
            cache = {}
            if config.norm == "bloch":
                cache = {("single", t): Verdict(d["verdict"]) for t, d in single.items()}
            sv = st.run("structural", structural_verdict, spec, params, cache)
            if sv is not None:
                report.structural = {"hypothesis": True, **sv.to_dict(), "thresholds": thresholds}
                verdicts["structural"] = {"verdict": sv.verdict.value, "thresholds": thresholds}
        else:
            err = HypothesisViolated("a proper subset of the scalars sums to 0", subset.witness)
            report.structural = {"hypothesis": False, "witness": list(subset.witness), "message": str(err)}

    if spec.k == 2 and abs(complex(spec.lambdas.sum())) > 1e-12:
        (l1, p1), (l2, p2) = spec.terms
        pair = st.run("pair_check", nonzero_sum_pair_check, l1, l2, p1, p2, params)
        if pair is not None:
            report.pair_check = {**pair.to_dict(), "thresholds": thresholds}

    if samples is not None:
        kind = "f" if config.norm == "bloch" else "g"
        frames = _frames(samples, spec, params, config.testfns.max_frames)
        cb = st.run("coefficient_bounds", _bounds, frames, kind, config.testfns)
        if cb is not None:
            report.coefficient_bounds = cb

    report.verdicts = verdicts
    report.errors = st.errors
    report.timing = st.timing
    report.__post_init__()
    return report
