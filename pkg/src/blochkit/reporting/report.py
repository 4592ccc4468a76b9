"""Report container and its JSON, CSV and plot-data writers."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SCHEMA = "bloch-kit/1"
SECTIONS = ("config", "validation", "sequence", "verdicts", "index_sets", "path_conditions", "structural",
            "pair_check", "coefficient_bounds", "errors")


def to_plain(x):
    """Nested JSON-safe copy: complex -> [re, im], arrays -> lists, non-finite floats -> strings."""
    if isinstance(x, dict):
        return {str(k): to_plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return [to_plain(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [to_plain(float(x.real)), to_plain(float(x.imag))]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    return x


@dataclass
class Report:
    config: dict
    seed: int
    validation: list
    sequence: dict | None = None
    verdicts: dict | None = None
    index_sets: list | None = None
    path_conditions: dict | None = None
    structural: dict | None = None
    pair_check: dict | None = None
    coefficient_bounds: list | None = None
    errors: list = field(default_factory=list)
    timing: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in SECTIONS:
            setattr(self, name, to_plain(getattr(self, name)))

    def to_dict(self, timing=False):
        out = {"schema": SCHEMA, "seed": self.seed}
        for name in SECTIONS:
            out[name] = getattr(self, name)
        if timing:
            out["timing"] = dict(self.timing)
        return out

    @classmethod
    def from_dict(cls, data):
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        return cls(seed=data["seed"], timing=data.get("timing", {}), **{k: data.get(k) for k in SECTIONS})

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def sequence_rows(self):
        if not self.sequence:
            return []
        return list(enumerate(self.sequence["values"], start=1))


def csv_text(report):
    lines = ["n,s_n"]
    lines += [f"{n},{v:.17g}" for n, v in report.sequence_rows()]
    return "\n".join(lines) + "\n"


def plot_texts(report):
    """Two-column text blocks: s_n against n, and per-path residual tails against step."""
    sn = "# n s_n\n" + "".join(f"{n} {v:.17g}\n" for n, v in report.sequence_rows())
    blocks = []
    for rec in (report.path_conditions or {}).get("per_path", []):
        for j, tail in sorted(rec.get("cluster_residual_tail", {}).items()):
            rows = "".join(f"{s} {v:.17g}\n" for s, v in enumerate(tail))
            blocks.append(f"# {rec['label']} j={j}\n{rows}")
    return sn, "\n\n".join(blocks) + ("\n" if blocks else "")


def emit(report, out, formats=("json",)):
    """Write ``out`` + .json / .csv / .sn.dat and .residuals.dat; timing goes to .timing.json.  Returns paths."""
    base = Path(out)
    if base.suffix in (".json", ".csv"):
        base = base.with_suffix("")
    base.parent.mkdir(parents=True, exist_ok=True)
    written = []

    def put(path, text):
        path.write_text(text, encoding="utf-8")
        written.append(path)

    for fmt in formats:
        if fmt == "json":
            put(base.with_suffix(".json"), report.to_json())
            put(base.with_name(base.name + ".timing.json"), json.dumps(report.timing, indent=2, sort_keys=True) + "\n")
        elif fmt == "csv":
            put(base.with_suffix(".csv"), csv_text(report))
        elif fmt == "plot":
            sn, resid = plot_texts(report)
            put(base.with_name(base.name + ".sn.dat"), sn)
            put(base.with_name(base.name + ".residuals.dat"), resid)
        else:
            raise ValueError(f"unknown format {fmt!r}")
    return written
