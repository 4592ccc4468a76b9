"""TOML run configuration."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field, replace

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..combination import CombinationSpec
from ..diagnostics.sequence import Params
from ..errors import ConfigError, InvalidSelfMap, ParseError
from ..norms import Grid
from ..paths import APPROACHES, PathConfig
from ..symbols import compile_symbol

NORM_KINDS = ("bloch", "hinf")
FORMATS = ("json", "csv", "plot")


@dataclass(frozen=True)
class TestFnConfig:
    __test__ = False

    n_trunc: int = 4096
    n_head: int = 4
    max_frames: int = 8

    def describe(self):
        return {"n_trunc": self.n_trunc, "n_head": self.n_head, "max_frames": self.max_frames}


@dataclass(frozen=True)
class RunConfig:
    combination: tuple  # ((lambda, symbol text), ...)
    norm: str = "bloch"
    params: Params = field(default_factory=Params)
    seed: int = 0
    testfns: TestFnConfig = field(default_factory=TestFnConfig)
    out: str | None = None
    formats: tuple = ("json",)

    def spec(self):
        return CombinationSpec.of(*self.combination)

    def with_seed(self, seed):
        return replace(self, seed=int(seed), params=replace(self.params, paths=replace(self.params.paths, seed=int(seed))))

    def describe(self):
        p = self.params
        return {
            "combination": [{"lambda": [complex(l).real, complex(l).imag], "symbol": s} for l, s in self.combination],
            "norm": self.norm,
            "n_max": p.n_max,
            "grid": p.grid.describe(),
            "paths": p.paths.describe(),
            "tolerances": p.thresholds(),
            "testfns": self.testfns.describe(),
            "seed": self.seed,
        }


def _table(data, key):
    sub = data.get(key, {})
    if not isinstance(sub, dict):
        raise ConfigError(key, "expected a table")
    return sub


def _take(table, key, kind, prefix, default):
    if key not in table:
        return default
    v = table[key]
    if kind is float and isinstance(v, int) and not isinstance(v, bool):
        v = float(v)
    if not isinstance(v, kind) or isinstance(v, bool) and kind is not bool:
        raise ConfigError(f"{prefix}{key}", f"expected {kind.__name__}, got {type(v).__name__}")
    return v


def _positive(value, key):
    if not (value > 0 and math.isfinite(value)):
        raise ConfigError(key, "must be positive")
    return value


def _parse_lambda(raw, key):
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        lam = complex(raw)
    elif isinstance(raw, list) and len(raw) == 2 and all(isinstance(x, (int, float)) for x in raw):
        lam = complex(raw[0], raw[1])
    else:
        raise ConfigError(key, "lambda must be a number or [re, im]")
    if lam == 0:
        raise ConfigError(key, "scalars must be nonzero")
    return lam


def config_from_dict(data):
    """Validate a parsed TOML document and fill defaults."""
    terms = data.get("combination")
    if not isinstance(terms, list) or not terms:
        raise ConfigError("combination", "need a non-empty array of {lambda, symbol} tables")
    combo = []
    for i, t in enumerate(terms):
        key = f"combination[{i}]"
        if not isinstance(t, dict) or "lambda" not in t or "symbol" not in t:
            raise ConfigError(key, "each term needs 'lambda' and 'symbol'")
        lam = _parse_lambda(t["lambda"], f"{key}.lambda")
        text = t["symbol"]
        if not isinstance(text, str):
            raise ConfigError(f"{key}.symbol", "expected a string")
        try:
            compile_symbol(text)
        except ParseError as e:
            raise ConfigError(f"{key}.symbol", str(e)) from e
        except InvalidSelfMap as e:
            raise ConfigError(f"{key}.symbol", f"not a self-map of the disk: {e}") from e
        combo.append((lam, text))

    norm = data.get("norm", "bloch")
    if norm not in NORM_KINDS:
        raise ConfigError("norm", f"must be one of {NORM_KINDS}")
    n_max = data.get("n_max", Params.n_max)
    if not isinstance(n_max, int) or n_max < 8:
        raise ConfigError("n_max", "must be an integer >= 8")
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError("seed", "must be a nonnegative integer")

    g = _table(data, "grid")
    d = Grid()
    try:
        grid = Grid(
            radial=_take(g, "radial", int, "grid.", d.radial),
            angular=_take(g, "angular", int, "grid.", d.angular),
            max_exponent=_take(g, "max_exponent", float, "grid.", d.max_exponent),
            starts=_take(g, "starts", int, "grid.", d.starts),
        )
    except ValueError as e:
        raise ConfigError("grid", str(e)) from e

    pt = _table(data, "paths")
    dp = PathConfig()
    kinds = pt.get("kinds", [list(k) for k in dp.kinds])
    if not isinstance(kinds, list) or not kinds:
        raise ConfigError("paths.kinds", "need a non-empty array of [approach, parameter]")
    parsed_kinds = []
    for i, k in enumerate(kinds):
        if not (isinstance(k, list) and len(k) == 2 and k[0] in APPROACHES and isinstance(k[1], (int, float))):
            raise ConfigError(f"paths.kinds[{i}]", f"expected [approach, parameter] with approach in {APPROACHES}")
        parsed_kinds.append((k[0], float(k[1])))
    paths = PathConfig(
        n_points=_take(pt, "n_points", int, "paths.", dp.n_points),
        kinds=tuple(parsed_kinds),
        n_steps=_take(pt, "n_steps", int, "paths.", dp.n_steps),
        d_max=_positive(_take(pt, "d_max", float, "paths.", dp.d_max), "paths.d_max"),
        d_min=_positive(_take(pt, "d_min", float, "paths.", dp.d_min), "paths.d_min"),
        touch_points=_take(pt, "touch_points", bool, "paths.", dp.touch_points),
        max_touch=_take(pt, "max_touch", int, "paths.", dp.max_touch),
        random_points=_take(pt, "random_points", int, "paths.", dp.random_points),
        seed=seed,
    )
    if paths.n_steps < 4 or paths.n_points < 1 or not paths.d_min < paths.d_max < 1:
        raise ConfigError("paths", "need n_steps >= 4, n_points >= 1 and 0 < d_min < d_max < 1")

    tol = _table(data, "tolerances")
    dflt = Params()
    tols = {}
    for name, attr in (("zero", "tol_zero"), ("one", "tol_one"), ("conv", "conv_tol"), ("eq", "eq_tol"),
                       ("tail_fraction", "tail_fraction")):
        tols[attr] = _positive(_take(tol, name, float, "tolerances.", getattr(dflt, attr)), f"tolerances.{name}")
    if tols["tail_fraction"] > 1:
        raise ConfigError("tolerances.tail_fraction", "must lie in (0, 1]")
    params = Params(grid=grid, n_max=n_max, paths=paths, **tols)

    tf = _table(data, "testfns")
    dt = TestFnConfig()
    testfns = TestFnConfig(
        n_trunc=_take(tf, "n_trunc", int, "testfns.", dt.n_trunc),
        n_head=_take(tf, "n_head", int, "testfns.", dt.n_head),
        max_frames=_take(tf, "max_frames", int, "testfns.", dt.max_frames),
    )
    if not 1 <= testfns.n_head <= testfns.n_trunc <= 10_000:
        raise ConfigError("testfns", "need 1 <= n_head <= n_trunc <= 10000")

    out = _table(data, "output")
    path = out.get("path")
    formats = out.get("formats", ["json"])
    if not isinstance(formats, list) or any(f not in FORMATS for f in formats):
        raise ConfigError("output.formats", f"entries must be among {FORMATS}")
    return RunConfig(tuple(combo), norm, params, seed, testfns, path, tuple(formats))


def load_config(path):
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError as e:
        raise ConfigError("", f"no such file: {path}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError("", f"malformed TOML: {e}") from e
    return config_from_dict(data)


def loads_config(text):
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError("", f"malformed TOML: {e}") from e
    return config_from_dict(data)
