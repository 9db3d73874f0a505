"""Bundled scenarios and the INI scenario format.

A scenario file is plain ``key = value`` text::

    [scenario]
    name = my-circle
    seed = 0

    [metric]
    name = flat
    dim = 2

    [curve]
    name = circle
    radius = 2

    [window]
    t_lo = 1e-3
    t_hi = 0.0316
    t_n = 12

    [run]
    suites = k-slope, normal-form

Values are Python literals where they parse as such, strings otherwise.
"""

from __future__ import annotations

import ast
import configparser
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import curves as C
from .curves import Curve, VState
from .fg import X_MAX
from .geodesic import state_from_jet
from .metric import GeometryError, MetricField
from .registry import make_metric
from .surface import HemisphereSurface, Surface, surface_jet

__all__ = ["ConfigError", "Scenario", "BUNDLED", "CURVES", "get_scenario", "load_scenario",
           "parse_scenario", "scenario_names"]


class ConfigError(GeometryError):
    """Malformed scenario file; carries the offending line where known."""

    def __init__(self, msg, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {msg}" if where else msg)
        self.line, self.field = line, field


CURVES = {
    "line": C.line,
    "circle": C.circle,
    "conformal-circle": C.conformal_circle,
    "parabola": C.parabola,
    "great-circle": C.polar_great_circle,
}


@dataclass
class Scenario:
    name: str
    metric: str = "flat"
    metric_params: dict = field(default_factory=lambda: {"dim": 2})
    curve: str = "circle"
    curve_params: dict = field(default_factory=dict)
    exact_surface: str | None = None
    # expected order of |K| decay: 3 for conformal circles, 2 otherwise
    k_order: int = 3
    integrate: bool = True
    ds: float = 1e-3
    s_span: float = 2 * np.pi
    t_window: tuple = (1e-3, 10**-1.5, 12)
    eps_window: tuple = (1e-3, 1e-2, 10)
    T: float | None = None
    x_max: float = X_MAX
    resolution: int = 256
    suites: tuple = ("all",)
    seed: int = 0
    out_dir: str = "out"

    def validate(self):
        lo, hi, n = self.t_window
        if not 0 < lo < hi:
            raise ConfigError("t-window must satisfy 0 < t_lo < t_hi", field="t_lo")
        if int(n) < 6:
            raise ConfigError("t-window needs at least 6 samples", field="t_n")
        if np.log10(hi / lo) < 1.5 - 1e-9:
            raise ConfigError("t-window must span at least 1.5 decades", field="t_hi")
        e0, e1, ne = self.eps_window
        if not 0 < e0 < e1:
            raise ConfigError("ε-window must satisfy 0 < eps_lo < eps_hi", field="eps_lo")
        if int(ne) < 4:
            raise ConfigError("ε-window needs at least 4 samples", field="eps_n")
        if not 0 < self.x_max <= 1:
            raise ConfigError("x_max must lie in (0, 1]", field="x_max")
        if self.exact_surface is None and hi * 1.1 > self.x_max:
            raise ConfigError("t-window exceeds the validity bound x_max", field="t_hi")
        T = self.cap
        if not e1 < T <= self.x_max:
            raise ConfigError("need eps_hi < T <= x_max", field="T")
        if not self.ds > 0:
            raise ConfigError("Δs must be positive", field="ds")
        if self.exact_surface not in (None, "hemisphere"):
            raise ConfigError(f"unknown exact surface {self.exact_surface!r}", field="exact_surface")
        if self.curve not in CURVES:
            raise ConfigError(f"unknown curve {self.curve!r}; known: {sorted(CURVES)}",
                              field="curve")
        self.build_metric()
        return self

    @property
    def cap(self) -> float:
        return 0.5 * self.x_max if self.T is None else float(self.T)

    @property
    def t_values(self) -> np.ndarray:
        lo, hi, n = self.t_window
        return np.logspace(np.log10(lo), np.log10(hi), int(n))

    @property
    def eps_values(self) -> np.ndarray:
        lo, hi, n = self.eps_window
        return np.logspace(np.log10(lo), np.log10(hi), int(n))

    def build_metric(self) -> MetricField:
        try:
            return make_metric(self.metric, **self.metric_params)
        except TypeError as exc:
            raise ConfigError(str(exc), field="metric") from None
        except GeometryError as exc:
            raise ConfigError(str(exc), field="metric") from None

    def build_curve(self) -> Curve:
        try:
            return CURVES[self.curve](**self.curve_params)
        except TypeError as exc:
            raise ConfigError(str(exc), field="curve") from None

    def initial_state(self, m: MetricField | None = None) -> VState:
        m = self.build_metric() if m is None else m
        c = self.build_curve()
        return state_from_jet(m, c.jet(c.s_range[0]))

    def build_surface(self, m: MetricField | None = None, v_offset=None) -> Surface:
        if self.exact_surface == "hemisphere":
            return HemisphereSurface()
        m = self.build_metric() if m is None else m
        return surface_jet(m, self.build_curve(), v_offset=v_offset,
                           resolution=self.resolution, x_max=self.x_max)

    def to_dict(self):
        d = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "out_dir"}
        d["t_window"], d["eps_window"], d["suites"] = (list(self.t_window),
                                                       list(self.eps_window), list(self.suites))
        return d


BUNDLED = {
    "flat-line": Scenario("flat-line", curve="line", curve_params={"s_range": (-1.0, 1.0)},
                          integrate=True, s_span=2.0),
    "flat-circle": Scenario("flat-circle"),
    "flat-parabola": Scenario("flat-parabola", curve="parabola", k_order=2, integrate=False),
    "sphere-great-circle": Scenario("sphere-great-circle", metric="round-sphere",
                                    metric_params={"dim": 3}, curve="great-circle"),
    "conformally-flat-circle": Scenario("conformally-flat-circle", metric="conformally-flat",
                                        metric_params={"dim": 2, "factor": "linear"},
                                        curve="circle", T=0.15),
    "hemisphere-exact": Scenario("hemisphere-exact", exact_surface="hemisphere",
                                 x_max=1.0, T=1.0, integrate=False,
                                 suites=("area",)),
}


def scenario_names():
    return list(BUNDLED)


def get_scenario(name: str, **overrides) -> Scenario:
    """A bundled scenario by name, or a scenario file if ``name`` is a path."""
    if name in BUNDLED:
        sc = replace(BUNDLED[name], **overrides)
    elif Path(name).suffix in (".ini", ".cfg") or Path(name).is_file():
        sc = replace(load_scenario(name), **overrides)
    else:
        raise ConfigError(f"unknown scenario {name!r}; bundled: {scenario_names()}")
    return sc.validate()


def _literal(raw: str):
    try:
        return ast.literal_eval(raw)
    except (ValueError, SyntaxError):
        return raw.strip()


def _line_of(text: str, section: str, key: str | None):
    """Best-effort line number of ``key`` inside ``[section]``."""
    current = None
    for i, line in enumerate(text.splitlines(), 1):
        m = re.match(r"\s*\[([^\]]+)\]", line)
        if m:
            current = m.group(1).strip()
            if key is None and current == section:
                return i
            continue
        if current == section and key is not None and re.match(rf"\s*{re.escape(key)}\s*[=:]", line):
            return i
    return None


_WINDOW_KEYS = {
    "t_lo": ("t_window", 0), "t_hi": ("t_window", 1), "t_n": ("t_window", 2),
    "eps_lo": ("eps_window", 0), "eps_hi": ("eps_window", 1), "eps_n": ("eps_window", 2),
}
_SCALAR_KEYS = {"ds", "s_span", "T", "x_max", "resolution", "k_order", "integrate", "seed",
                "out_dir", "exact_surface", "name"}


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0], line=getattr(exc, "lineno", None)) from None

    known = {"scenario", "metric", "curve", "window", "run"}
    for sec in cp.sections():
        if sec not in known:
            raise ConfigError(f"unknown section [{sec}]", line=_line_of(text, sec, None))

    kw: dict = {}
    windows = {"t_window": list(Scenario.t_window), "eps_window": list(Scenario.eps_window)}

    def put(sec, key, raw):
        val = _literal(raw)
        if key in _WINDOW_KEYS:
            w, i = _WINDOW_KEYS[key]
            if not isinstance(val, (int, float)) or isinstance(val, bool):
                raise ConfigError(f"expected a number, got {raw!r}", _line_of(text, sec, key), key)
            windows[w][i] = val
        elif key in _SCALAR_KEYS:
            kw[key] = val
        else:
            raise ConfigError("unknown key", _line_of(text, sec, key), key)

    for sec in ("scenario", "window"):
        if cp.has_section(sec):
            for key, raw in cp.items(sec):
                put(sec, key, raw)
    for sec, tag in (("metric", "metric"), ("curve", "curve")):
        if cp.has_section(sec):
            params = {k: _literal(v) for k, v in cp.items(sec) if k != "name"}
            if "name" in cp[sec]:
                kw[tag] = cp[sec]["name"].strip()
            kw[f"{tag}_params"] = params
    if cp.has_section("run"):
        for key, raw in cp.items("run"):
            if key == "suites":
                kw["suites"] = tuple(x.strip() for x in raw.split(",") if x.strip())
            else:
                put("run", key, raw)

    kw["t_window"] = tuple(windows["t_window"])
    kw["eps_window"] = tuple(windows["eps_window"])
    kw.setdefault("name", Path(source).stem if source != "<string>" else "custom")
    sc = Scenario(**kw)
    try:
        return sc.validate()
    except ConfigError as exc:
        if exc.line is None and exc.field is not None:
            sec = {"metric": "metric", "curve": "curve"}.get(exc.field, None)
            line = _line_of(text, sec, "name") if sec else None
            if line is None:
                for s in ("window", "scenario", "run"):
                    line = line or _line_of(text, s, exc.field)
            raise ConfigError(str(exc).split(": ", 1)[-1], line, exc.field) from None
        raise


def load_scenario(path) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file: {exc}") from None
    return parse_scenario(text, source=str(p))
