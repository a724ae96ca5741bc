"""JSON run configuration for the command-line tools.

Example::

    {
      "schema": "monopole-vdim/1",
      "components": [
        {"genus": 1, "charge": 1, "metric": {"type": "torus", "lattice": [[6.283185307179586, 0], [0, 6.283185307179586]]}}
      ],
      "alpha": -0.3,
      "root_cutoff": 2.5,
      "ricci_nonnegative": false
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .boundary import BoundarySurface, FlatTorus, MeshMetric, RoundSphere, SurfaceComponent

SCHEMA = "monopole-vdim/1"
TOP_KEYS = {"schema", "components", "alpha", "root_cutoff", "ricci_nonnegative", "output", "beta", "k"}
COMPONENT_KEYS = {"genus", "charge", "metric", "area_scale"}
METRIC_KEYS = {"sphere": {"type", "radius"}, "torus": {"type", "lattice"}, "mesh": {"type", "path"}}


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


@dataclass(frozen=True)
class RunConfig:
    surface: BoundarySurface
    alpha: float | None = None
    root_cutoff: float = 2.5
    ricci_nonnegative: bool = False
    output: str | None = None
    beta: float | None = None
    k: int | None = None
    source: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.alpha is not None and not math.isfinite(self.alpha):
            raise ConfigError("alpha must be finite")
        if not self.root_cutoff >= 1.5:
            raise ConfigError(f"root_cutoff must be >= 1.5, got {self.root_cutoff}")


def _line_of(text: str, needle: str) -> int | None:
    for lineno, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return lineno
    return None


def _fail(text: str, key: str, message: str):
    line = _line_of(text, f'"{key}"') if key else None
    where = f"line {line}: " if line else ""
    raise ConfigError(f"{where}{message}")


def _reject_unknown(text: str, obj: dict, allowed: set, context: str):
    unknown = sorted(set(obj) - allowed)
    if unknown:
        _fail(text, unknown[0], f"unknown key {unknown[0]!r} in {context}")


def _number(text, obj, key, kind=float, default=None, required=False):
    if key not in obj:
        if required:
            raise ConfigError(f"missing required key {key!r}")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(text, key, f"{key!r} must be a number, got {value!r}")
    if kind is int and int(value) != value:
        _fail(text, key, f"{key!r} must be an integer, got {value!r}")
    return kind(value)


def _metric(text: str, spec, base: Path):
    if not isinstance(spec, dict) or "type" not in spec:
        _fail(text, "metric", "metric must be an object with a 'type'")
    kind = spec["type"]
    if kind not in METRIC_KEYS:
        _fail(text, "type", f"unknown metric type {kind!r}; use sphere, torus or mesh")
    _reject_unknown(text, spec, METRIC_KEYS[kind], f"{kind} metric")
    if kind == "sphere":
        return RoundSphere(_number(text, spec, "radius", default=1.0))
    if kind == "torus":
        lattice = spec.get("lattice", [[2 * math.pi, 0.0], [0.0, 2 * math.pi]])
        return FlatTorus(tuple(tuple(row) for row in lattice))
    path = Path(spec.get("path", ""))
    if not path.is_absolute():
        path = base / path
    return MeshMetric(str(path))


def parse_config(text: str, base: Path | str = ".") -> RunConfig:
    """Parse and validate a configuration string."""
    base = Path(base)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("line 1: configuration must be a JSON object")
    _reject_unknown(text, data, TOP_KEYS, "configuration")
    if data.get("schema") != SCHEMA:
        _fail(text, "schema", f"schema must be {SCHEMA!r}, got {data.get('schema')!r}")
    comps = data.get("components")
    if not isinstance(comps, list) or not comps:
        _fail(text, "components", "at least one boundary component is required")
    components = []
    for comp in comps:
        if not isinstance(comp, dict):
            _fail(text, "components", "each component must be an object")
        _reject_unknown(text, comp, COMPONENT_KEYS, "component")
        try:
            components.append(SurfaceComponent(
                genus=_number(text, comp, "genus", int, required=True),
                charge=_number(text, comp, "charge", int, default=0),
                metric=_metric(text, comp.get("metric", {"type": "sphere"}), base),
                area_scale=_number(text, comp, "area_scale", default=1.0),
            ))
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    ricci = data.get("ricci_nonnegative", False)
    if not isinstance(ricci, bool):
        _fail(text, "ricci_nonnegative", "ricci_nonnegative must be true or false")
    output = data.get("output")
    if output is not None and not isinstance(output, str):
        _fail(text, "output", "output must be a path prefix string")
    return RunConfig(
        surface=BoundarySurface(tuple(components)),
        alpha=_number(text, data, "alpha"),
        root_cutoff=_number(text, data, "root_cutoff", default=2.5),
        ricci_nonnegative=ricci,
        output=output,
        beta=_number(text, data, "beta"),
        k=_number(text, data, "k", int),
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    cfg = parse_config(text, path.parent)
    return RunConfig(cfg.surface, cfg.alpha, cfg.root_cutoff, cfg.ricci_nonnegative,
                     cfg.output, cfg.beta, cfg.k, str(path))
