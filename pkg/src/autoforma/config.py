"""JSON experiment configuration.

Example::

    {
      "nu": "pi/2", "mu": "pi/2",
      "lattice": {"omega1": [1, 0], "omega2": [0, 1]},
      "tau": {"c": [1, 0], "d": [0, 0], "e": [0.5, 0]},
      "series": {"tol": 1e-10, "max_radius": 50},
      "probes": {"count": 50, "rng_seed": 0, "box": 3.0},
      "grid": {"nx": 32, "ny": 32}
    }

Any number may be written as an arithmetic expression in ``pi`` such as
``"pi/2"`` or ``"3*pi/4"``.
"""
from __future__ import annotations

import ast
import json
import math
import operator
from dataclasses import asdict, dataclass
from pathlib import Path

from .errors import AutoformaError
from .lattice import DEGENERACY_TOL


class ConfigError(AutoformaError):
    pass


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
        return _UNOPS[type(node.op)](_eval_node(node.operand))
    raise ValueError("only numbers, 'pi' and + - * / ** are allowed")


def parse_real(value, field: str) -> float:
    """A JSON number, or a string expression such as ``"pi/2"``; ``pi`` is ``math.pi``."""
    if isinstance(value, bool):
        raise ValidationError(field, "expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(_eval_node(ast.parse(value.strip(), mode="eval")))
        except (SyntaxError, ValueError, ZeroDivisionError, OverflowError) as exc:
            raise ParseError(f"{field}: cannot evaluate {value!r} ({exc})") from None
    raise ValidationError(field, f"expected a number or pi-expression, got {type(value).__name__}")


def parse_complex(value, field: str) -> complex:
    if not (isinstance(value, list) and len(value) == 2):
        raise ValidationError(field, "expected a [re, im] pair")
    return complex(parse_real(value[0], f"{field}[0]"), parse_real(value[1], f"{field}[1]"))


@dataclass(frozen=True)
class ExperimentConfig:
    nu: float
    mu: float
    omega1: complex
    omega2: complex
    c: complex = 1.0
    d: complex = 0.0
    e: complex = 0.0
    tol: float = 1e-10
    max_radius: float = 50.0
    probe_count: int = 50
    rng_seed: int = 0
    box: float = 3.0
    nx: int = 32
    ny: int = 32

    def to_dict(self) -> dict:
        pair = lambda z: [z.real, z.imag]  # noqa: E731
        return {
            "nu": self.nu,
            "mu": self.mu,
            "lattice": {"omega1": pair(self.omega1), "omega2": pair(self.omega2)},
            "tau": {"c": pair(self.c), "d": pair(self.d), "e": pair(self.e)},
            "series": {"tol": self.tol, "max_radius": self.max_radius},
            "probes": {"count": self.probe_count, "rng_seed": self.rng_seed, "box": self.box},
            "grid": {"nx": self.nx, "ny": self.ny},
        }

    def replace(self, **changes) -> ExperimentConfig:
        data = asdict(self)
        data.update(changes)
        return validate(ExperimentConfig(**data))


_SECTIONS = {"nu", "mu", "lattice", "tau", "series", "probes", "grid"}


def _section(raw: dict, key: str, allowed: set) -> dict:
    sec = raw.get(key, {})
    if not isinstance(sec, dict):
        raise ValidationError(key, "expected an object")
    unknown = set(sec) - allowed
    if unknown:
        raise ValidationError(f"{key}.{sorted(unknown)[0]}", "unknown field")
    return sec


def _int(value, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(field, f"expected an integer, got {value!r}")
    return value


def from_dict(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ValidationError("<root>", "expected a JSON object")
    unknown = set(raw) - _SECTIONS
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown field")
    for key in ("nu", "mu", "lattice", "tau"):
        if key not in raw:
            raise ValidationError(key, "missing required field")
    lat = _section(raw, "lattice", {"omega1", "omega2"})
    tau = _section(raw, "tau", {"c", "d", "e"})
    series = _section(raw, "series", {"tol", "max_radius"})
    probes = _section(raw, "probes", {"count", "rng_seed", "box"})
    grid = _section(raw, "grid", {"nx", "ny"})
    for key in ("omega1", "omega2"):
        if key not in lat:
            raise ValidationError(f"lattice.{key}", "missing required field")
    if "c" not in tau:
        raise ValidationError("tau.c", "missing required field")
    cfg = ExperimentConfig(
        nu=parse_real(raw["nu"], "nu"),
        mu=parse_real(raw["mu"], "mu"),
        omega1=parse_complex(lat["omega1"], "lattice.omega1"),
        omega2=parse_complex(lat["omega2"], "lattice.omega2"),
        c=parse_complex(tau["c"], "tau.c"),
        d=parse_complex(tau.get("d", [0, 0]), "tau.d"),
        e=parse_complex(tau.get("e", [0, 0]), "tau.e"),
        tol=parse_real(series.get("tol", 1e-10), "series.tol"),
        max_radius=parse_real(series.get("max_radius", 50.0), "series.max_radius"),
        probe_count=_int(probes.get("count", 50), "probes.count"),
        rng_seed=_int(probes.get("rng_seed", 0), "probes.rng_seed"),
        box=parse_real(probes.get("box", 3.0), "probes.box"),
        nx=_int(grid.get("nx", 32), "grid.nx"),
        ny=_int(grid.get("ny", 32), "grid.ny"),
    )
    return validate(cfg)


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    for name in ("nu", "mu"):
        v = getattr(cfg, name)
        if not (math.isfinite(v) and v > 0):
            raise ValidationError(name, f"must be a positive real, got {v!r}")
    for name in ("omega1", "omega2", "c", "d", "e"):
        v = getattr(cfg, name)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValidationError(name, "must be finite")
    if abs((cfg.omega1.conjugate() * cfg.omega2).imag) <= DEGENERACY_TOL:
        raise ValidationError("lattice", "omega1 and omega2 are collinear")
    if not (0 < cfg.tol <= 1e-4):
        raise ValidationError("series.tol", f"must lie in (0, 1e-4], got {cfg.tol!r}")
    if not (cfg.max_radius > 0 and math.isfinite(cfg.max_radius)):
        raise ValidationError("series.max_radius", "must be a positive real")
    if cfg.probe_count < 1:
        raise ValidationError("probes.count", "must be at least 1")
    if not (cfg.box > 0 and math.isfinite(cfg.box)):
        raise ValidationError("probes.box", "must be a positive real")
    if cfg.nx < 1 or cfg.ny < 1:
        raise ValidationError("grid", "nx and ny must be at least 1")
    return cfg


def load_config(path) -> ExperimentConfig:
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(raw)
