"""Run configuration: schema, JSON (de)serialization and run assembly.

The file format is JSON with the nested layout

    {
      "n": 1,
      "grid": {"N": 256},
      "shape": {"kind": "perturbed", "r": 1.0, "eps": 0.1, "l": 2},
      "speed": {"family": "power", "alpha": 1.0},
      "engine": {"cfl": 0.4, "projection": true, "t_max": 10.0,
                 "conv_tol": 1e-9, "record_every": 50},
      "out_dir": "out",
      "seed": 0
    }

The schema is the contract, not the syntax; round-tripping a config
through to_dict/from_dict is field-identical.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .engine import EngineParams, FlowState
from .errors import ConfigError, NonConvexShape
from .shapes import make_shape
from .speeds import BUILTIN_FAMILIES, SpeedFunction


@dataclass
class ShapeSpec:
    kind: str
    r: float
    eps: float = 0.0
    l: int = 2
    width: float = 0.0


@dataclass
class SpeedSpec:
    family: str
    alpha: float | None = None
    terms: list | None = None  # list of {"a": .., "k": ..}


@dataclass
class RunConfig:
    """Everything a flow run needs; see the module docstring for the file
    layout. seed feeds any randomized shape option (reserved; the three
    built-in shapes are deterministic)."""

    n: int
    N: int
    shape: ShapeSpec
    speed: SpeedSpec
    engine: EngineParams = field(default_factory=EngineParams)
    out_dir: str = "out"
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "grid": {"N": self.N},
            "shape": asdict(self.shape),
            "speed": asdict(self.speed),
            "engine": asdict(self.engine),
            "out_dir": self.out_dir,
            "seed": self.seed,
        }


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def from_dict(data: dict) -> RunConfig:
    """Parse and validate a config dictionary."""
    try:
        n = int(data["n"])
        N = int(data["grid"]["N"])
        shape = ShapeSpec(**data["shape"])
        speed = SpeedSpec(**data["speed"])
        engine = EngineParams(**data.get("engine", {}))
        out_dir = str(data.get("out_dir", "out"))
        seed = int(data.get("seed", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    _require(n in (1, 2), f"n must be 1 or 2, got {n}")
    _require(N >= 16, f"grid.N must be >= 16, got {N}")
    _require(shape.kind in ("sphere", "perturbed", "bump"),
             f"unknown shape.kind {shape.kind!r}")
    _require(shape.r > 0, "shape.r must be positive")
    if shape.kind == "perturbed":
        _require(shape.eps > 0 and shape.l >= 1,
                 "perturbed shape needs eps > 0 and l >= 1")
    if shape.kind == "bump":
        _require(shape.eps > 0 and shape.width > 0,
                 "bump shape needs eps > 0 and width > 0")
    _require(speed.family in BUILTIN_FAMILIES,
             f"speed.family must be one of {sorted(BUILTIN_FAMILIES)}")
    _require(engine.conv_tol > 0, "engine.conv_tol must be positive")
    return RunConfig(n=n, N=N, shape=shape, speed=speed, engine=engine,
                     out_dir=out_dir, seed=seed)


def load_config(path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return from_dict(data)


def save_config(cfg: RunConfig, path) -> None:
    Path(path).write_text(json.dumps(cfg.to_dict(), indent=2) + "\n")


def build_speed(spec: SpeedSpec) -> SpeedFunction:
    """Instantiate the speed function named by a SpeedSpec."""
    family = BUILTIN_FAMILIES[spec.family]
    try:
        if spec.family in ("power", "power_log"):
            _require(spec.alpha is not None, f"{spec.family} needs speed.alpha")
            return family(spec.alpha)
        if spec.family == "power_sum":
            _require(bool(spec.terms), "power_sum needs speed.terms")
            return family([(t["a"], t["k"]) for t in spec.terms])
        return family()
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad speed spec: {exc}") from exc


def build_run(cfg: RunConfig):
    """Materialize (initial state, speed function, engine params).

    Shape convexity is a config invariant, so a nonconvex construction
    surfaces as ConfigError here.
    """
    f = build_speed(cfg.speed)
    try:
        graph = make_shape(
            cfg.n, cfg.N, cfg.shape.kind,
            r=cfg.shape.r, eps=cfg.shape.eps, l=cfg.shape.l,
            width=cfg.shape.width,
        )
    except NonConvexShape as exc:
        raise ConfigError(f"initial shape rejected: {exc}") from exc
    state = FlowState.initial(graph, f)
    return state, f, cfg.engine
