"""Run configuration: defaults, flat key=value files, overrides.

The file format is plain text, one ``section.key = value`` per line,
``#`` comments allowed.  Parsing a serialized configuration reproduces
it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

import numpy as np

from .bfgs import OptimizerConfig
from .objective import ObjectiveConfig

DEFAULT_OMEGA0 = ((-1.0, 0.0), (0.5, 0.75), (0.5, -1.5))
DEFAULT_PSI = (-0.3, 0.25, -0.05)  # c1 (x^2 + (y - c2)^2) + c3


@dataclass(frozen=True)
class RunConfig:
    radius: float = 1.75
    mesh_h: float = 0.05
    omega0: tuple = DEFAULT_OMEGA0
    load_const: float = -10.0
    psi_coeffs: tuple = DEFAULT_PSI
    n_control: int = 30
    a0: tuple = (2.0,)          # one value = uniform initial control
    u_min: float = 0.01
    u_max: float = 10.0
    beta: float = 1e-3
    eps: float = 1e-3
    gamma: float = 1e-3
    variant: str = "weak_wolfe"
    max_feval: int = 400
    grad_tol: float = 1e-6
    c1: float = 1e-4
    c2: float | None = None
    init_step: float = 1.0
    seed: int = 0
    out_dir: str = "runs/out"

    def psi_callable(self):
        c1, c2, c3 = self.psi_coeffs
        return lambda p: c1 * (p[:, 0] ** 2 + (p[:, 1] - c2) ** 2) + c3

    def initial_control(self) -> np.ndarray:
        a = np.asarray(self.a0, dtype=float)
        if len(a) == 1:
            return np.full(self.n_control, a[0])
        if len(a) != self.n_control:
            raise ValueError(f"a0 has {len(a)} values, expected 1 or {self.n_control}")
        return a

    def objective_config(self) -> ObjectiveConfig:
        return ObjectiveConfig(beta=self.beta, eps=self.eps, gamma=self.gamma,
                               u_min=self.u_min, u_max=self.u_max)

    def optimizer_config(self, variant: str | None = None) -> OptimizerConfig:
        return OptimizerConfig(variant=variant or self.variant,
                               max_feval=self.max_feval, grad_tol=self.grad_tol,
                               c1=self.c1, c2=self.c2, init_step=self.init_step)


_KEYMAP = {
    "geometry.radius": "radius",
    "geometry.omega0": "omega0",
    "mesh.h": "mesh_h",
    "physics.load": "load_const",
    "physics.psi": "psi_coeffs",
    "control.n": "n_control",
    "control.a0": "a0",
    "control.u_min": "u_min",
    "control.u_max": "u_max",
    "objective.beta": "beta",
    "objective.eps": "eps",
    "objective.gamma": "gamma",
    "optimizer.variant": "variant",
    "optimizer.max_feval": "max_feval",
    "optimizer.grad_tol": "grad_tol",
    "optimizer.c1": "c1",
    "optimizer.c2": "c2",
    "optimizer.init_step": "init_step",
    "run.seed": "seed",
    "run.out_dir": "out_dir",
}
_FIELDMAP = {v: k for k, v in _KEYMAP.items()}


def _format_value(name, value):
    if value is None:
        return "none"
    if name == "omega0":
        return " ; ".join(f"{repr(float(x))},{repr(float(y))}" for x, y in value)
    if name in ("psi_coeffs", "a0"):
        return ",".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_value(name, text):
    text = text.strip()
    if name == "omega0":
        pts = []
        for chunk in text.split(";"):
            x, y = (float(v) for v in chunk.split(","))
            pts.append((x, y))
        return tuple(pts)
    if name in ("psi_coeffs", "a0"):
        return tuple(float(v) for v in text.split(","))
    if name == "variant":
        return text
    if name == "out_dir":
        return text
    if name in ("n_control", "max_feval", "seed"):
        return int(text)
    if name == "c2":
        return None if text.lower() == "none" else float(text)
    return float(text)


def serialize_config(cfg: RunConfig) -> str:
    lines = []
    for f in fields(cfg):
        lines.append(f"{_FIELDMAP[f.name]} = {_format_value(f.name, getattr(cfg, f.name))}")
    return "\n".join(lines) + "\n"


def parse_config_text(text: str, base: RunConfig | None = None) -> RunConfig:
    cfg = base or RunConfig()
    updates = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _KEYMAP:
            raise ValueError(f"config line {lineno}: unknown key '{key}'")
        name = _KEYMAP[key]
        try:
            updates[name] = _parse_value(name, val)
        except Exception as exc:
            raise ValueError(f"config line {lineno}: bad value for '{key}': {exc}") from None
    return replace(cfg, **updates)


def load_config(path, base: RunConfig | None = None) -> RunConfig:
    with open(path) as fh:
        return parse_config_text(fh.read(), base)


def apply_overrides(cfg: RunConfig, pairs: list[str]) -> RunConfig:
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"override '{pair}' must look like key=value")
        key, _, val = pair.partition("=")
        key = key.strip()
        if key not in _KEYMAP:
            raise ValueError(f"unknown config key '{key}'")
        name = _KEYMAP[key]
        cfg = replace(cfg, **{name: _parse_value(name, val)})
    return cfg
