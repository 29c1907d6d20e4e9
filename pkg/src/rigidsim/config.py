"""Scenario configuration: strict JSON schema, validation, and round-trip.

A scenario is a single JSON document with a ``version`` field. Unknown keys
are rejected at every level so golden files stay unambiguous. The formation
comes either from a named preset or from an inline graph; initial positions
are either explicit or a seeded perturbation of the preset coordinates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import presets
from .dynamics import IntegratorConfig
from .errors import ParseError, ValidationError
from .graphs import FormationGraph, Framework
from .quantizers import QuantizerSpec

CONFIG_VERSION = 1


@dataclass(frozen=True)
class PerturbationSpec:
    """Seeded displacement applied to preset coordinates."""

    seed: int = presets.DEFAULT_SEED
    magnitude: float = presets.DEFAULT_MAGNITUDE

    def __post_init__(self):
        if int(self.seed) != self.seed or not (0 <= self.seed < 2**64):
            raise ValidationError(
                f"seed must be an unsigned 64-bit integer, got {self.seed}"
            )
        if not (np.isfinite(self.magnitude) and self.magnitude >= 0.0):
            raise ValidationError(f"magnitude must be >= 0, got {self.magnitude}")


@dataclass(frozen=True)
class SimulationConfig:
    """Everything needed to reproduce a run byte-for-byte."""

    quantizer: QuantizerSpec
    integrator: IntegratorConfig
    preset: str | None = None
    graph: FormationGraph | None = None
    initial_positions: tuple[tuple[float, ...], ...] | None = None
    perturbation: PerturbationSpec | None = None
    convergence_tol: float = 1e-6
    decimation: int = 1
    output_prefix: str = "run"
    version: int = CONFIG_VERSION

    def __post_init__(self):
        if self.version != CONFIG_VERSION:
            raise ValidationError(
                f"unsupported config version {self.version}; expected {CONFIG_VERSION}"
            )
        if (self.preset is None) == (self.graph is None):
            raise ValidationError("exactly one of 'preset' or 'graph' is required")
        if self.preset is not None and self.preset not in presets.PRESETS:
            raise ValidationError(
                f"unknown preset {self.preset!r}; expected one of {presets.PRESETS}"
            )
        if (self.initial_positions is None) == (self.perturbation is None):
            raise ValidationError(
                "exactly one of 'initial_positions' or 'perturbation' is required"
            )
        if self.perturbation is not None and self.preset is None:
            raise ValidationError("'perturbation' requires a preset")
        if not (np.isfinite(self.convergence_tol) and self.convergence_tol > 0.0):
            raise ValidationError(
                f"convergence_tol must be > 0, got {self.convergence_tol}"
            )
        if int(self.decimation) != self.decimation or self.decimation < 1:
            raise ValidationError(
                f"decimation must be a positive integer, got {self.decimation}"
            )
        if self.initial_positions is not None:
            pos = tuple(tuple(float(v) for v in row) for row in self.initial_positions)
            object.__setattr__(self, "initial_positions", pos)

    def resolve_graph(self) -> FormationGraph:
        if self.graph is not None:
            return self.graph
        return presets.preset_graph(self.preset)

    def build_framework(self) -> tuple[Framework, int]:
        """Resolve initial positions into a validated framework.

        Returns the framework and the number of perturbation retries used
        (zero for explicit positions).
        """
        graph = self.resolve_graph()
        if self.initial_positions is not None:
            return Framework(graph, np.array(self.initial_positions, dtype=float)), 0
        return presets.perturbed_framework(
            self.preset, seed=self.perturbation.seed, magnitude=self.perturbation.magnitude
        )


def _take(mapping: dict, allowed: dict, context: str) -> dict:
    """Pop known keys with defaults; reject anything left over."""
    if not isinstance(mapping, dict):
        raise ValidationError(f"{context}: expected an object, got {type(mapping).__name__}")
    out = {}
    extra = set(mapping) - set(allowed)
    if extra:
        raise ValidationError(f"{context}: unknown field(s) {sorted(extra)}")
    for key, default in allowed.items():
        out[key] = mapping.get(key, default)
    return out


_MISSING = object()


def config_from_dict(doc: dict) -> SimulationConfig:
    """Validate a parsed JSON document into a SimulationConfig."""
    top = _take(
        doc,
        {
            "version": _MISSING,
            "preset": None,
            "graph": None,
            "initial_positions": None,
            "perturbation": None,
            "quantizer": _MISSING,
            "integrator": None,
            "convergence_tol": 1e-6,
            "decimation": 1,
            "output_prefix": "run",
        },
        "config",
    )
    if top["version"] is _MISSING:
        raise ValidationError("config: missing required field 'version'")
    if top["quantizer"] is _MISSING:
        raise ValidationError("config: missing required field 'quantizer'")

    graph = None
    if top["graph"] is not None:
        gd = _take(
            top["graph"],
            {"vertices": _MISSING, "edges": _MISSING, "desired": _MISSING, "dim": _MISSING},
            "graph",
        )
        for key, val in gd.items():
            if val is _MISSING:
                raise ValidationError(f"graph: missing required field {key!r}")
        graph = FormationGraph(
            n=int(gd["vertices"]),
            edges=tuple(tuple(int(v) for v in e) for e in gd["edges"]),
            desired=tuple(float(d) for d in gd["desired"]),
            dim=int(gd["dim"]),
        )

    perturbation = None
    if top["perturbation"] is not None:
        pd = _take(
            top["perturbation"],
            {"seed": presets.DEFAULT_SEED, "magnitude": presets.DEFAULT_MAGNITUDE},
            "perturbation",
        )
        perturbation = PerturbationSpec(seed=int(pd["seed"]), magnitude=float(pd["magnitude"]))

    qd = _take(
        top["quantizer"],
        {"kind": _MISSING, "gain": 0.5, "hysteresis": 0.0},
        "quantizer",
    )
    if qd["kind"] is _MISSING:
        raise ValidationError("quantizer: missing required field 'kind'")
    quantizer = QuantizerSpec(
        kind=str(qd["kind"]), gain=float(qd["gain"]), hysteresis=float(qd["hysteresis"])
    )

    i_doc = top["integrator"] if top["integrator"] is not None else {}
    i_fields = _take(
        i_doc, {"step": 1e-3, "duration": 50.0, "method": "euler"}, "integrator"
    )
    integrator = IntegratorConfig(
        step=float(i_fields["step"]),
        duration=float(i_fields["duration"]),
        method=str(i_fields["method"]),
    )

    initial_positions = None
    if top["initial_positions"] is not None:
        initial_positions = tuple(
            tuple(float(v) for v in row) for row in top["initial_positions"]
        )

    return SimulationConfig(
        version=int(top["version"]),
        preset=top["preset"],
        graph=graph,
        initial_positions=initial_positions,
        perturbation=perturbation,
        quantizer=quantizer,
        integrator=integrator,
        convergence_tol=float(top["convergence_tol"]),
        decimation=int(top["decimation"]),
        output_prefix=str(top["output_prefix"]),
    )


def config_to_dict(cfg: SimulationConfig) -> dict:
    """Inverse of ``config_from_dict`` (round-trips exactly)."""
    out: dict = {"version": cfg.version}
    if cfg.preset is not None:
        out["preset"] = cfg.preset
    if cfg.graph is not None:
        out["graph"] = {
            "vertices": cfg.graph.n,
            "edges": [list(e) for e in cfg.graph.edges],
            "desired": list(cfg.graph.desired),
            "dim": cfg.graph.dim,
        }
    if cfg.initial_positions is not None:
        out["initial_positions"] = [list(row) for row in cfg.initial_positions]
    if cfg.perturbation is not None:
        out["perturbation"] = {
            "seed": cfg.perturbation.seed,
            "magnitude": cfg.perturbation.magnitude,
        }
    out["quantizer"] = {
        "kind": cfg.quantizer.kind,
        "gain": cfg.quantizer.gain,
        "hysteresis": cfg.quantizer.hysteresis,
    }
    out["integrator"] = {
        "step": cfg.integrator.step,
        "duration": cfg.integrator.duration,
        "method": cfg.integrator.method,
    }
    out["convergence_tol"] = cfg.convergence_tol
    out["decimation"] = cfg.decimation
    out["output_prefix"] = cfg.output_prefix
    return out


def load_config(path) -> SimulationConfig:
    """Load and fully validate a scenario file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    try:
        return config_from_dict(doc)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def save_config(cfg: SimulationConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2)
        fh.write("\n")
