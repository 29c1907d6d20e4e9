"""Gradient formation controller with quantized distances and Euler integration.

Each agent steers along the sum of its incident edge bearings weighted by
the quantized distance errors; bearings stay unquantized. Integration is
fixed-step explicit Euler: the right-hand side is discontinuous, so
higher-order schemes buy nothing across switches, and a fixed step keeps
runs bit-reproducible.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import quantizers
from .errors import CollocatedAgents, ValidationError
from .graphs import (
    COLLOCATION_THRESHOLD,
    FormationGraph,
    Framework,
    incidence_matrix,
    rigidity_check,
)
from .quantizers import QuantizerSpec


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step explicit Euler configuration."""

    step: float = 1e-3
    duration: float = 50.0
    method: str = "euler"

    def __post_init__(self):
        if not (np.isfinite(self.step) and self.step > 0.0):
            raise ValidationError(f"step must be > 0, got {self.step}")
        if not (np.isfinite(self.duration) and self.duration >= self.step):
            raise ValidationError(
                f"duration must be >= step, got duration={self.duration}, step={self.step}"
            )
        if self.method != "euler":
            raise ValidationError(f"unsupported integrator method {self.method!r}")

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.step))


@dataclass(frozen=True)
class ControlInput:
    """Velocity commands, one row per agent."""

    u: np.ndarray


def distance_errors(f: Framework) -> np.ndarray:
    """Edge length minus desired length, ordered by edge index."""
    z = f.positions[f.graph.heads] - f.positions[f.graph.tails]
    return np.linalg.norm(z, axis=1) - f.graph.desired_array


def _control_from_state(b: np.ndarray, qe: np.ndarray, zhat: np.ndarray) -> np.ndarray:
    # u_i = -sum_k b_ik * q(e_k) * zhat_k
    return -(b @ (qe[:, None] * zhat))


def control(f: Framework, q: QuantizerSpec) -> ControlInput:
    """Control input for every agent from quantized errors and raw bearings.

    The stateless quantizer is used here; hysteresis state, if any,
    belongs to a simulation run (see ``simulate``).
    """
    g = f.graph
    z = f.positions[g.heads] - f.positions[g.tails]
    lengths = np.linalg.norm(z, axis=1)
    k = int(np.argmin(lengths))
    if lengths[k] <= COLLOCATION_THRESHOLD:
        raise CollocatedAgents(k, g.edges[k], float(lengths[k]))
    qe = quantizers.quantize(q, lengths - g.desired_array)
    u = _control_from_state(incidence_matrix(g), qe, z / lengths[:, None])
    return ControlInput(u=u)


def step(f: Framework, q: QuantizerSpec, cfg: IntegratorConfig) -> Framework:
    """One explicit Euler step; returns a new framework over the same graph."""
    u = control(f, q).u
    return Framework(f.graph, f.positions + cfg.step * u)


@dataclass
class Trajectory:
    """Sampled record of a simulation run.

    Arrays share a leading sample axis: ``times`` (S,), ``positions``
    (S, n, dim), ``errors`` (S, m), ``lyapunov`` (S,), ``max_control``
    (S,), ``centroid`` (S, dim). ``probes`` maps probe names to (S,)
    arrays. An aborted run carries the partial record and the reason.
    """

    graph: FormationGraph
    quantizer: QuantizerSpec
    step: float
    times: np.ndarray
    positions: np.ndarray
    errors: np.ndarray
    lyapunov: np.ndarray
    max_control: np.ndarray
    centroid: np.ndarray
    probes: dict = field(default_factory=dict)
    aborted: bool = False
    abort_reason: str | None = None

    @property
    def n_samples(self) -> int:
        return len(self.times)


def simulate(
    f0: Framework,
    q: QuantizerSpec,
    cfg: IntegratorConfig,
    probes=(),
    decimation: int = 1,
) -> Trajectory:
    """Integrate the closed loop from ``f0`` and record a trajectory.

    ``probes`` is a sequence of (name, fn) pairs; each fn receives the
    current framework and control array and returns a scalar, evaluated at
    every recorded sample. ``decimation`` keeps every k-th integrator step
    (the final state is always kept). A collocation during integration
    aborts the run and flags the partial trajectory. Deterministic for
    identical inputs.
    """
    if int(decimation) != decimation or decimation < 1:
        raise ValidationError(f"decimation must be a positive integer, got {decimation}")
    decimation = int(decimation)

    rig = rigidity_check(f0)
    if not rig.minimally_rigid:
        warnings.warn(
            f"initial framework is not infinitesimally minimally rigid "
            f"(rank {rig.rank}, required {rig.required_rank}, m={f0.graph.m}); "
            "local convergence guarantees do not apply",
            RuntimeWarning,
            stacklevel=2,
        )

    g = f0.graph
    b = incidence_matrix(g)
    tails, heads, desired = g.tails, g.heads, g.desired_array
    qeval = quantizers.make_evaluator(q, g.m)
    h = cfg.step
    n_steps = cfg.n_steps

    sample_steps = list(range(0, n_steps + 1, decimation))
    if sample_steps[-1] != n_steps:
        sample_steps.append(n_steps)
    n_samples = len(sample_steps)

    times = np.empty(n_samples)
    positions = np.empty((n_samples, g.n, g.dim))
    errors = np.empty((n_samples, g.m))
    lyapunov = np.empty(n_samples)
    max_control = np.empty(n_samples)
    centroid = np.empty((n_samples, g.dim))
    probe_values = {name: np.empty(n_samples) for name, _ in probes}

    pos = np.array(f0.positions, dtype=float)
    sptr = 0
    aborted = False
    abort_reason = None

    for i in range(n_steps + 1):
        z = pos[heads] - pos[tails]
        lengths = np.sqrt(np.einsum("kd,kd->k", z, z))
        kmin = int(np.argmin(lengths))
        # same threshold the Framework invariant enforces, so probe
        # construction below can never trip it first
        if lengths[kmin] <= COLLOCATION_THRESHOLD:
            aborted = True
            abort_reason = (
                f"collocated agents on edge {kmin} {g.edges[kmin]} at t={i * h:.6g}"
            )
            break
        e = lengths - desired
        qe = qeval(e)
        u = _control_from_state(b, qe, z / lengths[:, None])
        if sptr < n_samples and i == sample_steps[sptr]:
            times[sptr] = i * h
            positions[sptr] = pos
            errors[sptr] = e
            lyapunov[sptr] = float(np.sum(quantizers.staircase_integral(q, e)))
            max_control[sptr] = float(np.sqrt((u * u).sum(axis=1)).max())
            centroid[sptr] = pos.mean(axis=0)
            if probes:
                frame = Framework(g, pos)
                for name, fn in probes:
                    probe_values[name][sptr] = float(fn(frame, u))
            sptr += 1
        if i < n_steps:
            pos = pos + h * u

    return Trajectory(
        graph=g,
        quantizer=q,
        step=h,
        times=times[:sptr],
        positions=positions[:sptr],
        errors=errors[:sptr],
        lyapunov=lyapunov[:sptr],
        max_control=max_control[:sptr],
        centroid=centroid[:sptr],
        probes={name: vals[:sptr] for name, vals in probe_values.items()},
        aborted=aborted,
        abort_reason=abort_reason,
    )
