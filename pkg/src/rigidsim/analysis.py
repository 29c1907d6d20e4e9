"""Convergence certificates evaluated on frameworks and sampled trajectories.

Provides the Lyapunov function induced by a quantizer, the symmetric error
system matrix and its smallest eigenvalue, the finite-time bound for the
binary controller, trajectory convergence classification, and the closed
form for the two-agent case under asymmetric quantization.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import quantizers
from .dynamics import Trajectory
from .errors import CollocatedAgents, NonPositiveEigenvalue, ValidationError
from .graphs import COLLOCATION_THRESHOLD, Framework, edge_lengths, rigidity_matrix
from .quantizers import SIGNUM, UNIFORM_ASYM, UNIFORM_SYM, QuantizerSpec

# consecutive integrator steps a trajectory must stay inside a target set
DWELL_STEPS = 100

# permitted per-unit-time increase of the Lyapunov value between samples
LYAPUNOV_SLACK_RATE = 1e-3

# chatter band multiplier: errors cannot settle tighter than O(step)
SIGNUM_BAND_FACTOR = 10.0


def lyapunov(q: QuantizerSpec, e) -> float:
    """Sum over edges of the quantizer integral from 0 to each error.

    Closed form per kind; the signum kind reduces to the 1-norm of ``e``.
    """
    return float(np.sum(quantizers.staircase_integral(q, np.asarray(e, dtype=float))))


def q_matrix(f: Framework) -> np.ndarray:
    """Symmetric (m, m) matrix of the distance-error system.

    Positive semidefinite; positive definite iff the framework is
    infinitesimally rigid. Diagonal entries equal 2 for every edge.
    """
    lengths = edge_lengths(f)
    k = int(np.argmin(lengths))
    if lengths[k] <= COLLOCATION_THRESHOLD:
        raise CollocatedAgents(k, f.graph.edges[k], float(lengths[k]))
    r = rigidity_matrix(f) / lengths[:, None]
    return r @ r.T


def smallest_eigenvalue(mat: np.ndarray, method: str = "eigh") -> float:
    """Smallest eigenvalue of a symmetric matrix.

    ``eigh`` uses the full symmetric eigensolver. ``inverse-power`` runs
    deterministic inverse power iteration as an independent route; the two
    agree to high accuracy on well-conditioned inputs.
    """
    mat = np.asarray(mat, dtype=float)
    if method == "eigh":
        return float(np.linalg.eigvalsh(mat)[0])
    if method != "inverse-power":
        raise ValidationError(f"unknown eigenvalue method {method!r}")
    n = mat.shape[0]
    v = np.ones(n) / np.sqrt(n)
    lam = float(v @ mat @ v)
    for _ in range(10_000):
        w = np.linalg.solve(mat, v)
        v = w / np.linalg.norm(w)
        lam_new = float(v @ mat @ v)
        if np.linalg.norm(mat @ v - lam_new * v) <= 1e-12 * max(1.0, abs(lam_new)):
            return lam_new
        lam = lam_new
    return lam


def finite_time_bound(f0: Framework, lambda_min: float) -> float:
    """Upper bound on the binary controller's convergence time.

    Equals the 1-norm of the initial distance errors divided by
    ``lambda_min``.
    """
    if not (np.isfinite(lambda_min) and lambda_min > 0.0):
        raise NonPositiveEigenvalue(
            f"lambda_min must be > 0, got {lambda_min}; the framework left the rigid neighbourhood"
        )
    e0 = edge_lengths(f0) - f0.graph.desired_array
    return float(np.abs(e0).sum() / lambda_min)


def lambda_min_probe():
    """Trajectory probe sampling the smallest eigenvalue of the error-system matrix."""
    return ("lambda_min", lambda frame, u: smallest_eigenvalue(q_matrix(frame)))


@dataclass(frozen=True)
class TargetSet:
    """Residual set a trajectory is checked against."""

    kind: str  # "exact" | "F_approx" | "F_asym"
    tol: float | None = None
    delta_u: float | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.tol is not None:
            out["tol"] = self.tol
        if self.delta_u is not None:
            out["delta_u"] = self.delta_u
        return out


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    t_converged: float | None
    target_set: TargetSet
    t_star_bound: float | None
    final_errors: np.ndarray
    lyapunov_monotone: bool
    stationary: bool | None

    def to_dict(self) -> dict:
        return {
            "converged": self.converged,
            "t_converged": self.t_converged,
            "target_set": self.target_set.to_dict(),
            "t_star_bound": self.t_star_bound,
            "final_errors": [float(v) for v in self.final_errors],
            "lyapunov_monotone": self.lyapunov_monotone,
            "stationary": self.stationary,
        }


def _target_set(traj: Trajectory, q: QuantizerSpec, tol: float) -> TargetSet:
    if q.kind == UNIFORM_SYM:
        return TargetSet(kind="F_approx", delta_u=q.gain)
    if q.kind == UNIFORM_ASYM:
        return TargetSet(kind="F_asym", delta_u=q.gain)
    if q.kind == SIGNUM:
        band = SIGNUM_BAND_FACTOR * float(traj.graph.degrees.max()) * traj.step
        return TargetSet(kind="exact", tol=band)
    return TargetSet(kind="exact", tol=tol)


def _membership(errors: np.ndarray, target: TargetSet, slack: float) -> np.ndarray:
    if target.kind == "F_approx":
        return (np.abs(errors) <= target.delta_u / 2.0 + slack).all(axis=1)
    if target.kind == "F_asym":
        return ((errors >= -slack) & (errors <= target.delta_u + slack)).all(axis=1)
    return (np.abs(errors) <= target.tol).all(axis=1)


def check_convergence(
    traj: Trajectory,
    q: QuantizerSpec,
    tol: float = 1e-6,
    slack: float = 1e-9,
    dwell_steps: int = DWELL_STEPS,
) -> ConvergenceReport:
    """Classify a completed trajectory against its quantizer's target set.

    The trajectory converged when it enters the set and never leaves again,
    with the final in-set tail covering at least ``dwell_steps`` integrator
    steps (transient crossings near switching surfaces are rejected).
    Stationarity of the final formation is reported except for the signum
    kind, whose chattering persists by construction.
    """
    if traj.aborted:
        raise ValidationError(f"trajectory incomplete: {traj.abort_reason}")
    if traj.n_samples == 0:
        raise ValidationError("trajectory is empty")

    target = _target_set(traj, q, tol)
    inside = _membership(traj.errors, target, slack)

    out_idx = np.nonzero(~inside)[0]
    start = int(out_idx[-1]) + 1 if out_idx.size else 0
    converged = False
    t_converged = None
    if start < traj.n_samples:
        tail_steps = round((traj.times[-1] - traj.times[start]) / traj.step) + 1
        if tail_steps >= dwell_steps:
            converged = True
            t_converged = float(traj.times[start])

    stationary = None
    if converged and q.kind != SIGNUM:
        stationary = bool(traj.max_control[start:].max() <= tol)

    diffs = np.diff(traj.lyapunov)
    allowed = LYAPUNOV_SLACK_RATE * np.diff(traj.times)
    lyapunov_monotone = bool((diffs <= allowed).all())

    t_star = None
    if q.kind == SIGNUM and "lambda_min" in traj.probes:
        lam = float(traj.probes["lambda_min"].min())
        if lam > 0.0:
            t_star = float(np.abs(traj.errors[0]).sum() / lam)
            if converged and t_converged > t_star:
                warnings.warn(
                    f"finite-time bound violated: t_converged={t_converged:.6g} "
                    f"> T*={t_star:.6g}",
                    RuntimeWarning,
                    stacklevel=2,
                )

    return ConvergenceReport(
        converged=converged,
        t_converged=t_converged,
        target_set=target,
        t_star_bound=t_star,
        final_errors=traj.errors[-1].copy(),
        lyapunov_monotone=lyapunov_monotone,
        stationary=stationary,
    )


@dataclass(frozen=True)
class TwoAgentPrediction:
    final_distance: float
    stationary: bool


def two_agent_oracle(
    initial_distance: float, desired: float, gain: float
) -> TwoAgentPrediction:
    """Closed-form outcome for two agents under the asymmetric uniform quantizer.

    Distances above desired + gain shrink to that value; distances below
    the desired one grow to it; anything in between (including the desired
    distance itself, where the quantized error vanishes) never moves. From
    exactly desired + gain the quantized error is still positive, so the
    pair moves and the boundary is approached from above.
    """
    if not (np.isfinite(initial_distance) and initial_distance > 0.0):
        raise ValidationError(f"initial distance must be > 0, got {initial_distance}")
    if not (np.isfinite(desired) and desired > 0.0):
        raise ValidationError(f"desired distance must be > 0, got {desired}")
    if not (np.isfinite(gain) and gain > 0.0):
        raise ValidationError(f"gain must be > 0, got {gain}")
    if initial_distance >= desired + gain:
        return TwoAgentPrediction(final_distance=desired + gain, stationary=False)
    if initial_distance >= desired:
        return TwoAgentPrediction(final_distance=initial_distance, stationary=True)
    return TwoAgentPrediction(final_distance=desired, stationary=False)
