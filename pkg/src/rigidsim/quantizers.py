"""Scalar quantizers for distance-error feedback.

Four kinds are provided:

* ``uniform-sym``: rounding to the nearest multiple of the gain, with
  half-points mapped to the lattice point below (so the quantizer is not
  odd at half-points; the gain/2 error bound still holds).
* ``logarithmic``: an odd map through the uniform quantizer in log space;
  relative error bounded by exp(gain/2) - 1.
* ``signum``: three-level output in {-1, 0, +1}; gain is ignored. An
  optional hysteresis band turns it into a stateful per-edge evaluator.
* ``uniform-asym``: flooring to the lattice multiple below.

All evaluations are single-valued; at a discontinuity the formulas above
decide the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

UNIFORM_SYM = "uniform-sym"
LOGARITHMIC = "logarithmic"
SIGNUM = "signum"
UNIFORM_ASYM = "uniform-asym"

KINDS = (UNIFORM_SYM, LOGARITHMIC, SIGNUM, UNIFORM_ASYM)
_GAIN_KINDS = frozenset({UNIFORM_SYM, LOGARITHMIC, UNIFORM_ASYM})


@dataclass(frozen=True)
class QuantizerSpec:
    """Quantizer kind plus its gain and optional hysteresis band.

    ``gain`` must be positive for the kinds that use it (all but signum).
    ``hysteresis`` is only meaningful for signum and defaults to off.
    """

    kind: str
    gain: float = 0.5
    hysteresis: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown quantizer kind {self.kind!r}; expected one of {KINDS}")
        if self.kind in _GAIN_KINDS:
            if not (np.isfinite(self.gain) and self.gain > 0.0):
                raise ValidationError(f"{self.kind}: gain must be > 0, got {self.gain}")
        if self.hysteresis < 0.0 or not np.isfinite(self.hysteresis):
            raise ValidationError(f"hysteresis band must be >= 0, got {self.hysteresis}")
        if self.hysteresis > 0.0 and self.kind != SIGNUM:
            raise ValidationError("hysteresis is only supported for the signum kind")

    @property
    def log_gain(self) -> float:
        """Relative error bound parameter of the logarithmic kind."""
        return math.exp(self.gain / 2.0) - 1.0


def _nearest_half_down(a: np.ndarray) -> np.ndarray:
    # nearest integer with half-points mapped down: h + 1/2 -> h
    return np.ceil(a - 0.5)


def _quantize_array(spec: QuantizerSpec, x: np.ndarray) -> np.ndarray:
    if spec.kind == UNIFORM_SYM:
        return spec.gain * _nearest_half_down(x / spec.gain)
    if spec.kind == UNIFORM_ASYM:
        return spec.gain * np.floor(x / spec.gain)
    if spec.kind == SIGNUM:
        out = np.sign(x)
        if spec.hysteresis > 0.0:
            # memoryless view of the hysteresis variant: nothing held yet
            out = np.where(np.abs(x) >= spec.hysteresis, out, 0.0)
        return out
    # logarithmic
    out = np.zeros_like(x)
    nz = x != 0.0
    mag = np.abs(x[nz])
    out[nz] = np.sign(x[nz]) * np.exp(
        spec.gain * _nearest_half_down(np.log(mag) / spec.gain)
    )
    return out


def quantize(spec: QuantizerSpec, x):
    """Evaluate the quantizer at ``x`` (scalar or array, elementwise)."""
    arr = np.asarray(x, dtype=float)
    out = _quantize_array(spec, arr)
    return float(out) if arr.ndim == 0 else out


def quantization_error_bound(spec: QuantizerSpec, x):
    """Certified bound on |quantize(x) - x| for the given input."""
    arr = np.asarray(x, dtype=float)
    if spec.kind == UNIFORM_SYM:
        out = np.full_like(arr, spec.gain / 2.0)
    elif spec.kind == UNIFORM_ASYM:
        out = np.full_like(arr, spec.gain)
    elif spec.kind == LOGARITHMIC:
        out = spec.log_gain * np.abs(arr)
    else:  # signum: |sign(x) - x| <= |x| + 1
        out = np.abs(arr) + 1.0
    return float(out) if arr.ndim == 0 else out


class HysteresisSignum:
    """Stateful signum evaluator holding one value per component.

    While |x| stays inside the band the previous output is held; the
    output re-evaluates to sign(x) whenever |x| reaches the band. One
    instance serves one simulation run and must not be shared.
    """

    def __init__(self, spec: QuantizerSpec, size: int):
        if spec.kind != SIGNUM:
            raise ValidationError("hysteresis evaluator requires a signum spec")
        self.band = spec.hysteresis
        self._held = np.zeros(size)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        live = np.abs(x) >= self.band
        np.copyto(self._held, np.sign(x), where=live)
        return self._held.copy()


def make_evaluator(spec: QuantizerSpec, size: int):
    """Per-run evaluator: stateless closure, or a fresh hysteresis state."""
    if spec.kind == SIGNUM and spec.hysteresis > 0.0:
        return HysteresisSignum(spec, size)
    return lambda x: _quantize_array(spec, x)


def staircase_integral(spec: QuantizerSpec, x) -> np.ndarray:
    """Exact integral of the quantizer from 0 to x, elementwise.

    Closed form: full quantization cells plus the partial cell. This is
    the building block of the Lyapunov function used in the convergence
    analysis; point values at cell boundaries have measure zero and do not
    affect the integral.
    """
    arr = np.asarray(x, dtype=float)
    mag = np.abs(arr)
    g = spec.gain
    if spec.kind == SIGNUM:
        out = mag.copy()
    elif spec.kind == UNIFORM_SYM:
        # cell n spans ((n-1/2)g, (n+1/2)g]; integrand is n*g there
        n = np.ceil(mag / g - 0.5)
        out = g * g * n * (n - 1.0) / 2.0 + n * g * (mag - (n - 0.5) * g)
    elif spec.kind == UNIFORM_ASYM:
        # positive side floors to n*g on [n*g, (n+1)g); negative side is the
        # mirrored staircase shifted one cell down, adding g*|x|
        n = np.floor(mag / g)
        base = g * g * n * (n - 1.0) / 2.0 + n * g * (mag - n * g)
        out = np.where(arr < 0.0, base + g * mag, base)
    else:  # logarithmic
        out = np.zeros_like(mag)
        nz = mag > 0.0
        mnz = mag[nz]
        n = np.ceil(np.log(mnz) / g - 0.5)
        # all cells below n sum to a geometric series in exp(2*g)
        full = np.exp((2.0 * n - 0.5) * g) / (math.exp(g) + 1.0)
        partial = np.exp(n * g) * (mnz - np.exp((n - 0.5) * g))
        out[nz] = full + partial
    return float(out) if arr.ndim == 0 else out
