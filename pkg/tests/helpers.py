"""Shared test oracles: quadrature for quantizer integrals, random rotations."""

from __future__ import annotations

import math

import numpy as np

from rigidsim import quantize
from rigidsim.quantizers import (
    LOGARITHMIC,
    SIGNUM,
    UNIFORM_ASYM,
    UNIFORM_SYM,
    QuantizerSpec,
)


def _magnitude_breakpoints(spec: QuantizerSpec, hi: float) -> list[float]:
    """Staircase discontinuities of |q| strictly inside (0, hi)."""
    g = spec.gain
    if spec.kind == UNIFORM_SYM:
        ks = np.arange(0, math.floor(hi / g - 0.5) + 1)
        pts = (ks + 0.5) * g
    elif spec.kind == UNIFORM_ASYM:
        ks = np.arange(1, math.floor(hi / g) + 1)
        pts = ks * g
    elif spec.kind == LOGARITHMIC:
        # the lattice accumulates at zero; cells below hi*1e-9 contribute
        # O(hi^2 * 1e-18) and are folded into the bottom segment
        lo = hi * 1e-9
        k_lo = math.ceil(math.log(lo) / g - 0.5)
        k_hi = math.floor(math.log(hi) / g - 0.5)
        pts = np.exp((np.arange(k_lo, k_hi + 1) + 0.5) * g)
    else:  # signum: only the origin, which is an endpoint
        pts = np.array([])
    return [float(p) for p in pts if 0.0 < p < hi]


def midpoint_quadrature(spec: QuantizerSpec, x: float, subintervals: int = 10_000) -> float:
    """Composite midpoint quadrature of the quantizer from 0 to x.

    Independent of the closed form: splits [0, |x|] at the staircase
    breakpoints and samples quantize() at subinterval midpoints.
    """
    sign = 1.0 if x >= 0.0 else -1.0
    hi = abs(float(x))
    if hi == 0.0:
        return 0.0
    pts = [0.0] + _magnitude_breakpoints(spec, hi) + [hi]
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        if b <= a:
            continue
        n = max(1, round(subintervals * (b - a) / hi))
        width = (b - a) / n
        mids = a + (np.arange(n) + 0.5) * width
        total += float(np.sum(quantize(spec, sign * mids))) * width
    return sign * total


def random_rotation(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-ish random rotation with determinant +1."""
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0.0:
        q[:, 0] = -q[:, 0]
    return q


ALL_KINDS_SPECS = [
    QuantizerSpec(UNIFORM_SYM, 0.5),
    QuantizerSpec(LOGARITHMIC, 0.5),
    QuantizerSpec(SIGNUM),
    QuantizerSpec(UNIFORM_ASYM, 0.5),
]
