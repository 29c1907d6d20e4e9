"""Scenario presets: target shapes, canonical coordinates, seeded perturbations.

The ``double-tetrahedron`` preset is a five-agent spatial formation with
nine edges of length 6: an equilateral triangle with one apex above and one
below its centroid, centred at the origin. A target shape with these nine
distances is only fixed up to congruence; this realization is the canonical
one shipped with the package. The ``two-agent`` preset is a single edge of
length 6 in the plane.

Seeded perturbations use numpy's PCG64 generator so that a (seed,
magnitude) pair reproduces the same initial positions on every platform.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import CollocatedAgents, ValidationError
from .graphs import FormationGraph, Framework, rigidity_check

DOUBLE_TETRAHEDRON = "double-tetrahedron"
TWO_AGENT = "two-agent"
PRESETS = (DOUBLE_TETRAHEDRON, TWO_AGENT)

DEFAULT_SEED = 1
# keeps every initial distance error below 2*sqrt(3)*0.5 ~ 1.73, i.e. inside
# 0.3 * min desired distance, close enough to the target shape for the
# local guarantees
DEFAULT_MAGNITUDE = 0.5

_DT_EDGES = ((1, 2), (1, 3), (1, 4), (2, 3), (3, 4), (2, 4), (2, 5), (3, 5), (4, 5))


def preset_graph(name: str) -> FormationGraph:
    """Formation graph of a named preset."""
    if name == DOUBLE_TETRAHEDRON:
        return FormationGraph(n=5, edges=_DT_EDGES, desired=(6.0,) * 9, dim=3)
    if name == TWO_AGENT:
        return FormationGraph(n=2, edges=((1, 2),), desired=(6.0,), dim=2)
    raise ValidationError(f"unknown preset {name!r}; expected one of {PRESETS}")


def preset_positions(name: str) -> np.ndarray:
    """Canonical target coordinates of a named preset."""
    if name == DOUBLE_TETRAHEDRON:
        r = 2.0 * math.sqrt(3.0)  # circumradius of the side-6 triangle
        h = 2.0 * math.sqrt(6.0)  # apex height over the triangle plane
        return np.array(
            [
                [0.0, 0.0, h],
                [r, 0.0, 0.0],
                [-math.sqrt(3.0), 3.0, 0.0],
                [-math.sqrt(3.0), -3.0, 0.0],
                [0.0, 0.0, -h],
            ]
        )
    if name == TWO_AGENT:
        return np.array([[-3.0, 0.0], [3.0, 0.0]])
    raise ValidationError(f"unknown preset {name!r}; expected one of {PRESETS}")


def perturbed_framework(
    name: str,
    seed: int = DEFAULT_SEED,
    magnitude: float = DEFAULT_MAGNITUDE,
    max_retries: int = 10,
) -> tuple[Framework, int]:
    """Preset framework with a seeded uniform displacement of each coordinate.

    Displacements are drawn from PCG64(seed), uniform in [-magnitude,
    magnitude] per coordinate. If the perturbed framework is not
    infinitesimally rigid the next seed up is tried, at most
    ``max_retries`` times. Returns the framework and the number of retries
    used.
    """
    if not (0 <= int(seed) < 2**64):
        raise ValidationError(f"seed must be an unsigned 64-bit value, got {seed}")
    if magnitude < 0.0 or not np.isfinite(magnitude):
        raise ValidationError(f"perturbation magnitude must be >= 0, got {magnitude}")
    graph = preset_graph(name)
    base = preset_positions(name)
    for attempt in range(max_retries + 1):
        rng = np.random.Generator(np.random.PCG64((int(seed) + attempt) % 2**64))
        disp = rng.uniform(-magnitude, magnitude, size=base.shape)
        try:
            frame = Framework(graph, base + disp)
        except CollocatedAgents:
            continue
        if rigidity_check(frame).infinitesimally_rigid:
            return frame, attempt
    raise ValidationError(
        f"no infinitesimally rigid perturbation found for preset {name!r} "
        f"after {max_retries} retries from seed {seed}"
    )


def two_agent_framework(initial_distance: float, desired: float = 6.0) -> Framework:
    """Planar two-agent framework at a given separation, centred at the origin."""
    if not (np.isfinite(initial_distance) and initial_distance > 0.0):
        raise ValidationError(f"initial distance must be > 0, got {initial_distance}")
    graph = FormationGraph(n=2, edges=((1, 2),), desired=(float(desired),), dim=2)
    half = initial_distance / 2.0
    return Framework(graph, np.array([[-half, 0.0], [half, 0.0]]))
