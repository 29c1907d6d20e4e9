"""Formation sensing topology and graph-rigidity tests.

A formation is described by an undirected graph whose vertices are agents
(labelled 1..n) and whose edges carry desired inter-agent distances. Each
edge stores an explicit (tail, head) orientation used to build the oriented
incidence matrix; results do not depend on the choice, and presets use the
canonical tail < head convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import CollocatedAgents, DegenerateFramework, ValidationError

# Agents closer than this on any edge are treated as collocated.
COLLOCATION_THRESHOLD = 1e-9

# A singular value counts toward the numerical rank iff it exceeds this
# fraction of the largest one. Scale-free; robust for coordinates ~10.
RANK_REL_TOL = 1e-8


@dataclass(frozen=True)
class FormationGraph:
    """Undirected graph with oriented edges and positive target distances.

    Parameters:
        n: number of agents (vertices labelled 1..n).
        edges: ordered (tail, head) vertex pairs, 1-based labels.
        desired: target length for each edge, same order as ``edges``.
        dim: ambient dimension, 2 or 3.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    desired: tuple[float, ...]
    dim: int

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValidationError(f"dim must be 2 or 3, got {self.dim}")
        if self.n < 2:
            raise ValidationError(f"need at least two agents, got n={self.n}")
        edges = tuple((int(i), int(j)) for i, j in self.edges)
        desired = tuple(float(d) for d in self.desired)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "desired", desired)
        if not edges:
            raise ValidationError("edge list is empty")
        if len(desired) != len(edges):
            raise ValidationError(
                f"{len(edges)} edges but {len(desired)} desired distances"
            )
        seen = set()
        for k, (i, j) in enumerate(edges):
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValidationError(f"edge {k}: vertex out of range: ({i}, {j})")
            if i == j:
                raise ValidationError(f"edge {k}: self-loop at vertex {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValidationError(f"edge {k}: duplicate undirected edge {key}")
            seen.add(key)
        for k, d in enumerate(desired):
            if not np.isfinite(d) or d <= 0.0:
                raise ValidationError(f"edge {k}: desired distance must be > 0, got {d}")
        if not self._connected():
            raise ValidationError("underlying undirected graph is not connected")

    def _connected(self) -> bool:
        adj = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i - 1].append(j - 1)
            adj[j - 1].append(i - 1)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def tails(self) -> np.ndarray:
        """0-based tail indices, one per edge."""
        return np.array([i - 1 for i, _ in self.edges], dtype=np.intp)

    @cached_property
    def heads(self) -> np.ndarray:
        """0-based head indices, one per edge."""
        return np.array([j - 1 for _, j in self.edges], dtype=np.intp)

    @cached_property
    def degrees(self) -> np.ndarray:
        """Neighbour count |N_i| per agent."""
        deg = np.zeros(self.n, dtype=np.intp)
        np.add.at(deg, self.tails, 1)
        np.add.at(deg, self.heads, 1)
        return deg

    @cached_property
    def desired_array(self) -> np.ndarray:
        return np.array(self.desired, dtype=float)

    def required_rank(self) -> int:
        """Rigidity-matrix rank required for infinitesimal rigidity."""
        return 2 * self.n - 3 if self.dim == 2 else 3 * self.n - 6


@dataclass(frozen=True)
class Framework:
    """A formation graph together with agent positions in R^d.

    Positions are copied and frozen at construction; every edge must join
    non-collocated agents (separation above ``COLLOCATION_THRESHOLD``).
    """

    graph: FormationGraph
    positions: np.ndarray

    def __post_init__(self):
        p = np.array(self.positions, dtype=float)
        if p.shape != (self.graph.n, self.graph.dim):
            raise ValidationError(
                f"positions must have shape {(self.graph.n, self.graph.dim)}, got {p.shape}"
            )
        if not np.all(np.isfinite(p)):
            raise ValidationError("positions must be finite")
        p.setflags(write=False)
        object.__setattr__(self, "positions", p)
        lengths = np.linalg.norm(p[self.graph.heads] - p[self.graph.tails], axis=1)
        k = int(np.argmin(lengths))
        if lengths[k] <= COLLOCATION_THRESHOLD:
            raise CollocatedAgents(k, self.graph.edges[k], float(lengths[k]))


def incidence_matrix(g: FormationGraph) -> np.ndarray:
    """Oriented incidence matrix: -1 at each edge's tail, +1 at its head.

    Returns an (n, m) array whose columns each sum to zero.
    """
    b = np.zeros((g.n, g.m))
    b[g.tails, np.arange(g.m)] = -1.0
    b[g.heads, np.arange(g.m)] = 1.0
    return b


def relative_positions(f: Framework) -> np.ndarray:
    """Per-edge relative positions, row k = p_head(k) - p_tail(k), shape (m, dim)."""
    return f.positions[f.graph.heads] - f.positions[f.graph.tails]


def edge_lengths(f: Framework) -> np.ndarray:
    """Euclidean length of each edge, shape (m,)."""
    return np.linalg.norm(relative_positions(f), axis=1)


def unit_bearings(f: Framework) -> np.ndarray:
    """Unit vectors along each edge, shape (m, dim)."""
    z = relative_positions(f)
    lengths = np.linalg.norm(z, axis=1)
    k = int(np.argmin(lengths))
    if lengths[k] <= COLLOCATION_THRESHOLD:
        raise CollocatedAgents(k, f.graph.edges[k], float(lengths[k]))
    return z / lengths[:, None]


def rigidity_matrix(f: Framework) -> np.ndarray:
    """Jacobian of half the squared edge lengths w.r.t. stacked positions.

    Row k carries -z_k^T in the tail agent's coordinate block and +z_k^T in
    the head's. Shape (m, dim*n).
    """
    g = f.graph
    z = relative_positions(f)
    r = np.zeros((g.m, g.dim * g.n))
    for k in range(g.m):
        t, h = g.tails[k], g.heads[k]
        r[k, g.dim * t : g.dim * (t + 1)] = -z[k]
        r[k, g.dim * h : g.dim * (h + 1)] = z[k]
    return r


@dataclass(frozen=True)
class RigidityReport:
    rank: int
    infinitesimally_rigid: bool
    minimally_rigid: bool
    required_rank: int


def rigidity_check(f: Framework) -> RigidityReport:
    """Numerical rank test for infinitesimal and minimal rigidity.

    The rank counts singular values above ``RANK_REL_TOL`` times the largest
    one. Infinitesimal rigidity requires rank 2n-3 (planar) or 3n-6
    (spatial); minimal rigidity additionally requires exactly that many
    edges.
    """
    s = np.linalg.svd(rigidity_matrix(f), compute_uv=False)
    if s[0] == 0.0:
        raise DegenerateFramework("all agent positions coincide")
    rank = int(np.count_nonzero(s > RANK_REL_TOL * s[0]))
    need = f.graph.required_rank()
    infinitesimal = rank == need
    return RigidityReport(
        rank=rank,
        infinitesimally_rigid=infinitesimal,
        minimally_rigid=infinitesimal and f.graph.m == need,
        required_rank=need,
    )
