"""Matplotlib figures rendered next to the delimited outputs."""

from __future__ import annotations

import numpy as np

from .dynamics import Trajectory


def render_simulation_figure(traj: Trajectory, path, title: str | None = None) -> None:
    """Two panels: agent paths with the final shape, and error evolutions."""
    import matplotlib.pyplot as plt

    g = traj.graph
    fig = plt.figure(figsize=(11, 4.5))
    ax1 = fig.add_subplot(1, 2, 1, projection="3d" if g.dim == 3 else None)

    for a in range(g.n):
        xs = traj.positions[:, a, 0]
        ys = traj.positions[:, a, 1]
        if g.dim == 3:
            ax1.plot(xs, ys, traj.positions[:, a, 2], lw=0.8)
        else:
            ax1.plot(xs, ys, lw=0.8)
    final = traj.positions[-1]
    for k in range(g.m):
        seg = final[[g.tails[k], g.heads[k]]]
        if g.dim == 3:
            ax1.plot(seg[:, 0], seg[:, 1], seg[:, 2], "k-", lw=1.2)
        else:
            ax1.plot(seg[:, 0], seg[:, 1], "k-", lw=1.2)
    if g.dim == 3:
        ax1.scatter(final[:, 0], final[:, 1], final[:, 2], s=25, c="tab:red")
    else:
        ax1.scatter(final[:, 0], final[:, 1], s=25, c="tab:red")
        ax1.set_aspect("equal")
    ax1.set_title("agent paths and final shape")

    ax2 = fig.add_subplot(1, 2, 2)
    for k in range(g.m):
        ax2.plot(traj.times, traj.errors[:, k], lw=0.8, label=f"e_{k + 1}")
    ax2.axhline(0.0, color="k", lw=0.5, ls="--")
    ax2.set_xlabel("t")
    ax2.set_ylabel("distance error")
    ax2.set_title("distance errors")
    if g.m <= 9:
        ax2.legend(fontsize=7, ncol=3)
    ax2.grid(True, alpha=0.3)

    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_compare_figure(times: np.ndarray, series: dict[str, np.ndarray], path) -> None:
    """Lyapunov traces of the four quantizers from identical initial conditions."""
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for kind, values in series.items():
        ax.plot(times, values, lw=1.2, label=kind)
    ax.set_xlabel("t")
    ax.set_ylabel("Lyapunov value")
    ax.set_title("Lyapunov decay by quantizer")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_two_agent_figure(cases: list[dict], path) -> None:
    """Inter-agent distance traces for the analytic two-agent cases."""
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for case in cases:
        ax.plot(
            case["times"],
            case["distance"],
            lw=1.2,
            label=f"initial {case['initial']:g}",
        )
        ax.axhline(case["predicted"], color="k", lw=0.5, ls=":")
    ax.set_xlabel("t")
    ax.set_ylabel("inter-agent distance")
    ax.set_title("two-agent runs vs analytic outcome")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
