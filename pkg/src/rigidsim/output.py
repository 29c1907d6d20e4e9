"""Delimited trajectory output and report serialization.

Column orders are fixed so identical runs produce byte-identical files:
positions go to a long-format CSV ``t,agent,x,y,z`` (z is 0.0 for planar
runs), per-edge errors to a companion CSV ``t,e_1..e_m,V,maxu``. Floats are
written with shortest round-trip formatting.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .analysis import ConvergenceReport
from .dynamics import Trajectory


def _fmt(value: float) -> str:
    return repr(float(value))


def write_positions_csv(traj: Trajectory, path) -> None:
    """Long-format agent positions, one row per (sample, agent)."""
    dim = traj.graph.dim
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,agent,x,y,z\n")
        for s in range(traj.n_samples):
            t = _fmt(traj.times[s])
            for a in range(traj.graph.n):
                p = traj.positions[s, a]
                z = _fmt(p[2]) if dim == 3 else "0.0"
                fh.write(f"{t},{a + 1},{_fmt(p[0])},{_fmt(p[1])},{z}\n")


def write_errors_csv(traj: Trajectory, path) -> None:
    """Per-edge distance errors with Lyapunov value and max control norm."""
    m = traj.graph.m
    header = "t," + ",".join(f"e_{k + 1}" for k in range(m)) + ",V,maxu\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header)
        for s in range(traj.n_samples):
            cells = [_fmt(traj.times[s])]
            cells += [_fmt(v) for v in traj.errors[s]]
            cells.append(_fmt(traj.lyapunov[s]))
            cells.append(_fmt(traj.max_control[s]))
            fh.write(",".join(cells) + "\n")


def write_report_json(report: ConvergenceReport, path, extra: dict | None = None) -> None:
    doc = report.to_dict()
    if extra:
        doc.update(extra)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def write_compare_csv(times: np.ndarray, series: dict[str, np.ndarray], path) -> None:
    """Lyapunov-vs-time table, one column per quantizer kind."""
    kinds = list(series)
    header = "t," + ",".join("V_" + k.replace("-", "_") for k in kinds) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header)
        for s in range(len(times)):
            cells = [_fmt(times[s])] + [_fmt(series[k][s]) for k in kinds]
            fh.write(",".join(cells) + "\n")


def write_sweep_index(cells: list[dict], path) -> None:
    """Index of sweep cells, written once after every cell completes."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump({"cells": cells}, fh, indent=2)
        fh.write("\n")


def ensure_out_dir(out_dir) -> Path:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path
