"""Command-line entry point.

Subcommands: ``simulate`` (one run: trajectory CSVs, report JSON, summary
figure), ``sweep`` (grid over quantizer kinds and gains), ``check-rigidity``
(rank test), ``two-agent`` (analytic cases vs simulation), ``compare``
(the four quantizers from identical initial conditions). Exit codes: 0 on
success, 1 on validation errors, 2 on runtime aborts or failed checks.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

os.environ.setdefault("MPLBACKEND", "Agg")

import numpy as np

from . import analysis, presets
from .config import PerturbationSpec, SimulationConfig, load_config
from .dynamics import IntegratorConfig, simulate
from .errors import (
    CollocatedAgents,
    DegenerateFramework,
    NonPositiveEigenvalue,
    ParseError,
    ValidationError,
)
from .figures import (
    render_compare_figure,
    render_simulation_figure,
    render_two_agent_figure,
)
from .graphs import rigidity_check
from .output import (
    ensure_out_dir,
    write_compare_csv,
    write_errors_csv,
    write_positions_csv,
    write_report_json,
    write_sweep_index,
)
from .quantizers import KINDS, SIGNUM, QuantizerSpec

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def _config_from_args(args) -> SimulationConfig:
    if args.config is not None:
        return load_config(args.config)
    return SimulationConfig(
        preset=args.preset,
        perturbation=PerturbationSpec(seed=args.seed, magnitude=args.magnitude),
        quantizer=QuantizerSpec(
            kind=args.quantizer, gain=args.gain, hysteresis=args.hysteresis
        ),
        integrator=IntegratorConfig(step=args.step, duration=args.duration),
        convergence_tol=args.tol,
        decimation=args.decimation,
        output_prefix=args.prefix,
    )


def _run_config(cfg: SimulationConfig):
    frame, retries = cfg.build_framework()
    probes = [analysis.lambda_min_probe()] if cfg.quantizer.kind == SIGNUM else []
    traj = simulate(
        frame, cfg.quantizer, cfg.integrator, probes=probes, decimation=cfg.decimation
    )
    return traj, retries


def cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    out = ensure_out_dir(args.out_dir)
    traj, retries = _run_config(cfg)
    prefix = cfg.output_prefix

    write_positions_csv(traj, out / f"{prefix}_positions.csv")
    write_errors_csv(traj, out / f"{prefix}_errors.csv")
    if traj.aborted:
        print(f"run aborted: {traj.abort_reason}", file=sys.stderr)
        print(f"partial trajectory written to {out}", file=sys.stderr)
        return EXIT_RUNTIME

    report = analysis.check_convergence(traj, cfg.quantizer, tol=cfg.convergence_tol)
    write_report_json(report, out / f"{prefix}_report.json")
    render_simulation_figure(
        traj, out / f"{prefix}_summary.png", title=f"{cfg.quantizer.kind}"
    )

    print(f"quantizer: {cfg.quantizer.kind} (gain {cfg.quantizer.gain:g})")
    if retries:
        print(f"perturbation retries: {retries}")
    print(f"converged: {report.converged}")
    if report.converged:
        print(f"t_converged: {report.t_converged:g}")
    if report.t_star_bound is not None:
        print(f"finite-time bound: {report.t_star_bound:g}")
    print(f"max final |error|: {np.abs(report.final_errors).max():.3e}")
    print(f"outputs in {out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    out = ensure_out_dir(args.out_dir)
    frame, retries = presets.perturbed_framework(
        args.preset, seed=args.seed, magnitude=args.magnitude
    )
    integrator = IntegratorConfig(step=args.step, duration=args.duration)

    times = None
    series: dict[str, np.ndarray] = {}
    for kind in KINDS:
        q = QuantizerSpec(kind=kind, gain=args.gain)
        traj = simulate(frame, q, integrator, decimation=args.decimation)
        if traj.aborted:
            print(f"{kind}: run aborted: {traj.abort_reason}", file=sys.stderr)
            return EXIT_RUNTIME
        times = traj.times
        series[kind] = traj.lyapunov
        print(f"{kind:13s} V(0)={traj.lyapunov[0]:.6g}  V(end)={traj.lyapunov[-1]:.6g}")

    write_compare_csv(times, series, out / "compare.csv")
    render_compare_figure(times, series, out / "compare.png")
    if retries:
        print(f"perturbation retries: {retries}")
    print(f"outputs in {out}")
    return EXIT_OK


def cmd_check_rigidity(args) -> int:
    if args.config is not None:
        cfg = load_config(args.config)
        frame, _ = cfg.build_framework()
    elif args.seed is not None:
        frame, _ = presets.perturbed_framework(
            args.preset, seed=args.seed, magnitude=args.magnitude
        )
    else:
        frame = presets.perturbed_framework(args.preset, magnitude=0.0)[0]
    report = rigidity_check(frame)
    print(f"rank: {report.rank} (required {report.required_rank})")
    print(f"infinitesimally rigid: {report.infinitesimally_rigid}")
    print(f"minimally rigid: {report.minimally_rigid}")
    return EXIT_OK


def cmd_two_agent(args) -> int:
    out = ensure_out_dir(args.out_dir)
    integrator = IntegratorConfig(step=args.step, duration=args.duration)
    q = QuantizerSpec(kind="uniform-asym", gain=args.gain)
    tolerance = 2.0 * args.gain * args.step

    rows = []
    cases = []
    all_ok = True
    for initial in args.initial:
        prediction = analysis.two_agent_oracle(initial, args.desired, args.gain)
        frame = presets.two_agent_framework(initial, desired=args.desired)
        traj = simulate(frame, q, integrator, decimation=args.decimation)
        if traj.aborted:
            print(f"initial {initial:g}: run aborted: {traj.abort_reason}", file=sys.stderr)
            return EXIT_RUNTIME
        distance = np.linalg.norm(
            traj.positions[:, 1, :] - traj.positions[:, 0, :], axis=1
        )
        simulated = float(distance[-1])
        diff = abs(simulated - prediction.final_distance)
        ok = diff <= tolerance
        all_ok = all_ok and ok
        rows.append((initial, prediction, simulated, diff, ok))
        cases.append(
            {
                "times": traj.times,
                "distance": distance,
                "initial": initial,
                "predicted": prediction.final_distance,
            }
        )
        label = "stationary at" if prediction.stationary else "converges to"
        print(
            f"initial {initial:g}: oracle {label} {prediction.final_distance:g}, "
            f"simulated {simulated:.6f} (|diff| {diff:.2e}, "
            f"{'ok' if ok else 'MISMATCH'})"
        )

    with open(out / "two_agent.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("initial,predicted,stationary,simulated,abs_diff,ok\n")
        for initial, pred, simulated, diff, ok in rows:
            fh.write(
                f"{initial!r},{pred.final_distance!r},{str(pred.stationary).lower()},"
                f"{simulated!r},{diff!r},{str(ok).lower()}\n"
            )
    render_two_agent_figure(cases, out / "two_agent.png")
    print(f"outputs in {out}")
    return EXIT_OK if all_ok else EXIT_RUNTIME


def _sweep_cell(args, kind: str, gain: float, out_root):
    cell_name = f"{kind}-gain{gain:g}"
    cell_dir = ensure_out_dir(out_root / cell_name)
    cfg = SimulationConfig(
        preset=args.preset,
        perturbation=PerturbationSpec(seed=args.seed, magnitude=args.magnitude),
        quantizer=QuantizerSpec(kind=kind, gain=gain),
        integrator=IntegratorConfig(step=args.step, duration=args.duration),
        convergence_tol=args.tol,
        decimation=args.decimation,
    )
    traj, _ = _run_config(cfg)
    entry = {"kind": kind, "gain": gain, "dir": cell_name}
    if traj.aborted:
        entry["aborted"] = True
        entry["abort_reason"] = traj.abort_reason
        write_errors_csv(traj, cell_dir / "errors.csv")
        return entry
    report = analysis.check_convergence(traj, cfg.quantizer, tol=cfg.convergence_tol)
    write_report_json(report, cell_dir / "report.json")
    write_errors_csv(traj, cell_dir / "errors.csv")
    entry["aborted"] = False
    entry["report"] = f"{cell_name}/report.json"
    entry["converged"] = report.converged
    entry["t_converged"] = report.t_converged
    return entry


def cmd_sweep(args) -> int:
    out = ensure_out_dir(args.out_dir)
    kinds = [k.strip() for k in args.quantizers.split(",") if k.strip()]
    gains = [float(g) for g in args.gains.split(",") if g.strip()]
    for kind in kinds:
        if kind not in KINDS:
            raise ValidationError(f"unknown quantizer kind {kind!r}; expected one of {KINDS}")
    cells = [(kind, gain) for kind in kinds for gain in gains]

    env = os.environ.get("RIGIDSIM_THREADS")
    workers = min(len(cells), os.cpu_count() or 1)
    if env is not None:
        workers = max(1, min(workers, int(env)))

    entries = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_sweep_cell, args, kind, gain, out) for kind, gain in cells]
        for future in futures:
            entries.append(future.result())

    write_sweep_index(entries, out / "index.json")
    aborted = sum(1 for e in entries if e["aborted"])
    print(f"{len(entries)} cells ({aborted} aborted); index in {out / 'index.json'}")
    return EXIT_OK if aborted == 0 else EXIT_RUNTIME


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rigidsim",
        description="Rigid formation control with quantized distance measurements",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scenario = argparse.ArgumentParser(add_help=False)
    scenario.add_argument("--preset", default=presets.DOUBLE_TETRAHEDRON, choices=presets.PRESETS)
    scenario.add_argument("--seed", type=int, default=presets.DEFAULT_SEED)
    scenario.add_argument("--magnitude", type=float, default=presets.DEFAULT_MAGNITUDE)
    scenario.add_argument("--step", type=float, default=1e-3)
    scenario.add_argument("--duration", type=float, default=50.0)
    scenario.add_argument("--decimation", type=int, default=1)
    scenario.add_argument("--out-dir", default="./out")

    p_sim = sub.add_parser("simulate", parents=[scenario], help="run one scenario")
    p_sim.add_argument("--config", default=None, help="scenario JSON (overrides flags)")
    p_sim.add_argument("--quantizer", default="uniform-sym", choices=KINDS)
    p_sim.add_argument("--gain", type=float, default=0.5)
    p_sim.add_argument("--hysteresis", type=float, default=0.0)
    p_sim.add_argument("--tol", type=float, default=1e-6)
    p_sim.add_argument("--prefix", default="run")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", parents=[scenario], help="grid over kinds and gains")
    p_sweep.add_argument("--quantizers", default=",".join(KINDS))
    p_sweep.add_argument("--gains", default="0.5")
    p_sweep.add_argument("--tol", type=float, default=1e-6)
    p_sweep.set_defaults(func=cmd_sweep)

    p_rig = sub.add_parser("check-rigidity", help="rank test for a preset or config")
    p_rig.add_argument("--preset", default=presets.DOUBLE_TETRAHEDRON, choices=presets.PRESETS)
    p_rig.add_argument("--config", default=None)
    p_rig.add_argument("--seed", type=int, default=None, help="perturb before testing")
    p_rig.add_argument("--magnitude", type=float, default=presets.DEFAULT_MAGNITUDE)
    p_rig.set_defaults(func=cmd_check_rigidity)

    p_two = sub.add_parser("two-agent", help="analytic two-agent cases vs simulation")
    p_two.add_argument("--desired", type=float, default=6.0)
    p_two.add_argument("--gain", type=float, default=0.5)
    p_two.add_argument("--initial", type=float, nargs="+", default=[8.0, 5.0, 6.2])
    p_two.add_argument("--step", type=float, default=1e-3)
    p_two.add_argument("--duration", type=float, default=50.0)
    p_two.add_argument("--decimation", type=int, default=1)
    p_two.add_argument("--out-dir", default="./out")
    p_two.set_defaults(func=cmd_two_agent)

    p_cmp = sub.add_parser("compare", parents=[scenario], help="four quantizers, same start")
    p_cmp.add_argument("--gain", type=float, default=0.5)
    p_cmp.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (CollocatedAgents, DegenerateFramework, NonPositiveEigenvalue) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
