"""Command-line driver: mesh generation, state solves, optimization runs.

Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import exports, fem
from .bfgs import compare_runs, minimize
from .config import RunConfig, apply_overrides, load_config, serialize_config
from .mesh import MeshFormatError, generate_disk_mesh, load_mesh, save_mesh
from .objective import ReducedObjective, box_penalty
from .obstacle import ObstacleSolveError, solve_obstacle
from .pchip import ControlVector, control_trace, kink_sweep


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="obstacle-control",
                description="Boundary control of an obstacle problem on a disk")
    p.add_argument("--config", help="configuration file (key = value lines)")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a configuration key")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("mesh", help="generate a mesh and write the ASCII format")
    m.add_argument("--out", required=True)

    s = sub.add_parser("solve", help="solve the obstacle problem at a fixed control")
    s.add_argument("--mesh", help="mesh file (generated on the fly if omitted)")
    s.add_argument("--control", help="control CSV (k,theta_k,a_k)")
    s.add_argument("--control-const", type=float, help="uniform control value")
    s.add_argument("--out-dir", required=True)

    o = sub.add_parser("optimize", help="run the configured optimizer")
    o.add_argument("--mesh", help="mesh file (generated on the fly if omitted)")
    o.add_argument("--out-dir", required=True)

    d = sub.add_parser("pchip-demo", help="sweep of the interpolant value at x=0.3")
    d.add_argument("--out", required=True)
    d.add_argument("--amin", type=float, default=-0.5)
    d.add_argument("--amax", type=float, default=1.0)
    d.add_argument("--samples", type=int, default=601)

    e = sub.add_parser("export", help="convert saved artifacts")
    e.add_argument("--kind", choices=["mesh-vtk", "compare"], required=True)
    e.add_argument("--mesh", help="mesh file for mesh-vtk")
    e.add_argument("--traces", nargs="+", help="trace CSVs for compare")
    e.add_argument("--out", required=True)
    return p


def _get_mesh(cfg: RunConfig, mesh_path):
    if mesh_path:
        return load_mesh(mesh_path)
    return generate_disk_mesh(cfg.radius, cfg.mesh_h, cfg.omega0, seed=cfg.seed)


def _get_problem(cfg: RunConfig, mesh):
    return fem.build_problem(mesh, cfg.load_const, cfg.psi_callable())


def cmd_mesh(cfg: RunConfig, args) -> int:
    mesh = generate_disk_mesh(cfg.radius, cfg.mesh_h, cfg.omega0, seed=cfg.seed)
    save_mesh(mesh, args.out)
    print(f"wrote {args.out}: {mesh.num_nodes} nodes, {mesh.num_triangles} triangles, "
          f"{len(mesh.boundary_nodes)} boundary nodes")
    return 0


def cmd_solve(cfg: RunConfig, args) -> int:
    mesh = _get_mesh(cfg, args.mesh)
    problem = _get_problem(cfg, mesh)
    if args.control:
        a = exports.read_control_csv(args.control)
    elif args.control_const is not None:
        a = np.full(cfg.n_control, args.control_const)
    else:
        a = cfg.initial_control()
    ctrl = ControlVector(a, cfg.u_min, cfg.u_max)
    u_d = control_trace(ctrl, problem.dirichlet_angles)
    sol = solve_obstacle(problem, u_d)

    obj = ReducedObjective(problem, cfg.objective_config())
    rec = obj.evaluate(a)
    os.makedirs(args.out_dir, exist_ok=True)
    exports.write_state_csv(os.path.join(args.out_dir, "state.csv"), mesh, sol, problem.psi_vec)
    contact_field = np.zeros(mesh.num_nodes)
    contact_field[sol.contact_set] = 1.0
    exports.write_state_vtk(os.path.join(args.out_dir, "state.vtk"), mesh,
                            {"y": sol.q, "psi": problem.psi_vec, "contact": contact_field})
    polylines = exports.extract_zero_levelset(mesh, sol.q)
    exports.write_levelset_csv(os.path.join(args.out_dir, "levelset.csv"), polylines)
    print(f"J={rec.J:.17g} area_term={rec.area_term:.17g} "
          f"contact_term={rec.contact_term:.17g} box_term={rec.box_term:.17g} "
          f"n_contact={len(sol.contact_set)}")
    return 0


def cmd_optimize(cfg: RunConfig, args) -> int:
    mesh = _get_mesh(cfg, args.mesh)
    problem = _get_problem(cfg, mesh)
    obj = ReducedObjective(problem, cfg.objective_config())
    a0 = cfg.initial_control()
    best_a, trace = minimize(obj, a0, cfg.optimizer_config())

    os.makedirs(args.out_dir, exist_ok=True)
    tag = cfg.variant
    exports.write_trace_csv(os.path.join(args.out_dir, f"trace_{tag}.csv"), trace)
    exports.write_eval_log_csv(os.path.join(args.out_dir, f"evals_{tag}.csv"),
                               ReducedObjective.LOG_HEADER, obj.log_rows)
    ctrl = ControlVector(best_a, cfg.u_min, cfg.u_max)
    exports.write_control_csv(os.path.join(args.out_dir, f"control_{tag}.csv"), ctrl)
    u_d = control_trace(ctrl, problem.dirichlet_angles)
    sol = solve_obstacle(problem, u_d)
    exports.write_state_csv(os.path.join(args.out_dir, f"state_{tag}.csv"),
                            mesh, sol, problem.psi_vec)
    contact_field = np.zeros(mesh.num_nodes)
    contact_field[sol.contact_set] = 1.0
    exports.write_state_vtk(os.path.join(args.out_dir, f"state_{tag}.vtk"), mesh,
                            {"y": sol.q, "psi": problem.psi_vec, "contact": contact_field})
    polylines = exports.extract_zero_levelset(mesh, sol.q)
    exports.write_levelset_csv(os.path.join(args.out_dir, f"levelset_{tag}.csv"), polylines)
    print(f"variant={tag} evals={len(trace)} reason={trace.reason} "
          f"initial_J={trace.J[0]:.17g} best_J={trace.bestJ[-1]:.17g}")
    return 0


def cmd_pchip_demo(args) -> int:
    if args.samples < 2:
        raise _UsageError("--samples must be at least 2")
    a_vals = np.linspace(args.amin, args.amax, args.samples)
    u = kink_sweep(a_vals)
    with open(args.out, "w") as fh:
        fh.write("a,u_at_0.3\n")
        for av, uv in zip(a_vals, u):
            fh.write(f"{av:.17g},{uv:.17g}\n")
    print(f"wrote {args.out}: {args.samples} samples over [{args.amin}, {args.amax}]")
    return 0


def cmd_export(cfg: RunConfig, args) -> int:
    if args.kind == "mesh-vtk":
        if not args.mesh:
            raise _UsageError("export --kind mesh-vtk requires --mesh")
        mesh = load_mesh(args.mesh)
        exports.write_mesh_vtk(args.out, mesh)
    else:
        if not args.traces:
            raise _UsageError("export --kind compare requires --traces")
        traces = [_read_trace(p) for p in args.traces]
        labels = [os.path.splitext(os.path.basename(p))[0] for p in args.traces]
        header, rows = compare_runs(traces, labels)
        exports.write_compare_csv(args.out, header, rows)
    print(f"wrote {args.out}")
    return 0


def _read_trace(path):
    from .bfgs import OptRunTrace
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if header != ["feval", "J", "bestJ", "gradnorm", "step"]:
            raise ValueError(f"{path}: unexpected trace header")
        data = [[float(v) for v in line.strip().split(",")] for line in fh if line.strip()]
    arr = np.asarray(data) if data else np.zeros((0, 5))
    return OptRunTrace(feval=arr[:, 0].astype(int), J=arr[:, 1], bestJ=arr[:, 2],
                       gradnorm=arr[:, 3], step=arr[:, 4], reason="loaded",
                       a_final=np.zeros(0), wall_time=0.0)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = RunConfig()
        if args.config:
            cfg = load_config(args.config, cfg)
        cfg = apply_overrides(cfg, args.set)
        if args.command == "mesh":
            return cmd_mesh(cfg, args)
        if args.command == "solve":
            return cmd_solve(cfg, args)
        if args.command == "optimize":
            return cmd_optimize(cfg, args)
        if args.command == "pchip-demo":
            return cmd_pchip_demo(args)
        return cmd_export(cfg, args)
    except (_UsageError, ValueError, FileNotFoundError, MeshFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ObstacleSolveError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
