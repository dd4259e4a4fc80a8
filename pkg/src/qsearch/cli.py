"""Batch command-line front end.

Every subcommand writes CSV tables plus a JSON run manifest recording the
command, parameters, timestamps, tool version, and the SHA-256 of each output
file.  All numeric output uses 17-significant-digit formatting, so reruns on
the same platform produce byte-identical CSVs (manifests differ only in their
timestamps).  Randomized paths draw from numpy's PCG64 generator seeded by
--seed, and the seed is recorded in the manifest.

Exit codes: 0 success, 2 usage or configuration error, 3 numeric-domain
error.
"""
from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import analog_search as an
from . import fixed_point as fp
from . import grover_digital as gd
from . import info_geom as ig
from . import msta

EXIT_USAGE = 2
EXIT_DOMAIN = 3


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def write_csv(path: Path, header, rows) -> Path:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")
    return path


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


@dataclass
class RunManifest:
    command: str
    params: dict
    started: str = ""
    finished: str = ""
    tool_version: str = __version__
    outputs: list = field(default_factory=list)

    def record(self, path: Path) -> None:
        self.outputs.append({"path": str(path), "sha256": _sha256(path)})

    def write(self, out_dir: Path) -> Path:
        target = out_dir / f"{self.command.replace(' ', '_')}_manifest.json"
        payload = {
            "command": self.command,
            "params": self.params,
            "started": self.started,
            "finished": self.finished,
            "tool_version": self.tool_version,
            "outputs": self.outputs,
        }
        target.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return target


def _utc_now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("QSEARCH_OUT") or "qsearch-out"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _run_with_manifest(args, name: str, params: dict, body) -> list[Path]:
    out_dir = _out_dir(args)
    manifest = RunManifest(command=name, params=params)
    manifest.started = _utc_now()
    written = body(out_dir)
    manifest.finished = _utc_now()
    for path in written:
        manifest.record(path)
    manifest_path = manifest.write(out_dir)
    return written + [manifest_path]


# -- digital ------------------------------------------------------------------


_N_CAP = 1 << 22  # keeps state-vector runs under seconds


def cmd_digital(args) -> list[Path]:
    n = args.N
    if n < 2:
        raise ValueError("N must be at least 2")
    if n > _N_CAP:
        raise ValueError(f"N is capped at {_N_CAP} in the CLI")
    target = args.target
    if not 0 <= target < n:
        raise ValueError(f"target index {target} out of range for N={n}")
    if args.k == "auto":
        k_final = gd.optimal_iterations(n)
    else:
        k_final = int(args.k)
        if k_final < 0:
            raise ValueError("iteration count must be nonnegative")
    theta = gd.theta_for(n)
    rows = []
    state = gd.init_uniform(n)
    for k in range(1, k_final + 1):
        state = gd.grover_iterate(state, target)
        closed = gd.success_probability(k, n)
        sim = float(abs(state[target]) ** 2)
        rows.append((n, k, theta, closed, sim, abs(closed - sim)))
    if k_final == 0:
        closed = gd.success_probability(0, n)
        sim = float(abs(state[target]) ** 2)
        rows.append((n, 0, theta, closed, sim, abs(closed - sim)))

    def body(out_dir: Path) -> list[Path]:
        path = write_csv(
            out_dir / f"digital_N{n}_k{args.k}.csv",
            ["N", "k", "theta", "p_success_closed", "p_success_simulated", "abs_error"],
            rows,
        )
        return [path]

    return _run_with_manifest(
        args, "digital", {"N": n, "k": args.k, "target": target}, body
    )


# -- analog -------------------------------------------------------------------


def cmd_analog(args) -> list[Path]:
    n = args.N
    if n < 2:
        raise ValueError("N must be at least 2")
    energy = args.E
    if args.model == "fenner":
        t_max = args.t_max if args.t_max is not None else 2.0 * an.fenner_time(n)
        dt = args.dt if args.dt is not None else t_max / 1000.0
        if dt <= 0 or t_max <= 0:
            raise ValueError("time grid must be positive")
        steps = int(math.floor(t_max / dt + 1e-9))
        rows = []
        for i in range(steps + 1):
            t = i * dt
            res = an.fenner_state(t, n)
            rows.append(("fenner", n, energy, t, res.p_target))
    else:
        if energy <= 0:
            raise ValueError("energy scale must be positive")
        t_max = args.t_max if args.t_max is not None else 3.0 * (math.pi / 4.0) * math.sqrt(n) / energy
        samples = 1001 if args.dt is None else int(math.floor(t_max / args.dt + 1e-9)) + 1
        if samples < 2:
            raise ValueError("time grid must contain at least two samples")
        traj = an.fg_scan(n, energy, t_max=t_max, samples=samples)
        rows = [
            ("farhi-gutmann", n, energy, float(t), float(p))
            for t, p in zip(traj.ts, traj.p_target)
        ]

    def body(out_dir: Path) -> list[Path]:
        path = write_csv(
            out_dir / f"analog_{args.model}_N{n}.csv",
            ["model", "N", "E", "t", "p_target"],
            rows,
        )
        return [path]

    params = {"model": args.model, "N": n, "E": energy, "t_max": args.t_max, "dt": args.dt}
    return _run_with_manifest(args, "analog", params, body)


# -- fixed point ---------------------------------------------------------------


def _epsilon_unitary(eps: float) -> np.ndarray:
    """Two-level unitary whose source-to-target amplitude gives failure eps."""
    if not 0.0 <= eps < 1.0:
        raise ValueError("epsilon must lie in [0, 1)")
    c = math.sqrt(1.0 - eps)
    s = math.sqrt(eps)
    return np.array([[-s, c], [c, s]], dtype=np.complex128)


def cmd_fixed_point(args) -> list[Path]:
    if args.depth < 0 or args.depth > fp.MAX_DEPTH:
        raise ValueError(f"depth must be between 0 and {fp.MAX_DEPTH}")
    if args.epsilon is not None:
        u0 = _epsilon_unitary(args.epsilon)
        target = 1
        source = 0
    elif args.u0 == "wh":
        n_qubits = int(round(math.log2(args.N)))
        if 2**n_qubits != args.N:
            raise ValueError("Walsh-Hadamard initialization needs N = 2^n")
        h = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
        u0 = np.array([[1.0]])
        for _ in range(n_qubits):
            u0 = np.kron(u0, h)
        u0 = u0.astype(np.complex128)
        target = args.target
        source = 0
    else:
        rng = np.random.default_rng(np.random.PCG64(args.seed))
        z = (rng.normal(size=(args.N, args.N)) + 1j * rng.normal(size=(args.N, args.N))) / math.sqrt(2.0)
        q, r = np.linalg.qr(z)
        u0 = q * (np.diag(r) / np.abs(np.diag(r)))
        target = args.target
        source = 0
    states = fp.fixed_point_run(u0, target=target, depth=args.depth, source=source)
    eps0 = states[0].eps_k
    rows = []
    for rec in states[1:] if args.depth >= 1 else states:
        closed = fp.closed_form_failure(eps0, rec.k)
        rel = abs(rec.eps_k - closed) / max(closed, 1e-300)
        rows.append((rec.k, closed, rec.eps_k, rel))

    def body(out_dir: Path) -> list[Path]:
        path = write_csv(
            out_dir / f"fixed_point_depth{args.depth}.csv",
            ["k", "eps_k_closed", "eps_k_simulated", "rel_error"],
            rows,
        )
        return [path]

    params = {
        "epsilon": args.epsilon,
        "u0": args.u0,
        "N": args.N,
        "depth": args.depth,
        "target": args.target,
        "seed": args.seed,
        "eps0_computed": eps0,
    }
    return _run_with_manifest(args, "fixed-point", params, body)


# -- damped geodesic ------------------------------------------------------------


def cmd_damped(args) -> list[Path]:
    l0, gamma = args.L0, args.gamma
    params = fp.DampedGeodesicParams(l0=l0, gamma=gamma, a=args.A, b=args.B)
    h = 1e-6
    q0 = fp.bessel_solution(0.0, params.a, params.b, l0, gamma)
    qdot0 = (
        fp.bessel_solution(h, params.a, params.b, l0, gamma)
        - fp.bessel_solution(-h, params.a, params.b, l0, gamma)
    ) / (2.0 * h)
    sol = fp.damped_geodesic_solve(l0, gamma, q0, qdot0, args.theta_end, args.dtheta)
    rows = []
    stride = max(1, len(sol.thetas) // args.max_rows)
    for i in range(0, len(sol.thetas), stride):
        t = float(sol.thetas[i])
        q = float(sol.q[i, 0])
        resid = fp.bessel_ode_residual(t, params.a, params.b, l0, gamma)
        p1 = min(1.0, q * q)
        rows.append((t, q, resid, 1.0 - p1, p1))

    def body(out_dir: Path) -> list[Path]:
        path = write_csv(
            out_dir / "damped_geodesic.csv",
            ["theta", "q", "residual", "p0", "p1"],
            rows,
        )
        return [path]

    meta = {
        "L0": l0,
        "gamma": gamma,
        "A": args.A,
        "B": args.B,
        "theta_end": args.theta_end,
        "dtheta": args.dtheta,
    }
    return _run_with_manifest(args, "damped", meta, body)


# -- geodesic / infogeo ----------------------------------------------------------


def cmd_geodesic(args) -> list[Path]:
    n = args.N
    if n < 2:
        raise ValueError("N must be at least 2")
    family = ig.grover_family(n)
    root = math.sqrt(n - 1)
    q0 = np.full(n, 1.0 / root)
    q0[0] = 0.0
    qdot0 = np.zeros(n)
    qdot0[0] = 1.0
    sol = ig.solve_geodesic(n, q0, qdot0, args.theta_end, args.dtheta)
    margin = 1e-2
    rows = []
    stride = max(1, len(sol.thetas) // args.max_rows)
    n_q_cols = min(n, 4)
    for i in range(0, len(sol.thetas), stride):
        t = float(sol.thetas[i])
        t_eval = min(max(t, margin), math.pi / 2 - margin)
        f = ig.fisher_information(family, t_eval)
        k = ig.kinetic_energy(family, t_eval)
        ds2 = ig.wigner_yanase_line_element(family, t_eval, args.dtheta)
        rows.append(
            (t, f, k, ds2, *[float(sol.q[i, j]) for j in range(n_q_cols)], sol.residual_max)
        )

    def body(out_dir: Path) -> list[Path]:
        path = write_csv(
            out_dir / f"geodesic_N{n}.csv",
            ["theta", "F", "K", "ds2_wy", *[f"q_{j}" for j in range(n_q_cols)], "residual_max"],
            rows,
        )
        return [path]

    meta = {"N": n, "dtheta": args.dtheta, "theta_end": args.theta_end}
    return _run_with_manifest(args, "geodesic", meta, body)


def _infogeo_family(args):
    if args.family == "grover":
        fam = ig.grover_family(args.N)
        lo, hi = 1e-2, math.pi / 2 - 1e-2
        label = f"grover_N{args.N}"
    elif args.family == "damped-const":
        damped = fp.DampedFamily(xi=lambda t, c=args.xi_const: c)
        fam = damped.as_parametric_family()
        lo, hi = 0.0, 10.0
        label = f"damped_const{args.xi_const}"
    else:
        damped = fp.DampedFamily(xi=lambda t, a=args.A: a * math.exp(-t))
        fam = damped.as_parametric_family()
        lo, hi = 0.0, 10.0
        label = f"damped_exp{args.A}"
    return fam, lo, hi, label


def cmd_infogeo(args) -> list[Path]:
    fam, lo, hi, label = _infogeo_family(args)
    thetas = np.linspace(lo, hi, args.points)
    rows = []
    for t in thetas:
        t = float(t)
        f = ig.fisher_information(fam, t)
        k = ig.kinetic_energy(fam, t)
        ds2 = ig.wigner_yanase_line_element(fam, t, 1e-3)
        rows.append((args.family, t, f, k, ds2))

    def body(out_dir: Path) -> list[Path]:
        path = write_csv(
            out_dir / f"infogeo_{label}.csv",
            ["family", "theta", "F", "K", "ds2_wy"],
            rows,
        )
        return [path]

    meta = {"family": args.family, "N": args.N, "xi_const": args.xi_const, "A": args.A, "points": args.points}
    return _run_with_manifest(args, "infogeo", meta, body)


# -- ga-verify --------------------------------------------------------------------


def cmd_ga_verify(args) -> list[Path]:
    n_list = [int(x) for x in args.N_list.split(",") if x]
    if not n_list:
        raise ValueError("N list must be nonempty")
    rows = []
    for n in n_list:
        k_max = args.k_max if args.k_max is not None else 2 * gd.optimal_iterations(n)
        state = gd.init_uniform(n)
        worst = 0.0
        for k in range(k_max + 1):
            digital = gd.plane_coordinates(state, target=0)
            rotor = msta.ga_grover_apply(k, n)
            dev = max(
                abs(rotor.a_target - digital.a_target), abs(rotor.a_bad - digital.a_bad)
            )
            worst = max(worst, dev)
            rows.append(("plane_coords", n, k, rotor.a_target, digital.a_target, dev))
            state = gd.grover_iterate(state, 0)
        rows.append(("plane_coords_max", n, k_max, worst, 0.0, worst))
    rng = np.random.default_rng(np.random.PCG64(args.seed))
    worst_rt = 0.0
    for _ in range(args.samples):
        v = rng.normal(size=4)
        col = np.array([v[0] + 1j * v[1], v[2] + 1j * v[3]])
        col /= np.linalg.norm(col)
        back = msta.mv_to_qubit(msta.qubit_to_mv(col[0], col[1]))
        worst_rt = max(worst_rt, abs(back[0] - col[0]), abs(back[1] - col[1]))
    rows.append(("qubit_roundtrip", args.samples, 0, worst_rt, 0.0, worst_rt))

    def body(out_dir: Path) -> list[Path]:
        path = write_csv(
            out_dir / "ga_verify.csv",
            ["check", "N", "k", "ga_value", "digital_value", "abs_dev"],
            rows,
        )
        return [path]

    meta = {"N_list": args.N_list, "k_max": args.k_max, "samples": args.samples, "seed": args.seed}
    return _run_with_manifest(args, "ga-verify", meta, body)


# -- sweep ----------------------------------------------------------------------


class SweepConfigError(ValueError):
    """Malformed sweep configuration: reported as a usage error."""


@dataclass
class SweepConfig:
    subcommand: str
    grids: dict
    fixed: dict


def parse_sweep_config(path: Path) -> SweepConfig:
    """Flat key = value lines; [a, b, c] marks a swept axis."""
    subcommand = None
    grids: dict = {}
    fixed: dict = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SweepConfigError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "subcommand":
            subcommand = value
        elif value.startswith("[") and value.endswith("]"):
            items = [v.strip() for v in value[1:-1].split(",") if v.strip()]
            if not items:
                raise SweepConfigError(f"{path}:{lineno}: empty grid for '{key}'")
            grids[key] = items
        else:
            fixed[key] = value
    if subcommand is None:
        raise SweepConfigError("sweep config must name a subcommand")
    return SweepConfig(subcommand=subcommand, grids=grids, fixed=fixed)


def _sweep_cells(cfg: SweepConfig) -> list[dict]:
    keys = sorted(cfg.grids)
    cells = [dict(cfg.fixed)]
    for key in keys:
        cells = [dict(cell, **{key: v}) for cell in cells for v in cfg.grids[key]]
    return cells


def _cell_name(subcommand: str, cell: dict, grid_keys) -> str:
    parts = [f"{k}-{cell[k]}" for k in sorted(grid_keys)]
    return "_".join([subcommand] + parts) if parts else subcommand


def _run_cell(payload: dict) -> list[str]:
    """Run one sweep cell in a worker process; writes into its own directory."""
    argv = [payload["subcommand"]]
    for key, value in payload["cell"].items():
        argv.extend([f"--{key.replace('_', '-')}", str(value)])
    argv.extend(["--out", payload["cell_dir"]])
    parser = build_parser()
    args = parser.parse_args(argv)
    written = args.func(args)
    return [str(p) for p in written]


def cmd_sweep(args) -> list[Path]:
    cfg = parse_sweep_config(Path(args.config))
    cells = _sweep_cells(cfg)
    if not cells:
        raise SweepConfigError("sweep grid is empty")
    out_dir = _out_dir(args)
    manifest = RunManifest(command="sweep", params={"config": str(args.config), "workers": args.workers})
    manifest.started = _utc_now()
    payloads = []
    index_rows = []
    for cell in cells:
        name = _cell_name(cfg.subcommand, cell, cfg.grids.keys())
        cell_dir = out_dir / name
        cell_dir.mkdir(parents=True, exist_ok=True)
        payloads.append({"subcommand": cfg.subcommand, "cell": cell, "cell_dir": str(cell_dir)})
        index_rows.append((name, cfg.subcommand, json.dumps(cell, sort_keys=True)))
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_run_cell, payloads))
    else:
        results = [_run_cell(p) for p in payloads]
    written: list[Path] = []
    for cell_files in results:
        written.extend(Path(f) for f in cell_files)
    index_path = write_csv(out_dir / "sweep_index.csv", ["cell", "subcommand", "params"], index_rows)
    written.append(index_path)
    manifest.finished = _utc_now()
    for path in written:
        if path.suffix == ".csv":
            manifest.record(path)
    manifest_path = manifest.write(out_dir)
    return written + [manifest_path]


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsearch",
        description="Batch experiments for digital, rotor, and Hamiltonian quantum search",
    )
    parser.add_argument("--version", action="version", version=f"qsearch {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output directory (env QSEARCH_OUT overrides the default)")
        p.add_argument("--seed", type=int, default=0, help="seed for the named PCG64 generator")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("digital", help="state-vector search probabilities per iteration")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", default="auto", help="iteration count or 'auto' for the optimal count")
    p.add_argument("--target", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_digital)

    p = sub.add_parser("analog", help="continuous-time target probability over a time grid")
    p.add_argument("--model", choices=["fenner", "farhi-gutmann"], required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--E", type=float, default=1.0)
    p.add_argument("--t-max", dest="t_max", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    common(p)
    p.set_defaults(func=cmd_analog)

    p = sub.add_parser("fixed-point", help="pi/3 recursion failure probabilities")
    p.add_argument("--epsilon", type=float, default=None, help="initial failure; builds a two-level unitary")
    p.add_argument("--u0", choices=["wh", "random"], default="wh")
    p.add_argument("--N", type=int, default=4)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--target", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_fixed_point)

    p = sub.add_parser("damped", help="damped geodesic solution and residuals")
    p.add_argument("--L0", type=float, default=2.0)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--B", type=float, default=0.0)
    p.add_argument("--theta-end", dest="theta_end", type=float, default=10.0)
    p.add_argument("--dtheta", type=float, default=1e-3)
    p.add_argument("--max-rows", dest="max_rows", type=int, default=200)
    common(p)
    p.set_defaults(func=cmd_damped)

    p = sub.add_parser("geodesic", help="search-family geodesic with metric columns")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--dtheta", type=float, default=1e-3)
    p.add_argument("--theta-end", dest="theta_end", type=float, default=math.pi / 2)
    p.add_argument("--max-rows", dest="max_rows", type=int, default=200)
    common(p)
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("infogeo", help="Fisher information and kinetic energy profiles")
    p.add_argument("--family", choices=["grover", "damped-const", "damped-exp"], default="grover")
    p.add_argument("--N", type=int, default=16)
    p.add_argument("--xi-const", dest="xi_const", type=float, default=0.5)
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--points", type=int, default=200)
    common(p)
    p.set_defaults(func=cmd_infogeo)

    p = sub.add_parser("ga-verify", help="rotor vs state-vector cross-verification table")
    p.add_argument("--N-list", dest="N_list", default="4,16,64,256,1024")
    p.add_argument("--k-max", dest="k_max", type=int, default=None)
    p.add_argument("--samples", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_ga_verify)

    p = sub.add_parser("sweep", help="cartesian parameter sweep from a config file")
    p.add_argument("--config", required=True)
    common(p)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except SweepConfigError as exc:
        print(f"qsearch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"qsearch: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return 0


if __name__ == "__main__":
    sys.exit(main())
