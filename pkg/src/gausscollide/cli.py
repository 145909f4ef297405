"""Command-line interface.

Subcommands: evolve (per-step table for one configuration), scan
(reflectivity-grid non-Markovianity measures, optionally parallel),
transport (ancilla steering against chosen environment modes), and
thresholds (closed-form steerability threshold tables).

Output is CSV (default) or JSON lines; floats are rendered with 12
significant digits so repeated runs are byte-identical regardless of
--jobs.  Exit codes: 0 success, 2 usage/validation error, 3 numerical
degeneracy.
"""

import argparse
import concurrent.futures
import os
import re
import sys

import numpy as np

from .divisibility import divisibility_records, nm_cptp
from .engine import SimulationConfig, env_ancilla_cm, iter_steps, joint_cm_closed_form, run
from .errors import GaussCollideError
from .states import EnvironmentSpec, JointSpec, reduce_to_modes
from .steering import (
    Direction,
    nm_from_steering,
    steerability,
    steering_series,
    threshold_an_to_s_squeezed_vac,
    threshold_an_to_s_thermal,
    threshold_s_to_an,
)

ENV_FAMILIES = ("vacuum", "thermal", "squeezed", "squeezed-thermal")

_ANGLE_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?)pi(?:/(\d+\.?\d*|\.\d+))?$")

_CONFIG_KEYS = {
    "r1", "r2", "phi", "xi", "env", "n", "zeta", "phi_env", "steps",
    "grid_r1", "grid_r2", "jobs", "format", "modes",
}


def parse_angle(token: str) -> float:
    """Parse a float or a pi-token such as 'pi', '-pi/2', '2pi/3', '0.5pi'."""
    text = token.strip().lower().replace(" ", "")
    m = _ANGLE_RE.match(text)
    if m:
        coef = m.group(1)
        if coef in ("", "+"):
            num = 1.0
        elif coef == "-":
            num = -1.0
        else:
            num = float(coef)
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * np.pi / den
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid angle {token!r}") from None


def parse_values(token: str) -> list[float]:
    """Parse 'a,b,c' or a linspace spec 'start:stop:count'."""
    text = token.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"expected start:stop:count, got {token!r}")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid grid spec {token!r}") from None
        if count < 2:
            raise argparse.ArgumentTypeError("grid count must be >= 2")
        return [float(v) for v in np.linspace(start, stop, count)]
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid value list {token!r}") from None


def load_config_file(path: str) -> dict:
    """key=value defaults; '#' starts a comment; hyphens and underscores
    in keys are interchangeable."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, _, val = line.partition("=")
            key = key.strip().replace("-", "_")
            if key == "L":
                key = "steps"
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = val.strip()
    return values


def _fmt(x: float) -> str:
    return format(float(x) + 0.0, ".12g")


def _csv_token(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return _fmt(v)
    return str(v)


def _json_token(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return _fmt(v)
    return '"' + str(v) + '"'


def emit(header, rows, fmt: str, out_path):
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_csv_token(v) for v in row) for row in rows]
    else:
        lines = [
            "{" + ", ".join(f'"{k}": {_json_token(v)}' for k, v in zip(header, row)) + "}"
            for row in rows
        ]
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve(args, cfg, key, default=None, convert=None):
    val = getattr(args, key, None)
    if val is None and key in cfg:
        val = cfg[key]
    if val is None:
        return default
    if convert is not None and isinstance(val, str):
        return convert(val)
    return val


def _resolve_env(args, cfg, parser) -> EnvironmentSpec:
    family = _resolve(args, cfg, "env", default="vacuum")
    if family not in ENV_FAMILIES:
        parser.error(f"unknown environment family {family!r}")
    n = _resolve(args, cfg, "n", default=0.0, convert=float)
    zeta = _resolve(args, cfg, "zeta", default=0.0, convert=float)
    phi_env = _resolve(args, cfg, "phi_env", default=0.0, convert=parse_angle)
    if family == "vacuum" and (n != 0.0 or zeta != 0.0):
        parser.error("--env vacuum does not take --n or --zeta; pick another family")
    if family == "thermal" and zeta != 0.0:
        parser.error("--env thermal does not take --zeta")
    if family == "squeezed" and n != 0.0:
        parser.error("--env squeezed does not take --n; use squeezed-thermal")
    return EnvironmentSpec(n=n, zeta=zeta, phi_env=phi_env)


def _resolve_common(args, parser):
    cfg = load_config_file(args.config) if getattr(args, "config", None) else {}
    phi = _resolve(args, cfg, "phi", default=0.0, convert=parse_angle)
    xi = _resolve(args, cfg, "xi", default=1.0, convert=float)
    steps = _resolve(args, cfg, "steps", default=250, convert=int)
    env = _resolve_env(args, cfg, parser)
    fmt = _resolve(args, cfg, "format", default="csv")
    if fmt not in ("csv", "jsonl"):
        parser.error(f"unknown format {fmt!r}")
    return cfg, phi, xi, steps, env, fmt


def _require_r(args, cfg, parser):
    r1 = _resolve(args, cfg, "r1", convert=float)
    r2 = _resolve(args, cfg, "r2", convert=float)
    if r1 is None or r2 is None:
        parser.error("--r1 and --r2 are required (flag or config file)")
    return r1, r2


def cmd_evolve(args, parser) -> int:
    cfg, phi, xi, steps, env, fmt = _resolve_common(args, parser)
    r1, r2 = _require_r(args, cfg, parser)
    config = SimulationConfig(
        r1=r1, r2=r2, phi_shift=phi, joint=JointSpec(xi=xi), env=env, L=steps
    )
    traj = run(config)
    if args.oracle:
        _verify_against_oracle(config)

    g_san = steering_series(traj, Direction.B_TO_A)
    g_ans = steering_series(traj, Direction.A_TO_B)
    by_step = {rec.step: rec for rec in divisibility_records(traj)}
    header = [
        "j", "re_c22", "im_c22", "abs_c22_sq", "g_s_to_an", "g_an_to_s",
        "nu_set_min", "nu_set_max", "ratio", "skip_flag",
    ]
    rows = []
    for step in traj.steps:
        rec = by_step.get(step.j)
        if rec is None or rec.skipped:
            nu_min = nu_max = ratio = None
        else:
            nu_min = min(rec.nu_plus, rec.nu_minus)
            nu_max = max(rec.nu_plus, rec.nu_minus)
            ratio = rec.ratio
        rows.append(
            (
                step.j,
                float(step.coeffs.c22.real),
                float(step.coeffs.c22.imag),
                step.coeffs.c22_abs_sq,
                float(g_san[step.j]),
                float(g_ans[step.j]),
                nu_min,
                nu_max,
                ratio,
                bool(rec.skipped) if rec is not None else False,
            )
        )
    emit(header, rows, fmt, args.out)
    return 0


def _verify_against_oracle(config: SimulationConfig) -> None:
    """Full-chain symplectic propagation cross-check of the closed form."""
    oracle_cfg = SimulationConfig(
        r1=config.r1, r2=config.r2, phi_shift=config.phi_shift,
        joint=config.joint, env=config.env, L=config.L, oracle_enabled=True,
    )
    for _, coeffs, sigma in iter_steps(oracle_cfg):
        closed = joint_cm_closed_form(coeffs, config.joint, config.env)
        reduced = reduce_to_modes(sigma, [0, 1])
        err = float(np.max(np.abs(closed - reduced)))
        if err > 1e-8:
            raise GaussCollideError(
                f"oracle mismatch at step {coeffs.step}: max deviation {err:g}"
            )


def _scan_cell(task):
    r1, r2, phi, xi, n, zeta, phi_env, steps = task
    config = SimulationConfig(
        r1=r1, r2=r2, phi_shift=phi, joint=JointSpec(xi=xi),
        env=EnvironmentSpec(n=n, zeta=zeta, phi_env=phi_env), L=steps,
    )
    traj = run(config)
    return (
        nm_from_steering(steering_series(traj, Direction.B_TO_A)),
        nm_from_steering(steering_series(traj, Direction.A_TO_B)),
        nm_cptp(traj).value,
    )


def cmd_scan(args, parser) -> int:
    cfg, phi, xi, steps, env, fmt = _resolve_common(args, parser)
    if steps < 2:
        parser.error("scan needs --steps >= 2")
    grid_r1 = _resolve(args, cfg, "grid_r1", convert=parse_values)
    grid_r2 = _resolve(args, cfg, "grid_r2", convert=parse_values)
    if grid_r1 is None or grid_r2 is None:
        parser.error("--grid-r1 and --grid-r2 are required")
    if len(grid_r1) < 2 or len(grid_r2) < 2:
        parser.error("each grid axis needs at least 2 points")
    jobs = _resolve(args, cfg, "jobs", convert=int)
    if jobs is None:
        jobs = int(os.environ.get("GAUSSCOLLIDE_JOBS", "1"))
    if jobs < 1:
        parser.error("--jobs must be >= 1")

    tasks = [
        (r1, r2, phi, xi, env.n, env.zeta, env.phi_env, steps)
        for r1 in grid_r1
        for r2 in grid_r2
    ]
    if jobs == 1:
        results = [_scan_cell(t) for t in tasks]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_cell, tasks, chunksize=8))

    header = ["r1", "r2", "n_gs_s_to_an", "n_gs_an_to_s", "n_cptp"]
    rows = [
        (task[0], task[1], res[0], res[1], res[2])
        for task, res in zip(tasks, results)
    ]
    emit(header, rows, fmt, args.out)
    return 0


def cmd_transport(args, parser) -> int:
    cfg, phi, xi, steps, env, fmt = _resolve_common(args, parser)
    r1, r2 = _require_r(args, cfg, parser)
    modes_spec = _resolve(args, cfg, "modes")
    if modes_spec is None:
        parser.error("--modes is required (comma-separated environment indices)")
    try:
        modes = [int(v) for v in str(modes_spec).split(",") if v.strip() != ""]
    except ValueError:
        parser.error(f"invalid --modes value {modes_spec!r}")
    if not modes:
        parser.error("--modes must list at least one environment index")
    for k in modes:
        if not 1 <= k <= steps + 1:
            parser.error(f"environment index {k} out of range 1..{steps + 1}")

    config = SimulationConfig(
        r1=r1, r2=r2, phi_shift=phi, joint=JointSpec(xi=xi), env=env, L=steps,
        oracle_enabled=True,
    )
    header = ["j", "g_s_to_an"] + [f"g_e{k}_to_an" for k in modes]
    rows = []
    for j, coeffs, sigma in iter_steps(config):
        joint = joint_cm_closed_form(coeffs, config.joint, config.env)
        row = [j, steerability(joint, Direction.B_TO_A)]
        for k in modes:
            row.append(steerability(env_ancilla_cm(sigma, k), Direction.A_TO_B))
        rows.append(tuple(row))
    emit(header, rows, fmt, args.out)
    return 0


def cmd_thresholds(args, parser) -> int:
    cfg = load_config_file(args.config) if getattr(args, "config", None) else {}
    fmt = _resolve(args, cfg, "format", default="csv")
    if fmt not in ("csv", "jsonl"):
        parser.error(f"unknown format {fmt!r}")
    family = args.family
    if family == "s-to-an":
        if args.n_values is None:
            parser.error("family s-to-an needs --n-values")
        header = ["n", "threshold"]
        rows = [(n, threshold_s_to_an(n)) for n in args.n_values]
    elif family == "an-to-s-thermal":
        if args.n_values is None or args.xi_values is None:
            parser.error("family an-to-s-thermal needs --n-values and --xi-values")
        header = ["n", "xi", "threshold"]
        rows = [
            (n, xi, threshold_an_to_s_thermal(n, xi))
            for n in args.n_values
            for xi in args.xi_values
        ]
    else:  # an-to-s-squeezed
        if args.xi_values is None or args.zeta_values is None:
            parser.error("family an-to-s-squeezed needs --xi-values and --zeta-values")
        header = ["xi", "zeta", "threshold"]
        rows = [
            (xi, zeta, threshold_an_to_s_squeezed_vac(xi, zeta))
            for xi in args.xi_values
            for zeta in args.zeta_values
        ]
    emit(header, rows, fmt, args.out)
    return 0


def _add_common_flags(sub, with_r=True):
    if with_r:
        sub.add_argument("--r1", type=float, help="reflectivity of the system beam splitter")
        sub.add_argument("--r2", type=float, help="reflectivity of the environment beam splitter")
    sub.add_argument("--phi", type=parse_angle, help="phase on the system arm (accepts pi tokens)")
    sub.add_argument("--xi", type=float, help="ancilla-system squeezing (default 1)")
    sub.add_argument("--env", choices=ENV_FAMILIES, help="environment family (default vacuum)")
    sub.add_argument("--n", type=float, help="environment thermal occupation")
    sub.add_argument("--zeta", type=float, help="environment squeezing magnitude")
    sub.add_argument("--phi-env", dest="phi_env", type=parse_angle,
                     help="environment squeezing phase (accepts pi tokens)")
    sub.add_argument("--L", "--steps", "-L", dest="steps", type=int,
                     help="number of rounds (default 250)")
    sub.add_argument("--config", help="key=value file of default parameter values")
    sub.add_argument("--format", dest="format", choices=("csv", "jsonl"), default=None,
                     help="output format (default csv)")
    sub.add_argument("--out", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gausscollide",
        description="Gaussian collision-model simulator with steering and "
        "divisibility non-Markovianity witnesses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_evolve = sub.add_parser("evolve", help="per-step table for one configuration")
    _add_common_flags(p_evolve)
    p_evolve.add_argument("--oracle", action="store_true",
                          help="cross-check the closed form against full-chain propagation")
    p_evolve.set_defaults(func=cmd_evolve)

    p_scan = sub.add_parser("scan", help="non-Markovianity measures over a reflectivity grid")
    _add_common_flags(p_scan, with_r=False)
    p_scan.add_argument("--grid-r1", dest="grid_r1",
                        help="r1 axis: 'a,b,c' or 'start:stop:count'")
    p_scan.add_argument("--grid-r2", dest="grid_r2",
                        help="r2 axis: 'a,b,c' or 'start:stop:count'")
    p_scan.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default GAUSSCOLLIDE_JOBS or 1)")
    p_scan.set_defaults(func=cmd_scan)

    p_transport = sub.add_parser(
        "transport", help="ancilla steering against selected environment modes"
    )
    _add_common_flags(p_transport)
    p_transport.add_argument("--modes", help="comma-separated environment indices k (1..L+1)")
    p_transport.set_defaults(func=cmd_transport)

    p_thr = sub.add_parser("thresholds", help="closed-form steerability threshold tables")
    p_thr.add_argument("--family", required=True,
                       choices=("s-to-an", "an-to-s-thermal", "an-to-s-squeezed"))
    p_thr.add_argument("--n-values", dest="n_values", type=parse_values)
    p_thr.add_argument("--xi-values", dest="xi_values", type=parse_values)
    p_thr.add_argument("--zeta-values", dest="zeta_values", type=parse_values)
    p_thr.add_argument("--config", help="key=value file of default parameter values")
    p_thr.add_argument("--format", dest="format", choices=("csv", "jsonl"), default=None)
    p_thr.add_argument("--out", help="output file (default stdout)")
    p_thr.set_defaults(func=cmd_thresholds)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, parser)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    except GaussCollideError as exc:
        print(f"error: numerical degeneracy: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
