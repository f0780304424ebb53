"""Command-line interface.

Subcommands: train, sweep, baseline, geometry, symcheck, gradcheck.  Every
command is deterministic under a fixed seed and writes machine-readable
CSV (or JSON) files.  Angles are given on the command line in units of pi
(``--phi 0.75`` means 3pi/4) so the special angles stay exact; output files
record angles in radians.

Exit codes: 0 success, 1 configuration error, 2 non-convergence,
3 property violation.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import analysis, bfgs, grad, model

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOCONV = 2
EXIT_VIOLATION = 3

MODELS = {
    "visible2q": model.visible_model_2q,
    "hidden3q": model.hidden_model_3q,
}


class CliConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; remap to the config-error code
    def error(self, message):
        raise CliConfigError(message)


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _write_table(path, header, rows, fmt="csv"):
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        payload = {"rows": [dict(zip(header, _json_safe(row))) for row in rows]}
        text = json.dumps(payload, indent=2) + "\n"
    else:
        raise CliConfigError(f"unknown output format {fmt!r}")
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _json_safe(row):
    out = []
    for v in row:
        if isinstance(v, (bool, np.bool_)):
            out.append(bool(v))
        elif isinstance(v, (int, np.integer)):
            out.append(int(v))
        elif isinstance(v, (float, np.floating)):
            out.append(float(v))
        else:
            out.append(v)
    return out


def _parse_grid(spec, scale=1.0, name="grid"):
    try:
        start, stop, count = spec.split(":")
        values = np.linspace(float(start), float(stop), int(count)) * scale
    except (ValueError, TypeError) as exc:
        raise CliConfigError(f"bad {name} spec {spec!r}: want start:stop:count") from exc
    if values.size < 1:
        raise CliConfigError(f"{name} needs at least one point")
    return values


def _parse_init(spec, n_starts, seed):
    parts = str(spec).split(":")
    try:
        if parts[0] == "constant" and len(parts) == 2:
            return bfgs.MultiStartOptions.constant(float(parts[1]),
                                                   n_starts=n_starts, seed=seed)
        if parts[0] == "uniform" and len(parts) == 3:
            return bfgs.MultiStartOptions.uniform(n_starts, float(parts[1]),
                                                  float(parts[2]), seed=seed)
    except ValueError as exc:
        raise CliConfigError(f"bad init spec {spec!r}") from exc
    raise CliConfigError(
        f"bad init spec {spec!r}: want constant:<c> or uniform:<lo>:<hi>")


def _build_model(name):
    if name not in MODELS:
        raise CliConfigError(f"unknown model {name!r}; choose from {sorted(MODELS)}")
    return MODELS[name]()


def _resolve(args, config, key, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise CliConfigError("config file must hold a flat JSON object")
    return cfg


def _resolve_seed(args, config):
    seed = _resolve(args, config, "seed", None)
    if seed is None:
        seed = os.environ.get("QBM_SEED", 0)
    try:
        return int(seed)
    except (TypeError, ValueError) as exc:
        raise CliConfigError(f"bad seed {seed!r}") from exc


def _bfgs_options(args, config):
    kwargs = {}
    for key in ("max_iter", "grad_tol", "param_cap"):
        value = _resolve(args, config, key, None)
        if value is not None:
            kwargs[key] = type(getattr(bfgs.BfgsOptions(), key))(value)
    try:
        return bfgs.BfgsOptions(**kwargs)
    except ValueError as exc:
        raise CliConfigError(str(exc)) from exc


def _require_out(args, config):
    out = _resolve(args, config, "out", None)
    if out is None:
        raise CliConfigError("--out is required")
    return out


def cmd_train(args):
    config = _load_config(args.config)
    qbm_model = _build_model(_resolve(args, config, "model", "visible2q"))
    r_val = _resolve(args, config, "r", None)
    if r_val is None:
        raise CliConfigError("--r is required for train")
    r = float(r_val)
    phi_pi = _resolve(args, config, "phi", None)
    if phi_pi is None:
        raise CliConfigError("--phi is required for train")
    phi = float(phi_pi) * np.pi
    seed = _resolve_seed(args, config)
    starts = int(_resolve(args, config, "starts", 1))
    ms = _parse_init(_resolve(args, config, "init", "constant:0"), starts, seed)
    opts = _bfgs_options(args, config)
    out = _require_out(args, config)
    fmt = _resolve(args, config, "format", "csv")

    try:
        target = model.target_state(r, phi)
    except ValueError as exc:
        raise CliConfigError(str(exc)) from exc
    best, _ = bfgs.multi_start(qbm_model, target.density, opts, ms)
    header = (["r", "phi", "s_min_bits", "iterations", "converged",
               "grad_norm", "boundary"]
              + [f"a_{i+1}" for i in range(qbm_model.n_params)])
    row = ([r, phi, best.s_min, best.iterations, best.converged,
            best.grad_norm, best.boundary] + list(best.a_opt))
    _write_table(out, header, [row], fmt)
    return EXIT_OK if best.converged else EXIT_NOCONV


def cmd_sweep(args):
    config = _load_config(args.config)
    qbm_model = _build_model(_resolve(args, config, "model", "visible2q"))
    r_values = _parse_grid(_resolve(args, config, "grid_r", "0:1:21"),
                           name="--grid-r")
    phi_values = _parse_grid(_resolve(args, config, "grid_phi", "0:2:121"),
                             scale=np.pi, name="--grid-phi")
    seed = _resolve_seed(args, config)
    starts = int(_resolve(args, config, "starts", 1))
    ms = _parse_init(_resolve(args, config, "init", "constant:0"), starts, seed)
    opts = _bfgs_options(args, config)
    threads = int(_resolve(args, config, "threads", os.cpu_count() or 1))
    out = _require_out(args, config)
    fmt = _resolve(args, config, "format", "csv")

    try:
        grid = analysis.SweepGrid(r_values=r_values, phi_values=phi_values)
    except ValueError as exc:
        raise CliConfigError(str(exc)) from exc
    table = analysis.sweep(qbm_model, grid, opts, ms, threads=threads)
    header = ["r", "phi", "s_min_bits", "converged", "grad_norm"]
    rows = []
    for i, r in enumerate(grid.r_values):
        for j, phi in enumerate(grid.phi_values):
            rows.append([float(r), float(phi), table.s_min[i, j],
                         bool(table.converged[i, j]), table.grad_norm[i, j]])
    _write_table(out, header, rows, fmt)
    return EXIT_OK


def cmd_baseline(args):
    config = _load_config(args.config)
    mode = _resolve(args, config, "mode", None)
    if mode not in ("r1", "phi3pi4"):
        raise CliConfigError("--mode must be r1 or phi3pi4")
    out = _require_out(args, config)
    fmt = _resolve(args, config, "format", "csv")
    rows = []
    if mode == "r1":
        phis = _parse_grid(_resolve(args, config, "grid_phi", "0:2:121"),
                           scale=np.pi, name="--grid-phi")
        rows = [[float(phi), analysis.baseline_r1(phi)] for phi in phis]
    else:
        rs = _parse_grid(_resolve(args, config, "grid_r", "0:1:21"),
                         name="--grid-r")
        try:
            rows = [[float(r), analysis.baseline_phi_3pi4(r)] for r in rs]
        except ValueError as exc:
            raise CliConfigError(str(exc)) from exc
    _write_table(out, ["x", "analytic_bits"], rows, fmt)
    return EXIT_OK


def cmd_geometry(args):
    config = _load_config(args.config)
    seed = _resolve_seed(args, config)
    n_cloud = int(_resolve(args, config, "cloud_n", 20000))
    out = _require_out(args, config)
    fmt = _resolve(args, config, "format", "csv")
    r_values = _parse_grid(_resolve(args, config, "grid_r", "0.1:0.9:9"),
                           name="--grid-r")
    phi_values = _parse_grid(_resolve(args, config, "grid_phi",
                                      "0.05:1.95:20"),
                             scale=np.pi, name="--grid-phi")

    try:
        cloud = analysis.numerical_range_cloud(n_cloud, seed)
    except ValueError as exc:
        raise CliConfigError(str(exc)) from exc
    root, ext = os.path.splitext(out)
    cloud_path = f"{root}_cloud{ext or '.csv'}"
    _write_table(cloud_path, ["z1_plus_z2", "x1_plus_x2", "z1z2"],
                 [list(map(float, row)) for row in cloud], fmt)

    header = ["r", "phi", "a_star", "b_star", "det_hessian", "boundary",
              "fidelity", "gap", "singular"]
    rows = []
    nan = float("nan")
    for r in r_values:
        for phi in phi_values:
            try:
                pt = analysis.extreme_params(r, phi)
                det = analysis.hessian_det(r, phi)
                cert = analysis.ground_state_certificate(r, phi)
                rows.append([float(r), float(phi), pt.a_star, pt.b_star, det,
                             cert.boundary, cert.fidelity, cert.gap, False])
            except analysis.SingularityError:
                rows.append([float(r), float(phi), nan, nan, nan, False,
                             nan, nan, True])
    _write_table(out, header, rows, fmt)
    return EXIT_OK


def cmd_symcheck(args):
    config = _load_config(args.config)
    seed = _resolve_seed(args, config)
    trials = int(_resolve(args, config, "trials", 100))
    if trials < 1:
        raise CliConfigError("--trials must be positive")
    out = _require_out(args, config)
    fmt = _resolve(args, config, "format", "csv")
    qbm_model = model.hidden_model_3q()
    rng = np.random.default_rng(seed)
    header = ["op", "r", "phi", "lhs_bits", "rhs_bits", "abs_diff"]
    rows = []
    worst = 0.0
    for _ in range(trials):
        r = rng.uniform(0.0, 1.0)
        phi = rng.uniform(0.0, 2 * np.pi)
        a = rng.uniform(-1.0, 1.0, qbm_model.n_params)
        for op in analysis.all_symmetry_ops():
            lhs, rhs = analysis.symmetry_invariance_check(r, phi, a, op,
                                                          qbm_model)
            diff = abs(lhs - rhs)
            worst = max(worst, diff)
            rows.append([f"{op.visible_part}:{op.hidden_part}",
                         float(r), float(phi), lhs, rhs, diff])
    _write_table(out, header, rows, fmt)
    return EXIT_OK if worst < 1e-9 else EXIT_VIOLATION


def cmd_gradcheck(args):
    config = _load_config(args.config)
    seed = _resolve_seed(args, config)
    trials = int(_resolve(args, config, "trials", 100))
    step = float(_resolve(args, config, "step", 1e-5))
    if step <= 0:
        raise CliConfigError("--step must be positive")
    if trials < 1:
        raise CliConfigError("--trials must be positive")
    qbm_model = _build_model(_resolve(args, config, "model", "visible2q"))
    out = _require_out(args, config)
    fmt = _resolve(args, config, "format", "csv")
    rng = np.random.default_rng(seed)
    rows = []
    worst = 0.0
    for trial in range(trials):
        a = rng.uniform(-1.0, 1.0, qbm_model.n_params)
        r = rng.uniform(0.0, 1.0)
        phi = rng.uniform(0.0, 2 * np.pi)
        target = model.target_state(r, phi).density
        ws = grad.GradientWorkspace(qbm_model, a)
        analytic = grad.gradient(qbm_model, target, a, ws)
        numeric = grad.finite_diff_grad(qbm_model, target, a, step)
        diff = np.abs(analytic - numeric)
        small = np.abs(numeric) < 1e-8
        # near-zero components are held to an absolute 1e-8 bound instead;
        # scaling by 1e3 folds that bound into the single 1e-5 threshold
        err = float(np.max(np.where(small, diff * 1e3,
                                    diff / np.where(small, 1.0,
                                                    np.abs(numeric)))))
        worst = max(worst, err)
        rows.append([trial, err])
    _write_table(out, ["trial", "max_rel_err"], rows, fmt)
    return EXIT_OK if worst < 1e-5 else EXIT_VIOLATION


def _add_common(sub):
    sub.add_argument("--config", help="flat JSON object with defaults")
    sub.add_argument("--seed", type=int, help="RNG seed (QBM_SEED fallback)")
    sub.add_argument("--out", help="output file path")
    sub.add_argument("--format", choices=("csv", "json"))
    sub.add_argument("--threads", type=int)


def build_parser():
    parser = _Parser(prog="qbm", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command", required=True)

    train = subs.add_parser("train", help="minimize for one target state")
    train.add_argument("--model", choices=sorted(MODELS))
    train.add_argument("--r", type=float)
    train.add_argument("--phi", type=float, help="angle in units of pi")
    train.add_argument("--starts", type=int)
    train.add_argument("--init", help="constant:<c> or uniform:<lo>:<hi>")
    train.add_argument("--max-iter", dest="max_iter", type=int)
    train.add_argument("--grad-tol", dest="grad_tol", type=float)
    train.add_argument("--param-cap", dest="param_cap", type=float)
    _add_common(train)
    train.set_defaults(func=cmd_train)

    sweep = subs.add_parser("sweep", help="landscape over an (r, phi) grid")
    sweep.add_argument("--model", choices=sorted(MODELS))
    sweep.add_argument("--grid-r", dest="grid_r", help="start:stop:count")
    sweep.add_argument("--grid-phi", dest="grid_phi",
                       help="start:stop:count in units of pi")
    sweep.add_argument("--starts", type=int)
    sweep.add_argument("--init")
    sweep.add_argument("--max-iter", dest="max_iter", type=int)
    sweep.add_argument("--grad-tol", dest="grad_tol", type=float)
    sweep.add_argument("--param-cap", dest="param_cap", type=float)
    _add_common(sweep)
    sweep.set_defaults(func=cmd_sweep)

    baseline = subs.add_parser("baseline", help="closed-form landscape lines")
    baseline.add_argument("--mode", choices=("r1", "phi3pi4"))
    baseline.add_argument("--grid-r", dest="grid_r")
    baseline.add_argument("--grid-phi", dest="grid_phi")
    _add_common(baseline)
    baseline.set_defaults(func=cmd_baseline)

    geometry = subs.add_parser(
        "geometry", help="numerical-range cloud and tangent-plane table")
    geometry.add_argument("--cloud-n", dest="cloud_n", type=int)
    geometry.add_argument("--grid-r", dest="grid_r")
    geometry.add_argument("--grid-phi", dest="grid_phi")
    _add_common(geometry)
    geometry.set_defaults(func=cmd_geometry)

    symcheck = subs.add_parser(
        "symcheck", help="paired relative entropies under the symmetry group")
    symcheck.add_argument("--trials", type=int)
    _add_common(symcheck)
    symcheck.set_defaults(func=cmd_symcheck)

    gradcheck = subs.add_parser(
        "gradcheck", help="analytic gradient against finite differences")
    gradcheck.add_argument("--model", choices=sorted(MODELS))
    gradcheck.add_argument("--trials", type=int)
    gradcheck.add_argument("--step", type=float)
    _add_common(gradcheck)
    gradcheck.set_defaults(func=cmd_gradcheck)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
