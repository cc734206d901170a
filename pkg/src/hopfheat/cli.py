"""Command-line front end: evaluate kernels, run suites, embed, export tables.

Exit codes: 0 success, 1 verification-check failure, 2 configuration or
domain error.  Option precedence: command-line flags > TOML config file
(--config) > built-in defaults.  All randomized commands require --seed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

import numpy as np

from . import kernels, rigidity, su2, verify
from .kernels import EvalPolicy
from .verify import ConfigError, SuiteConfig, atomic_write_text

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hopf-heat",
        description="Heat kernels on SU(2), the round S^3/S^2 companions, "
        "and the spectral reconstruction of the Hopf fibration.",
    )
    parser.add_argument("--config", help="TOML config file; flags override its values")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one kernel at one point")
    p_eval.add_argument("--kernel", choices=["p", "q", "qt", "qtilde"], default=None)
    p_eval.add_argument("--t", type=float, default=None)
    p_eval.add_argument("--r", type=float, default=None)
    p_eval.add_argument("--theta", type=float, default=None)
    p_eval.add_argument("--delta", type=float, default=None)
    p_eval.add_argument("--method", choices=["series", "integral", "auto"], default=None)
    p_eval.add_argument("--tol", type=float, default=None)

    p_ver = sub.add_parser("verify", help="run a named verification suite")
    p_ver.add_argument("--suite", default=None)
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.add_argument("--n", type=int, default=None)
    p_ver.add_argument(
        "--tol-overrides",
        default=None,
        help="comma-separated name=value pairs overriding check tolerances",
    )
    p_ver.add_argument("--out", default=None, help="write the JSON report here")
    p_ver.add_argument("--csv", default=None, help="also write per-check residuals as CSV")

    p_emb = sub.add_parser("embed", help="run the embedding pipeline and dump coordinates")
    p_emb.add_argument("--n", type=int, default=None)
    p_emb.add_argument("--seed", type=int, default=None)
    p_emb.add_argument("--out", default=None)

    p_tab = sub.add_parser("table", help="export a kernel value table as CSV")
    p_tab.add_argument("--kernel", choices=["p", "q", "qt", "qtilde"], default=None)
    p_tab.add_argument("--t-grid", default=None, help="comma-separated t values")
    p_tab.add_argument("--r-grid", default=None, help="comma-separated r values")
    p_tab.add_argument("--theta-grid", default=None, help="comma-separated theta values")
    p_tab.add_argument("--out", default=None)
    return parser


def _apply_config(args: argparse.Namespace, defaults: dict) -> dict:
    """Resolve option values: flags beat the config file, which beats defaults."""
    file_values = {}
    if args.config:
        with open(args.config, "rb") as fh:
            data = tomllib.load(fh)
        file_values = data.get(args.command, {})
    resolved = {}
    for key, default in defaults.items():
        flag = getattr(args, key, None)
        if flag is not None:
            resolved[key] = flag
        elif key.replace("_", "-") in file_values:
            resolved[key] = file_values[key.replace("_", "-")]
        elif key in file_values:
            resolved[key] = file_values[key]
        else:
            resolved[key] = default
    return resolved


def _parse_grid(spec, name: str):
    if spec is None or (isinstance(spec, str) and not spec.strip()):
        raise ConfigError(f"table: {name} must be a nonempty comma-separated list")
    if isinstance(spec, (list, tuple)):
        vals = [float(v) for v in spec]
    else:
        try:
            vals = [float(v) for v in str(spec).split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"table: bad value in {name}: {exc}") from exc
    if not vals:
        raise ConfigError(f"table: {name} is empty")
    return vals


def _eval_one(kernel: str, t: float, r, theta, delta, method: str, tol: float):
    """Evaluate one kernel; returns (value, method_used)."""
    policy = EvalPolicy(tol=tol) if tol else EvalPolicy()
    if t is None or t <= 0:
        raise ConfigError("eval: --t must be a positive number")
    if kernel == "p":
        if r is None or theta is None:
            raise ConfigError("eval: kernel p needs --r and --theta")
        if method == "integral":
            return kernels.p_integral(t, r, theta, policy), "integral"
        if method == "series":
            return kernels.p_series(t, r, theta, policy), "series"
        # auto: the spectral series, extended precision, is the better
        # conditioned evaluation at these temperatures
        return kernels.p_series(t, r, theta, policy), "series"
    if kernel == "q":
        if delta is None:
            raise ConfigError("eval: kernel q needs --delta")
        branch = "direct" if t < policy.t_switch else "dual"
        return kernels.q_eval(t, math.cos(delta), policy), f"theta-{branch}"
    if kernel == "qt":
        if delta is None:
            if r is None or theta is None:
                raise ConfigError("eval: kernel qt needs --delta, or --r and --theta")
            delta = math.acos(max(-1.0, min(1.0, math.cos(r) * math.cos(theta))))
        if method == "series":
            if r is None or theta is None:
                raise ConfigError("eval: qt spectral form needs --r and --theta")
            return kernels.q_t_spectral(t, r, theta), "spectral"
        return kernels.q_eval(t, math.cos(delta), policy), "theta"
    if kernel == "qtilde":
        if r is None:
            raise ConfigError("eval: kernel qtilde needs --r")
        return kernels.q_tilde(t, r, policy), "series"
    raise ConfigError(f"eval: unknown kernel {kernel!r}")


def _cmd_eval(args) -> int:
    opts = _apply_config(
        args,
        {
            "kernel": "p",
            "t": None,
            "r": None,
            "theta": None,
            "delta": None,
            "method": "auto",
            "tol": None,
        },
    )
    value, used = _eval_one(
        opts["kernel"], opts["t"], opts["r"], opts["theta"], opts["delta"], opts["method"], opts["tol"]
    )
    print(f"{float(value)!r} method={used}")
    return 0


def _cmd_verify(args) -> int:
    opts = _apply_config(
        args,
        {"suite": None, "seed": None, "n": None, "tol_overrides": None, "out": None, "csv": None},
    )
    if opts["suite"] is None:
        raise ConfigError("verify: --suite is required")
    if opts["seed"] is None:
        raise ConfigError("verify: --seed is required (reproducibility is the product)")
    overrides = {}
    if opts["tol_overrides"]:
        for item in str(opts["tol_overrides"]).split(","):
            if not item.strip():
                continue
            key, _, val = item.partition("=")
            if not val:
                raise ConfigError(f"verify: bad tolerance override {item!r}")
            overrides[key.strip()] = float(val)
    config = SuiteConfig(
        suite=opts["suite"],
        seed=int(opts["seed"]),
        n=int(opts["n"] or 0),
        tol_overrides=overrides,
        out=opts["out"],
    )
    report = verify.run_suite(config)
    if opts["csv"]:
        atomic_write_text(opts["csv"], report.to_csv())
    for c in report.checks:
        status = "pass" if c.passed else "FAIL"
        print(f"{status}  {c.name}: residual {c.residual:.3e} (threshold {c.threshold:.3e})")
    print(f"suite {report.suite}: {'pass' if report.passed else 'FAIL'} "
          f"({report.runtime_seconds:.2f}s)")
    return 0 if report.passed else 1


def _cmd_embed(args) -> int:
    opts = _apply_config(args, {"n": 500, "seed": None, "out": None})
    if opts["seed"] is None:
        raise ConfigError("embed: --seed is required")
    n = int(opts["n"])
    if n < 50:
        raise ConfigError("embed: --n must be >= 50")
    sample = su2.haar_sample(n, int(opts["seed"]))
    try:
        model4 = rigidity.select_base_points(sample, 4)
        model3 = rigidity.select_base_points(sample, 3)
    except RuntimeError as exc:
        print(f"embed: {exc}", file=sys.stderr)
        return 1
    e4 = rigidity.embed_S3(model4, sample.points)
    e3 = rigidity.embed_S2(model3, sample.points)
    r, _, delta = su2.pair_coords_array(sample.points[:, None, :], sample.points[None, :, :])
    # skip i == j: arccos of an inner product within rounding of 1 loses
    # half the digits, and the self-distance carries no information
    iu = np.triu_indices(n, k=1)
    res4 = np.abs(np.arccos(np.clip(e4 @ e4.T, -1, 1)) - delta)[iu].max()
    res3 = np.abs(np.arccos(np.clip(e3 @ e3.T, -1, 1)) - 2 * r)[iu].max()
    report = rigidity.EmbeddingReport(
        min_gram_eigenvalue=min(model4.min_eigenvalue, model3.min_eigenvalue),
        max_isometry_residual=float(max(res4, res3)),
        base_point_ids=model4.base_ids + model3.base_ids,
        pairs_checked=n * (n - 1) // 2,
        seed=int(opts["seed"]),
    )
    payload = report.to_dict()
    payload["s3_coordinates"] = e4.tolist()
    payload["s2_coordinates"] = e3.tolist()
    text = json.dumps(payload, indent=2)
    if opts["out"]:
        atomic_write_text(opts["out"], text)
        print(f"wrote {opts['out']} (max isometry residual {report.max_isometry_residual:.3e})")
    else:
        print(text)
    return 0


def _cmd_table(args) -> int:
    opts = _apply_config(
        args,
        {"kernel": "p", "t_grid": None, "r_grid": None, "theta_grid": None, "out": None},
    )
    ts = _parse_grid(opts["t_grid"], "--t-grid")
    rs = _parse_grid(opts["r_grid"], "--r-grid")
    thetas = _parse_grid(opts["theta_grid"], "--theta-grid")
    lines = ["t,r,theta,value,method"]
    for t in ts:
        for r in rs:
            for th in thetas:
                delta = math.acos(max(-1.0, min(1.0, math.cos(r) * math.cos(th))))
                value, used = _eval_one(opts["kernel"], t, r, th, delta, "auto", None)
                lines.append(f"{t!r},{r!r},{th!r},{float(value)!r},{used}")
    text = "\n".join(lines) + "\n"
    if opts["out"]:
        atomic_write_text(opts["out"], text)
        print(f"wrote {opts['out']} ({len(lines) - 1} rows)")
    else:
        sys.stdout.write(text)
    return 0


_COMMANDS = {"eval": _cmd_eval, "verify": _cmd_verify, "embed": _cmd_embed, "table": _cmd_table}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
