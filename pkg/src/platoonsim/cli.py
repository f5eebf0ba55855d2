"""Command-line front end.

A thin client over the HTTP service: every subcommand builds a request,
sends it to the service (in-process by default, or a remote server via
--server), and writes the response to files. All validation and numerics
live behind the service boundary.

Exit codes: 0 success, 2 parse/validation failure, 3 domain error,
4 numeric blowup, 1 internal error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

import yaml

from . import __version__

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_NUMERIC = 4

_CODE_TO_EXIT = {"parse": EXIT_PARSE, "domain": EXIT_DOMAIN,
                 "numeric": EXIT_NUMERIC, "internal": EXIT_INTERNAL}


class _CliError(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


class _Client:
    """POSTs to a remote server when --server is given, otherwise to the
    in-process app."""

    def __init__(self, server: Optional[str]):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                # the bundled test client is an implementation detail of
                # in-process mode; its deprecation chatter is not ours
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service.app import app

            self._client = TestClient(app, raise_server_exceptions=False)

    def post(self, path: str, payload: dict):
        try:
            return self._client.post(path, json=payload)
        except Exception as exc:
            raise _CliError(EXIT_INTERNAL, f"request failed: {exc}") from exc


def _fail_from_response(resp) -> _CliError:
    try:
        body = resp.json()
        code = body.get("code", "internal")
        message = body.get("message", f"HTTP {resp.status_code}")
    except Exception:
        code, message = "internal", f"HTTP {resp.status_code}"
    return _CliError(_CODE_TO_EXIT.get(code, EXIT_INTERNAL),
                     f"{code}: {message}")


def _selector_payload(args) -> dict:
    if (args.scenario is None) == (args.preset is None):
        raise _CliError(EXIT_PARSE,
                        "provide exactly one of --scenario or --preset")
    payload: dict = {}
    if args.preset is not None:
        payload["preset"] = args.preset
    else:
        path = Path(args.scenario)
        try:
            text = path.read_text()
        except OSError as exc:
            raise _CliError(EXIT_PARSE, f"cannot read {path}: {exc}") from exc
        try:
            doc = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise _CliError(EXIT_PARSE, f"{path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise _CliError(EXIT_PARSE,
                            f"{path}: scenario document must be a mapping")
        payload["scenario"] = doc
    if getattr(args, "law", None):
        payload["law"] = args.law
    return payload


def _out_dir(args) -> Path:
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise _CliError(EXIT_INTERNAL, f"cannot create {out}: {exc}") from exc
    return out


def _dump_yaml(doc: dict, path: Path) -> None:
    path.write_text(yaml.safe_dump(doc, sort_keys=False))


def cmd_simulate(args) -> int:
    payload = _selector_payload(args)
    payload["with_linearization"] = bool(args.with_linearization)
    resp = _Client(args.server).post("/simulate", payload)
    if resp.status_code != 200:
        raise _fail_from_response(resp)
    body = resp.json()
    out = _out_dir(args)
    csv_path = out / "trajectory.csv"
    csv_path.write_bytes(body["csv"].encode("utf-8"))
    summary_path = out / "summary.yaml"
    _dump_yaml(body["summary"], summary_path)

    summary = body["summary"]
    print(f"simulated n={summary['n']} law={summary['law']} "
          f"in {summary['runtime_s']:.2f}s")
    th = summary["thresholds"]
    print(f"thresholds: path {th['path']:g} m, gap {th['gap']:g} m, "
          f"speed {th['speed']:g} m/s")
    for v in summary["vehicles"]:
        print(f"  vehicle {v['vehicle']}: "
              f"terminal mean |path err| {v['terminal_mean_path_error']:.6g} m, "
              f"max |gap err| {v['max_abs_gap_error']:.6g} m, "
              f"settling {v['settling_time']:.6g} s")
    print(f"wrote {csv_path} and {summary_path}")
    return EXIT_OK


def _print_eigen_table(report: dict) -> None:
    numeric = [complex(z["real"], z["imag"])
               for z in report["eigenvalues_numeric"]]
    closed = [complex(z["real"], z["imag"])
              for z in report["eigenvalues_closed_form"]]
    remaining = list(closed)
    print(f"{'numeric real':>14} {'numeric imag':>14} "
          f"{'closed real':>14} {'closed imag':>14} {'|delta|':>10}")
    for z in numeric:
        idx = min(range(len(remaining)), key=lambda i: abs(remaining[i] - z))
        c = remaining.pop(idx)
        print(f"{z.real:14.6f} {z.imag:14.6f} "
              f"{c.real:14.6f} {c.imag:14.6f} {abs(z - c):10.3e}")


def cmd_linearize(args) -> int:
    payload = _selector_payload(args)
    resp = _Client(args.server).post("/linearize", payload)
    if resp.status_code != 200:
        raise _fail_from_response(resp)
    report = resp.json()["report"]
    out = _out_dir(args)
    report_path = out / "linearization.yaml"
    _dump_yaml(report, report_path)

    beta = report["beta"]
    print(f"n={report['n']} d_star={report['d_star']:g} R={report['R']:g} "
          f"V_c={report['V_c']:g} k_v={report['k_v']:g}")
    print(f"alpha={report['alpha']:.9g} "
          f"beta={beta['real']:.9g}{beta['imag']:+.9g}j "
          f"({report['beta_source']})")
    print(f"max block discrepancy (fd vs closed-form matrix): "
          f"{report['max_block_discrepancy']:.3e}")
    _print_eigen_table(report)
    print(f"wrote {report_path}")
    return EXIT_OK


def cmd_equilibrium(args) -> int:
    payload = _selector_payload(args)
    resp = _Client(args.server).post("/equilibrium", payload)
    if resp.status_code != 200:
        raise _fail_from_response(resp)
    body = resp.json()
    if body["R"] is None:
        print(f"n={body['n']} path: line")
    else:
        print(f"n={body['n']} path: circle R={body['R']:g}")
    print("max |rhs| at the chord equilibrium:")
    print(f"  regular: {body['residual_regular']:.6e}")
    print(f"  sine   : {body['residual_sine']:.6e}")
    if body["offsets_regular"] is not None:
        print(f"regular-law converged radius offsets "
              f"({body['offsets_method']}):")
        for i, off in enumerate(body["offsets_regular"], start=1):
            print(f"  vehicle {i}: {off:.6g} m")
    else:
        print("straight-line path: both laws hold the equilibrium exactly")
    return EXIT_OK


def cmd_sweep(args) -> int:
    payload = _selector_payload(args)
    payload.update(ratio_min=args.ratio_min, ratio_max=args.ratio_max,
                   steps=args.steps)
    resp = _Client(args.server).post("/sweep", payload)
    if resp.status_code != 200:
        raise _fail_from_response(resp)
    body = resp.json()
    out = _out_dir(args)
    csv_path = out / "sweep.csv"
    csv_path.write_bytes(body["csv"].encode("utf-8"))
    print(f"swept {args.steps} ratios in [{args.ratio_min:g}, "
          f"{args.ratio_max:g}] for both laws")
    print(f"wrote {csv_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", metavar="PATH",
                        help="scenario file (YAML)")
    common.add_argument("--preset", metavar="NAME",
                        help="named preset (highway | robot), optionally "
                             "with a law suffix like highway-regular")
    common.add_argument("--law", choices=["regular", "sine"],
                        help="override the scenario's guidance law")
    common.add_argument("--server", metavar="URL",
                        help="send requests to a running service instead of "
                             "in-process")

    parser = argparse.ArgumentParser(
        prog="platoonsim",
        description="Trajectory-shaping platoon guidance simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", parents=[common],
                           help="run a scenario; write trajectory.csv and "
                                "summary.yaml")
    p_sim.add_argument("--out", default=".", metavar="DIR",
                       help="output directory (default: current)")
    p_sim.add_argument("--with-linearization", action="store_true",
                       help="embed the linearization report in the summary")
    p_sim.set_defaults(func=cmd_simulate)

    p_lin = sub.add_parser("linearize", parents=[common],
                           help="linearize at the circular equilibrium; "
                                "write linearization.yaml")
    p_lin.add_argument("--out", default=".", metavar="DIR")
    p_lin.set_defaults(func=cmd_linearize)

    p_eq = sub.add_parser("equilibrium", parents=[common],
                          help="check the chord equilibrium under both laws")
    p_eq.set_defaults(func=cmd_equilibrium)

    p_sw = sub.add_parser("sweep", parents=[common],
                          help="offset vs d*/2R ratio for both laws; "
                               "write sweep.csv")
    p_sw.add_argument("--ratio-min", type=float, required=True)
    p_sw.add_argument("--ratio-max", type=float, required=True)
    p_sw.add_argument("--steps", type=int, required=True)
    p_sw.add_argument("--out", default=".", metavar="DIR")
    p_sw.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
