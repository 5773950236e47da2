"""Command-line front end: a thin client over the HTTP service.

By default every subcommand drives the in-process ASGI app, so no server
needs to be running; ``--server URL`` points the same requests at a live
instance instead.  Responses are printed verbatim (CSV or JSON), which keeps
output byte-identical across runs for identical flags.

Exit codes: 0 success, 2 usage or domain error, 3 infeasible design
(enumeration capacity exceeded), 1 anything unexpected.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .bounds import DEFAULT_GRID_SIZE
from .codes import DEFAULT_ENUMERATION_CAP

__all__ = ["build_parser", "main"]

_EXIT_OK = 0
_EXIT_USAGE = 2
_EXIT_INFEASIBLE = 3


def _seed64(text: str) -> int:
    """Seed argument: decimal or 0x-prefixed hex, unsigned 64-bit."""
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer seed: {text!r}")
    if not 0 <= value < (1 << 64):
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit value")
    return value


def _code_payload(text: str, n: int | None, code_seed: int | None) -> dict:
    """Map a CLI code name to the JSON code spec.

    Accepted: ``none``, ``hamming7``/``hamming74``, ``rep<N>`` /
    ``repetition<N>``, ``random:<m>`` (block length from --n, seed from
    --code-seed).
    """
    t = text.strip().lower()
    if t == "none":
        return {"kind": "none", "n": n}
    if t in ("hamming7", "hamming74", "hamming(7,4)"):
        return {"kind": "hamming74"}
    rep = re.fullmatch(r"(?:rep|repetition)(\d+)", t)
    if rep:
        return {"kind": "repetition", "n": int(rep.group(1))}
    rnd = re.fullmatch(r"random:(\d+)", t)
    if rnd:
        return {"kind": "random", "m": int(rnd.group(1)), "n": n, "seed": code_seed or 0}
    raise argparse.ArgumentTypeError(
        f"unknown code {text!r}; expected none, hamming7, rep<N>, or random:<m>"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sumrecon",
        description=(
            "Bound curves and Monte Carlo validation for two-terminal "
            "modulo-two sum reconstruction of a doubly symmetric binary source."
        ),
    )
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running service; default runs in-process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bounds = sub.add_parser("bounds", help="emit the three bound curves as CSV")
    bounds.add_argument("--p", type=float, required=True, help="source crossover, 0 < p <= 1/2")
    bounds.add_argument("--grid", type=int, default=DEFAULT_GRID_SIZE)
    bounds.add_argument("--out", default=None, help="output path (default: stdout)")

    def add_sim_flags(cmd):
        cmd.add_argument("--config", default=None, help="JSON experiment config file")
        cmd.add_argument("--p", type=float, default=None)
        cmd.add_argument("--n", type=int, default=None)
        cmd.add_argument("--code", default=None, help="none | hamming7 | rep<N> | random:<m>")
        cmd.add_argument("--code-seed", type=_seed64, default=None)
        cmd.add_argument("--trials", type=int, default=None)
        cmd.add_argument("--seed", type=_seed64, default=None, help="decimal or 0x hex")
        cmd.add_argument("--cap", type=int, default=None,
                         help=f"decoder enumeration cap (default {DEFAULT_ENUMERATION_CAP})")
        cmd.add_argument("--workers", type=int, default=None)
        cmd.add_argument("--no-dither", action="store_true",
                         help="test-only control: zero all dither streams")
        cmd.add_argument("--out", default=None)

    sim_lkm = sub.add_parser("simulate-lkm", help="central-decoder sum scheme")
    sim_lkm.add_argument("--r", type=int, default=None, help="message length per encoder")
    add_sim_flags(sim_lkm)

    sim_csr = sub.add_parser("simulate-csr", help="two-terminal sum reconstruction")
    sim_csr.add_argument("--scheme", choices=("lkm", "steinberg"), default=None)
    sim_csr.add_argument("--variant", choices=("full-index", "syndrome-binned"), default=None)
    sim_csr.add_argument("--r", type=int, default=None)
    sim_csr.add_argument("--k", type=int, default=None, help="bin message length")
    add_sim_flags(sim_csr)

    triple = sub.add_parser("check-triple", help="region membership of (R1, R2, D)")
    triple.add_argument("--r1", type=float, required=True)
    triple.add_argument("--r2", type=float, required=True)
    triple.add_argument("--d", type=float, required=True)
    triple.add_argument("--p", type=float, required=True)
    triple.add_argument("--grid", type=int, default=DEFAULT_GRID_SIZE)

    info = sub.add_parser("code-info", help="quantizer statistics of a code")
    info.add_argument("--code", required=True)
    info.add_argument("--n", type=int, default=None)
    info.add_argument("--code-seed", type=_seed64, default=None)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


class _Client:
    def __init__(self, server: str | None):
        if server is None:
            import warnings

            with warnings.catch_warnings():
                # Some starlette builds warn about their own httpx shim.
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import app

            self._http = TestClient(app)
        else:
            import httpx

            self._http = httpx.Client(base_url=server, timeout=600.0)

    def post(self, path: str, payload: dict):
        return self._http.post(path, json=payload)

    def close(self) -> None:
        self._http.close()


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text if text.endswith("\n") else text + "\n")


def _fail(response) -> int:
    try:
        detail = response.json().get("detail", response.text)
    except ValueError:
        detail = response.text
    print(f"error: {detail}", file=sys.stderr)
    if response.status_code == 409:
        return _EXIT_INFEASIBLE
    if response.status_code in (400, 422):
        return _EXIT_USAGE
    return 1


def _simulate_payload(args, scheme: str | None) -> dict:
    payload: dict = {}
    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as handle:
            payload.update(json.load(handle))
    if scheme is not None:
        payload["scheme"] = scheme
    overrides = {
        "p": args.p,
        "n": args.n,
        "trials": args.trials,
        "seed": args.seed,
        "r": getattr(args, "r", None),
        "k": getattr(args, "k", None),
        "enumeration_cap": args.cap,
        "workers": args.workers,
    }
    for key, value in overrides.items():
        if value is not None:
            payload[key] = value
    if args.no_dither:
        payload["dither"] = False
    if args.code is not None:
        payload["code"] = _code_payload(args.code, payload.get("n"), args.code_seed)
    variant = getattr(args, "variant", None)
    if variant is not None:
        payload["variant"] = variant.replace("-", "_")
    return payload


def _dispatch(args: argparse.Namespace) -> int:
    client = _Client(args.server)
    try:
        if args.command == "bounds":
            response = client.post("/bounds", {"p": args.p, "grid": args.grid})
            if response.status_code != 200:
                return _fail(response)
            _emit(response.text, args.out)
            return _EXIT_OK

        if args.command in ("simulate-lkm", "simulate-csr"):
            if args.command == "simulate-lkm":
                scheme = "lkm"
            elif args.scheme is not None:
                scheme = "csr-lkm" if args.scheme == "lkm" else "csr-steinberg"
            else:
                scheme = None  # may come from --config
            payload = _simulate_payload(args, scheme)
            if "scheme" not in payload:
                print("error: simulate-csr requires --scheme or a config file", file=sys.stderr)
                return _EXIT_USAGE
            response = client.post("/simulate", payload)
            if response.status_code != 200:
                return _fail(response)
            _emit(response.text, args.out)
            return _EXIT_OK

        if args.command == "check-triple":
            response = client.post(
                "/check-triple",
                {"r1": args.r1, "r2": args.r2, "d": args.d, "p": args.p, "grid": args.grid},
            )
            if response.status_code != 200:
                return _fail(response)
            _emit(response.text, None)
            return _EXIT_OK

        if args.command == "code-info":
            try:
                code = _code_payload(args.code, args.n, args.code_seed)
            except argparse.ArgumentTypeError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return _EXIT_USAGE
            response = client.post("/code-info", {"code": code})
            if response.status_code != 200:
                return _fail(response)
            _emit(response.text, None)
            return _EXIT_OK

        if args.command == "serve":
            import uvicorn

            uvicorn.run("sumrecon.service:app", host=args.host, port=args.port)
            return _EXIT_OK

        raise AssertionError(f"unhandled command {args.command!r}")
    finally:
        client.close()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except json.JSONDecodeError as exc:
        print(f"error: bad config file: {exc}", file=sys.stderr)
        return _EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
