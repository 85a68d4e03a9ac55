"""Command-line client.

Thin wrapper over the service handlers: each subcommand reads JSON
documents, builds the corresponding request model, runs it (in-process
by default, against a remote service with ``--url``), and writes the
response as canonical JSON. Exit codes follow a strict contract:

    0   success
    1   mathematical failure (off-range target, invalid tuple, failed
        property); the report with any witness is still emitted
    2   I/O, parse, or parameter errors

The range-membership tolerance defaults to 1e-8 and can be overridden by
the ``KRANGE_TOL`` environment variable or a ``--tol`` flag (flag wins).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable

from pydantic import BaseModel, ValidationError

from . import __version__
from .errors import KrangeError, ShapeMismatchError, WireFormatError
from .service import app as service_app
from .service.schemas import (
    BidiskParams,
    CheckRequest,
    CoronaParams,
    EpsGrid,
    GenerateRequest,
    RandomParams,
    SolveRequest,
    SweepRequest,
    TupleModel,
    VectorModel,
    VerifyRequest,
)
from .wire import dumps_canonical, loads_json, sweep_csv

EXIT_OK = 0
EXIT_MATH = 1
EXIT_IO = 2


class CliError(Exception):
    """Parameter or I/O failure; maps to exit code 2."""


def _read_json(path: str, what: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {what} {path!r}: {exc}") from exc
    try:
        return loads_json(text)
    except WireFormatError as exc:
        raise CliError(f"{what} {path!r}: {exc}") from exc


def _load_tuple_model(path: str) -> TupleModel:
    doc = _read_json(path, "tuple file")
    try:
        return TupleModel.model_validate(doc)
    except ValidationError as exc:
        raise CliError(f"tuple file {path!r}: {exc.errors()[0]['msg']}") from exc


def _load_vector_model(path: str) -> VectorModel:
    doc = _read_json(path, "vector file")
    try:
        return VectorModel.model_validate(doc)
    except ValidationError as exc:
        raise CliError(f"vector file {path!r}: {exc.errors()[0]['msg']}") from exc


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path!r}: {exc}") from exc


def _run(path: str, request: BaseModel, handler: Callable, url: str | None) -> dict:
    """Dispatch a request in-process or to a remote service; either way
    the result is the response's JSON-mode dict."""
    if url is None:
        response = handler(request)
        return response.model_dump(mode="json")
    import httpx

    try:
        reply = httpx.post(
            url.rstrip("/") + path, json=request.model_dump(mode="json"), timeout=60.0
        )
    except httpx.HTTPError as exc:
        raise CliError(f"request to {url!r} failed: {exc}") from exc
    if reply.status_code == 422:
        raise CliError(f"service rejected the request: {reply.text}")
    if reply.status_code != 200:
        raise CliError(f"service error {reply.status_code}: {reply.text}")
    return reply.json()


def _parse_coeffs(text: str, name: str) -> list:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"--{name}: malformed JSON coefficient list: {exc}") from exc
    if not isinstance(doc, list) or not doc:
        raise CliError(f"--{name}: expected a nonempty JSON list of coefficients")
    return doc


def _parse_eps_grid(text: str) -> EpsGrid:
    prefix = "geometric:"
    if not text.startswith(prefix):
        raise CliError("--eps-grid must look like geometric:start,ratio,count")
    parts = text[len(prefix) :].split(",")
    if len(parts) != 3:
        raise CliError("--eps-grid must look like geometric:start,ratio,count")
    try:
        return EpsGrid(start=float(parts[0]), ratio=float(parts[1]), count=int(parts[2]))
    except (ValueError, ValidationError) as exc:
        raise CliError(f"--eps-grid: {exc}") from exc


def cmd_check(args: argparse.Namespace) -> int:
    request = CheckRequest(
        tuple=_load_tuple_model(args.tuple_file), samples=args.samples, seed=args.seed
    )
    from .service.app import handle_check

    result = _run("/check", request, handle_check, args.url)
    _write_text(args.out, dumps_canonical(result))
    return EXIT_OK if result["ok"] else EXIT_MATH


def cmd_solve(args: argparse.Namespace) -> int:
    try:
        request = SolveRequest(
            tuple=_load_tuple_model(args.tuple_file),
            u=_load_vector_model(args.u_file),
            eps=args.eps,
            exact=args.exact,
            tol=args.tol,
        )
    except ValidationError as exc:
        raise CliError(exc.errors()[0]["msg"]) from exc
    from .service.app import handle_solve

    result = _run("/solve", request, handle_solve, args.url)
    _write_text(args.out, dumps_canonical(result))
    return EXIT_OK if result["ok"] else EXIT_MATH


def cmd_sweep(args: argparse.Namespace) -> int:
    request = SweepRequest(
        tuple=_load_tuple_model(args.tuple_file),
        u=_load_vector_model(args.u_file),
        grid=_parse_eps_grid(args.eps_grid),
        tol=args.tol,
    )
    from .service.app import handle_sweep

    result = _run("/sweep", request, handle_sweep, args.url)
    if args.csv is not None:
        if result["rows"]:
            _write_text(args.csv, sweep_csv(result["rows"]))
        else:
            _write_text(args.csv, sweep_csv([]))
    _write_text(args.out, dumps_canonical(result))
    return EXIT_OK if result["ok"] else EXIT_MATH


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        if args.kind == "bidisk":
            request = GenerateRequest(kind="bidisk", bidisk=BidiskParams(n=args.n))
        elif args.kind == "random":
            request = GenerateRequest(
                kind="random",
                random=RandomParams(
                    dim=args.dim,
                    seed=args.seed,
                    pos=args.pos,
                    neg=args.neg,
                    margin=args.margin,
                ),
            )
        else:
            request = GenerateRequest(
                kind="corona",
                corona=CoronaParams(
                    phi1=_parse_coeffs(args.phi1, "phi1"),
                    phi2=_parse_coeffs(args.phi2, "phi2"),
                    psi1=_parse_coeffs(args.psi1, "psi1"),
                    psi2=_parse_coeffs(args.psi2, "psi2"),
                    n=args.n,
                ),
            )
    except ValidationError as exc:
        raise CliError(exc.errors()[0]["msg"]) from exc
    from .service.app import handle_generate

    result = _run("/generate", request, handle_generate, args.url)
    if not result["ok"]:
        sys.stderr.write(dumps_canonical({k: result[k] for k in ("ok", "error", "diagnostics")}))
        return EXIT_MATH
    _write_text(args.out, dumps_canonical(result["tuple"]))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    request = VerifyRequest(
        tuple=_load_tuple_model(args.tuple_file),
        eps=args.eps,
        samples=args.samples,
        seed=args.seed,
        tol=args.tol,
    )
    from .service.app import handle_verify

    result = _run("/verify", request, handle_verify, args.url)
    _write_text(args.out, dumps_canonical(result))
    return EXIT_OK if result["ok"] else EXIT_MATH


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run(service_app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krange",
        description="Signed operator tuples: validation, minimal-norm solves, and verification.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_tol=True):
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--url", help="send the request to a running service instead of solving in-process")
        if with_tol:
            p.add_argument(
                "--tol",
                type=float,
                help="range-membership tolerance (overrides KRANGE_TOL; default 1e-8)",
            )

    p = sub.add_parser("check", help="validate a tuple and run its identity checks")
    p.add_argument("tuple_file")
    p.add_argument("--samples", type=int, default=200, help="random vectors for the identity check")
    p.add_argument("--seed", type=int, default=0)
    add_common(p, with_tol=False)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="minimal-norm solve for a target vector")
    p.add_argument("tuple_file")
    p.add_argument("u_file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--eps", type=float, help="truncation level")
    group.add_argument("--exact", action="store_true", help="exact finite-dimensional solve")
    add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="run a decreasing-eps convergence sweep")
    p.add_argument("tuple_file")
    p.add_argument("u_file")
    p.add_argument("--eps-grid", required=True, help="geometric:start,ratio,count")
    p.add_argument("--csv", help="write the sweep table as CSV here")
    add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("generate", help="generate a tuple file")
    gsub = p.add_subparsers(dest="kind", required=True)

    g = gsub.add_parser("bidisk", help="doubly-shifted tuple on C^n (x) C^n")
    g.add_argument("--n", type=int, required=True)
    add_common(g, with_tol=False)
    g.set_defaults(func=cmd_generate)

    g = gsub.add_parser("corona", help="Toeplitz triplet from polynomial symbols")
    g.add_argument("--n", type=int, required=True)
    for name in ("phi1", "phi2", "psi1", "psi2"):
        g.add_argument(
            f"--{name}",
            required=True,
            help='JSON coefficient list, e.g. "[0, 0.7071]" or "[[0,0],[0,1]]"',
        )
    add_common(g, with_tol=False)
    g.set_defaults(func=cmd_generate)

    g = gsub.add_parser("random", help="seeded random tuple, fully valid by construction")
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--pos", type=int, default=2, help="number of positive slots")
    g.add_argument("--neg", type=int, default=1, help="number of negative slots")
    g.add_argument("--margin", type=float, default=0.5)
    add_common(g, with_tol=False)
    g.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="positivity bound and norm-equality checks at a level eps")
    p.add_argument("tuple_file")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except (WireFormatError, ShapeMismatchError, ValidationError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except KrangeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
