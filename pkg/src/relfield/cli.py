"""Command-line front end: a thin client of the verification service.

By default requests are served in-process (no network, no server needed);
--server http://host:port sends them to a running instance instead.  JSON
reports are written with sorted keys and fixed formatting, so identical
seeds produce byte-identical output.

Exit codes: 0 pass, 1 tolerance fail, 2 bad id/flags, 3 sampling failure,
4 divergent quantity.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import math
import sys

import httpx

EXIT_HEADER = "x-relfield-exit-code"

_ERROR_EXIT = {
    "unknown-solution": 2,
    "bad-request": 2,
    "precondition-failed": 2,
    "sampling-budget": 3,
    "divergent-charge": 4,
}


def _request(server, path: str, body: dict, method: str = "POST") -> httpx.Response:
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            return client.request(method, path, json=body if method == "POST" else None)

    async def go():
        from .service.app import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://relfield.inprocess") as client:
            return await client.request(method, path,
                                        json=body if method == "POST" else None)

    return asyncio.run(go())


def _dump_json(payload: dict, compact: bool = False) -> str:
    if compact:
        return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


_written_paths = set()


def _emit(text: str, out_path):
    if out_path:
        # truncate on the first write of this invocation, append after (so a
        # multi-solution run accumulates NDJSON lines in one file)
        mode = "a" if out_path in _written_paths else "w"
        _written_paths.add(out_path)
        with open(out_path, mode, encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(resp: httpx.Response, out_path) -> int:
    try:
        detail = resp.json().get("detail")
    except Exception:
        detail = resp.text
    _emit(_dump_json({"error": detail, "status": resp.status_code}), None)
    if isinstance(detail, dict) and detail.get("code") in _ERROR_EXIT:
        return _ERROR_EXIT[detail["code"]]
    return 2


def _sampling_args(p: argparse.ArgumentParser):
    p.add_argument("--m", type=float, default=1.0, help="mass parameter")
    p.add_argument("--psi", type=float, default=0.3,
                   help="family angle of the broglie entries")
    p.add_argument("--g2", type=float, default=1.0,
                   help="coupling of the short-range entries")
    p.add_argument("--sign", type=int, choices=(-1, 1), default=1,
                   help="phase sign of the oscillating entries")
    p.add_argument("--k", type=float, nargs=3, default=[0.0, 0.0, 0.0],
                   metavar=("KX", "KY", "KZ"), help="plane-wave momentum")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--count", type=int, default=500, help="sample points")
    p.add_argument("--box", type=float, default=3.0, dest="box_half_width")
    p.add_argument("--exclusion", type=float, default=0.1, dest="exclusion_radius",
                   help="singular-tube exclusion radius")
    p.add_argument("--time-window", type=float, default=2.0, dest="time_window")
    p.add_argument("--tol", type=float, default=1e-8,
                   help="pass/fail tolerance on the relative residual")


def _sampling_body(args) -> dict:
    return {
        "m": args.m, "psi": args.psi, "g2": args.g2, "sign": args.sign,
        "k": list(args.k), "seed": args.seed, "count": args.count,
        "box_half_width": args.box_half_width,
        "exclusion_radius": args.exclusion_radius,
        "time_window": args.time_window, "tol": args.tol,
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relfield",
        description="Verify, transform and integrate singular spinor/scalar "
                    "field solutions.",
    )
    parser.add_argument("--server", default=None,
                        help="base URL of a running service (default: in-process)")
    parser.add_argument("--out", default=None, help="write output to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="residual-check a catalog solution")
    p.add_argument("--solution", action="append", required=True,
                   help="catalog id; repeat for line-delimited multi-run output")
    _sampling_args(p)

    p = sub.add_parser("chain", help="iterate and check a solution chain")
    p.add_argument("--base", required=True, help="catalog id seeding the chain")
    p.add_argument("--depth", type=int, required=True, help="number of levels (>= 1)")
    p.add_argument("--comp", type=int, choices=(1, 2), default=1,
                   help="which component of b to promote")
    p.add_argument("--slot", choices=("upper", "lower"), default="lower",
                   help="slot receiving the promoted component")
    _sampling_args(p)

    p = sub.add_parser("transform", help="transform a solution and re-verify it")
    p.add_argument("--solution", required=True)
    p.add_argument("--law", required=True, choices=("canonical", "alternative", "general"))
    p.add_argument("--kind", required=True, choices=("rotation", "boost"))
    p.add_argument("--axis", choices=("x", "y", "z"), default="z")
    p.add_argument("--angle", type=float, required=True,
                   help="rotation angle or boost rapidity")
    p.add_argument("--mix-equals-s", action="store_true", dest="mix_equals_s",
                   help="general law with the canonical-restoring internal mix")
    p.add_argument("--mix-kind", choices=("rotation", "boost"), default=None)
    p.add_argument("--mix-axis", choices=("x", "y", "z"), default="z")
    p.add_argument("--mix-angle", type=float, default=0.0)
    _sampling_args(p)

    p = sub.add_parser("charge", help="field charge of the localized family")
    p.add_argument("--psi", type=float, required=True)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--rel-tol", type=float, default=1e-9, dest="rel_tol")

    p = sub.add_parser("profile", help="CSV radial profile of a density")
    p.add_argument("--solution", required=True)
    p.add_argument("--density", default="rho-dirac")
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--psi", type=float, default=0.3)
    p.add_argument("--g2", type=float, default=1.0)
    p.add_argument("--r-min", type=float, default=0.1, dest="r_min")
    p.add_argument("--r-max", type=float, default=3.0, dest="r_max")
    p.add_argument("--steps", type=int, default=30)
    p.add_argument("--exclusion", type=float, default=0.1, dest="exclusion_radius")

    sub.add_parser("solutions", help="list catalog ids")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _run_json_command(args, path: str, body: dict, compact: bool = False) -> int:
    resp = _request(args.server, path, body)
    if resp.status_code != 200:
        return _fail(resp, args.out)
    _emit(_dump_json(resp.json(), compact=compact), args.out)
    return int(resp.headers.get(EXIT_HEADER, "0"))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _written_paths.clear()

    if args.command == "serve":
        import uvicorn

        uvicorn.run("relfield.service.app:app", host=args.host, port=args.port)
        return 0

    if args.command == "solutions":
        resp = _request(args.server, "/solutions", None, method="GET")
        if resp.status_code != 200:
            return _fail(resp, args.out)
        _emit(_dump_json(resp.json()), args.out)
        return 0

    if args.command == "verify":
        multi = len(args.solution) > 1
        worst = 0
        for solution in args.solution:
            body = {"solution": solution, **_sampling_body(args)}
            code = _run_json_command(args, "/verify", body, compact=multi)
            worst = max(worst, code)
        return worst

    if args.command == "chain":
        body = {"base": args.base, "depth": args.depth, "comp": args.comp,
                "slot": args.slot, **_sampling_body(args)}
        return _run_json_command(args, "/chain", body)

    if args.command == "transform":
        body = {
            "solution": args.solution, "law": args.law, "kind": args.kind,
            "axis": args.axis, "angle": args.angle,
            "mix_equals_s": args.mix_equals_s, "mix_kind": args.mix_kind,
            "mix_axis": args.mix_axis, "mix_angle": args.mix_angle,
            **_sampling_body(args),
        }
        return _run_json_command(args, "/transform", body)

    if args.command == "charge":
        if not math.isfinite(args.psi):
            raise SystemExit(2)
        body = {"psi": args.psi, "m": args.m, "rel_tol": args.rel_tol}
        return _run_json_command(args, "/charge", body)

    if args.command == "profile":
        body = {"solution": args.solution, "density": args.density, "m": args.m,
                "psi": args.psi, "g2": args.g2, "r_min": args.r_min,
                "r_max": args.r_max, "steps": args.steps,
                "exclusion_radius": args.exclusion_radius}
        resp = _request(args.server, "/profile", body)
        if resp.status_code != 200:
            return _fail(resp, args.out)
        _emit(resp.text, args.out)
        return int(resp.headers.get(EXIT_HEADER, "0"))

    raise SystemExit(2)


if __name__ == "__main__":
    sys.exit(main())
