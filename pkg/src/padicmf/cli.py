"""Command-line front-end: a thin client for the HTTP service.

By default requests are dispatched to the service in-process (no server
needed); --server points the same client at a running instance.  Every
verdict line carries its modulus, output is deterministic, and the exit
code is 0 for a conclusive verdict, 2 for inconclusive-at-precision, and
1 for invalid input.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INCONCLUSIVE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padicmf",
        description="Filtered Frobenius-module admissibility verdicts")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service "
                             "(default: run in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    def job_command(name, help_text):
        c = sub.add_parser(name, help=help_text)
        c.add_argument("file", help="job document (JSON)")
        c.add_argument("--prec-p", type=int, default=None,
                       help="override the p-adic digit count")
        c.add_argument("--prec-y", type=int, default=None,
                       help="override the Y-truncation order")
        c.add_argument("--prec-u", type=int, default=None,
                       help="override the u-truncation order")
        c.add_argument("--prec-c", type=int, default=None,
                       help="override the c-truncation order")
        return c

    job_command("validate", "check the module axioms")
    job_command("hodge", "filtration-weighted rank sum")
    newton = job_command("newton", "sum of Frobenius slopes at a prime")
    newton.add_argument("--point", choices=["closed", "generic"],
                        default="closed")
    weakadm = job_command("weakadm", "punctual weak admissibility")
    group = weakadm.add_mutually_exclusive_group()
    group.add_argument("--auto", action="store_true",
                       help="enumerate subobjects for constant diagonal "
                            "p-power Frobenius")
    group.add_argument("--subobjects", default=None,
                       help="JSON file with additional subobject specs")
    breuil = job_command("breuil", "construct and verify the rank-2 "
                                   "divided-power module")
    breuil.add_argument("--out", default=None,
                        help="write the export document to this path")
    job_command("bpair-rank", "rank of the scalar solution space")
    job_command("classify", "full classification of a rank-2 module")
    return parser


def _load_job(args) -> dict:
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            job = json.load(fh)
    except FileNotFoundError:
        raise SystemExit2(f"file not found: {args.file}")
    except json.JSONDecodeError as exc:
        raise SystemExit2(
            f"{args.file}: JSON parse error at line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}")
    if not isinstance(job, dict):
        raise SystemExit2(f"{args.file}: job document must be an object")
    profile = job.get("profile")
    if isinstance(profile, dict):
        for flag, key in (("prec_p", "N_p"), ("prec_y", "M_Y"),
                          ("prec_u", "M_u"), ("prec_c", "M_c")):
            v = getattr(args, flag, None)
            if v is not None:
                profile[key] = v
    if getattr(args, "subobjects", None):
        try:
            with open(args.subobjects, "r", encoding="utf-8") as fh:
                extra = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise SystemExit2(f"{args.subobjects}: {exc}")
        if not isinstance(extra, list):
            raise SystemExit2("subobjects file must hold a JSON list")
        job.setdefault("subobjects", [])
        job["subobjects"].extend(extra)
    return job


class SystemExit2(Exception):
    """Input-layer failure carrying a message for stderr."""


def _endpoint_and_body(args, job):
    body = {"job": job}
    if args.command == "newton":
        body["point"] = args.point
        return "/v1/newton", body
    if args.command == "weakadm":
        body["auto"] = bool(args.auto)
        return "/v1/weakadm", body
    path = {
        "validate": "/v1/validate",
        "hodge": "/v1/hodge",
        "breuil": "/v1/breuil",
        "bpair-rank": "/v1/bpair-rank",
        "classify": "/v1/classify",
    }[args.command]
    return path, body


def _post(server, path, body):
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            resp = client.post(path, json=body)
            return resp.status_code, resp.json()

    async def run():
        from .service import app
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://service") as client:
            resp = await client.post(path, json=body)
            return resp.status_code, resp.json()
    return asyncio.run(run())


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = _load_job(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    path, body = _endpoint_and_body(args, job)
    try:
        code, payload = _post(args.server, path, body)
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if code == 422:
        print("error: job document failed schema validation", file=sys.stderr)
        for item in payload.get("detail", []):
            loc = ".".join(str(x) for x in item.get("loc", []))
            print(f"  {loc}: {item.get('msg')}", file=sys.stderr)
        return EXIT_INVALID
    for line in payload.get("report", []):
        print(line)
    if args.command == "breuil" and code == 200 and args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload.get("export", {}), fh, indent=2,
                      sort_keys=True)
            fh.write("\n")
        print(f"export written to {args.out}")
    status = payload.get("status")
    if code != 200 or status == "invalid":
        detail = payload.get("detail")
        if detail and code != 200:
            print(f"error: {detail}", file=sys.stderr)
        return EXIT_INVALID
    if status == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
