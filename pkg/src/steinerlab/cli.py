"""Command-line front end.

Every command is a thin client of the HTTP service: by default requests are
dispatched in-process through the ASGI app (no socket, no server process),
and --server redirects the same requests to a running instance. The CLI owns
all file I/O; the service only ever returns text and geometry.

Exit codes: 0 success; 1 a demo ran but one of its checks failed; 2 bad
usage, parameters, or schedule config; 3 input file parse/format error;
4 invalid geometry; 5 a path could not be read or written.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import math
import os
import sys
from pathlib import Path

import httpx

from .geometry import InvalidPolygonError, PolygonFormatError, load_polygon
from .schedules import KINDS, ScheduleError, schedule_from_config

OUTDIR_ENV = "STEINERLAB_OUTDIR"

EXIT_OK = 0
EXIT_DEMO_FAILED = 1
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_GEOMETRY = 4
EXIT_PATH = 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


# ---------------------------------------------------------------------------
# Service client
# ---------------------------------------------------------------------------

def _post(args, path: str, payload: dict) -> dict:
    if getattr(args, "server", None):
        try:
            with httpx.Client(base_url=args.server, timeout=None) as client:
                resp = client.post(path, json=payload)
        except httpx.HTTPError as exc:
            raise CliError(EXIT_USAGE, f"cannot reach server {args.server}: {exc}")
    else:
        from .service import create_app

        transport = httpx.ASGITransport(app=create_app())

        async def go():
            async with httpx.AsyncClient(
                transport=transport, base_url="http://steinerlab", timeout=None
            ) as client:
                return await client.post(path, json=payload)

        resp = asyncio.run(go())
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
    except ValueError:
        raise CliError(EXIT_USAGE, f"server error {resp.status_code}: {resp.text[:200]}")
    kind = body.get("error")
    detail = body.get("detail")
    if not isinstance(detail, str):
        detail = json.dumps(detail)
    if kind == "format":
        raise CliError(EXIT_FORMAT, detail)
    if kind in ("invalid_polygon", "geometry"):
        raise CliError(EXIT_GEOMETRY, detail)
    return_code = EXIT_USAGE  # schedule errors, parameter errors, validation
    raise CliError(return_code, detail)


# ---------------------------------------------------------------------------
# Argument parsing helpers
# ---------------------------------------------------------------------------

def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def parse_body_spec(text: str, degrees: bool = False) -> dict:
    """Parse `square | rhombus:eps | ellipse:a,b[,phi] | file:path` into a body payload."""
    if text == "square":
        return {"kind": "square"}
    if text.startswith("rhombus:"):
        try:
            eps = float(text.split(":", 1)[1])
        except ValueError:
            raise CliError(EXIT_USAGE, f"bad rhombus spec {text!r}; expected rhombus:<area>")
        return {"kind": "rhombus", "eps": eps}
    if text.startswith("ellipse:"):
        parts = text.split(":", 1)[1].split(",")
        if len(parts) not in (2, 3):
            raise CliError(EXIT_USAGE, f"bad ellipse spec {text!r}; expected ellipse:a,b[,phi]")
        try:
            a, b = float(parts[0]), float(parts[1])
            phi = _angle(float(parts[2]), degrees) if len(parts) == 3 else 0.0
        except ValueError:
            raise CliError(EXIT_USAGE, f"bad ellipse spec {text!r}; expected ellipse:a,b[,phi]")
        return {"kind": "ellipse", "a": a, "b": b, "phi": phi}
    if text.startswith("file:"):
        p = _read_polygon_file(text.split(":", 1)[1])
        return {"kind": "polygon", "vertices": [[float(x), float(y)] for x, y in p.vertices]}
    raise CliError(
        EXIT_USAGE,
        f"unknown body spec {text!r}; expected square, rhombus:eps, ellipse:a,b[,phi], or file:path",
    )


def _read_polygon_file(path: str):
    try:
        return load_polygon(path)
    except PolygonFormatError as exc:
        raise CliError(EXIT_FORMAT, str(exc))
    except InvalidPolygonError as exc:
        raise CliError(EXIT_GEOMETRY, str(exc))
    except OSError as exc:
        raise CliError(EXIT_PATH, f"cannot read {path}: {exc}")


def parse_schedule_spec(text: str, seed: int | None = None) -> dict:
    """A schedule is either a kind name or a path to a JSON config file."""
    if text in KINDS:
        config = {"kind": text}
    else:
        try:
            raw = Path(text).read_text()
        except OSError as exc:
            raise CliError(
                EXIT_USAGE,
                f"schedule {text!r} is neither a kind ({', '.join(KINDS)}) "
                f"nor a readable config file: {exc}",
            )
        try:
            config = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CliError(EXIT_USAGE, f"{text}: schedule config is not valid JSON ({exc})")
    if seed is not None:
        config = {**config, "seed": seed}
    try:
        schedule_from_config(config)  # validate before shipping to the service
    except ScheduleError as exc:
        raise CliError(EXIT_USAGE, f"bad schedule config: {exc}")
    return config


def _outdir(args, default_name: str) -> Path:
    if getattr(args, "outdir", None):
        return Path(args.outdir)
    env = os.environ.get(OUTDIR_ENV)
    if env:
        return Path(env) / default_name
    return Path(f"steinerlab-{default_name}")


# ---------------------------------------------------------------------------
# File output
# ---------------------------------------------------------------------------

def _write_bytes(path: Path, data: bytes) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    except OSError as exc:
        raise CliError(EXIT_PATH, f"cannot write {path}: {exc}")


def _write_text(path: Path, text: str) -> None:
    _write_bytes(path, text.encode("utf-8"))


def _write_frames(outdir: Path, frames: list[dict]) -> None:
    for frame in frames:
        _write_text(outdir / "frames" / ("step_%06d.svg" % frame["step"]), frame["svg"])


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_symmetrize(args) -> int:
    p = _read_polygon_file(args.input)
    payload = {
        "polygon": {"vertices": [[float(x), float(y)] for x, y in p.vertices]},
        "angle": _angle(args.angle, args.degrees),
        "include_svg": args.svg is not None,
    }
    result = _post(args, "/symmetrize", payload)
    out = {
        "vertices": [list(v) for v in result["polygon"]["vertices"]],
        # metadata: the direction actually applied, normalized into [0, 2*pi)
        "angle": result["angle"],
    }
    _write_text(Path(args.out), json.dumps(out) + "\n")
    if args.svg is not None:
        _write_text(Path(args.svg), result["svg"])
    print(
        f"symmetrized {args.input} along angle {result['angle']:.12g} rad "
        f"(area {result['area']:.12g}) -> {args.out}"
    )
    return EXIT_OK


def cmd_run(args) -> int:
    payload = {
        "body": parse_body_spec(args.body, args.degrees),
        "schedule": parse_schedule_spec(args.schedule, args.seed),
        "steps": args.steps,
    }
    if args.svg_every is not None:
        payload["svg_every"] = args.svg_every
    result = _post(args, "/run", payload)
    outdir = _outdir(args, "run")
    csv_path = Path(args.csv) if args.csv else outdir / "trace.csv"
    _write_text(csv_path, result["csv"])
    if result["frames"]:
        _write_frames(outdir, result["frames"])
    last = result["rows"][-1]
    note = " (schedule exhausted)" if result["schedule_exhausted"] else ""
    print(
        f"ran {len(result['rows']) - 1} steps{note}: "
        f"final hausdorff_to_ball {last['hausdorff_to_ball']:.12g} -> {csv_path}"
    )
    return EXIT_OK


def cmd_demo(args) -> int:
    name = args.demo_name
    if name == "diverge":
        payload = {"eps": args.eps, "steps": args.steps}
    elif name == "gronchi":
        payload = {"ratio": args.ratio, "steps": args.steps, "power": args.power}
    else:
        payload = {
            "body": parse_body_spec(args.body, args.degrees),
            "seed": args.seed,
            "steps": args.steps,
        }
    if args.svg_every is not None:
        payload["svg_every"] = args.svg_every
    result = _post(args, f"/demo/{name}", payload)
    outdir = _outdir(args, name)
    _write_text(outdir / "report.txt", result["report_text"])
    _write_text(outdir / "trace.csv", result["csv"])
    _write_frames(outdir, result["frames"])
    print(result["report_text"], end="")
    print(f"wrote {outdir}/report.txt, trace.csv, {len(result['frames'])} frame(s)")
    return EXIT_OK if result["passed"] else EXIT_DEMO_FAILED


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steinerlab",
        description="Steiner symmetrization experiments on planar convex bodies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--server", help="URL of a running service (default: in-process)")
        p.add_argument(
            "--degrees",
            action="store_true",
            help="interpret command-line angles as degrees (converted on input)",
        )

    p = sub.add_parser("symmetrize", help="symmetrize a polygon file along one direction")
    p.add_argument("input", help="polygon JSON file")
    p.add_argument("--angle", type=float, required=True, help="direction angle in radians")
    p.add_argument("--out", required=True, help="output polygon JSON file")
    p.add_argument("--svg", help="also write an SVG overlaying input, output, and the axis")
    common(p)
    p.set_defaults(func=cmd_symmetrize)

    p = sub.add_parser("run", help="run a symmetrization schedule and write the trace")
    p.add_argument(
        "--body",
        default="square",
        help="square | rhombus:eps | ellipse:a,b[,phi] | file:path (default square)",
    )
    p.add_argument(
        "--schedule",
        default="prime",
        help=f"schedule kind ({', '.join(KINDS)}) or JSON config path (default prime)",
    )
    p.add_argument("--steps", type=int, required=True, help="number of symmetrization steps")
    p.add_argument("--csv", help="trace CSV path (default <outdir>/trace.csv)")
    p.add_argument("--seed", type=int, help="override the schedule's random seed")
    p.add_argument("--svg-every", type=int, help="write an SVG frame every K steps")
    p.add_argument("--outdir", help=f"output directory (default ${OUTDIR_ENV} or ./steinerlab-run)")
    common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("demo", help="run a built-in experiment and write its report")
    demo_sub = p.add_subparsers(dest="demo_name", required=True)

    def demo_common(q):
        q.add_argument("--svg-every", type=int, help="write an SVG frame every K steps")
        q.add_argument(
            "--outdir", help=f"output directory (default ${OUTDIR_ENV}/<name> or ./steinerlab-<name>)"
        )
        common(q)
        q.set_defaults(func=cmd_demo)

    q = demo_sub.add_parser("diverge", help="thin cigar + prime angles: never rounds")
    q.add_argument("--eps", type=float, default=0.1, help="cigar area, must be < 9/pi^3")
    q.add_argument("--steps", type=int, default=2000)
    demo_common(q)

    q = demo_sub.add_parser("gronchi", help="eccentric ellipse whose axes rotate forever")
    q.add_argument("--ratio", type=float, default=10.0, help="initial axis ratio (>= 1)")
    q.add_argument("--steps", type=int, default=10000)
    q.add_argument("--power", type=float, default=1.0, help="increment exponent in (0.5, 1]")
    demo_common(q)

    q = demo_sub.add_parser("random", help="uniform random directions round the body")
    q.add_argument("--body", default="square", help="starting body spec (default square)")
    q.add_argument("--seed", type=int, default=1)
    q.add_argument("--steps", type=int, default=1000)
    demo_common(q)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"steinerlab: {exc.message}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"steinerlab: {exc}", file=sys.stderr)
        return EXIT_PATH


if __name__ == "__main__":
    sys.exit(main())
