"""Command-line interface: batch classification, sampling, region maps,
and the invariant self-test.

Matrix records are JSON objects {"a": [w,x,y,z], "b": ..., "c": ..., "d": ...},
one per line.  Outputs are JSON-lines (classify, sample) or CSV
(region-map).  Exit status: 0 on success, 1 on unusable input/output
files, 2 when any record was rejected (non-membership, malformed JSON,
inconsistency) -- rejected records appear as {"error": ...} objects in
the output stream, in input order.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import IO, ContextManager, Iterator

from . import selftest
from .classify import classify
from .config import get_tolerance, set_tolerance
from .errors import QuatisomError
from .representation import QuarticCoeffs
from .sp11 import SAMPLER_KINDS, QMatrix2, sample_sp11
from .spectrum import plane_location

_REGION_VERDICT = {
    "tangency": "parabolic",
    "parabola_arc": "elliptic_or_parabolic",
    "parabola_outer": "loxodromic",
    "line": "elliptic",
    "r1": "elliptic",
    "r2": "loxodromic",
    "unrealizable": "",
}

_REGION_NAME = {
    "tangency": "tangency_point",
    "parabola_arc": "parabola_arc",
    "parabola_outer": "parabola_outer",
    "line": "R1_line_boundary",
    "r1": "R1_interior",
    "r2": "R2_interior",
    "unrealizable": "unrealizable",
}


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _open_in(path: str) -> ContextManager[IO[str]]:
    if path == "-":
        return contextlib.nullcontext(sys.stdin)
    return open(path, "r", encoding="utf-8")


def _open_out(path: str) -> ContextManager[IO[str]]:
    if path == "-":
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8")


def _records(stream: IO[str]) -> Iterator[tuple[int, str]]:
    for i, line in enumerate(stream):
        line = line.strip()
        if line:
            yield i, line


def cmd_classify(args: argparse.Namespace) -> int:
    try:
        src = _open_in(args.input)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return 1
    try:
        out = _open_out(args.output)
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
        return 1

    rejected = False
    with src as fin, out as fout:
        for lineno, line in _records(fin):
            try:
                record = json.loads(line)
                P = QMatrix2.from_json(record)
                report = classify(P)
                fout.write(_dump(report.to_json()) + "\n")
            except (json.JSONDecodeError, ValueError, TypeError, KeyError) as exc:
                rejected = True
                fout.write(_dump({"error": f"malformed record: {exc}", "line": lineno}) + "\n")
            except QuatisomError as exc:
                rejected = True
                fout.write(_dump({"error": str(exc), "line": lineno}) + "\n")
    return 2 if rejected else 0


def cmd_sample(args: argparse.Namespace) -> int:
    try:
        out = _open_out(args.output)
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
        return 1
    rejected = False
    with out as fout:
        for i in range(args.count):
            P = sample_sp11(args.seed + i, args.kind)
            entry: dict = {"seed": args.seed + i, "matrix": P.to_json()}
            try:
                entry["report"] = classify(P).to_json()
            except QuatisomError as exc:
                entry["error"] = str(exc)
                rejected = True
            fout.write(_dump(entry) + "\n")
    return 2 if rejected else 0


def _parse_range(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(":")
    a, b = float(lo), float(hi)
    if b < a:
        raise ValueError(f"empty range {text!r}")
    return a, b


def _grid(lo: float, hi: float, step: float) -> list[float]:
    n = int(round((hi - lo) / step))
    return [lo + k * step for k in range(n + 1) if lo + k * step <= hi + step * 1e-9]


def _region_svg(tau_range: tuple[float, float], rho_range: tuple[float, float]) -> str:
    """Plain-text SVG of the classification plane: the line rho = 4|tau| - 2,
    the parabola rho = tau^2 + 2, shaded regions, tangency dots."""
    w, h = 640, 480
    (t0, t1), (r0, r1) = tau_range, rho_range

    def sx(t: float) -> float:
        return (t - t0) / (t1 - t0) * w

    def sy(r: float) -> float:
        return h - (r - r0) / (r1 - r0) * h

    n = 200
    ts = [t0 + (t1 - t0) * k / n for k in range(n + 1)]
    parabola = " ".join(f"{sx(t):.2f},{sy(t * t + 2):.2f}" for t in ts)
    line = " ".join(f"{sx(t):.2f},{sy(4 * abs(t) - 2):.2f}" for t in ts)
    lens = " ".join(f"{sx(t):.2f},{sy(t * t + 2):.2f}" for t in ts if abs(t) <= 2)
    lens_back = " ".join(f"{sx(t):.2f},{sy(4 * abs(t) - 2):.2f}"
                         for t in reversed(ts) if abs(t) <= 2)
    r2_poly = parabola + f" {sx(t1):.2f},{sy(r1):.2f} {sx(t0):.2f},{sy(r1):.2f}"
    dots = "".join(
        f'<circle cx="{sx(t):.2f}" cy="{sy(6):.2f}" r="4" fill="#c0392b"/>'
        for t in (-2.0, 2.0) if t0 <= t <= t1 and r0 <= 6 <= r1)
    return f"""<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">
<rect width="{w}" height="{h}" fill="white"/>
<polygon points="{r2_poly}" fill="#aed6f1" fill-opacity="0.5"/>
<polygon points="{lens} {lens_back}" fill="#abebc6" fill-opacity="0.6"/>
<polyline points="{line}" fill="none" stroke="#1f618d" stroke-width="1.5"/>
<polyline points="{parabola}" fill="none" stroke="#117a65" stroke-width="1.5"/>
{dots}
<text x="10" y="20" font-size="14">rho = tau^2 + 2 (parabola), rho = 4|tau| - 2 (line)</text>
<text x="10" y="40" font-size="14">green: elliptic lens R1, blue: loxodromic R2, dots: (+-2, 6)</text>
</svg>
"""


def cmd_region_map(args: argparse.Namespace) -> int:
    try:
        tau_range = _parse_range(args.tau)
        rho_range = _parse_range(args.rho)
        if args.step <= 0:
            raise ValueError("step must be positive")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        out = _open_out(args.output)
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
        return 1
    with out as fout:
        fout.write("tau,rho,region,verdict_if_realizable\n")
        for rho in _grid(*rho_range, args.step):
            for tau in _grid(*tau_range, args.step):
                loc = plane_location(tau, rho)
                fout.write(f"{tau:.10g},{rho:.10g},{_REGION_NAME[loc]},{_REGION_VERDICT[loc]}\n")
    if args.svg:
        try:
            with open(args.svg, "w", encoding="utf-8") as svg:
                svg.write(_region_svg(tau_range, rho_range))
        except OSError as exc:
            print(f"error: cannot write {args.svg}: {exc}", file=sys.stderr)
            return 1
    return 0


def cmd_selftest(args: argparse.Namespace) -> int:
    rows = selftest.run(trials=args.trials)
    width = max(len(name) for name, _, _ in rows)
    failures = 0
    for name, ok, detail in rows:
        status = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        print(f"{status}  {name:<{width}}  {detail}")
    print(f"{len(rows) - failures}/{len(rows)} checks passed "
          f"(trials={args.trials}, tolerance={get_tolerance():g})")
    return 0 if failures == 0 else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quatisom",
        description="Classify elements of Sp(1,1) acting on the quaternionic hyperbolic line.")
    parser.add_argument("--tol", type=float, default=None,
                        help="override the library tolerance (also via QUATISOM_TOL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify JSON-lines matrix records")
    p.add_argument("--input", default="-", help="input path or - for stdin")
    p.add_argument("--output", default="-", help="output path or - for stdout")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("sample", help="emit seeded sample matrices with reports")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=SAMPLER_KINDS, default="generic")
    p.add_argument("--output", default="-")
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("region-map", help="CSV map of the (tau, rho)-plane regions")
    p.add_argument("--tau", required=True, help="range A:B")
    p.add_argument("--rho", required=True, help="range C:D")
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--svg", default=None, help="also write an SVG rendering here")
    p.set_defaults(fn=cmd_region_map)

    p = sub.add_parser("selftest", help="run the library invariant checks")
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(fn=cmd_selftest)
    return parser


def _join_range_options(argv: list[str]) -> list[str]:
    """Turn ["--tau", "-3:3"] into ["--tau=-3:3"] so argparse does not
    mistake a negative range bound for an option."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--tau", "--rho") and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(_join_range_options(list(argv)))
    if args.command == "sample" and (args.count < 1):
        print("error: --count must be >= 1", file=sys.stderr)
        return 1
    if args.tol is not None:
        try:
            set_tolerance(args.tol)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
