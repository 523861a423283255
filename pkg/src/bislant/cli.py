"""``bislant`` command line: verify, classify, list-registry.

Exit status: 0 when every applicable case passes, 1 on any failing case,
2 on parse or configuration errors.
"""

import argparse
import json
import sys

import numpy as np

from .errors import BislantError, ParseError
from .registry import ENTRIES, PUBLISHED
from .report import FORMATS, SUITES, RunConfig, emit, run
from .slant import Distribution


def parse_basis(text, k=None):
    """``u1,u2`` (coordinate fields) or a JSON list of chart vectors ``[[1,0],[0,1]]``."""
    text = text.strip()
    if text.startswith("["):
        vectors = np.asarray(json.loads(text), dtype=float)
        if vectors.ndim == 1:
            vectors = vectors[None, :]
        return Distribution(vectors.T)
    names = [s.strip() for s in text.split(",") if s.strip()]
    idx = []
    for s in names:
        if not (s.startswith("u") and s[1:].isdigit() and int(s[1:]) >= 1):
            raise ParseError(f"expected coordinate names like u1, got {s!r}", 1, text.find(s) + 1, text)
        idx.append(int(s[1:]) - 1)
    dim = k if k is not None else max(idx) + 1
    return Distribution.coordinate(idx, dim)


def _suites(text):
    if text in ("all", ""):
        return SUITES
    return tuple(s.strip() for s in text.split(",") if s.strip())


def build_parser():
    ap = argparse.ArgumentParser(prog="bislant", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--target", required=True, help="registry name or immersion JSON file")
        p.add_argument("-p", type=int, default=1)
        p.add_argument("-q", type=int, default=1)
        p.add_argument("--samples", type=int, default=25)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=FORMATS, default="json")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--d1", help="first distribution: u1,u2 or [[1,0],...]")
        p.add_argument("--d2", help="second distribution")

    v = sub.add_parser("verify", help="run identity suites")
    common(v)
    v.add_argument("--suites", default="all", help=f"comma list from {','.join(SUITES)} (or 'all')")
    v.add_argument("--tol-alg", type=float, default=1e-9)
    v.add_argument("--tol-d1", type=float, default=1e-7)
    v.add_argument("--tol-d2", type=float, default=1e-6)
    v.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte determinism)")

    c = sub.add_parser("classify", help="classify a pair of distributions")
    common(c)

    lr = sub.add_parser("list-registry", help="list built-in immersions")
    lr.add_argument("--format", choices=("text", "json"), default="text")
    return ap


def _write(data, out):
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _list_registry(args):
    rows = [{"name": n, "description": e.description, "published": n in PUBLISHED,
             "warped": e.warped is not None, "locus": e.locus} for n, e in ENTRIES.items()]
    if args.format == "json":
        return (json.dumps(rows, sort_keys=True, indent=2) + "\n").encode()
    return "".join(f"{r['name']:<28} {'' if r['published'] else '(extra) '}{r['description']}\n"
                   for r in rows).encode()


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "list-registry":
            _write(_list_registry(args), None)
            return 0
        d1 = parse_basis(args.d1) if args.d1 else None
        d2 = parse_basis(args.d2) if args.d2 else None
        if args.command == "classify":
            cfg = RunConfig(args.target, args.p, args.q, (), args.samples, args.seed, format=args.format,
                            d1=d1, d2=d2)
        else:
            cfg = RunConfig(args.target, args.p, args.q, _suites(args.suites), args.samples, args.seed,
                            args.tol_alg, args.tol_d1, args.tol_d2, format=args.format, d1=d1, d2=d2,
                            timing=args.timing)
        report = run(cfg)
    except ParseError as exc:
        print(f"error: {args.target if hasattr(args, 'target') else ''}: {exc}", file=sys.stderr)
        return 2
    except (BislantError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write(emit(report, cfg.format, cfg.timing), args.out)
    if not report.ok:
        n = len(report.failures)
        print(f"{n} failing case{'s' if n != 1 else ''}", file=sys.stderr)
        for sid, c in report.failures[:20]:
            print(f"  {sid}/{c.identity} point {c.point_index} residual {c.residual}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
