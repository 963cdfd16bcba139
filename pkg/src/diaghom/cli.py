"""Command line interface.

Commands: enumerate, compose, verify-cover, build-mv, tor, ext,
group-homology, and theorem {tanabe|tpp|uniform|partition|
partition-invertible|stability-range}.  All parameters are flags; no
configuration files and no environment variables.  JSON is the canonical
output format and is byte-identical for identical configurations; csv
flattens homology tables one row per (family, n, ring, delta, q); pretty is
for humans.

Exit codes: 0 success or match, 1 mismatch or refuted check, 2 usage or
parse error, 3 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional

from .algebra import get_context
from .complexes import UnsupportedRingError
from .cover import CoverSpec, verify_cover
from .cover_complex import build_cover_complex
from .diagrams import (
    DiagramParseError,
    Family,
    ResourceGuardError,
    compose,
    parse_diagram,
    parse_family,
)
from .rings import RingParseError, parse_ring
from .torext import (
    DEFAULT_MAX_RANK,
    compare,
    compute_ext,
    compute_tor,
    default_truncation,
    group_cohomology,
    group_homology,
)

THEOREM_MAX_RANK = 10_000_000

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


class UsageError(ValueError):
    pass


def _add_common(parser, *, ring=False, delta=False, q_flag=False):
    parser.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    if ring:
        parser.add_argument("--ring", default="Z", help="Z, Q or Z/m")
    if delta:
        parser.add_argument(
            "--delta", default="0", help="comma separated list, parsed in the ring"
        )
    if q_flag:
        parser.add_argument("--Q", dest="Q", type=int, default=None,
                            help="bar truncation; reports degrees < Q")
        parser.add_argument("--max-rank", type=int, default=None,
                            help="resource guard on total bar rank")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diaghom",
        description="exact homology of partition-type diagram algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list the diagram basis of an algebra")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--family", required=True, help="P, T:r, TPP or U")
    _add_common(p)

    p = sub.add_parser("compose", help="compose two diagrams")
    p.add_argument("d1")
    p.add_argument("d2")
    _add_common(p)

    p = sub.add_parser("verify-cover", help="check the idempotent left cover axioms")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--height", type=int, default=None)
    _add_common(p, ring=True, delta=True)

    p = sub.add_parser("build-mv", help="build the cover complex and serialize it")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--family", required=True)
    _add_common(p, ring=True, delta=True)

    for name, help_ in (("tor", "Tor of the trivial module"),
                        ("ext", "Ext of the trivial module")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--family", required=True)
        _add_common(p, ring=True, delta=True, q_flag=True)

    p = sub.add_parser("group-homology", help="symmetric group (co)homology oracle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cohomology", action="store_true")
    _add_common(p, ring=True, q_flag=True)

    p = sub.add_parser("theorem", help="verify an isomorphism statement")
    p.add_argument(
        "kind",
        choices=(
            "tanabe",
            "tpp",
            "uniform",
            "partition",
            "partition-invertible",
            "stability-range",
        ),
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=2, help="kappa modulus for tanabe")
    _add_common(p, ring=True, delta=True, q_flag=True)
    return parser


def _group_json(g):
    return g.to_json_dict()


def _groups_json(groups):
    return [
        {"q": q, "free_rank": g.free_rank, "torsion": list(g.torsion)}
        for q, g in enumerate(groups)
    ]


def _parse_deltas(ring, text):
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        out.append(ring.parse(item))
    if not out:
        raise UsageError("empty delta list")
    return out


def _context(n, family, ring, delta):
    if not family.uses_delta():
        delta = 0
    return get_context(n, family, ring, delta)


def cmd_enumerate(args):
    family = parse_family(args.family)
    from .diagrams import all_diagrams

    basis = [d for d in all_diagrams(args.n) if family.admits(d)]
    result = {
        "n": args.n,
        "family": str(family),
        "count": len(basis),
        "diagrams": [str(d) for d in basis],
    }
    return result, EXIT_OK


def cmd_compose(args):
    d1 = parse_diagram(args.d1)
    d2 = parse_diagram(args.d2)
    alpha, d3 = compose(d1, d2)
    return {"alpha": alpha, "diagram": str(d3)}, EXIT_OK


def cmd_verify_cover(args):
    family = parse_family(args.family)
    ring = parse_ring(args.ring)
    delta = _parse_deltas(ring, args.delta)[0]
    ctx = _context(args.n, family, ring, delta)
    report = verify_cover(CoverSpec.standard(ctx), args.height)
    code = EXIT_OK if report.covers else EXIT_MISMATCH
    return report.to_json_dict(), code


def cmd_build_mv(args):
    family = parse_family(args.family)
    ring = parse_ring(args.ring)
    delta = _parse_deltas(ring, args.delta)[0]
    ctx = _context(args.n, family, ring, delta)
    cc = build_cover_complex(CoverSpec.standard(ctx))
    return cc.to_json_dict(), EXIT_OK


def _homology_rows(args, kind):
    family = parse_family(args.family)
    ring = parse_ring(args.ring)
    deltas = _parse_deltas(ring, args.delta)
    if not family.uses_delta():
        deltas = deltas[:1]
    records = []
    for delta in deltas:
        ctx = _context(args.n, family, ring, delta)
        q = args.Q if args.Q is not None else default_truncation(ctx.n, ring)
        max_rank = args.max_rank if args.max_rank is not None else DEFAULT_MAX_RANK
        fn = compute_tor if kind == "tor" else compute_ext
        groups = fn(ctx, q, max_rank)
        records.append(
            {
                "context": {
                    "n": args.n,
                    "family": str(family),
                    "ring": ring.name,
                    "delta": str(delta) if family.uses_delta() else None,
                },
                "Q": q,
                "degrees": _groups_json(groups),
            }
        )
    return {"kind": kind, "records": records}, EXIT_OK


def cmd_tor(args):
    return _homology_rows(args, "tor")


def cmd_ext(args):
    return _homology_rows(args, "ext")


def cmd_group_homology(args):
    ring = parse_ring(args.ring)
    q = args.Q if args.Q is not None else default_truncation(args.n, ring)
    max_rank = args.max_rank if args.max_rank is not None else DEFAULT_MAX_RANK
    fn = group_cohomology if args.cohomology else group_homology
    groups = fn(args.n, ring, q, max_rank)
    return {
        "group": f"Sigma_{args.n}",
        "ring": ring.name,
        "kind": "cohomology" if args.cohomology else "homology",
        "Q": q,
        "degrees": _groups_json(groups),
    }, EXIT_OK


_THEOREM_FAMILIES = {
    "tanabe": lambda args: Family("T", args.r),
    "tpp": lambda args: Family("TPP"),
    "uniform": lambda args: Family("U"),
    "partition": lambda args: Family("P"),
    "partition-invertible": lambda args: Family("P"),
}


def cmd_theorem(args):
    ring = parse_ring(args.ring)
    max_rank = args.max_rank if args.max_rank is not None else THEOREM_MAX_RANK

    if args.kind == "stability-range":
        return _theorem_stability(args, ring, max_rank)

    family = _THEOREM_FAMILIES[args.kind](args)
    if args.kind == "tanabe" and args.r < 2:
        raise UsageError("the tanabe statement needs r >= 2")
    deltas = _parse_deltas(ring, args.delta)
    if not family.uses_delta():
        deltas = deltas[:1]
    if args.kind == "partition-invertible":
        for d in deltas:
            if not ring.is_unit(d):
                raise UsageError(
                    f"delta={d} is not invertible in {ring.name}; "
                    "the invertible-parameter statement does not apply"
                )

    if args.Q is not None:
        q = args.Q
    elif args.kind == "partition":
        q = min(default_truncation(args.n, ring), args.n)
    else:
        q = default_truncation(args.n, ring)
    through = q - 1
    if args.kind == "partition":
        through = min(through, args.n - 1)

    sides = ("tor", "ext") if args.kind != "partition-invertible" else ("ext",)
    oracle = {
        "tor": group_homology(args.n, ring, q, max_rank),
        "ext": group_cohomology(args.n, ring, q, max_rank),
    }

    rows = []
    all_match = True
    for delta in deltas:
        ctx = _context(args.n, family, ring, delta)
        computed = {}
        if "tor" in sides:
            computed["tor"] = compute_tor(ctx, q, max_rank)
        if "ext" in sides:
            computed["ext"] = compute_ext(ctx, q, max_rank)
        for side in sides:
            report = compare(computed[side], oracle[side], through)
            all_match = all_match and report.matches
            for deg in range(through + 1):
                rows.append(
                    {
                        "family": str(family),
                        "n": args.n,
                        "ring": ring.name,
                        "delta": str(delta) if family.uses_delta() else None,
                        "kind": side,
                        "q": deg,
                        "algebra": computed[side][deg].to_json_dict(),
                        "oracle": oracle[side][deg].to_json_dict(),
                        "match": computed[side][deg] == oracle[side][deg],
                    }
                )
    result = {
        "theorem": args.kind,
        "n": args.n,
        "ring": ring.name,
        "through_degree": through,
        "matches": all_match,
        "rows": rows,
    }
    return result, EXIT_OK if all_match else EXIT_MISMATCH


def _theorem_stability(args, ring, max_rank):
    """Dimension agreement of Ext between consecutive partition algebras in
    the stable range n >= 2q+1."""
    q = args.Q if args.Q is not None else 2
    deltas = _parse_deltas(ring, args.delta)
    family = Family("P")
    rows = []
    all_match = True
    for delta in deltas:
        dims = {}
        for m in range(1, args.n + 1):
            ctx = _context(m, family, ring, delta)
            dims[m] = [g.free_rank for g in compute_ext(ctx, q, max_rank)]
        for m in range(2, args.n + 1):
            for deg in range(q):
                if m < 2 * deg + 1:
                    continue
                match = dims[m][deg] == dims[m - 1][deg]
                all_match = all_match and match
                rows.append(
                    {
                        "family": "P",
                        "ring": ring.name,
                        "delta": str(delta),
                        "q": deg,
                        "n": m,
                        "dim_n": dims[m][deg],
                        "dim_n_minus_1": dims[m - 1][deg],
                        "match": match,
                    }
                )
    result = {
        "theorem": "stability-range",
        "n": args.n,
        "ring": ring.name,
        "matches": all_match,
        "rows": rows,
    }
    return result, EXIT_OK if all_match else EXIT_MISMATCH


_CSV_COMMANDS = ("tor", "ext", "group-homology", "theorem")


def _render_csv(command, result) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    if command in ("tor", "ext"):
        writer.writerow(
            ["family", "n", "ring", "delta", "q", "free_rank", "torsion"]
        )
        for record in result["records"]:
            ctx = record["context"]
            for row in record["degrees"]:
                writer.writerow(
                    [
                        ctx["family"],
                        ctx["n"],
                        ctx["ring"],
                        ctx["delta"] if ctx["delta"] is not None else "",
                        row["q"],
                        row["free_rank"],
                        "|".join(str(t) for t in row["torsion"]),
                    ]
                )
    elif command == "group-homology":
        writer.writerow(["group", "ring", "kind", "q", "free_rank", "torsion"])
        for row in result["degrees"]:
            writer.writerow(
                [
                    result["group"],
                    result["ring"],
                    result["kind"],
                    row["q"],
                    row["free_rank"],
                    "|".join(str(t) for t in row["torsion"]),
                ]
            )
    elif command == "theorem":
        if result["theorem"] == "stability-range":
            writer.writerow(
                ["family", "ring", "delta", "q", "n", "dim_n", "dim_n_minus_1", "match"]
            )
            for row in result["rows"]:
                writer.writerow(
                    [
                        row["family"],
                        row["ring"],
                        row["delta"],
                        row["q"],
                        row["n"],
                        row["dim_n"],
                        row["dim_n_minus_1"],
                        row["match"],
                    ]
                )
        else:
            writer.writerow(
                [
                    "family",
                    "n",
                    "ring",
                    "delta",
                    "kind",
                    "q",
                    "algebra_free",
                    "algebra_torsion",
                    "oracle_free",
                    "oracle_torsion",
                    "match",
                ]
            )
            for row in result["rows"]:
                writer.writerow(
                    [
                        row["family"],
                        row["n"],
                        row["ring"],
                        row["delta"] if row["delta"] is not None else "",
                        row["kind"],
                        row["q"],
                        row["algebra"]["free_rank"],
                        "|".join(str(t) for t in row["algebra"]["torsion"]),
                        row["oracle"]["free_rank"],
                        "|".join(str(t) for t in row["oracle"]["torsion"]),
                        row["match"],
                    ]
                )
    else:
        raise UsageError(f"csv output is not available for {command!r}")
    return buf.getvalue()


def _render_pretty(command, result) -> str:
    lines = [f"# {command}"]

    def walk(obj, indent=0):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {v}")
        elif isinstance(obj, list):
            for v in obj:
                if isinstance(v, (dict, list)):
                    walk(v, indent)
                    lines.append("")
                else:
                    lines.append(f"{pad}- {v}")
        else:
            lines.append(f"{pad}{obj}")

    walk(result)
    return "\n".join(lines).rstrip() + "\n"


_DISPATCH = {
    "enumerate": cmd_enumerate,
    "compose": cmd_compose,
    "verify-cover": cmd_verify_cover,
    "build-mv": cmd_build_mv,
    "tor": cmd_tor,
    "ext": cmd_ext,
    "group-homology": cmd_group_homology,
    "theorem": cmd_theorem,
}


def main(argv: Optional[list[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0

    try:
        result, code = _DISPATCH[args.command](args)
    except (
        UsageError,
        DiagramParseError,
        RingParseError,
        UnsupportedRingError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD

    payload = {
        "command": args.command,
        "result": result,
        "metadata": {"argv": list(argv)},
    }
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif args.format == "csv":
        text = _render_csv(args.command, result)
    else:
        text = _render_pretty(args.command, result)

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
