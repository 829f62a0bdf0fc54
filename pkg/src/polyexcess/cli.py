"""Command line: build, analyze, verify, corpus, identify.

Exit status is 0 on success, 1 when a check fails and 2 on bad input or an
exceeded resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import dsl, harness
from . import lattice as lat
from .analysis import analysis_dict, identify_family
from .errors import PolytopeError
from .sanity import sanity_check

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Usage(Exception):
    pass


def _looks_like_path(arg: str) -> bool:
    return arg.endswith(".json") or Path(arg).exists()


def load_input(arg: str) -> lat.IncidencePolytope:
    """A polytope file path or a construction expression."""
    if _looks_like_path(arg):
        path = Path(arg)
        if not path.is_file():
            raise _Usage(f"{arg}: no such file")
        return lat.load(path)
    return dsl.evaluate(arg)


def _directory_members(path: Path) -> List[lat.IncidencePolytope]:
    index = path / "index.json"
    if index.is_file():
        data = json.loads(index.read_text(encoding="utf-8"))
        names = [m["file"] for m in data.get("members", [])]
    else:
        names = sorted(p.name for p in path.glob("*.json"))
    return [lat.load(path / n) for n in names]


def _gate(P: lat.IncidencePolytope) -> None:
    report = sanity_check(P)
    if not report.ok:
        raise _Usage(f"{P.provenance or 'input'}: {report.summary()}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- subcommands ------------------------------------------------------------------------


def cmd_build(args, out) -> int:
    P = dsl.evaluate(args.expr)
    if args.output:
        lat.save(P, args.output)
    else:
        out.write(lat.dumps(P))
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    P = load_input(args.input)
    _gate(P)
    data = analysis_dict(P, family=identify_family(P) if P.dim >= 2 else None)
    if args.json:
        out.write(_dump(data))
        return EXIT_OK
    exc = data["excess"]
    lines = [f"provenance: {P.provenance or '-'}",
             f"dimension: {P.dim}",
             f"f-vector: {data['f_vector']}",
             f"excess degree: {exc['xi']}",
             f"nonsimple vertices: {exc['nonsimple']}",
             f"vertex excesses: {exc['excesses']}"]
    if "structure" in data:
        s = data["structure"]
        flags = [k for k in ("is_simple", "is_semisimple", "is_super_kirkman",
                             "is_2_neighbourly", "is_pyramidal") if s[k]]
        lines.append("properties: " + (", ".join(f[3:] for f in flags) or "none"))
        ns = s["nonsimple_subgraph"]
        lines.append("nonsimple set: " + ", ".join(
            f"{k}={str(ns[k]).lower()}" for k in ("same_degree", "component_count", "is_face",
                                                   "is_missing_face", "is_phantom_simplex")))
        lines.append(f"family: {data['family']}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    target = Path(args.input)
    if target.is_dir():
        members = _directory_members(target)
    else:
        members = [load_input(args.input)]
    for P in members:
        _gate(P)
    ids = [s for s in args.checks.split(",") if s] if args.checks else None
    must = [s for s in args.must_hit.split(",") if s] if args.must_hit else []
    report = harness.run_suite(members, harness.select_checks(ids), must)
    out.write(report.to_json() if args.json else "\n".join(report.lines()) + "\n")
    return EXIT_OK if report.ok else EXIT_FAIL


def write_corpus(corpus: harness.Corpus, out_dir: Path) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    for stale in list(out_dir.glob("p*.json")) + [out_dir / "index.json"]:
        if stale.is_file():
            stale.unlink()
    members = []
    for i, P in enumerate(corpus.polytopes):
        name = f"p{i:04d}.json"
        lat.save(P, out_dir / name)
        members.append({"file": name, "provenance": P.provenance})
    reasons: dict = {}
    for _, why in corpus.rejections:
        key = why.split(":")[0]
        reasons[key] = reasons.get(key, 0) + 1
    index = {"spec": corpus.spec.to_dict(),
             "fingerprint": harness.fingerprint([m["provenance"] for m in members]),
             "members": members,
             "rejections": dict(sorted(reasons.items()))}
    (out_dir / "index.json").write_text(_dump(index), encoding="utf-8")
    return index


def cmd_corpus(args, out) -> int:
    spec = harness.CorpusSpec(seed=args.seed, count=args.count, max_dim=args.max_dim,
                              max_vertices=args.max_vertices)
    index = write_corpus(harness.generate_corpus(spec), Path(args.out))
    out.write(f"wrote {len(index['members'])} polytopes to {args.out} "
              f"(fingerprint {index['fingerprint']})\n")
    return EXIT_OK


def cmd_identify(args, out) -> int:
    P = load_input(args.input)
    _gate(P)
    out.write(identify_family(P) + "\n")
    return EXIT_OK


def _int(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyexcess",
                                 description="Combinatorial polytopes and their excess degree.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="evaluate an expression and write the polytope")
    p.add_argument("expr")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("analyze", help="excess profile and structure report")
    p.add_argument("input", help="polytope file or expression")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="run the structural checks")
    p.add_argument("input", help="polytope file, corpus directory or expression")
    p.add_argument("--checks", help="comma-separated check ids (default: all)")
    p.add_argument("--must-hit", help="comma-separated ids that may not be vacuous everywhere")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("corpus", help="generate a seeded corpus directory")
    p.add_argument("--seed", type=_int, required=True)
    p.add_argument("--count", type=_int, required=True)
    p.add_argument("--max-dim", type=_int, default=12)
    p.add_argument("--max-vertices", type=_int, default=48)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("identify", help="name the catalogue family, if any")
    p.add_argument("input", help="polytope file or expression")
    p.set_defaults(func=cmd_identify)
    return ap


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except (PolytopeError, _Usage, OSError) as exc:
        err.write(f"error: {exc}\n")
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        err.write(f"error: malformed input: {exc}\n")
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
