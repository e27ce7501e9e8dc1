"""Command line front end: ``ucdnf gen|measure|reduce|verify|report``.

Exit codes: 0 ok, 1 usage, 2 validation, 3 budget, 4 a verified check failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__, eah, hex as hx, measures, reductions, suites
from .boolfun import (
    ONE,
    ZERO,
    CertificateFamily,
    PartialFunction,
    Restriction,
    Role,
    format_input,
    parse_input,
    parse_sigma,
    read_pbf,
    write_pbf,
)
from .errors import FormatError, UcdnfError
from .hypergraph import read_col, read_hg, write_col, write_hg

EXIT_USAGE, EXIT_CHECK = 1, 4


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def threads_of(args) -> int:
    if getattr(args, "threads", None):
        return max(1, args.threads)
    env = os.environ.get("UCDNF_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise FormatError(f"UCDNF_THREADS={env!r} is not an integer")
    return 1


def emit(doc: dict, args) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if getattr(args, "table", False):
        text = render_table(doc)
    if getattr(args, "json_out", None):
        Path(args.json_out).write_text(text)
    else:
        sys.stdout.write(text)


def render_table(doc: dict) -> str:
    """Flatten a report into key/value rows."""
    rows = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k, w in v.items():
                walk(f"{prefix}.{k}" if prefix else str(k), w)
        elif isinstance(v, list) and len(v) > 8:
            rows.append((prefix, f"[{len(v)} items]"))
        else:
            rows.append((prefix, json.dumps(v)))

    walk("", doc)
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"


def sidecar(path: Path, meta: dict) -> None:
    path.with_suffix(path.suffix + ".json").write_text(json.dumps(meta, indent=2) + "\n")


def eah_params(args) -> eah.EahParams:
    return eah.EahParams(
        phi=args.phi,
        size_factor=args.size_factor,
        miss_budget=args.miss_budget,
    )


# gen ------------------------------------------------------------------------------


def cmd_gen(args) -> int:
    n = args.n
    out = Path(args.out) if args.out else Path(f"{args.kind}-n{n}")
    meta = {"version": __version__, "command": "gen", "kind": args.kind, "n": n, "seed": args.seed}
    files = []
    if args.kind == "eah-graph":
        G = eah.build_eah_graph(n)
        p = out.with_suffix(".hg")
        p.write_text(G.export_hg())
        files.append(p)
        meta.update(vertices=G.vertex_count, edges=G.edge_count)
    elif args.kind == "eah-fn":
        G = eah.build_eah_graph(n)
        params = eah_params(args)
        meta["params"] = params.to_dict()
        meta["n_tilde"] = params.n_tilde(n)
        meta["arity"] = eah.eah_arity(G)
        if n == 2:
            f = eah.build_eah_function(G, params)
            p = out.with_suffix(".pbf")
            write_pbf(f, p, [f"eah n={n} n_tilde={params.n_tilde(n)}"])
            files.append(p)
        else:
            p = out.with_suffix(".hg")
            p.write_text(G.export_hg())
            files.append(p)
            meta["note"] = "implicit function; only n=2 is materialized"
    elif args.kind == "hex":
        if args.materialize:
            f = hx.hex_function(n, materialize=True)
            p = out.with_suffix(".pbf")
            write_pbf(f, p, [f"hex n={n}"])
            files.append(p)
            meta["stars"] = int((f.table == 2).sum())
        else:
            meta["note"] = "implicit; pass --materialize for a truth table (n <= 4)"
    elif args.kind in ("spiral-single", "spiral-multi"):
        if args.kind == "spiral-single":
            M, lay = hx.single_spiral(n)
            meta["gates"] = {"star": True, "spiral_length": len(lay.spirals[0])}
        else:
            M, lay, blocks, gates = hx.multi_spiral(n)
            meta["gates"] = gates
            meta["blocks"] = blocks.to_dict()
        meta["layout"] = lay.to_dict()
        p = out.with_suffix(".mat")
        M.write(p)
        files.append(p)
    meta["files"] = [str(p) for p in files]
    target = files[0] if files else out.with_suffix(".gen")
    sidecar(target, suites.jsonable(meta))
    emit(suites.jsonable(meta), args)
    return 0


# measure ----------------------------------------------------------------------------


def load_function(args) -> PartialFunction:
    if args.input is None:
        raise FormatError("--in <file.pbf> is required")
    return read_pbf(args.input)


def load_x(args, n: int) -> int | None:
    if args.matrix:
        x = hx.HexInput.read(args.matrix).to_int()
    elif args.x is not None:
        x = parse_input(args.x)
        if len(args.x) != n:
            raise FormatError(f"--x has {len(args.x)} bits, f has {n}")
    else:
        return None
    return x


def cmd_measure(args) -> int:
    f = load_function(args)
    x = load_x(args, f.n)
    m = args.measure
    if m in ("c0", "c1", "csigma"):
        sigma = {"c0": ZERO, "c1": ONE}.get(m) or parse_sigma(args.sigma or "")
        rep = measures.cert_complexity_at(f, x, sigma) if x is not None else measures.cert_complexity(f, sigma)
    elif m == "c":
        rep = measures.certificate_complexity(f)
    elif m == "uc1":
        rep = measures.uc1(f)
    elif m == "deg":
        rep = measures.degree(f)
    elif m == "sens":
        rep = measures.sensitivity(f)
    elif m == "adeg":
        rep = measures.approx_degree(f, args.eps)
    rep.seed = args.seed
    doc = rep.to_dict()
    doc["input"] = str(args.input)
    emit(suites.jsonable(doc), args)
    return 0


# reduce -------------------------------------------------------------------------------


def read_cover(path, n: int) -> CertificateFamily:
    rows = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.startswith("#")]
    certs = tuple(Restriction.from_string(r) for r in rows)
    if any(r.n != n for r in certs):
        raise FormatError("cover restriction length differs from n")
    return CertificateFamily(certs, Role.UNAMBIGUOUS_ONE_COVER)


def cmd_reduce(args) -> int:
    out = Path(args.out) if args.out else Path(f"reduce-{args.which}")
    meta = {"version": __version__, "command": "reduce", "which": args.which, "seed": args.seed}
    if args.which == "p3p2":
        if not args.col:
            raise FormatError("--col <file.col> is required for p3p2")
        G = read_hg(args.input)
        c = read_col(args.col)
        f, x, info = reductions.p3_to_p2(G, c)
        p = out.with_suffix(".pbf")
        write_pbf(f, p, ["from hypergraph"])
        meta.update(info, x=format_input(x, f.n), monotone=reductions.is_monotone(f), files=[str(p)])
        sidecar(p, suites.jsonable(meta))
        emit(suites.jsonable(meta), args)
        return 0
    f = load_function(args)
    x = load_x(args, f.n)
    if args.which == "p2p1":
        if x is None:
            x = reductions.first_star(f)
        inst = reductions.p2_to_p1(f, x, args.k)
        meta["instance"] = inst.to_dict()
        files = []
        if args.materialize:
            g = inst.materialize()
            p = out.with_suffix(".pbf")
            write_pbf(g, p, ["cheat sheet"])
            files.append(str(p))
        meta["files"] = files
        p = out.with_suffix(".cheatsheet.json")
        p.write_text(json.dumps(suites.jsonable(meta), indent=2) + "\n")
    elif args.which == "p1p2":
        U = read_cover(args.cover, f.n) if args.cover else measures.uc1(f).witness
        g, z, info = reductions.p1_to_p2(f, U)
        p = out.with_suffix(".pbf")
        write_pbf(g, p, ["parity lift"])
        meta.update(info, z=format_input(z, g.n), cover=[r.entries for r in U], files=[str(p)])
        sidecar(p, suites.jsonable(meta))
    elif args.which == "p2p3":
        if x is None:
            x = reductions.first_star(f)
        G, c, info = reductions.p2_to_p3(f, x)
        p = out.with_suffix(".hg")
        q = out.with_suffix(".col")
        write_hg(G, p, [f"from f with x={format_input(x, f.n)}"])
        write_col(c, q)
        meta.update(x=format_input(x, f.n), labels=info["labels"], raw_edges=info["raw_edges"], edges=info["edges"], files=[str(p), str(q)])
        sidecar(p, suites.jsonable(meta))
    emit(suites.jsonable(meta), args)
    return 0


# verify / report -------------------------------------------------------------------------


def primes_upto(n: int) -> tuple[int, ...]:
    return tuple(p for p in range(2, n + 1) if eah.is_prime(p))


def run_suite(name: str, args, threads: int) -> dict:
    seed = args.seed
    if name == "fact1":
        return suites.fact1_suite(n=args.n or 3, random_n4=args.random_n4, seed=seed, threads=threads)
    if name == "degree":
        return suites.degree_suite(seed=seed, threads=threads)
    if name == "pairwise":
        return suites.pairwise_suite(primes_upto(args.n) if args.n else (2, 3, 5, 7, 11, 13))
    if name == "eah":
        ns = (args.n,) if args.n else (31, 61, 101)
        params = eah_params(args)
        return suites.eah_suite(ns, trials=args.trials, seed=seed, params=params, threads=threads)
    if name == "hex-claims":
        return suites.hex_suite(n=args.n or 4, threads=threads)
    if name == "boxes":
        return suites.boxes_suite(catalog=args.catalog, seed=seed, threads=threads)
    if name == "box":
        return verify_one_box(args)
    raise FormatError(f"unknown suite {name}")


def verify_one_box(args) -> dict:
    which = args.which
    if which is None:
        raise FormatError("--which 1..4 is required")
    if args.input:
        f = read_pbf(args.input)
        x = load_x(args, f.n)
        if which == 2:
            rep = reductions.verify_parity_lift(f)
        elif which == 4:
            G, c, _ = reductions.p2_to_p3(f, x if x is not None else reductions.first_star(f))
            rep = reductions.verify_from_hypergraph(G, c)
        else:
            rep = reductions.verify_box(which, f, x if x is not None else reductions.first_star(f))
        return suites.jsonable({"suite": "box", "which": which, "seed": args.seed, "report": rep, "pass": rep["pass"]})
    rep = suites.boxes_suite(catalog=args.catalog, seed=args.seed, threads=threads_of(args))
    name = {1: "cheatsheet", 2: "parity-lift", 3: "to-hypergraph", 4: "round-trip"}[which]
    part = rep["boxes"][name]
    return {"suite": "box", "which": which, "seed": args.seed, "box": part, "pass": not part["failed"]}


def cmd_verify(args) -> int:
    threads = threads_of(args)
    rep = run_suite(args.suite, args, threads)
    doc = {"version": __version__, "command": "verify", "suite": args.suite, "seed": args.seed, "report": rep, "pass": rep["pass"]}
    emit(doc, args)
    return 0 if rep["pass"] else EXIT_CHECK


def cmd_report(args) -> int:
    threads = threads_of(args)
    names = args.suites or list(suites.SUITES)
    unknown = [s for s in names if s not in suites.SUITES]
    if unknown:
        print(f"ucdnf report: error: unknown suite {unknown[0]!r}", file=sys.stderr)
        return EXIT_USAGE
    out = {}
    for name in names:
        out[name] = run_suite(name, args, threads)
    doc = {
        "version": __version__,
        "command": "report",
        "seed": args.seed,
        "suites": out,
        "summary": {k: v["pass"] for k, v in out.items()},
        "pass": all(v["pass"] for v in out.values()),
    }
    emit(doc, args)
    return 0 if doc["pass"] else EXIT_CHECK


# parser ---------------------------------------------------------------------------------


def _common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help="worker threads (env UCDNF_THREADS)")
    p.add_argument("--json-out", help="write the JSON report here instead of stdout")
    p.add_argument("--table", action="store_true", help="render the report as a key/value table")


def _eah_flags(p):
    p.add_argument("--phi", type=float, default=1 / 100)
    p.add_argument("--size-factor", type=float, default=100.0)
    p.add_argument("--miss-budget", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = Parser(prog="ucdnf", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=Parser)

    g = sub.add_parser("gen", help="build graphs, functions and hard inputs")
    g.add_argument("kind", choices=["eah-graph", "eah-fn", "hex", "spiral-single", "spiral-multi"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--out", help="output path prefix")
    g.add_argument("--materialize", action="store_true")
    _eah_flags(g)
    _common(g)
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("measure", help="exact complexity measures of a .pbf function")
    m.add_argument("measure", choices=["c0", "c1", "c", "csigma", "uc1", "deg", "sens", "adeg"])
    m.add_argument("--in", dest="input", help=".pbf file")
    m.add_argument("--x", help="input bits x_1..x_n")
    m.add_argument("--matrix", help="read x from an n x n matrix file")
    m.add_argument("--sigma", choices=["0", "1", "notzero", "notone"])
    m.add_argument("--eps", default="1/3")
    _common(m)
    m.set_defaults(func=cmd_measure)

    r = sub.add_parser("reduce", help="run one of the four transformations")
    r.add_argument("which", choices=["p2p1", "p1p2", "p2p3", "p3p2"])
    r.add_argument("--in", dest="input", required=True, help=".pbf (or .hg for p3p2)")
    r.add_argument("--x", help="designated input bits x_1..x_n")
    r.add_argument("--matrix")
    r.add_argument("--k", type=int, default=None)
    r.add_argument("--cover", help="file of restrictions, one per line (p1p2)")
    r.add_argument("--col", help=".col colouring (p3p2)")
    r.add_argument("--out", help="output path prefix")
    r.add_argument("--materialize", action="store_true")
    _common(r)
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="run a verification suite; exit 4 when a check fails")
    v.add_argument("suite", choices=["fact1", "degree", "pairwise", "eah", "hex-claims", "boxes", "box"])
    _verify_flags(v)
    v.set_defaults(func=cmd_verify)

    rp = sub.add_parser("report", help="run several suites into one report")
    rp.add_argument("suites", nargs="*", default=[], help="subset of: " + ", ".join(suites.SUITES))
    _verify_flags(rp)
    rp.set_defaults(func=cmd_report)
    return ap


def _verify_flags(p):
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--random-n4", type=int, default=500)
    p.add_argument("--catalog", choices=["tiny", "small"], default="tiny")
    p.add_argument("--which", type=int, choices=[1, 2, 3, 4])
    p.add_argument("--in", dest="input")
    p.add_argument("--x")
    p.add_argument("--matrix")
    _eah_flags(p)
    _common(p)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # usage errors exit 1 through Parser.error, --help and --version exit 0
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UcdnfError as e:
        print(f"ucdnf: {e.code}: {e}", file=sys.stderr)
        return e.exit_code
    except (OSError, ValueError) as e:
        print(f"ucdnf: ERROR: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
