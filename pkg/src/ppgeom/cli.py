"""Command-line front end: ``ppgeom <subcommand> ...``.

Weights are comma-separated rationals in the node order shown by ``--help``.
Set PPGEOM_ASCII=1 to avoid non-ASCII diagram glyphs.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources

import numpy as np

from . import classifier, homology, parabolic, pencil, realize, rootsys

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2

HELP_TYPES = ("A4", "B4", "C4", "D5", "E6", "E7", "E8", "F4", "G2")


class ValidationError(ValueError):
    pass


class VerificationFailure(RuntimeError):
    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


def _fmt(x) -> str:
    return str(Fraction(x))


def _fmt_weight(mu) -> str:
    return "(" + ",".join(_fmt(x) for x in mu) + ")"


def _num(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


def parse_weight(text: str, rank: int | None = None) -> tuple[Fraction, ...]:
    try:
        mu = tuple(Fraction(p.strip()) for p in text.split(",") if p.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"cannot parse weight {text!r}") from exc
    if rank is not None and len(mu) != rank:
        raise ValidationError(f"weight {text!r} has {len(mu)} entries, expected {rank}")
    return mu


def parse_nodes(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ValidationError(f"cannot parse node list {text!r}") from exc


def _lie_type(args) -> rootsys.LieType:
    spec = args.type
    if args.rank is not None:
        if any(ch.isdigit() for ch in spec):
            raise ValidationError("give the rank either in --type or with --rank, not both")
        spec = f"{spec}{args.rank}"
    return rootsys.LieType.parse(spec)


def _parabolic(args) -> parabolic.Parabolic:
    rs = rootsys.build(_lie_type(args))
    return parabolic.make_parabolic(rs, parse_nodes(args.cross))


# ------------------------------------------------------------------ commands


def cmd_roots(args):
    rs = rootsys.build(_lie_type(args))
    data = {
        "type": str(rs.lie_type),
        "rank": rs.rank,
        "cartan": rs.cartan,
        "positive_roots": [list(a.simple_coords) for a in rs.positive_roots],
        "inverse_cartan": [[_num(x) for x in row] for row in rs.inv_cartan],
    }
    if rs.lie_type.irreducible:
        data["highest_root"] = list(rootsys.highest_root(rs).simple_coords)
    lines = [f"type {rs.lie_type}, rank {rs.rank}, {len(rs.positive_roots)} positive roots",
             rootsys.node_order_diagram(rs.lie_type), "", "positive roots (simple coordinates):"]
    lines += ["  " + _fmt_weight(a.simple_coords) for a in rs.positive_roots]
    if "highest_root" in data:
        lines.append("highest root: " + _fmt_weight(data["highest_root"]))
    lines.append("inverse Cartan matrix:")
    lines += ["  " + " ".join(f"{_fmt(x):>5}" for x in row) for row in rs.inv_cartan]
    return data, "\n".join(lines)


def cmd_hasse(args):
    p = _parabolic(args)
    if args.depth < 0:
        raise ValidationError("--depth must be non-negative")
    d = homology.hasse(p, args.depth)
    data = {
        "type": str(p.rs.lie_type),
        "crossed": sorted(p.crossed),
        "vertices": [{"index": i, "length": d.length[i], "word": list(d.words[i]),
                      "weight": [_num(x) for x in d.vertices[i]]} for i in range(len(d.vertices))],
        "edges": [{"source": u, "target": v, "node": k} for u, v, k in d.edges],
    }
    lines = []
    for k in range(max(d.length) + 1):
        lines.append(f"length {k}:")
        for i in d.at_length(k):
            lines.append(f"  [{i}] {_fmt_weight(d.vertices[i])}  word {list(d.words[i])}")
            if args.diagrams:
                lines += ["      " + row for row in p.render([_fmt(x) for x in d.vertices[i]]).splitlines()]
    lines.append("edges:")
    lines += [f"  [{u}] --{k}--> [{v}]" for u, v, k in d.edges]
    return data, "\n".join(lines)


def _rep_weights(args, p):
    if args.rep == "adjoint":
        return homology.adjoint_weights(p.rs)
    if args.rep == "trivial":
        return [tuple(Fraction(0) for _ in range(p.rs.rank))]
    return [parse_weight(args.rep, p.rs.rank)]


def cmd_homology(args):
    p = _parabolic(args)
    comps = []
    for lam in _rep_weights(args, p):
        for c in homology.homology(p, lam, args.degree):
            comps.append({"representation": [_num(x) for x in lam], "degree": c.degree,
                          "word": list(c.word), "weight": [_num(x) for x in c.hw],
                          "geometric_weight": _num(parabolic.geometric_weight(p, c.hw))})
    data = {"type": str(p.rs.lie_type), "crossed": sorted(p.crossed), "degree": args.degree,
            "components": comps}
    lines = [f"H_{args.degree} for {p.rs.lie_type} crossed at {sorted(p.crossed)}:"]
    for c in comps:
        lines.append(f"  {_fmt_weight(c['weight'])}  word {c['word']}  geometric weight {c['geometric_weight']}")
        if args.diagrams:
            lines += ["      " + row for row in p.render([_fmt(x) for x in c["weight"]]).splitlines()]
    if not comps:
        lines.append("  (none)")
    return data, "\n".join(lines)


def cmd_weight(args):
    p = _parabolic(args)
    lam = parse_weight(args.weight, p.rs.rank)
    w = parabolic.geometric_weight(p, lam)
    return {"type": str(p.rs.lie_type), "crossed": sorted(p.crossed),
            "weight": [_num(x) for x in lam], "geometric_weight": _num(w)}, _fmt(w)


def cmd_classify(args):
    if args.max_rank < 1:
        raise ValidationError("--max-rank must be positive")
    records = classifier.classify_all(args.max_rank)
    families = {}
    for rec in records:
        families.setdefault(rec.family, []).append(rec.to_json())
    data = {"max_rank": args.max_rank, "families": families}
    return data, _classify_text(records)


def _markdown(headers, rows) -> str:
    out = ["| " + " | ".join(headers) + " |", "|" + "|".join("---" for _ in headers) + "|"]
    out += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(out)


def _classify_text(records):
    headers = ["family", "h", "q", "g", "p", "r", "n", "dim W", "dim g/p", "dim B", "r(n+1)/2"]
    rows = []
    for rec in records:
        d = rec.dims
        rows.append([rec.family, rec.big_type, rec.q_crossed, rec.iso_type, ",".join(map(str, rec.p_crossed)),
                     rec.r, rec.n, d.dim_W, d.dim_gp, d.dim_B, _fmt(d.half_r_np1)])
    return _markdown(headers, rows)


def _table_rspace(records):
    rows = [{"family": r.family, "h": str(r.big_type), "q": [r.q_crossed], "g": str(r.iso_type),
             "p": list(r.p_crossed)} for r in records]
    text = _markdown(["family", "H/Q", "G/P"],
                     [[x["family"], f"{x['h']}/{x['q'][0]}", f"{x['g']}/{','.join(map(str, x['p']))}"]
                      for x in rows])
    return rows, text


def _table_real(records):
    seen, rows = set(), []
    for r in records:
        if r.family not in seen:
            seen.add(r.family)
            rows.append({"family": r.family, "real_forms": list(r.real_forms)})
    return rows, _markdown(["family", "real forms"], [[x["family"], ", ".join(x["real_forms"])] for x in rows])


def _q_of(rec):
    return parabolic.make_parabolic(rootsys.build(rec.big_type), [rec.q_crossed])


def _table_pieces(records, sign):
    rows, text = [], []
    for r in records:
        pieces = classifier.graded_components(_q_of(r), sign)
        rows.append({"family": r.family, "h": str(r.big_type), "g": str(r.iso_type), "r": r.r, "n": r.n,
                     "pieces": [{"height": h, "weight": [_num(x) for x in mu]} for h, mu in pieces]})
        text.append([r.family, r.big_type, r.iso_type,
                     "  ".join(f"[{h}] {_fmt_weight(mu)}" for h, mu in pieces)])
    return rows, _markdown(["family", "h", "g", "graded pieces [p-height] weight"], text)


def _table_udual(records):
    rows, text = [], []
    for r in records:
        u, ok = classifier.udual_data(_q_of(r))
        dim = rootsys.weyl_dim(rootsys.build(r.iso_type), u)
        rows.append({"family": r.family, "h": str(r.big_type), "g": str(r.iso_type),
                     "weight": [_num(x) for x in u], "dim": dim, "dim_check": ok})
        text.append([r.family, r.big_type, r.iso_type, _fmt_weight(u), dim])
    return rows, _markdown(["family", "h", "g", "U* weight", "dim U*"], text)


def _table_cpx(records):
    rows = [{"family": r.family, "h": str(r.big_type), "q": r.q_crossed, "g": str(r.iso_type),
             "p": list(r.p_crossed), "r": r.r, "n": r.n} for r in records]
    return rows, _classify_text(records)


TABLES = {
    "cpx": _table_cpx,
    "dims": lambda recs: ([r.to_json()["dims"] | {"family": r.family, "h": str(r.big_type)} for r in recs],
                          _classify_text(recs)),
    "rspace": _table_rspace,
    "real": _table_real,
    "W": lambda recs: _table_pieces(recs, 1),
    "Wd": lambda recs: _table_pieces(recs, -1),
    "Ud": _table_udual,
}
GROUPS = {"appendix": ("rspace", "real", "W", "Wd", "Ud"), "classification": ("cpx", "dims")}


def cmd_tables(args):
    which = GROUPS.get(args.which, (args.which,))
    if any(w not in TABLES for w in which):
        raise ValidationError(f"unknown table {args.which!r}")
    records = classifier.classify_all(args.max_rank)
    data, text = {}, []
    for w in which:
        rows, block = TABLES[w](records)
        data[w] = rows
        text += [f"### {w}", "", block, ""]
    return {"tables": data}, "\n".join(text).rstrip()


def run_verification(samples: int = 200, max_n: int = 3) -> list[dict]:
    results = []
    for n in range(1, max_n + 1):
        R = realize.sp_realization(n)
        results.append({"id": f"closure n={n}", "samples": R.dim ** 2, "max_residual": 0.0,
                        "passed": realize.check_closure(R)})
        results.append({"id": f"jacobi n={n}", "samples": R.dim ** 3, "max_residual": 0.0,
                        "passed": realize.check_jacobi(R)})
        results.append({"id": f"gradings n={n}", "samples": R.dim, "max_residual": 0.0,
                        "passed": realize.check_gradings(R)})
        rep = realize.verify_bracket_table(R, samples, seed=n)
        results.append(rep.to_json() | {"id": f"bracket-table n={n}"})
        for rep in realize.verify_appendix_identities(R, samples, seed=n).values():
            results.append(rep.to_json() | {"id": f"{rep.name} n={n}"})
        results.append({"id": f"meyberg n={n}", "samples": samples, "max_residual": 0.0,
                        "passed": realize.meyberg_exact_check(R, samples, seed=n)})
    results.append(realize.verify_quaternionic(100).to_json())
    for kind, size in (("sym_real", 3), ("herm_complex", 3), ("herm_quat", 3), ("spin", 4)):
        J = realize.make_jordan(kind, size)
        try:
            dims = realize.peirce_frame(J)
            ok = True
        except realize.VerificationError:
            dims, ok = {}, False
        results.append({"id": f"peirce {kind}({size})", "samples": 1, "max_residual": 0.0, "passed": ok,
                        "dims": {f"{i},{j}": d for (i, j), d in dims.items()}})
    return results


def cmd_verify(args):
    results = run_verification(args.samples, args.max_n)
    passed = all(r["passed"] for r in results)
    data = {"passed": passed, "suites": results}
    text = "\n".join(f"{'PASS' if r['passed'] else 'FAIL'}  {r['id']:<28} samples={r['samples']:<6} "
                     f"max residual={r['max_residual']:.3g}" for r in results)
    if not passed:
        raise VerificationFailure("identity verification failed", data)
    return data, text


def _read_matrix(rows, r):
    def entry(x):
        if isinstance(x, (list, tuple)):
            if len(x) != 2:
                raise ValidationError("complex entries are [re, im] pairs")
            return complex(x[0], x[1])
        return complex(x) if r > 1 else float(x)
    try:
        return np.array([[entry(x) for x in row] for row in rows])
    except (TypeError, ValueError) as exc:
        raise ValidationError("malformed matrix") from exc


def load_pencil(obj) -> pencil.PencilPoint:
    try:
        r, n = int(obj["r"]), int(obj["n"])
        h, hbar = obj["h"], obj["hbar"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("pencil input needs keys r, n, h, hbar") from exc
    try:
        return pencil.PencilPoint(pencil.MetricPoint(r, n, _read_matrix(h, r)),
                                  pencil.MetricPoint(r, n, _read_matrix(hbar, r)))
    except pencil.PencilError as exc:
        raise ValidationError(str(exc)) from exc


def _real_list(v):
    return [round(float(np.real(x)), 10) + 0.0 for x in v]


def cmd_pencil(args):
    try:
        with open(args.input) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read {args.input}: {exc}") from exc
    P = load_pencil(obj)
    pf_deg, coef, adj_deg = pencil.pencil_polynomials(P)
    eig = pencil.eigenvalues(P)
    data = {
        "r": P.r, "n": P.n,
        "pfaffian": pencil.pfaffian(P.h),
        "pfaffian_polynomial": [round(float(np.real(c)), 12) + 0.0 for c in coef],
        "pfaffian_degree": pf_deg,
        "adjugate_degree": adj_deg,
        "eigenvalues": sorted(_real_list(eig)) if np.allclose(np.imag(eig), 0) else
        [_real_list([z.real, z.imag]) for z in sorted(eig, key=lambda z: (z.real, z.imag))],
        "multiplicities_divisible": pencil.multiplicity_check(P),
        "interlacing": None,
    }
    checks_ok = pf_deg == P.n and adj_deg == P.n - 1 and data["multiplicities_divisible"]
    if P.r == 1:
        X = obj.get("X", [1.0] * P.n)
        try:
            res = pencil.interlacing(P, X)
            data["interlacing"] = {"roots": list(res.roots), "agrees": res.agrees, "interlaced": res.interlaced}
            checks_ok = checks_ok and res.ok
        except pencil.PencilError as exc:
            data["interlacing"] = {"skipped": str(exc)}
    lines = [f"r={P.r} n={P.n}",
             "pf(hbar - t h) coefficients (t^0 upward): " + " ".join(f"{c:.6g}" for c in data["pfaffian_polynomial"]),
             f"pfaffian degree {pf_deg}, adjugate degree {adj_deg}",
             "eigenvalues of A: " + " ".join(f"{x:.6g}" if isinstance(x, float) else str(x) for x in data["eigenvalues"]),
             f"multiplicities divisible by r: {data['multiplicities_divisible']}"]
    il = data["interlacing"]
    if il is None:
        lines.append("interlacing: not applicable (r > 1)")
    elif "skipped" in il:
        lines.append(f"interlacing: skipped ({il['skipped']})")
    else:
        lines.append(f"interlacing: {'holds' if il['interlaced'] and il['agrees'] else 'FAILS'}; roots "
                     + " ".join(f"{x:.6g}" for x in il["roots"]))
    data["passed"] = bool(checks_ok)
    if not checks_ok:
        raise VerificationFailure("pencil checks failed", data)
    return data, "\n".join(lines)


def load_schema(name: str) -> dict:
    """Shipped JSON schema for the --json output of a subcommand (or 'error', 'pencil_input')."""
    return json.loads(resources.files(__package__).joinpath("schemas", f"{name}.json").read_text())


# ------------------------------------------------------------------- parser


def _node_help() -> str:
    blocks = ["node order:"]
    for t in HELP_TYPES:
        blocks.append(f"{t}:")
        blocks += ["  " + line for line in rootsys.node_order_diagram(t).splitlines()]
    return "\n".join(blocks)


def _add_type(sp, cross=True):
    sp.add_argument("--type", required=True, help="Lie type, e.g. E6, A3+A3, or a family letter with --rank")
    sp.add_argument("--rank", type=int, help="rank when --type is a bare family letter")
    if cross:
        sp.add_argument("--cross", required=True, help="crossed nodes, comma separated")


class _Parser(argparse.ArgumentParser):
    """Usage errors are validation errors (exit 1), not argparse's default exit 2."""

    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    parser = _Parser(prog="ppgeom", description=__doc__, epilog=_node_help(), formatter_class=fmt)
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_, epilog=_node_help(), formatter_class=fmt)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
        return sp

    sp = add("roots", "positive roots, highest root and inverse Cartan matrix")
    _add_type(sp, cross=False)
    sp.set_defaults(func=cmd_roots)

    sp = add("hasse", "Hasse diagram of a parabolic")
    _add_type(sp)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--diagrams", action="store_true", help="draw each vertex as a labelled diagram")
    sp.set_defaults(func=cmd_hasse)

    sp = add("homology", "Lie algebra homology via Kostant's theorem")
    _add_type(sp)
    sp.add_argument("--rep", default="adjoint", help="'adjoint', 'trivial' or a dominant weight")
    sp.add_argument("--degree", type=int, default=2)
    sp.add_argument("--diagrams", action="store_true")
    sp.set_defaults(func=cmd_homology)

    sp = add("weight", "geometric weight of a weight")
    _add_type(sp)
    sp.add_argument("--lambda", dest="weight", required=True, help="comma separated weight")
    sp.set_defaults(func=cmd_weight)

    sp = add("classify", "classify projective parabolic geometries")
    sp.add_argument("--max-rank", type=int, default=9)
    sp.set_defaults(func=cmd_classify)

    sp = add("tables", "classification and representation tables")
    sp.add_argument("--which", default="appendix",
                    choices=sorted(TABLES) + sorted(GROUPS))
    sp.add_argument("--max-rank", type=int, default=9)
    sp.set_defaults(func=cmd_tables)

    sp = add("verify", "run the bracket, identity and Jordan suites")
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--max-n", type=int, default=3)
    sp.set_defaults(func=cmd_verify)

    sp = add("pencil", "pointwise analysis of a metric pencil")
    sp.add_argument("--input", required=True, help="JSON file {r, n, h, hbar[, X]}")
    sp.set_defaults(func=cmd_pencil)
    return parser


def _emit(obj, as_json, stream):
    if as_json:
        stream.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        stream.write(obj + "\n")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    as_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        data, text = args.func(args)
    except VerificationFailure as exc:
        if as_json:
            _emit({"error": {"kind": "verification", "message": str(exc)}, "report": exc.payload}, True, sys.stdout)
        else:
            sys.stderr.write(f"verification failed: {exc}\n")
            if exc.payload is not None:
                sys.stderr.write(json.dumps(exc.payload, indent=1, default=str) + "\n")
        return EXIT_FAILED
    except (ValidationError, rootsys.RootSystemError, classifier.ClassificationError, pencil.PencilError) as exc:
        if as_json:
            _emit({"error": {"kind": "validation", "message": str(exc)}}, True, sys.stdout)
        else:
            sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    _emit(data if as_json else text, as_json, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
