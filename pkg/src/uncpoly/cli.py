"""Command-line front end: ``uncpoly <verb> [options]``.

Exit codes: 0 success (or every verdict Proved), 2 Unresolved or a failed
property, 1 error with a diagnostic on stderr.  Output goes to ``--out`` or
stdout and depends only on the arguments (seed included).
"""
from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path

import numpy as np

from . import gallery
from . import io as uio
from .certify import Verdict, check_lemma1, random_certification_suite
from .core import DEFAULT_BUDGET, Field, NormTag, Vec, unit_basis
from .errors import UncpolyError
from .optimize import diagonal_closed_form_norm, poly_norm, restricted_tail_norm
from .polys import HomPoly, complexify, eval_poly, polarize, tensor_from_blackbox
from .rademacher import INTERVAL_CAP, kronecker_expected, product_integral, rademacher
from .series import (
    check_theorem2_tail,
    image_series,
    uc_tail_profile,
    vstar_pairing,
)

EXIT_OK, EXIT_ERROR, EXIT_UNRESOLVED = 0, 1, 2
STEP_TABLE_CAP = 4096

_BUDGET_FLAGS = {
    "grid": "grid_points",
    "multistarts": "multistarts",
    "iterations": "iterations",
    "rounds": "refinement_rounds",
    "torus": "torus_points",
    "vertex-cap": "vertex_cap",
    "grid-cap": "grid_cap",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; that code is reserved for Unresolved
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0)
    for flag, name in _BUDGET_FLAGS.items():
        p.add_argument(f"--budget-{flag}", dest=f"budget_{name}", type=int, default=None, metavar="N")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--field", default="real", choices=("real", "complex"))


def build_parser():
    parser = _Parser(prog="uncpoly", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("certify", help="check the unconditional-norm inequality")
    _common(c)
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--poly", help="polynomial JSON")
    src.add_argument("--gallery", help="gallery entry name")
    src.add_argument("--suite", action="store_true", help="random instance suite")
    c.add_argument("--vectors", help="series JSON/CSV with the vectors (default: unit basis, at most 6)")
    c.add_argument("--tag", default=None, help="norm tag for CSV vectors")
    c.add_argument("--k", type=int, action="append", help="suite degree (repeatable; default 2)")
    c.add_argument("--count", type=int, default=100)
    c.add_argument("--dims", default="1:4", help="suite domain dimension range lo:hi")
    c.add_argument("--nvec", default="1:4", help="suite vector count range lo:hi")

    s = sub.add_parser("series", help="tail profiles of a series prefix")
    _common(s)
    s.add_argument("--input", required=True, help="series JSON or CSV")
    s.add_argument("--tag", default=None, help="norm tag for CSV input")
    s.add_argument("--poly", help="polynomial JSON; profile the image series")
    s.add_argument("--theorem2", action="store_true", help="emit both sides of the tail estimate per n")
    s.add_argument("--functionals", help="JSON list of functionals; emit max |f_n(x)| over the terms")
    s.add_argument("--slack", type=float, default=1.05)
    s.add_argument("--decay-ratio", type=float, default=0.1)

    r = sub.add_parser("rademacher", help="orthogonality table of Rademacher products")
    _common(r)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--max-level", type=int, default=None)
    r.add_argument("--tuple", action="append", default=None, help="comma-separated levels, e.g. 1,1,2")

    po = sub.add_parser("polarize", help="evaluate the symmetric multilinear form")
    _common(po)
    psrc = po.add_mutually_exclusive_group(required=True)
    psrc.add_argument("--poly")
    psrc.add_argument("--gallery")
    po.add_argument("--args", help="series JSON holding the k arguments")
    po.add_argument("--grid", help="lo:hi:num grid for each argument of a 1-dimensional polynomial")
    po.add_argument("--tensor", action="store_true", help="emit the recovered coefficient tensor")

    n = sub.add_parser("norms", help="norm estimates and tail restrictions")
    _common(n)
    nsrc = n.add_mutually_exclusive_group(required=True)
    nsrc.add_argument("--poly")
    nsrc.add_argument("--gallery")
    nsrc.add_argument("--pa", help="comma-separated weights a for x -> sum a_i x_i^k on l_2")
    n.add_argument("--k", type=int, default=2)
    n.add_argument("--tail", action="store_true", help="norm restricted to every coordinate tail")

    g = sub.add_parser("gallery", help="named example polynomials")
    _common(g)
    g.add_argument("action", choices=("list", "check"))
    g.add_argument("names", nargs="*")
    return parser


# helpers


def _budget(args):
    changes = {name: getattr(args, f"budget_{name}") for name in _BUDGET_FLAGS.values()
               if getattr(args, f"budget_{name}") is not None}
    if args.seed < 0:
        raise UsageError("--seed must be non-negative")
    return DEFAULT_BUDGET.replace(seed=args.seed, **changes)


def _range(text, flag):
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"{flag} expects lo:hi, got {text!r}") from None
    return lo, hi


def _load_poly(args) -> HomPoly:
    if getattr(args, "gallery", None):
        return gallery.get(args.gallery).poly
    return uio.poly_from_json(uio.load_json(args.poly))


def _load_series(path, tag_text):
    if Path(path).suffix.lower() == ".csv":
        if not tag_text:
            raise UsageError("CSV series need --tag")
        return uio.series_from_csv(Path(path).read_text(encoding="utf-8"), NormTag.parse(tag_text), Path(path).stem)
    return uio.series_from_json(uio.load_json(path))


def _emit(args, text):
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fmt(args, default):
    return args.format or default


# verbs


def cmd_certify(args):
    budget = _budget(args)
    if args.suite:
        lo, hi = _range(args.dims, "--dims")
        nlo, nhi = _range(args.nvec, "--nvec")
        summary = random_certification_suite(tuple(args.k or (2,)), (lo, hi), args.count, args.seed, budget,
                                             args.field, (nlo, nhi))
        data = uio.suite_to_json(summary)
        certs = [c for _, c in summary.certificates]
    else:
        p = _load_poly(args)
        if args.field == "complex" and p.field is Field.REAL:
            p = complexify(p)
        if args.vectors:
            vs = list(_load_series(args.vectors, args.tag))
        else:
            vs = unit_basis(p.domain.dim, p.domain.tag, min(6, p.domain.dim))
        cert = check_lemma1(p, vs, budget)
        data, certs = uio.certificate_to_json(cert), [cert]
    if _fmt(args, "json") == "csv":
        rows = [(i, c.verdict.value, c.lhs.value if c.lhs else "", c.rhs.value if c.rhs else "", c.c_k)
                for i, c in enumerate(certs)]
        _emit(args, uio.rows_to_csv(("instance", "verdict", "lhs", "rhs", "C_k"), rows))
    else:
        _emit(args, uio.dumps(data))
    return EXIT_OK if all(c.verdict is Verdict.PROVED for c in certs) else EXIT_UNRESOLVED


def cmd_series(args):
    budget = _budget(args)
    s = _load_series(args.input, args.tag)
    field = Field.parse(args.field)
    status = EXIT_OK
    if args.functionals:
        items = uio.load_json(args.functionals)
        if not isinstance(items, list):
            raise UsageError("functionals file must hold a JSON list")
        fs = [uio.functional_from_json(f) for f in items]
        vals = vstar_pairing(list(s), fs)
        header, rows = ("n", "max_abs_pairing"), [(i, float(v)) for i, v in enumerate(vals, start=1)]
    elif args.theorem2:
        if not args.poly:
            raise UsageError("--theorem2 needs --poly")
        p = uio.poly_from_json(uio.load_json(args.poly))
        est = poly_norm(p, budget)
        checks = [check_theorem2_tail(p, s, n, budget, field, args.slack, est) for n in range(1, len(s) + 1)]
        header = ("n", "lhs", "rhs", "holds")
        rows = [(c.start, c.lhs, c.rhs, int(c.holds)) for c in checks]
        if not all(c.holds for c in checks):
            status = EXIT_UNRESOLVED
    else:
        if args.poly:
            s = image_series(uio.poly_from_json(uio.load_json(args.poly)), s)
        prof = uc_tail_profile(s, field, budget, args.decay_ratio)
        header = ("n", "tail_sup", "exact")
        rows = [(n, v, int(e)) for n, v, e in prof.rows()]
    if _fmt(args, "csv") == "json":
        _emit(args, uio.dumps({"columns": list(header), "rows": [list(r) for r in rows]}))
    else:
        _emit(args, uio.rows_to_csv(header, rows))
    return status


def cmd_rademacher(args):
    k = args.k
    if k < 2:
        raise UsageError(f"--k must be at least 2, got {k}")
    if args.tuple:
        try:
            tuples = [tuple(int(v) for v in t.split(",")) for t in args.tuple]
        except ValueError:
            raise UsageError("--tuple expects comma-separated integers") from None
    else:
        if args.max_level is None:
            raise UsageError("give --max-level or --tuple")
        tuples = list(itertools.combinations_with_replacement(range(1, args.max_level + 1), k))
    rows, ok = [], True
    for t in tuples:
        val = product_integral(k, t)
        want = kronecker_expected(t)
        match = abs(val - want) <= 1e-12
        ok &= match
        rows.append((t, val, want, match))
    levels = max(max(t) for t in tuples)
    steps = {str(n): [list(r) for r in rademacher(k, n).table()]
             for n in range(1, levels + 1) if k ** n <= STEP_TABLE_CAP}
    if _fmt(args, "json") == "csv":
        _emit(args, uio.rows_to_csv(("indices", "re", "im", "expected", "match"),
                                    [(" ".join(map(str, t)), v.real, v.imag, w, int(m)) for t, v, w, m in rows]))
    else:
        _emit(args, uio.dumps({
            "k": k,
            "interval_cap": INTERVAL_CAP,
            "steps": steps,
            "integrals": [{"indices": list(t), "value": [v.real, v.imag], "expected": w, "match": m}
                          for t, v, w, m in rows],
            "all_match": bool(ok),
        }))
    return EXIT_OK if ok else EXIT_UNRESOLVED


def cmd_polarize(args):
    p = _load_poly(args)
    if args.tensor:
        _emit(args, uio.dumps(uio.poly_to_json(HomPoly.from_tensor(tensor_from_blackbox(p), p.domain.tag,
                                                                   p.codomain.tag))))
        return EXIT_OK
    if args.grid:
        if p.domain.dim != 1:
            raise UsageError("--grid needs a polynomial on a 1-dimensional domain")
        try:
            lo, hi, num = args.grid.split(":")
            axis = np.linspace(float(lo), float(hi), int(num))
        except ValueError:
            raise UsageError(f"--grid expects lo:hi:num, got {args.grid!r}") from None
        rows = []
        for pt in itertools.product(axis, repeat=p.k):
            val = polarize(p, [Vec([c], p.domain.tag) for c in pt]).entries
            rows.append(tuple(float(c) for c in pt) + tuple(val.tolist()))
        header = tuple(f"x{i + 1}" for i in range(p.k)) + tuple(f"value{j}" for j in range(p.codomain.dim))
        if _fmt(args, "csv") == "json":
            _emit(args, uio.dumps({"columns": list(header), "rows": [uio.array_to_json(r) for r in rows]}))
        else:
            _emit(args, uio.rows_to_csv(header, rows))
        return EXIT_OK
    if not args.args:
        raise UsageError("give --args, --grid or --tensor")
    xs = list(uio.series_from_json(uio.load_json(args.args)))
    _emit(args, uio.dumps({"value": uio.vec_to_json(polarize(p, xs)), "at_diagonal": None if len(xs) != 1 else
                           uio.vec_to_json(eval_poly(p, xs[0]))}))
    return EXIT_OK


def cmd_norms(args):
    budget = _budget(args)
    if args.pa:
        try:
            a = [float(v) for v in args.pa.split(",")]
        except ValueError:
            raise UsageError("--pa expects comma-separated numbers") from None
        p = gallery.make_pa(a, args.k)
    else:
        p = _load_poly(args)
    if args.tail:
        res = [restricted_tail_norm(p, n, budget) for n in range(1, p.domain.dim + 1)]
        header = ("n", "norm", "exact")
        rows = [(n, r.value, int(r.exact)) for n, r in enumerate(res, start=1)]
        if _fmt(args, "csv") == "json":
            _emit(args, uio.dumps({"columns": list(header), "rows": [list(r) for r in rows]}))
        else:
            _emit(args, uio.rows_to_csv(header, rows))
        return EXIT_OK
    res = poly_norm(p, budget)
    closed = diagonal_closed_form_norm(p)
    if _fmt(args, "json") == "csv":
        rows = [(res.value, "" if closed is None else closed,
                 "" if closed is None else abs(res.value - closed) / max(closed, 1e-300))]
        _emit(args, uio.rows_to_csv(("norm", "max_abs_a", "rel_diff"), rows))
    else:
        out = uio.sup_result_to_json(res)
        out["closed_form"] = closed
        _emit(args, uio.dumps(out))
    return EXIT_OK


def cmd_gallery(args):
    if args.action == "list":
        names = args.names or list(gallery.ENTRIES)
        entries = [gallery.get(n) for n in names]
        if _fmt(args, "json") == "csv":
            _emit(args, uio.rows_to_csv(("name", "k", "domain", "codomain", "origin"),
                                        [(e.name, e.poly.k, f"{e.poly.domain.tag}^{e.poly.domain.dim}",
                                          f"{e.poly.codomain.tag}^{e.poly.codomain.dim}", e.origin) for e in entries]))
        else:
            _emit(args, uio.dumps([{"name": e.name, "origin": e.origin, "polynomial": uio.poly_to_json(e.poly)}
                                   for e in entries]))
        return EXIT_OK
    results = gallery.check_all(args.names or None, _budget(args))
    if _fmt(args, "json") == "csv":
        _emit(args, uio.rows_to_csv(("entry", "check", "passed", "detail"),
                                    [(r.entry, r.check, int(r.passed), r.detail) for r in results]))
    else:
        _emit(args, uio.dumps({"passed": sum(r.passed for r in results), "total": len(results),
                               "results": [vars(r) for r in results]}))
    return EXIT_OK if all(r.passed for r in results) else EXIT_UNRESOLVED


COMMANDS = {
    "certify": cmd_certify,
    "series": cmd_series,
    "rademacher": cmd_rademacher,
    "polarize": cmd_polarize,
    "norms": cmd_norms,
    "gallery": cmd_gallery,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (UncpolyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_ERROR
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
