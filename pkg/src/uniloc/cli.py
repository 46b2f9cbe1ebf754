"""``uniloc``: check, convert, reflect and complete finite uniform locales; exact arithmetic.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage or
parse errors.  Reports are deterministic: no timings, fixed check order.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .calc import CalcError, calc
from .completion import EngineError, cauchy_locale, completion, lift_map, reflect_cauchy
from .fileformat import ParseError, dump_map, dump_structure, parse_document, parse_map
from .frames import NotAFrameHom
from .laws import SUITES, LawResult, conucleus_laws, run_laws
from .reflection import uniform_reflection
from .uniform import covers_to_entourages, entourages_to_covers, is_uniform_morphism


class UsageError(Exception):
    pass


class Report:
    def __init__(self, echo: str, out):
        self.out = out
        self.failed = False
        self.out.write(f"# {echo}\n")

    def add(self, check: str, ok: bool, detail: str = "") -> None:
        self.emit(LawResult(check, ok, detail))

    def emit(self, r: LawResult) -> None:
        self.failed |= not r.ok
        self.out.write(r.line() + "\n")

    def info(self, msg: str) -> None:
        self.out.write(f"INFO {msg}\n")

    @property
    def status(self) -> int:
        return 1 if self.failed else 0


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _load(path: str, rep: Report):
    """Parse and validate; ``None`` (after a FAIL line) when the axioms fail."""
    doc = parse_document(_read(path), source=path)
    try:
        s = doc.structure()
    except ValueError as e:  # AxiomViolation included
        rep.add("uniformity axioms", False, str(e))
        return doc, None
    rep.add("uniformity axioms", True)
    return doc, s


def _emit_artifact(text: str, args, out) -> None:
    if args.dump:
        Path(args.dump).write_text(text, encoding="utf-8")
    else:
        out.write("\n" + text)


def cmd_check(args, out) -> int:
    names = [n.strip() for n in args.laws.split(",") if n.strip()] if args.laws else []
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UsageError(f"unknown law suite {unknown[0]!r}; choose from {', '.join(SUITES)}")
    rep = Report(f"uniloc check {args.file}", out)
    _, s = _load(args.file, rep)
    if s is None:
        return rep.status
    rep.add("cover and entourage forms agree", s.covers.filter_equal(entourages_to_covers(s.entourages)))
    rep.info(f"admissible: {'yes' if s.is_admissible() else 'no'}")
    for r in run_laws(s, names):
        rep.emit(r)
    return rep.status


def cmd_convert(args, out) -> int:
    rep = Report(f"uniloc convert {args.file}", out)
    doc, s = _load(args.file, rep)
    if s is None:
        return rep.status
    target = args.to or ("entourage" if doc.covers and not doc.entourages else "cover")
    if target == "entourage":
        conv = covers_to_entourages(s.covers)
        rep.add("round trip filter-equal", entourages_to_covers(conv).filter_equal(s.covers))
    else:
        conv = entourages_to_covers(s.entourages)
        rep.add("round trip filter-equal", covers_to_entourages(conv).filter_equal(s.entourages))
    _emit_artifact(dump_structure(s, doc.name, forms=(target,)), args, out)
    return rep.status


def cmd_reflect(args, out) -> int:
    rep = Report(f"uniloc reflect {args.file}", out)
    doc, s = _load(args.file, rep)
    if s is None:
        return rep.status
    for r in conucleus_laws(s):
        rep.emit(r)
    refl = uniform_reflection(s)
    rep.add("reflected structure admissible", refl.structure.is_admissible())
    rep.add("unit strongly dense", refl.unit.is_strongly_dense())
    rep.add("unit uniform", is_uniform_morphism(refl.unit, s, refl.structure))
    rep.add("reflection idempotent", uniform_reflection(refl.structure).is_identity())
    rep.info(f"irreducibles: {doc.frame.size} -> {refl.frame.size}")
    _emit_artifact(dump_structure(refl.structure, f"U({doc.name})"), args, out)
    return rep.status


def cmd_complete(args, out) -> int:
    rep = Report(f"uniloc complete {args.file}", out)
    doc, s = _load(args.file, rep)
    if s is None:
        return rep.status
    C = completion(s)
    for key in ("gamma strongly dense", "gamma uniform embedding", "unit strongly dense", "unit uniform",
                "completed admissible"):
        rep.add(key, C.witnesses[key])
    again = completion(C.structure)
    rep.add("completion idempotent", again.unit.is_iso())
    iso = C.witnesses["unit iso"]
    rep.info(f"already complete: {'yes' if iso else 'no'}")
    if iso:
        text = dump_structure(s, doc.name)
    else:
        text = dump_structure(C.structure, f"C({doc.name})")
    _emit_artifact(text, args, out)
    return rep.status


def cmd_cauchy(args, out) -> int:
    rep = Report(f"uniloc cauchy {args.file}" + (" --all" if args.all else ""), out)
    doc, s = _load(args.file, rep)
    if s is None:
        return rep.status
    C = cauchy_locale(s, regular=not args.all)
    rep.add("gamma strongly dense", C.gamma.is_strongly_dense())
    if not args.all:
        w = reflect_cauchy(s)
        rep.add("reflection of all Cauchy filters matches regular ones", w.iso.is_iso())
    rep.info(f"presentation: {len(C.presented.presentation.generators)} generators, frame of {C.frame.size} irreducibles")
    name = f"{'Cscr' if args.all else 'C'}({doc.name})"
    _emit_artifact(dump_structure(C.structure, name), args, out)
    return rep.status


def cmd_lift(args, out) -> int:
    rep = Report(f"uniloc lift {args.source} {args.target} {args.map}", out)
    dx, X = _load(args.source, rep)
    dy, Y = _load(args.target, rep)
    if X is None or Y is None:
        return rep.status
    try:
        f = parse_map(_read(args.map), X.frame, Y.frame, source=args.map)
    except NotAFrameHom as e:
        rep.add("map is a frame homomorphism", False, str(e))
        return rep.status
    rep.add("map is a frame homomorphism", True)
    rep.info(f"map uniform: {'yes' if is_uniform_morphism(f, X, Y) else 'no'}")
    L = lift_map(f, X, Y)
    if not L.exists:
        rep.add("lift exists", False, f"cover {L.certificate!r} does not pull back to a uniform cover")
        return rep.status
    rep.add("lift exists", True)
    rep.add("cover and entourage criteria agree", L.cover_verdict == L.entourage_verdict)
    if L.functorial is not None:
        rep.add("lift equals the functorial map", L.functorial == L.lift)
    _emit_artifact(dump_map(L.lift), args, out)
    return rep.status


def cmd_calc(args, out) -> int:
    text = " ".join(args.expression)
    if args.eps is not None:
        text += f" @eps {args.eps}"
    if args.padic is not None:
        text += f" @padic {args.padic[0]} {args.padic[1]}"
    out.write(calc(text) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uniloc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("check", help="validate a structure and run law suites")
    c.add_argument("file")
    c.add_argument("--laws", help=f"comma-separated suites: {', '.join(SUITES)}")
    c.set_defaults(run=cmd_check)

    for verb, fn, help_ in (
        ("convert", cmd_convert, "convert between cover and entourage form"),
        ("reflect", cmd_reflect, "uniform reflection of a pre-uniform structure"),
        ("complete", cmd_complete, "completion"),
        ("cauchy", cmd_cauchy, "locale of (regular) Cauchy filters"),
    ):
        s = sub.add_parser(verb, help=help_)
        s.add_argument("file")
        s.add_argument("--dump", metavar="PATH", help="write the result here instead of stdout")
        s.set_defaults(run=fn)
        if verb == "convert":
            s.add_argument("--to", choices=("cover", "entourage"))
        if verb == "cauchy":
            s.add_argument("--all", action="store_true", help="all Cauchy filters, not only regular ones")

    lf = sub.add_parser("lift", help="lift a map X → Y to the completions")
    lf.add_argument("source", help="structure file for X")
    lf.add_argument("target", help="structure file for Y")
    lf.add_argument("map", help="map file: '<Y irreducible> : <X expression>' lines")
    lf.add_argument("--dump", metavar="PATH")
    lf.set_defaults(run=cmd_lift)

    k = sub.add_parser("calc", help="exact real or p-adic arithmetic")
    k.add_argument("expression", nargs="+")
    k.add_argument("--eps", help="precision for real mode")
    k.add_argument("--padic", nargs=2, metavar=("P", "K"), help="p-adic mode at precision p^K")
    k.set_defaults(run=cmd_calc)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.run(args, out)
    except (ParseError, CalcError, UsageError) as e:
        sys.stderr.write(f"uniloc: error: {e}\n")
        return 2
    except OSError as e:
        sys.stderr.write(f"uniloc: error: {e}\n")
        return 2
    except EngineError as e:
        sys.stderr.write(f"uniloc: internal check failed: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
