"""Exhaustive law suites for finite structures.

Each suite returns a list of ``LawResult``; a failing result carries a
counterexample in ``detail``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .uniform import (
    PreUniformLocale,
    covers_to_entourages,
    entourages_to_covers,
    star_mask,
)


@dataclass(frozen=True)
class LawResult:
    check: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"PASS {self.check}" if self.ok else f"FAIL {self.check}: {self.detail}"


def _first(check: str, bad) -> LawResult:
    for detail in bad:
        return LawResult(check, False, detail)
    return LawResult(check, True)


def below_table(structure: PreUniformLocale, form: str = "cover") -> dict[tuple[int, int], bool]:
    ms = structure.frame.element_masks()
    return {(a, b): structure._below(a, b, form) for a in ms for b in ms}


def uniformly_below_laws(structure: PreUniformLocale) -> list[LawResult]:
    F = structure.frame
    ms = F.element_masks()
    fmt = F.format
    T = below_table(structure, "cover")
    TE = below_table(structure, "entourage")
    rel = [(a, b) for (a, b), v in T.items() if v]
    le = lambda x, y: x & ~y == 0  # noqa: E731
    out = [
        _first("◁ forms agree", (f"{fmt(a)} vs {fmt(b)}: covers say {T[a, b]}" for (a, b) in T if T[a, b] != TE[a, b])),
        _first("◁ ⊆ ≤", (f"{fmt(a)} ◁ {fmt(b)}" for a, b in rel if not le(a, b))),
        _first(
            "≤∘◁∘≤ ⊆ ◁",
            (
                f"{fmt(x)} ≤ {fmt(a)} ◁ {fmt(b)} ≤ {fmt(y)}"
                for a, b in rel
                for x in ms
                if le(x, a)
                for y in ms
                if le(b, y) and not T[x, y]
            ),
        ),
        _first("0 ◁ b and a ◁ 1", (f"{fmt(a)}" for a in ms if not (T[0, a] and T[a, F.full]))),
        _first(
            "◁ closed under joins on the left",
            (f"{fmt(a)}, {fmt(c)} ◁ {fmt(b)}" for a, b in rel for c, d in rel if d == b and not T[a | c, b]),
        ),
        _first(
            "◁ closed under meets on the right",
            (f"{fmt(a)} ◁ {fmt(b)}, {fmt(d)}" for a, b in rel for c, d in rel if c == a and not T[a, b & d]),
        ),
        _first(
            "◁ interpolates",
            (f"{fmt(a)} ◁ {fmt(b)}" for a, b in rel if not any(T[a, c] and T[c, b] for c in ms)),
        ),
        _first(
            "star inflation",
            (
                f"{fmt(g)} ≰ st({fmt(g)}, {U!r})"
                for U in structure.covers.base
                for g in U.gens
                if not le(g, star_mask(g, U))
            ),
        ),
    ]
    return out


def conucleus_laws(structure: PreUniformLocale) -> list[LawResult]:
    F = structure.frame
    ms = F.element_masks()
    r = structure.r_mask
    fmt = F.format
    le = lambda x, y: x & ~y == 0  # noqa: E731
    return [
        _first("r monotone", (f"{fmt(a)} ≤ {fmt(b)}" for a in ms for b in ms if le(a, b) and not le(r(a), r(b)))),
        _first("r deflationary", (fmt(a) for a in ms if not le(r(a), a))),
        _first("r idempotent", (fmt(a) for a in ms if r(r(a)) != r(a))),
        _first("r preserves meets", (f"{fmt(a)} ∧ {fmt(b)}" for a in ms for b in ms if r(a & b) != r(a) & r(b))),
        _first("r(1) = 1", ["r(1) = " + fmt(r(F.full))] if r(F.full) != F.full else []),
    ]


def roundtrip_laws(structure: PreUniformLocale) -> list[LawResult]:
    U, E = structure.covers, structure.entourages
    back_u = entourages_to_covers(covers_to_entourages(U))
    back_e = covers_to_entourages(entourages_to_covers(E))
    return [
        LawResult("covers → entourages → covers", U.filter_equal(back_u), "" if U.filter_equal(back_u) else repr(back_u.base)),
        LawResult("entourages → covers → entourages", E.filter_equal(back_e), "" if E.filter_equal(back_e) else repr(back_e.base)),
    ]


SUITES = {
    "uniformly-below": uniformly_below_laws,
    "conucleus": conucleus_laws,
    "roundtrip": roundtrip_laws,
}


def run_laws(structure: PreUniformLocale, names) -> list[LawResult]:
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown law suite {unknown[0]!r}; choose from {', '.join(SUITES)}")
    out = []
    for n in names:
        out.extend(SUITES[n](structure))
    return out
