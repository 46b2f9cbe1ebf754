"""Text format for finite locales, their uniformities and maps between them.

::

    frame two
    elem a
    elem b
    le a b                 # optional order, transitively closed
    cover U: a, b          # generators of a covering downset
    entourage E: a ⊕ a | b ⊕ b

Element expressions are joins (``+`` or ``∨``) of irreducible names; ``0``
and ``1`` are bottom and top, and ``(+)`` may be written for ``⊕``.  Names
are runs of ``[A-Za-z0-9_.'-]`` or anything inside balanced brackets.

A map file lists ``<irreducible of the codomain> : <expression in the domain>``
and so describes the frame map of a locale map, one line per irreducible.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .frames import Element, FiniteFrame, FrameHom, PosetError, square
from .uniform import AxiomViolation, Cover, PreUniformLocale, Violation

_NAME = re.compile(r"[A-Za-z0-9_.'\-]+")


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int, source: str = "<input>"):
        self.line, self.col, self.source = line, col, source
        super().__init__(f"{source}:{line}:{col}: {msg}")


@dataclass
class Tok:
    kind: str  # name, join, oplus, comma, bar, colon
    text: str
    col: int


def _strip_comment(line: str) -> str:
    depth = 0
    for i, ch in enumerate(line):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth = max(0, depth - 1)
        elif ch == "#" and depth == 0:
            return line[:i]
    return line


def _tokens(text: str, lineno: int, offset: int, source: str) -> list[Tok]:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        col = offset + i + 1
        if ch.isspace():
            i += 1
        elif text.startswith("(+)", i):
            out.append(Tok("oplus", "⊕", col))
            i += 3
        elif ch == "⊕":
            out.append(Tok("oplus", ch, col))
            i += 1
        elif ch in "+∨":
            out.append(Tok("join", ch, col))
            i += 1
        elif ch in ",|:":
            out.append(Tok({",": "comma", "|": "bar", ":": "colon"}[ch], ch, col))
            i += 1
        elif ch == "[":
            depth, j = 0, i
            while j < len(text):
                if text[j] == "[":
                    depth += 1
                elif text[j] == "]":
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            if j >= len(text):
                raise ParseError("unbalanced '['", lineno, col, source)
            out.append(Tok("qname", text[i + 1 : j], col))
            i = j + 1
        else:
            m = _NAME.match(text, i)
            if not m:
                raise ParseError(f"unexpected character {ch!r}", lineno, col, source)
            out.append(Tok("name", m.group(), col))
            i = m.end()
    return out


class _Expr:
    def __init__(self, frame: FiniteFrame, toks: list[Tok], lineno: int, source: str, end_col: int):
        self.frame, self.toks, self.i = frame, toks, 0
        self.lineno, self.source, self.end_col = lineno, source, end_col

    def error(self, msg, tok=None):
        col = tok.col if tok else self.end_col
        raise ParseError(msg, self.lineno, col, self.source)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind):
        t = self.peek()
        if t is None or t.kind != kind:
            self.error(f"expected {kind}" + (f", found {t.text!r}" if t else ""), t)
        self.i += 1
        return t

    def atom(self) -> int:
        t = self.peek()
        if t is None or t.kind not in ("name", "qname"):
            self.error("expected an element name" + (f", found {t.text!r}" if t else ""), t)
        self.i += 1
        if t.kind == "name" and t.text == "0":
            return 0
        if t.kind == "name" and t.text == "1":
            return self.frame.full
        if t.text not in self.frame.index:
            self.error(f"unknown irreducible {t.text!r}", t)
        return self.frame._below[self.frame.index[t.text]]

    def element(self) -> int:
        m = self.atom()
        while self.peek() is not None and self.peek().kind == "join":
            self.i += 1
            m |= self.atom()
        return m

    def done(self):
        t = self.peek()
        if t is not None:
            self.error(f"unexpected {t.text!r}", t)


@dataclass
class Document:
    name: str
    frame: FiniteFrame
    covers: list = field(default_factory=list)  # (name, [masks])
    entourages: list = field(default_factory=list)  # (name, mask)

    def structure(self) -> PreUniformLocale:
        """Validate the uniformity; raises ``AxiomViolation`` with a certificate."""
        cb = [Cover.of(self.frame, gens) for _, gens in self.covers]
        sq = square(self.frame)
        eb = [Element(sq, m) for _, m in self.entourages]
        try:
            return self._build(cb, eb)
        except AxiomViolation as e:
            # name the offending line rather than its normal form
            names = {repr(x): f"{kind} {n}" for kind, items, objs in (("cover", self.covers, cb), ("entourage", self.entourages, eb))
                     for (n, _), x in zip(items, objs)}
            v = e.violation
            if v.subject in names:
                raise AxiomViolation(Violation(v.axiom, names[v.subject], v.detail)) from None
            raise

    def _build(self, cb, eb) -> PreUniformLocale:
        if cb and eb:
            return PreUniformLocale.from_both(self.frame, cb, eb, self.name)
        if eb:
            return PreUniformLocale.from_entourages(self.frame, eb, self.name)
        if cb:
            return PreUniformLocale.from_covers(self.frame, cb, self.name)
        raise ValueError("no cover or entourage lines: the file has no uniformity")

    def entourage_names(self) -> dict:
        return {name: m for name, m in self.entourages}


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = _strip_comment(raw)
        if body.strip():
            yield lineno, body


def parse_document(text: str, source: str = "<input>") -> Document:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty file: expected 'frame <name>'", 1, 1, source)
    lineno, body = lines[0]
    kw = body.split()[0]
    kcol = body.find(kw)
    head = _tokens(body[kcol + len(kw) :], lineno, kcol + len(kw), source)
    if kw != "frame" or len(head) != 1 or head[0].kind not in ("name", "qname"):
        raise ParseError("expected 'frame <name>'", lineno, kcol + 1, source)
    name = head[0].text
    elems, order, rest = [], [], []
    seen = set()
    for lineno, body in lines[1:]:
        kw = body.split()[0]
        kcol = body.find(kw)
        toks = _tokens(body[kcol + len(kw) :], lineno, kcol + len(kw), source)
        if kw == "elem":
            if len(toks) != 1 or toks[0].kind not in ("name", "qname"):
                raise ParseError("expected 'elem <id>'", lineno, kcol + 1, source)
            label = toks[0].text
            if toks[0].kind == "name" and label in ("0", "1"):
                raise ParseError("'0' and '1' are reserved; write [0] or [1]", lineno, toks[0].col, source)
            if label in seen:
                raise ParseError(f"duplicate irreducible {label!r}", lineno, toks[0].col, source)
            seen.add(label)
            elems.append(label)
        elif kw == "le":
            if len(toks) != 2 or any(t.kind not in ("name", "qname") for t in toks):
                raise ParseError("expected 'le <id> <id>'", lineno, kcol + 1, source)
            for t in toks:
                if t.text not in seen:
                    raise ParseError(f"unknown irreducible {t.text!r}", lineno, t.col, source)
            order.append((toks[0].text, toks[1].text, lineno))
        elif kw in ("cover", "entourage"):
            rest.append((kw, lineno, body, toks))
        else:
            raise ParseError(f"unknown directive {kw!r}", lineno, kcol + 1, source)
    try:
        frame = FiniteFrame(elems, [(x, y) for x, y, _ in order], name=name)
    except PosetError as e:
        bad = next((ln for x, y, ln in order if x in e.cycle and y in e.cycle), lines[0][0])
        raise ParseError(str(e), bad, 1, source)
    doc = Document(name, frame)
    for kw, lineno, body, toks in rest:
        if len(toks) < 2 or toks[0].kind not in ("name", "qname") or toks[1].kind != "colon":
            raise ParseError(f"expected '{kw} <name>: ...'", lineno, toks[0].col if toks else 1, source)
        p = _Expr(frame, toks[2:], lineno, source, len(body) + 1)
        if kw == "cover":
            # an empty list is the empty cover, which covers only the trivial frame
            gens = [p.element()] if p.peek() is not None else []
            while p.peek() is not None and p.peek().kind == "comma":
                p.i += 1
                gens.append(p.element())
            p.done()
            doc.covers.append((toks[0].text, gens))
        else:
            sq = square(frame)
            mask = 0
            while True:
                a = p.element()
                p.take("oplus")
                b = p.element()
                mask |= sq.rect(a, b)
                if p.peek() is not None and p.peek().kind == "bar":
                    p.i += 1
                    continue
                break
            p.done()
            doc.entourages.append((toks[0].text, mask))
    return doc


def parse_map(text: str, domain: FiniteFrame, codomain: FiniteFrame, source: str = "<map>") -> FrameHom:
    """Frame map ``O codomain → O domain`` from ``<codomain irreducible> : <domain expression>`` lines."""
    images = {}
    for lineno, body in _lines(text):
        if body.split()[0] == "map":
            continue
        toks = _tokens(body, lineno, 0, source)
        if len(toks) < 2 or toks[0].kind not in ("name", "qname") or toks[1].kind != "colon":
            raise ParseError("expected '<irreducible> : <expression>'", lineno, 1, source)
        q = toks[0].text
        if q not in codomain.index:
            raise ParseError(f"unknown irreducible {q!r} of the codomain", lineno, toks[0].col, source)
        p = _Expr(domain, toks[2:], lineno, source, len(body) + 1)
        images[q] = p.element()
        p.done()
    missing = [q for q in codomain.labels if q not in images]
    if missing:
        raise ParseError(f"no image given for {missing[0]!r}", 1, 1, source)
    return FrameHom.from_images(codomain, domain, images)


# -- dumping ----------------------------------------------------------------------


def quote(label) -> str:
    s = str(label)
    if _NAME.fullmatch(s) and s not in ("0", "1"):
        return s
    return f"[{s}]"


def _expr(frame: FiniteFrame, mask: int) -> str:
    if mask == 0:
        return "0"
    if mask == frame.full and frame.size > 1 or frame.size == 0:
        return "1"
    return " + ".join(quote(frame.labels[i]) for i in frame.maximal(mask))


def dump_frame(frame: FiniteFrame, name: str) -> list[str]:
    lines = [f"frame {quote(name)}"]
    lines += [f"elem {quote(label)}" for label in frame.labels]
    for j, below in enumerate(frame._below):
        strict = below & ~(1 << j)
        for i in frame.maximal(strict):
            lines.append(f"le {quote(frame.labels[i])} {quote(frame.labels[j])}")
    return lines


def dump_structure(structure: PreUniformLocale, name: str | None = None, forms=("cover", "entourage")) -> str:
    frame = structure.frame
    lines = dump_frame(frame, name or structure.name or "X")
    if "cover" in forms:
        for n, U in enumerate(structure.covers.base):
            lines.append((f"cover U{n}: " + ", ".join(_expr(frame, g) for g in U.gens)).rstrip())
    if "entourage" in forms:
        sq = square(frame)
        for n, E in enumerate(structure.entourages.base):
            rects = [(i // frame.size, i % frame.size) for i in sq.maximal(E.mask)]
            body = " | ".join(f"{quote(frame.labels[p])} ⊕ {quote(frame.labels[q])}" for p, q in rects)
            lines.append(f"entourage E{n}: {body or '0 ⊕ 0'}")
    return "\n".join(lines) + "\n"


def dump_map(h: FrameHom) -> str:
    return "".join(f"{quote(q)} : {_expr(h.target, img)}\n" for q, img in zip(h.source.labels, h.images))
