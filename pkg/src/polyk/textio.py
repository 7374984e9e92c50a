"""Line-based text format for complexes and morphisms.

Complex documents::

    # comment
    objects: 0 a b c
    initial: 0
    vertical: a <= c
    vertical: b <= c
    cover: c <- {a, b}
    pullback: (a, b | c) = 0
    horizontal swap: a -> b
    slice: a |-> b

``objects:`` may repeat; ``initial:`` must appear exactly once; ``slice:``
lines attach to the most recent ``horizontal`` block, and the initial
object's slice pair is implied.  ``pullback:`` lines are optional
cross-checks; the audit compares them against computed greatest lower
bounds.  Object ids must be free of whitespace, commas, and braces.

Morphism documents start with a ``functor`` or ``kleisli`` header::

    kleisli
    source: the point
    target: two intervals
    map: pt |-> {[0-1], [1-2]}

A functor maps objects to single objects (``map: a |-> b``, with the
target's initial id for collapse); a family-valued morphism maps objects to
brace-wrapped families (``{}`` collapses).  ``parse_complex(render_complex(c))``
reproduces ``c`` up to declared-pullback lines, which the renderer omits.
"""

from __future__ import annotations

import re

from .complexes import HorizontalMorphism, KleisliMorphism, PolytopeComplex, PolytopeFunctor
from .errors import DuplicateDeclaration, ParseError, UnknownObject

_ID = r"[^\s{},|]+"
_RE_OBJECTS = re.compile(r"objects:\s*(.*)$")
_RE_INITIAL = re.compile(rf"initial:\s*({_ID})\s*$")
_RE_VERTICAL = re.compile(rf"vertical:\s*({_ID})\s*<=\s*({_ID})\s*$")
_RE_COVER = re.compile(rf"cover:\s*({_ID})\s*<-\s*\{{(.*?)\}}\s*$")
_RE_PULLBACK = re.compile(
    rf"pullback:\s*\(\s*({_ID})\s*,\s*({_ID})\s*\|\s*({_ID})\s*\)\s*=\s*({_ID})\s*$"
)
_RE_HORIZONTAL = re.compile(rf"horizontal\s+({_ID}):\s*({_ID})\s*->\s*({_ID})\s*$")
_RE_SLICE = re.compile(rf"slice:\s*({_ID})\s*\|->\s*({_ID})\s*$")
_RE_MAP = re.compile(rf"map:\s*({_ID})\s*\|->\s*(.*)$")
_RE_LABEL = re.compile(r"(source|target):\s*(.*)$")


def _strip(line: str) -> str:
    if "#" in line:
        line = line[: line.index("#")]
    return line.rstrip()


def _directive(line: str):
    stripped = line.lstrip()
    head = stripped.split(":", 1)[0].split(None, 1)[0] if stripped else ""
    return head, len(line) - len(stripped) + 1


def _split_family(text: str, lineno: int, line: str):
    text = text.strip()
    if not text:
        return ()
    members = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ParseError(
                "empty member in family", lineno, line.index(",") + 1
            )
        members.append(part)
    return tuple(members)


def _col_of(line: str, token: str) -> int:
    pos = line.find(token)
    return pos + 1 if pos >= 0 else 1


def parse_complex(text: str) -> PolytopeComplex:
    lines = text.splitlines()

    # First pass: collect the universe of object ids and the initial object.
    names = []
    initial = None
    initial_line = None
    for lineno, raw in enumerate(lines, start=1):
        line = _strip(raw)
        if not line.strip():
            continue
        head, col = _directive(line)
        if head == "objects":
            m = _RE_OBJECTS.match(line.strip())
            if not m:
                raise ParseError("malformed objects line", lineno, col)
            names.extend(m.group(1).split())
        elif head == "initial":
            m = _RE_INITIAL.match(line.strip())
            if not m:
                raise ParseError("malformed initial line", lineno, col)
            if initial is not None:
                raise DuplicateDeclaration(
                    f"initial declared twice (first on line {initial_line})",
                    lineno,
                    col,
                )
            initial = m.group(1)
            initial_line = lineno
    if initial is None:
        raise ParseError("no initial declaration", len(lines) or 1, 1)
    if initial not in names:
        names.append(initial)
    known = set(names)

    def check_known(obj: str, lineno: int, line: str):
        if obj not in known:
            raise UnknownObject(
                f"unknown object {obj!r}", lineno, _col_of(line, obj)
            )

    # Second pass: structure.
    order_pairs = []
    covers = []
    pullbacks = []
    horizontals = []  # (name, src, dst, {u: v}, lineno)
    for lineno, raw in enumerate(lines, start=1):
        line = _strip(raw)
        if not line.strip():
            continue
        head, col = _directive(line)
        body = line.strip()
        if head in ("objects", "initial"):
            continue
        if head == "vertical":
            m = _RE_VERTICAL.match(body)
            if not m:
                raise ParseError("malformed vertical line", lineno, col)
            x, y = m.groups()
            check_known(x, lineno, raw)
            check_known(y, lineno, raw)
            order_pairs.append((x, y))
        elif head == "cover":
            m = _RE_COVER.match(body)
            if not m:
                raise ParseError("malformed cover line", lineno, col)
            target, family_text = m.groups()
            check_known(target, lineno, raw)
            members = _split_family(family_text, lineno, raw)
            for obj in members:
                check_known(obj, lineno, raw)
            covers.append((target, members))
        elif head == "pullback":
            m = _RE_PULLBACK.match(body)
            if not m:
                raise ParseError("malformed pullback line", lineno, col)
            x, y, c, z = m.groups()
            for obj in (x, y, c, z):
                check_known(obj, lineno, raw)
            pullbacks.append(((x, y, c), z))
        elif head == "horizontal":
            m = _RE_HORIZONTAL.match(body)
            if not m:
                raise ParseError("malformed horizontal line", lineno, col)
            name, src, dst = m.groups()
            check_known(src, lineno, raw)
            check_known(dst, lineno, raw)
            if any(h[0] == name for h in horizontals):
                raise DuplicateDeclaration(
                    f"horizontal {name!r} declared twice", lineno, col
                )
            horizontals.append((name, src, dst, {}, lineno))
        elif head == "slice":
            m = _RE_SLICE.match(body)
            if not m:
                raise ParseError("malformed slice line", lineno, col)
            if not horizontals:
                raise ParseError(
                    "slice line before any horizontal declaration", lineno, col
                )
            u, v = m.groups()
            check_known(u, lineno, raw)
            check_known(v, lineno, raw)
            mapping = horizontals[-1][3]
            if u in mapping:
                raise DuplicateDeclaration(
                    f"slice source {u!r} mapped twice", lineno, _col_of(raw, u)
                )
            mapping[u] = v
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col)

    gens = []
    for name, src, dst, mapping, lineno in horizontals:
        mapping.setdefault(initial, initial)
        gens.append(HorizontalMorphism(name, src, dst, mapping))
    return PolytopeComplex(
        names, initial, order_pairs, covers, gens, pullbacks
    )


def render_complex(c: PolytopeComplex) -> str:
    out = [f"objects: {' '.join(c.objects)}", f"initial: {c.initial}"]
    for x, y in c.hasse_pairs():
        out.append(f"vertical: {x} <= {y}")
    for target, members in c.covers:
        out.append(f"cover: {target} <- {{{', '.join(members)}}}")
    for h in c.horizontal_gens:
        out.append(f"horizontal {h.name}: {h.src} -> {h.dst}")
        for u, v in h.mapping:
            if u == c.initial:
                continue
            out.append(f"slice: {u} |-> {v}")
    return "\n".join(out) + "\n"


def parse_morphism(text: str, source: PolytopeComplex, target: PolytopeComplex):
    lines = text.splitlines()
    kind = None
    kind_line = None
    labels = {}
    mappings = {}  # src object -> (value, lineno)
    for lineno, raw in enumerate(lines, start=1):
        line = _strip(raw)
        if not line.strip():
            continue
        body = line.strip()
        if kind is None:
            if body in ("functor", "kleisli"):
                kind = body
                kind_line = lineno
                continue
            raise ParseError(
                "morphism document must start with 'functor' or 'kleisli'",
                lineno,
                1,
            )
        m = _RE_LABEL.match(body)
        if m:
            labels[m.group(1)] = m.group(2).strip()
            continue
        m = _RE_MAP.match(body)
        if not m:
            head, col = _directive(line)
            raise ParseError(f"unknown directive {head!r}", lineno, col)
        src_obj, value = m.group(1), m.group(2).strip()
        if src_obj not in set(source.objects):
            raise UnknownObject(
                f"unknown source object {src_obj!r}", lineno, _col_of(raw, src_obj)
            )
        if src_obj in mappings:
            raise DuplicateDeclaration(
                f"object {src_obj!r} mapped twice", lineno, _col_of(raw, src_obj)
            )
        mappings[src_obj] = (value, lineno, raw)
    if kind is None:
        raise ParseError("empty morphism document", len(lines) or 1, 1)

    target_objects = set(target.objects)
    missing = [
        x for x in source.noninitial_objects if x not in mappings
    ]
    if missing:
        raise ParseError(
            f"no mapping for source objects: {', '.join(missing)}",
            kind_line,
            1,
        )

    if kind == "functor":
        omap = {}
        for src_obj, (value, lineno, raw) in mappings.items():
            if re.fullmatch(_ID, value) is None:
                raise ParseError("malformed functor image", lineno, _col_of(raw, value))
            if value not in target_objects:
                raise UnknownObject(
                    f"unknown target object {value!r}", lineno, _col_of(raw, value)
                )
            omap[src_obj] = value
        return PolytopeFunctor(
            source, target, omap, name=labels.get("target", "")
        )

    fmap = {}
    for src_obj, (value, lineno, raw) in mappings.items():
        m = re.fullmatch(r"\{(.*)\}", value)
        if not m:
            raise ParseError(
                "family image must be brace-wrapped", lineno, _col_of(raw, value)
            )
        members = _split_family(m.group(1), lineno, raw)
        for obj in members:
            if obj not in target_objects:
                raise UnknownObject(
                    f"unknown target object {obj!r}", lineno, _col_of(raw, obj)
                )
        fmap[src_obj] = members
    return KleisliMorphism(source, target, fmap, name=labels.get("target", ""))


def render_morphism(f) -> str:
    if isinstance(f, PolytopeFunctor):
        out = ["functor"]
        for x in f.source.noninitial_objects:
            out.append(f"map: {x} |-> {f.apply(x)}")
    elif isinstance(f, KleisliMorphism):
        out = ["kleisli"]
        for x in f.source.noninitial_objects:
            out.append(f"map: {x} |-> {{{', '.join(f.apply(x))}}}")
    else:
        raise TypeError(f"cannot render {type(f)}")
    return "\n".join(out) + "\n"
