"""Hash-consed lattice terms.

A term is a generator ``x_i`` (``i >= 1``), a meet, or a join.  Meets and
joins are variadic, flattened (a meet never has a meet child), duplicate-free
and sorted by a fixed total node order, so structurally equal terms are
interned to the same node.  Equality of ``Term`` objects is node identity.

All terms live in a :class:`TermArena`; terms from different arenas must not
be mixed (serialize through text instead).  Arena construction is
single-writer; query helpers only touch per-arena caches.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

GEN = "gen"
MEET = "meet"
JOIN = "join"

_DUAL = {MEET: JOIN, JOIN: MEET}
_OPCHAR = {MEET: "*", JOIN: "+"}


class TermError(Exception):
    """Malformed construction request (empty child list, bad index, ...)."""


class ParseError(TermError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class Term:
    """One interned node of the term DAG.  Use a :class:`TermArena` to build."""

    __slots__ = ("arena", "id", "kind", "index", "children")

    def __init__(self, arena: "TermArena", node_id: int, kind: str,
                 index: int = 0, children: tuple["Term", ...] = ()):
        self.arena = arena
        self.id = node_id
        self.kind = kind
        self.index = index
        self.children = children

    def __repr__(self) -> str:
        if tree_size(self) <= 40:
            return f"<Term {self.id}: {print_term(self)}>"
        return f"<Term {self.id}: {self.kind}/{len(self.children)} size={tree_size(self)}>"

    # Interning makes identity the equality; keep default __eq__/__hash__.


def _sort_key(t: Term) -> tuple:
    # Total node order: generators by index, then meets, then joins;
    # within a kind, lexicographic by child id sequence.
    if t.kind == GEN:
        return (0, (t.index,))
    return (1 if t.kind == MEET else 2, tuple(c.id for c in t.children))


class TermArena:
    """Interning table and per-arena caches for all term computations."""

    def __init__(self) -> None:
        self._intern: dict[tuple, Term] = {}
        self._nodes: list[Term] = []
        # Caches owned by the arena so node ids stay valid keys.
        self.order_cache: dict[tuple[int, int], bool] = {}
        self.canon_cache: dict[int, Term] = {}
        self.is_canon_cache: dict[int, bool] = {}
        self.vars_cache: dict[int, frozenset[int]] = {}
        self.size_cache: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._nodes)

    def _make(self, key: tuple, kind: str, index: int = 0,
              children: tuple[Term, ...] = ()) -> Term:
        node = self._intern.get(key)
        if node is None:
            node = Term(self, len(self._nodes), kind, index, children)
            self._intern[key] = node
            self._nodes.append(node)
        return node

    def gen(self, index: int) -> Term:
        if index < 1:
            raise TermError(f"generator index must be >= 1, got {index}")
        return self._make((GEN, index), GEN, index=index)

    def meet(self, parts: Iterable[Term]) -> Term:
        return self._composite(MEET, parts)

    def join(self, parts: Iterable[Term]) -> Term:
        return self._composite(JOIN, parts)

    def _composite(self, kind: str, parts: Iterable[Term]) -> Term:
        flat: list[Term] = []
        for p in parts:
            if p.arena is not self:
                raise TermError("terms from another arena")
            if p.kind == kind:
                flat.extend(p.children)
            else:
                flat.append(p)
        if not flat:
            raise TermError(f"{kind} of an empty list")
        seen: set[int] = set()
        uniq = [p for p in flat if p.id not in seen and not seen.add(p.id)]
        if len(uniq) == 1:
            return uniq[0]
        uniq.sort(key=_sort_key)
        key = (kind, tuple(p.id for p in uniq))
        return self._make(key, kind, children=tuple(uniq))

    def nodes(self) -> tuple[Term, ...]:
        return tuple(self._nodes)


def dual(kind: str) -> str:
    return _DUAL[kind]


def variables(t: Term) -> frozenset[int]:
    """Indices of the generators occurring in ``t``."""
    cache = t.arena.vars_cache
    got = cache.get(t.id)
    if got is not None:
        return got
    if t.kind == GEN:
        out = frozenset((t.index,))
    else:
        out = frozenset().union(*(variables(c) for c in t.children))
    cache[t.id] = out
    return out


def tree_size(t: Term) -> int:
    """Node count of the fully expanded tree (DAG sharing ignored)."""
    cache = t.arena.size_cache
    got = cache.get(t.id)
    if got is not None:
        return got
    out = 1 if t.kind == GEN else 1 + sum(tree_size(c) for c in t.children)
    cache[t.id] = out
    return out


def substitute(t: Term, mapping: Mapping[int, Term]) -> Term:
    """Homomorphic replacement of generators, rebuilt through the arena
    constructors (so flattening and deduplication reapply)."""
    arena = t.arena
    memo: dict[int, Term] = {}

    def go(u: Term) -> Term:
        got = memo.get(u.id)
        if got is not None:
            return got
        if u.kind == GEN:
            try:
                out = mapping[u.index]
            except KeyError:
                raise TermError(f"no substitution for generator x{u.index}") from None
            if out.arena is not arena:
                raise TermError("substitution image from another arena")
        else:
            images = [go(c) for c in u.children]
            out = arena.meet(images) if u.kind == MEET else arena.join(images)
        memo[u.id] = out
        return out

    return go(t)


# ---------------------------------------------------------------------------
# Raw (non-interned) terms, for canonicity checks on deliberately
# malformed shapes that the normalizing constructors would erase.

@dataclass(frozen=True)
class RawTerm:
    kind: str
    index: int = 0
    children: tuple["RawTerm", ...] = ()


def intern_raw(raw: RawTerm, arena: TermArena) -> Term:
    if raw.kind == GEN:
        return arena.gen(raw.index)
    parts = [intern_raw(c, arena) for c in raw.children]
    return arena.meet(parts) if raw.kind == MEET else arena.join(parts)


# ---------------------------------------------------------------------------
# Parsing
#
#   term := sum ; sum := prod { "+" prod } ; prod := atom { "*" atom }
#   atom := gen | "(" term ")" ; gen := "x" digits | letter { letter | digit }
#
# "x<digits>" names generator <digits> directly.  Other names map to indices
# by first occurrence, taking the smallest index not claimed by any explicit
# x<digits> token in the same input, unless an explicit name list is given.

_TOK_NAME = "name"
_TOK_OP = "op"
_TOK_END = "end"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks: list[tuple[str, str, int]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+*()":
            toks.append((_TOK_OP, ch, i))
            i += 1
            continue
        if ch.isalpha():
            j = i + 1
            while j < n and (text[j].isalnum()):
                j += 1
            toks.append((_TOK_NAME, text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    toks.append((_TOK_END, "", n))
    return toks


def _explicit_index(name: str) -> int | None:
    if name[0] == "x" and name[1:].isdigit():
        return int(name[1:])
    return None


class _NameTable:
    """Assigns generator indices to names, shared across several parses."""

    def __init__(self, var_names: list[str] | None = None):
        self.fixed = var_names is not None
        self.map: dict[str, int] = {}
        if var_names:
            for pos, name in enumerate(var_names, start=1):
                if name in self.map:
                    raise TermError(f"duplicate variable name {name!r}")
                self.map[name] = pos
        self.claimed: set[int] = set(self.map.values())

    def claim_explicit(self, index: int) -> None:
        self.claimed.add(index)

    def resolve(self, name: str, pos: int) -> int:
        idx = _explicit_index(name)
        if idx is not None:
            if idx == 0:
                raise ParseError("generator index 0 is not allowed", pos)
            return idx
        if name in self.map:
            return self.map[name]
        if self.fixed:
            raise ParseError(f"unknown variable {name!r}", pos)
        idx = 1
        while idx in self.claimed:
            idx += 1
        self.map[name] = idx
        self.claimed.add(idx)
        return idx


class _Parser:
    def __init__(self, text: str, build_gen, build_meet, build_join,
                 names: _NameTable):
        self.toks = _tokenize(text)
        self.pos = 0
        self.build_gen = build_gen
        self.build_meet = build_meet
        self.build_join = build_join
        self.names = names
        for kind, value, _ in self.toks:
            if kind == _TOK_NAME:
                idx = _explicit_index(value)
                if idx is not None and idx > 0:
                    names.claim_explicit(idx)

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def parse(self):
        out = self.sum()
        kind, value, at = self.peek()
        if kind != _TOK_END:
            raise ParseError(f"unexpected {value!r}", at)
        return out

    def sum(self):
        parts = [self.prod()]
        while self.peek()[:2] == (_TOK_OP, "+"):
            self.advance()
            parts.append(self.prod())
        return parts[0] if len(parts) == 1 else self.build_join(parts)

    def prod(self):
        parts = [self.atom()]
        while self.peek()[:2] == (_TOK_OP, "*"):
            self.advance()
            parts.append(self.atom())
        return parts[0] if len(parts) == 1 else self.build_meet(parts)

    def atom(self):
        kind, value, at = self.advance()
        if (kind, value) == (_TOK_OP, "("):
            inner = self.sum()
            kind, value, at = self.advance()
            if (kind, value) != (_TOK_OP, ")"):
                raise ParseError("expected ')'", at)
            return inner
        if kind == _TOK_NAME:
            return self.build_gen(self.names.resolve(value, at))
        raise ParseError(f"expected a generator or '(', got {value!r}", at)


def parse_term(text: str, arena: TermArena,
               var_names: list[str] | None = None,
               names: _NameTable | None = None) -> Term:
    """Parse ``text`` into an interned term.  ``names`` lets several inputs
    share one name-to-index assignment (used by the CLI)."""
    table = names if names is not None else _NameTable(var_names)
    p = _Parser(text, arena.gen, arena.meet, arena.join, table)
    return p.parse()


def parse_raw(text: str, var_names: list[str] | None = None) -> RawTerm:
    """Parse without any normalization: nesting, duplicates and argument
    order are kept exactly as written."""
    table = _NameTable(var_names)
    p = _Parser(
        text,
        lambda i: RawTerm(GEN, index=i),
        lambda ps: RawTerm(MEET, children=tuple(ps)),
        lambda ps: RawTerm(JOIN, children=tuple(ps)),
        table,
    )
    return p.parse()


def print_term(t: Term, style: str = "ascii") -> str:
    """Render a term.  ``ascii`` round-trips through :func:`parse_term` to
    the same node; ``paper`` writes meets as juxtaposition (output only)."""
    if style == "ascii":
        return _print_ascii(t)
    if style == "paper":
        return _print_paper(t)
    raise ValueError(f"unknown style {style!r}")


def _print_ascii(t: Term) -> str:
    if t.kind == GEN:
        return f"x{t.index}"
    if t.kind == MEET:
        return "*".join(
            f"({_print_ascii(c)})" if c.kind == JOIN else _print_ascii(c)
            for c in t.children)
    return "+".join(_print_ascii(c) for c in t.children)


def _print_paper(t: Term) -> str:
    if t.kind == GEN:
        return f"x{t.index}"
    if t.kind == MEET:
        return "".join(
            f"({_print_paper(c)})" if c.kind == JOIN else _print_paper(c)
            for c in t.children)
    return "+".join(_print_paper(c) for c in t.children)
