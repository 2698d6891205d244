"""Canonical forms.

Every free-lattice element has a unique shortest term.  A meet
``t = t_1 * ... * t_k`` (k >= 2) is canonical iff

  (1) each meetand is a generator or a join (never a meet),
  (2) each meetand is itself canonical,
  (3) the meetands form an antichain (t_i <= t_j for no i != j),
  (4) no joinand of a join meetand lies above the whole term,

and dually for joins; generators are canonical.  Because terms are interned,
two equivalent terms have equal canonical forms with the same node id, so
canonical equality decides equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .order import leq
from .terms import (GEN, JOIN, MEET, RawTerm, Term, TermArena, dual,
                    intern_raw)


@dataclass(frozen=True)
class CanonicalTerm:
    """A term certified to satisfy the canonical-form conditions."""
    term: Term
    certified: bool = True


def canonicalize(t: Term) -> CanonicalTerm:
    """Rewrite ``t`` to its canonical form (an equivalent term).

    Meet case, applied after canonicalizing children (join case dual):
    flatten and deduplicate through the constructor, drop any meetand that
    lies above another one, and if a joinand of some meetand lies above the
    whole current term, replace that meetand by the joinand and restart.
    Each replacement swaps a join for a strictly smaller subterm, so the
    rewriting terminates.
    """
    return CanonicalTerm(_canon(t))


def _canon(t: Term) -> Term:
    arena = t.arena
    cache = arena.canon_cache
    got = cache.get(t.id)
    if got is not None:
        return got
    if t.kind == GEN:
        out = t
    else:
        out = _canon_composite(arena, t.kind, [_canon(c) for c in t.children])
    cache[t.id] = out
    cache[out.id] = out
    return out


def _canon_composite(arena: TermArena, kind: str, parts: list[Term]) -> Term:
    # parts are canonical; `below` is the order role a deleted child plays:
    # for meets keep the smaller meetand, for joins keep the larger joinand.
    build = arena.meet if kind == MEET else arena.join
    inner = dual(kind)

    def dominated(a: Term, b: Term) -> bool:
        # True when b makes a redundant in this composite.
        return leq(b, a) if kind == MEET else leq(a, b)

    cur = build(parts)
    while cur.kind == kind:
        kids = list(cur.children)
        keep = [a for i, a in enumerate(kids)
                if not any(j != i and dominated(a, b)
                           for j, b in enumerate(kids))]
        if len(keep) != len(kids):
            cur = build(keep) if len(keep) > 1 else keep[0]
            continue
        replacement = None
        for child in kids:
            if child.kind != inner:
                continue
            for part in child.children:
                absorbs = leq(cur, part) if kind == MEET else leq(part, cur)
                if absorbs:
                    replacement = (child, part)
                    break
            if replacement:
                break
        if replacement is None:
            break
        old, new = replacement
        cur = build([new if c is old else c for c in kids])
    return cur


def is_canonical(t: Term | RawTerm, arena: TermArena | None = None) -> bool:
    """Check the canonical-form conditions.

    Accepts either an interned :class:`Term` or a :class:`RawTerm`; the raw
    form exists so that shapes the normalizing constructors would erase
    (duplicate joinands, nested meets, unsorted children) can still be
    tested.  Raw subterms are interned only to run the order tests.
    """
    if isinstance(t, RawTerm):
        if arena is None:
            arena = TermArena()
        return _is_canonical_raw(t, arena)
    cache = t.arena.is_canon_cache
    got = cache.get(t.id)
    if got is None:
        got = _is_canonical_node(t)
        cache[t.id] = got
    return got


def _is_canonical_node(t: Term) -> bool:
    if t.kind == GEN:
        return True
    inner = dual(t.kind)
    kids = t.children
    # (1) holds structurally: the constructor flattened same-kind children.
    if not all(is_canonical(c) for c in kids):
        return False
    for i, a in enumerate(kids):
        for j, b in enumerate(kids):
            if i != j and leq(a, b):
                return False
    for child in kids:
        if child.kind != inner:
            continue
        for part in child.children:
            above_whole = leq(t, part) if t.kind == MEET else leq(part, t)
            if above_whole:
                return False
    return True


def _is_canonical_raw(t: RawTerm, arena: TermArena) -> bool:
    if t.kind == GEN:
        return True
    if len(t.children) < 2:
        return False
    inner = dual(t.kind)
    for c in t.children:
        if c.kind == t.kind:  # condition (1): no same-kind nesting
            return False
        if not _is_canonical_raw(c, arena):
            return False
    kids = [intern_raw(c, arena) for c in t.children]
    for i, a in enumerate(kids):
        for j, b in enumerate(kids):
            if i != j and leq(a, b):
                return False
    whole = intern_raw(t, arena)
    for child in kids:
        if child.kind != inner:
            continue
        for part in child.children:
            above_whole = leq(whole, part) if t.kind == MEET else leq(part, whole)
            if above_whole:
                return False
    return True


def canonical_joinands(v: Term) -> list[Term]:
    """Joinands of the canonical form of ``v``; empty unless it is a proper
    join."""
    c = _canon(v)
    if c.kind == JOIN:
        return list(c.children)
    return []


def is_join_irreducible(t: Term) -> bool:
    """Generators and proper meets are exactly the join-irreducible
    elements."""
    return _canon(t).kind in (GEN, MEET)
