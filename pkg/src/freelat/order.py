"""Deciding ``s <= t`` in a free lattice.

The recursion below is the classical decision procedure for the free-lattice
order; the meet-versus-join case splits both ways, which is exactly what
makes the order decidable.  Results are memoized per arena on node-id pairs,
turning the exponential tree recursion into a polynomial DAG traversal.
"""

from __future__ import annotations

from .terms import GEN, JOIN, MEET, Term, TermArena

_IN_PROGRESS = object()


def leq(s: Term, t: Term) -> bool:
    """Whether ``s <= t`` holds in the free lattice over their generators."""
    arena = s.arena
    if t.arena is not arena:
        raise ValueError("terms from different arenas")
    return _leq(arena, s, t)


def _leq(arena: TermArena, s: Term, t: Term) -> bool:
    cache = arena.order_cache
    key = (s.id, t.id)
    got = cache.get(key)
    if got is _IN_PROGRESS:
        # Impossible for well-formed DAG terms: every recursive call strictly
        # shrinks the pair of trees.
        raise RuntimeError("cycle in order recursion; arena is corrupt")
    if got is not None:
        return got
    cache[key] = _IN_PROGRESS

    if s.kind == JOIN:
        out = all(_leq(arena, si, t) for si in s.children)
    elif t.kind == MEET:
        out = all(_leq(arena, s, tj) for tj in t.children)
    elif s.kind == GEN and t.kind == GEN:
        out = s.index == t.index
    elif s.kind == MEET and t.kind == GEN:
        out = any(_leq(arena, si, t) for si in s.children)
    elif s.kind == GEN and t.kind == JOIN:
        out = any(_leq(arena, s, tj) for tj in t.children)
    else:  # meet vs join: Whitman's condition
        out = (any(_leq(arena, si, t) for si in s.children)
               or any(_leq(arena, s, tj) for tj in t.children))

    cache[key] = out
    return out


def equiv(s: Term, t: Term) -> bool:
    return leq(s, t) and leq(t, s)


def lt(s: Term, t: Term) -> bool:
    return leq(s, t) and not leq(t, s)


def is_independent(xs: list[Term]) -> bool:
    """No member lies below the join, or above the meet, of the others.

    Testing only the full complement suffices: joins grow with the set and
    meets shrink, so x <= join(Y) for a sub-Y implies x <= join(all others),
    and x >= meet(Y) implies x >= meet(all others).  This turns the 2^n
    subset tests into n.
    """
    if not xs:
        raise ValueError("independence of an empty list")
    if len(set(x.id for x in xs)) != len(xs):
        raise ValueError("independence requires pairwise distinct terms")
    if len(xs) == 1:
        return True
    arena = xs[0].arena
    for i, x in enumerate(xs):
        others = xs[:i] + xs[i + 1:]
        if leq(x, arena.join(others)):
            return False
        if leq(arena.meet(others), x):
            return False
    return True
