"""Join covers, refinement, and the finite neighbour set of a suitable meet.

For a canonical proper meet whose meetands are all proper joins, the doubly
minimal join covers are exactly the joinand sets of the meetands, so the set
``U = { u : w E u }`` (u belongs to a doubly minimal join cover of w) can be
read off the canonical form.  ``psi_check`` then decides whether U, ordered
by the free-lattice order, is a nice bipartite poset.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .canonical import canonicalize
from .order import leq, lt
from .terms import GEN, JOIN, MEET, Term, print_term, variables


class UnsupportedShape(Exception):
    """The element is outside the shape this kernel computes covers for."""


def refines(a: set[Term] | frozenset[Term], b: set[Term] | frozenset[Term]) -> bool:
    """Every element of ``a`` lies below some element of ``b``."""
    return all(any(leq(x, y) for y in b) for x in a)


def _canonical_meet_of_joins(t: Term) -> Term:
    c = canonicalize(t).term
    if c.kind != MEET:
        raise UnsupportedShape(
            f"canonical form is not a proper meet: {print_term(c)}")
    for child in c.children:
        if child.kind != JOIN:
            raise UnsupportedShape(
                f"meetand is not a proper join: {print_term(child)}")
    return c


def doubly_minimal_join_covers(t: Term) -> list[frozenset[Term]]:
    """The joinand sets of the canonical meetands of ``t``.

    Raises :class:`UnsupportedShape` unless the canonical form of ``t`` is a
    proper meet all of whose meetands are proper joins; outside that shape
    the covers are mathematically defined but not computed here.
    """
    c = _canonical_meet_of_joins(t)
    return [frozenset(child.children) for child in c.children]


def e_set(t: Term) -> set[Term]:
    """Union of the doubly minimal join covers of ``t``; all elements are
    canonical subterms of the canonical form of ``t``."""
    out: set[Term] = set()
    for cover in doubly_minimal_join_covers(t):
        out |= cover
    return out


PSI_CONDITIONS = ("a", "b", "c", "d", "e", "f", "g")


@dataclass
class PsiReport:
    """Outcome and per-condition trace of the nice-neighbour-poset check."""

    outcome: bool
    conditions: dict[str, bool | None]
    u_set: list[Term] = field(default_factory=list)
    failed_condition: str | None = None
    failure_witnesses: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "conditions": {k: self.conditions.get(k) for k in PSI_CONDITIONS},
            "u_set": [print_term(u) for u in self.u_set],
            "failed_condition": self.failed_condition,
            "failure_witnesses": list(self.failure_witnesses),
        }


def psi_check(w: Term) -> PsiReport:
    """Decide whether ``w`` is a proper meet, below no generator, whose
    neighbour set U is a nice bipartite poset.

    Conditions, evaluated on the canonical form:
      (a) proper meet;
      (b) w <= x for no generator x (only generators occurring in w can be
          above it -- the order recursion never relates w to a fresh
          generator -- so vars(w) is the whole search space);
      (c) U has no 3-element chain;
      (d) at least three maximal elements;
      (e) at least three minimal elements;
      (f) every maximal is above >= 2 minimals and fails to be above >= 1;
      (g) dually for minimals.
    Any term gets a verdict: (c)-(g) are unreachable exactly when (a) or (b)
    fails, because with (a) and (b) in force no canonical meetand can be a
    generator, hence all are proper joins and U is computable.
    """
    conditions: dict[str, bool | None] = {k: None for k in PSI_CONDITIONS}
    witnesses: list[str] = []
    failed: str | None = None

    def fail(cond: str, notes: list[str]) -> None:
        nonlocal failed
        if failed is None:
            failed = cond
            witnesses.extend(notes)

    c = canonicalize(w).term
    conditions["a"] = c.kind == MEET
    if not conditions["a"]:
        fail("a", [f"canonical form is not a proper meet: {print_term(c)}"])

    above = [x for x in sorted(variables(c)) if leq(c, c.arena.gen(x))]
    conditions["b"] = not above
    if above:
        fail("b", [f"below generator x{above[0]}"])

    if not (conditions["a"] and conditions["b"]):
        return PsiReport(False, conditions, [], failed, witnesses)

    # With (a) and (b) established every meetand is a proper join: a
    # generator meetand x would put w below x, contradicting (b).
    assert all(child.kind == JOIN for child in c.children)
    u_terms = sorted(e_set(c), key=lambda u: u.id)

    chain = _find_three_chain(u_terms)
    conditions["c"] = chain is None
    if chain is not None:
        fail("c", [" > ".join(print_term(u) for u in chain)])

    maxima = [u for u in u_terms
              if not any(lt(u, v) for v in u_terms if v is not u)]
    minima = [u for u in u_terms
              if not any(lt(v, u) for v in u_terms if v is not u)]

    conditions["d"] = len(maxima) >= 3
    if not conditions["d"]:
        fail("d", [f"only {len(maxima)} maximal elements"])
    conditions["e"] = len(minima) >= 3
    if not conditions["e"]:
        fail("e", [f"only {len(minima)} minimal elements"])

    bad_f = [u for u in maxima
             if sum(1 for s in minima if lt(s, u)) < 2
             or all(leq(s, u) for s in minima)]
    conditions["f"] = not bad_f
    if bad_f:
        fail("f", [f"maximal {print_term(bad_f[0])} lacks two minimals below "
                   f"or one minimal not below"])

    bad_g = [s for s in minima
             if sum(1 for u in maxima if lt(s, u)) < 2
             or all(leq(s, u) for u in maxima)]
    conditions["g"] = not bad_g
    if bad_g:
        fail("g", [f"minimal {print_term(bad_g[0])} lacks two maximals above "
                   f"or one maximal not above"])

    outcome = all(conditions[k] for k in PSI_CONDITIONS)
    return PsiReport(outcome, conditions, u_terms, failed, witnesses)


def _find_three_chain(us: list[Term]) -> tuple[Term, Term, Term] | None:
    for a in us:
        for b in us:
            if a is b or not lt(b, a):
                continue
            for c in us:
                if c is a or c is b:
                    continue
                if lt(c, b):
                    return (a, b, c)
    return None
