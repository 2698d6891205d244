"""Finite bipartite graphs/posets and a brute-force sentence evaluator.

A bipartite structure has an upper sort, a lower sort, and edges from upper
to lower elements.  Viewed as a poset, ``b < a`` iff ``(a, b)`` is an edge.
Sentences are two-block prenex forms -- an existential tuple, a universal
tuple, and a disjunction of literal conjunctions over ``<=`` / ``not <=`` --
evaluated by exhaustive enumeration (the evaluator is the oracle here;
structures stay desk-sized).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .order import lt
from .terms import Term, print_term


class StructureError(Exception):
    """Invalid bipartite structure or poset input."""


@dataclass(frozen=True)
class BipartiteStructure:
    up: tuple[str, ...]
    down: tuple[str, ...]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        names = self.up + self.down
        if len(set(names)) != len(names):
            raise StructureError("element names must be unique across sorts")
        up, down = set(self.up), set(self.down)
        for a, b in self.edges:
            if a not in up or b not in down:
                raise StructureError(f"edge ({a}, {b}) must go from up to down")

    @property
    def elements(self) -> tuple[str, ...]:
        return self.up + self.down

    def le(self, p: str, q: str) -> bool:
        return p == q or (q, p) in self.edges

    def neighbours_of_up(self, a: str) -> list[str]:
        return [b for b in self.down if (a, b) in self.edges]

    def neighbours_of_down(self, b: str) -> list[str]:
        return [a for a in self.up if (a, b) in self.edges]


def parse_structure(doc: str | dict) -> BipartiteStructure:
    """Read the JSON form {"up": [...], "down": [...], "edges": [[a,b],...]}."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise StructureError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise StructureError("structure document must be a JSON object")
    try:
        up = tuple(str(x) for x in doc["up"])
        down = tuple(str(x) for x in doc["down"])
        edges = frozenset((str(a), str(b)) for a, b in doc["edges"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StructureError(f"malformed structure document: {exc}") from exc
    return BipartiteStructure(up, down, edges)


def serialize_structure(s: BipartiteStructure) -> dict:
    pos = {name: i for i, name in enumerate(s.elements)}
    edges = sorted(s.edges, key=lambda e: (pos[e[0]], pos[e[1]]))
    return {"up": list(s.up), "down": list(s.down),
            "edges": [[a, b] for a, b in edges]}


@dataclass(frozen=True)
class FinitePoset:
    """A finite strict order given explicitly; validates the order axioms."""

    elements: tuple[str, ...]
    strictly_below: frozenset[tuple[str, str]]

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise StructureError("poset elements must be unique")
        elems = set(self.elements)
        for p, q in self.strictly_below:
            if p not in elems or q not in elems:
                raise StructureError(f"pair ({p}, {q}) uses unknown elements")
            if p == q:
                raise StructureError(f"strict order cannot relate {p} to itself")
            if (q, p) in self.strictly_below:
                raise StructureError(f"antisymmetry violated on ({p}, {q})")
        for p, q in self.strictly_below:
            for r, s in self.strictly_below:
                if q == r and (p, s) not in self.strictly_below:
                    raise StructureError(
                        f"transitivity violated: {p} < {q} < {s}")

    def le(self, p: str, q: str) -> bool:
        return p == q or (p, q) in self.strictly_below

    def maximal(self) -> list[str]:
        return [p for p in self.elements
                if not any((p, q) in self.strictly_below for q in self.elements)]

    def minimal(self) -> list[str]:
        return [p for p in self.elements
                if not any((q, p) in self.strictly_below for q in self.elements)]


def graph_to_poset(s: BipartiteStructure) -> FinitePoset:
    return FinitePoset(s.elements,
                       frozenset((b, a) for a, b in s.edges))


def poset_to_graph(p: FinitePoset) -> BipartiteStructure:
    """Inverse of :func:`graph_to_poset`.

    Requires height <= 2 with every non-maximal element minimal.  The upper
    sort is the set of maximal elements, so the conversions are mutually
    inverse exactly when every lower element has an edge (an isolated lower
    element would be indistinguishable from an upper one by order alone).
    """
    maximal = set(p.maximal())
    for q in p.elements:
        if q in maximal:
            continue
        below = [r for r in p.elements if (r, q) in p.strictly_below]
        if below:
            raise StructureError(
                f"element {q} is neither maximal nor minimal (3-element chain)")
    up = tuple(q for q in p.elements if q in maximal)
    down = tuple(q for q in p.elements if q not in maximal)
    edges = frozenset((a, b) for (b, a) in p.strictly_below)
    return BipartiteStructure(up, down, edges)


@dataclass
class NicenessReport:
    nice: bool
    conditions: dict[str, bool]
    witnesses: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"nice": self.nice, "conditions": dict(self.conditions),
                "witnesses": dict(self.witnesses)}


def is_nice(s: BipartiteStructure) -> NicenessReport:
    """Both sorts have >= 3 elements, every element has >= 2 neighbours and
    >= 1 non-neighbour on the other side."""
    conditions: dict[str, bool] = {}
    witnesses: dict[str, str] = {}

    conditions["up_size"] = len(s.up) >= 3
    if not conditions["up_size"]:
        witnesses["up_size"] = f"|up| = {len(s.up)}"
    conditions["down_size"] = len(s.down) >= 3
    if not conditions["down_size"]:
        witnesses["down_size"] = f"|down| = {len(s.down)}"

    bad_up = [a for a in s.up
              if len(s.neighbours_of_up(a)) < 2
              or len(s.neighbours_of_up(a)) == len(s.down)]
    conditions["up_degrees"] = not bad_up
    if bad_up:
        witnesses["up_degrees"] = bad_up[0]

    bad_down = [b for b in s.down
                if len(s.neighbours_of_down(b)) < 2
                or len(s.neighbours_of_down(b)) == len(s.up)]
    conditions["down_degrees"] = not bad_down
    if bad_down:
        witnesses["down_degrees"] = bad_down[0]

    return NicenessReport(all(conditions.values()), conditions, witnesses)


# ---------------------------------------------------------------------------
# Two-block prenex sentences over { <= }.

LE = "le"
NLE = "nle"


@dataclass(frozen=True)
class Literal:
    kind: str
    lhs: str
    rhs: str

    def __post_init__(self):
        if self.kind not in (LE, NLE):
            raise ValueError(f"literal kind must be 'le' or 'nle', got {self.kind!r}")


@dataclass(frozen=True)
class AESentence:
    """``exists x1..xk forall y1..yl (S_1 or ... or S_p)`` with each S_j a
    conjunction of ``le``/``nle`` literals over the declared variables."""

    n_exists: int
    n_forall: int
    matrix: tuple[tuple[Literal, ...], ...]

    def __post_init__(self):
        if self.n_exists < 0 or self.n_forall < 0:
            raise ValueError("variable counts must be nonnegative")
        if not self.matrix:
            raise ValueError("matrix needs at least one disjunct")
        declared = self.variable_names()
        for conj in self.matrix:
            if not conj:
                raise ValueError("empty conjunction in matrix")
            for literal in conj:
                for v in (literal.lhs, literal.rhs):
                    if v not in declared:
                        raise ValueError(f"undeclared variable {v!r}")

    def variable_names(self) -> set[str]:
        return ({f"x{i}" for i in range(1, self.n_exists + 1)}
                | {f"y{i}" for i in range(1, self.n_forall + 1)})


def parse_sentence(doc: str | dict) -> AESentence:
    """Read {"exists": k, "forall": l, "dnf": [[{"le": [v, w]}, ...], ...]}."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON: {exc}") from exc
    try:
        matrix = []
        for conj in doc["dnf"]:
            lits = []
            for lit in conj:
                (kind, (lhs, rhs)), = lit.items()
                lits.append(Literal(kind, str(lhs), str(rhs)))
            matrix.append(tuple(lits))
        return AESentence(int(doc["exists"]), int(doc["forall"]), tuple(matrix))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValueError) and "undeclared" in str(exc):
            raise
        raise ValueError(f"malformed sentence document: {exc}") from exc


def serialize_sentence(phi: AESentence) -> dict:
    return {
        "exists": phi.n_exists,
        "forall": phi.n_forall,
        "dnf": [[{lit.kind: [lit.lhs, lit.rhs]} for lit in conj]
                for conj in phi.matrix],
    }


@dataclass
class EvalResult:
    holds: bool
    witness: tuple[str, ...] | None
    refutations: dict[tuple[str, ...], tuple[str, ...]]

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "witness": list(self.witness) if self.witness is not None else None,
            "refutations": {" ".join(x): list(y)
                            for x, y in self.refutations.items()},
        }


def _literal_holds(lit: Literal, le, assignment: dict[str, str]) -> bool:
    a, b = assignment[lit.lhs], assignment[lit.rhs]
    return le(a, b) if lit.kind == LE else not le(a, b)


def eval_ae_sentence(phi: AESentence, s: BipartiteStructure,
                     exhaustive: bool = False) -> EvalResult:
    """Brute-force evaluation over all tuples, in declaration order.

    The witness on success is the lexicographically first working x-tuple;
    on failure every x-tuple maps to its first refuting y-tuple.  With
    ``exhaustive`` set, all x-tuples are scored even after a witness.
    """
    poset = graph_to_poset(s)
    elems = poset.elements
    witness: tuple[str, ...] | None = None
    refutations: dict[tuple[str, ...], tuple[str, ...]] = {}

    for xs in itertools.product(elems, repeat=phi.n_exists):
        assignment = {f"x{i}": v for i, v in enumerate(xs, start=1)}
        refuter = None
        for ys in itertools.product(elems, repeat=phi.n_forall):
            assignment.update({f"y{i}": v for i, v in enumerate(ys, start=1)})
            if not any(all(_literal_holds(lit, poset.le, assignment)
                           for lit in conj)
                       for conj in phi.matrix):
                refuter = ys
                break
        if refuter is None:
            if witness is None:
                witness = xs
            if not exhaustive:
                break
        else:
            refutations[xs] = refuter

    return EvalResult(witness is not None, witness, refutations)


def poset_from_terms(ts: set[Term] | list[Term]) -> BipartiteStructure:
    """Order a finite set of terms by the free-lattice order and package it
    as a bipartite structure (maximal terms up, the rest down).

    Raises :class:`StructureError` on a 3-element chain, or when a
    non-maximal term fails to be minimal.
    """
    terms = sorted(set(ts), key=lambda t: t.id)
    maximal = [t for t in terms
               if not any(lt(t, v) for v in terms if v is not t)]
    max_ids = {t.id for t in maximal}
    lower = [t for t in terms if t.id not in max_ids]
    for t in lower:
        if any(lt(v, t) for v in terms if v is not t):
            raise StructureError(
                f"term {print_term(t)} is neither maximal nor minimal "
                f"(3-element chain)")
    names = {t.id: print_term(t) for t in terms}
    edges = frozenset((names[a.id], names[b.id])
                      for a in maximal for b in lower if lt(b, a))
    return BipartiteStructure(tuple(names[t.id] for t in maximal),
                              tuple(names[t.id] for t in lower), edges)


def random_structure(rng, max_side: int = 5) -> BipartiteStructure:
    """Random valid structure: every lower element gets at least one edge."""
    n_up = rng.randint(1, max_side)
    n_down = rng.randint(1, max_side)
    up = tuple(f"a{i}" for i in range(1, n_up + 1))
    down = tuple(f"b{i}" for i in range(1, n_down + 1))
    edges = set()
    for b in down:
        edges.add((rng.choice(up), b))
    for a in up:
        for b in down:
            if rng.random() < 0.4:
                edges.add((a, b))
    return BipartiteStructure(up, down, frozenset(edges))
