"""From finite bipartite posets into free lattices, and back.

``xi_embed`` sends element q_i to the meet of the generators indexed by the
elements above it (elements are numbered in declaration order: upper sort
first, then lower).  ``build_wq`` forms, over the maximal elements, the meet
of (image of a) + (sum of images of minimals not below a); its neighbour set
recovers the poset inside the free lattice, which the verification pipeline
checks instance by instance.

``translate_phi_star`` maps a two-block sentence phi to the poset-language
sentence saying: wherever the nice-neighbour-poset property holds, the
neighbour set satisfies phi.  The output is emitted syntactically (TPTP or
s-expression) and never evaluated in an infinite model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import fol
from .bipartite import (AESentence, BipartiteStructure, LE, StructureError,
                        eval_ae_sentence, is_nice, poset_from_terms)
from .canonical import canonicalize, is_canonical
from .covers import PsiReport, UnsupportedShape, e_set, psi_check
from .fol import (And, Exists, Forall, Formula, Implies, Leq, Not, Or, conj,
                  disj)
from .order import leq
from .terms import Term, TermArena, print_term


class EmptyJoinError(Exception):
    """Some maximal element dominates every minimal one, so its inner sum
    would be empty."""


class InternalCheckError(Exception):
    """A cross-check that must hold by construction failed."""


def element_indices(q: BipartiteStructure) -> dict[str, int]:
    """1-based indices in declaration order: up list, then down list."""
    return {name: i for i, name in enumerate(q.elements, start=1)}


def xi_embed(q: BipartiteStructure, arena: TermArena) -> dict[str, Term]:
    """Standard order embedding into the free lattice: each element maps to
    the meet of the generators of the elements above-or-equal to it, so a
    maximal element maps to its own generator."""
    idx = element_indices(q)
    images: dict[str, Term] = {}
    for a in q.up:
        images[a] = arena.gen(idx[a])
    for b in q.down:
        ups = [arena.gen(idx[a]) for a in q.neighbours_of_down(b)]
        images[b] = arena.meet([arena.gen(idx[b])] + ups)
    return images


def build_wq(q: BipartiteStructure, arena: TermArena,
             images: dict[str, Term] | None = None) -> Term:
    """The meet over maximal a of (image(a) + sum of image(b) for minimal b
    not below a), built syntactically through the arena constructors."""
    if images is None:
        images = xi_embed(q, arena)
    meetands = []
    for a in q.up:
        non_neighbours = [b for b in q.down if (a, b) not in q.edges]
        if not non_neighbours:
            raise EmptyJoinError(
                f"maximal element {a} is above every minimal element")
        meetands.append(arena.join([images[a]]
                                   + [images[b] for b in non_neighbours]))
    if len(meetands) < 2:
        raise EmptyJoinError("need at least two maximal elements")
    return arena.meet(meetands)


# ---------------------------------------------------------------------------
# Sentence translation: everything is expanded into the language { leq }.
# Sums and products become least-upper-bound / greatest-lower-bound
# subformulas; in positive positions the bound is an existential witness,
# under a universal guard otherwise.

class _Fresh:
    def __init__(self) -> None:
        self.counter = 0

    def __call__(self) -> str:
        self.counter += 1
        return f"V{self.counter}"


def _is_lub(a: str, b: str, c: str, fresh: _Fresh) -> Formula:
    z = fresh()
    return And((Leq(a, c), Leq(b, c),
                Forall((z,), Implies(And((Leq(a, z), Leq(b, z))), Leq(c, z)))))


def _is_glb(a: str, b: str, c: str, fresh: _Fresh) -> Formula:
    z = fresh()
    return And((Leq(c, a), Leq(c, b),
                Forall((z,), Implies(And((Leq(z, a), Leq(z, b))), Leq(z, c)))))


def _with_sum(a: str, b: str, fresh: _Fresh,
              body: Callable[[str], Formula]) -> Formula:
    c = fresh()
    return Exists((c,), And((_is_lub(a, b, c, fresh), body(c))))


def _forall_sum(a: str, b: str, fresh: _Fresh,
                body: Callable[[str], Formula]) -> Formula:
    c = fresh()
    return Forall((c,), Implies(_is_lub(a, b, c, fresh), body(c)))


def _neq(a: str, b: str) -> Formula:
    return Not(And((Leq(a, b), Leq(b, a))))


def _strictly_below(a: str, b: str) -> Formula:
    return And((Leq(a, b), Not(Leq(b, a))))


def _proper_meet(w: str, fresh: _Fresh) -> Formula:
    a, b = fresh(), fresh()
    return Exists((a, b), And((Not(Leq(a, w)), Not(Leq(b, w)),
                               _is_glb(a, b, w, fresh))))


def _join_prime(x: str, fresh: _Fresh) -> Formula:
    a, b = fresh(), fresh()
    return Forall((a, b), _forall_sum(
        a, b, fresh,
        lambda c: Implies(Leq(x, c), Or((Leq(x, a), Leq(x, b))))))


def _meet_prime(x: str, fresh: _Fresh) -> Formula:
    a, b = fresh(), fresh()
    c = fresh()
    return Forall((a, b), Forall((c,), Implies(
        _is_glb(a, b, c, fresh),
        Implies(Leq(c, x), Or((Leq(a, x), Leq(b, x)))))))


def _e_relation(t: str, u: str, fresh: _Fresh) -> Formula:
    """t E u: u belongs to a doubly minimal join cover of t, stated with an
    existential companion v and the witnessed sum uv = u + v."""
    v, uv = fresh(), fresh()
    r, s = fresh(), fresh()
    rs, rsv = fresh(), fresh()
    minimal_cover = Forall((r, s), Implies(
        And((_strictly_below(r, u), _strictly_below(s, u))),
        Forall((rs,), Implies(
            _is_lub(r, s, rs, fresh),
            Forall((rsv,), Implies(_is_lub(rs, v, rsv, fresh),
                                   Not(Leq(t, rsv))))))))
    y, z = fresh(), fresh()
    yz = fresh()
    doubly_minimal = Forall((y, z), Forall((yz,), Implies(
        And((_is_lub(y, z, yz, fresh), Leq(t, yz), Leq(yz, uv),
             Not(Leq(t, y)), Not(Leq(t, z)))),
        And((Leq(yz, uv), Leq(uv, yz))))))
    return Exists((v, uv), And((
        _is_lub(u, v, uv, fresh),
        Leq(t, uv),
        Not(Leq(t, u)),
        Not(Leq(t, v)),
        minimal_cover,
        doubly_minimal,
    )))


def _in_max_u(w: str, u: str, fresh: _Fresh) -> Formula:
    t = fresh()
    return And((_e_relation(w, u, fresh),
                Forall((t,), Implies(_strictly_below(u, t),
                                     Not(_e_relation(w, t, fresh))))))


def _in_min_u(w: str, u: str, fresh: _Fresh) -> Formula:
    t = fresh()
    return And((_e_relation(w, u, fresh),
                Forall((t,), Implies(_strictly_below(t, u),
                                     Not(_e_relation(w, t, fresh))))))


def psi_formula(w: str, fresh: _Fresh | None = None) -> Formula:
    """The poset-language formula behind :func:`freelat.covers.psi_check`:
    proper meet, below no doubly prime element, and the neighbour set is a
    nice bipartite poset (clauses (a)-(g) of the semantic checker)."""
    if fresh is None:
        fresh = _Fresh()

    cond_a = _proper_meet(w, fresh)

    x = fresh()
    cond_b = Forall((x,), Implies(
        And((_join_prime(x, fresh), _meet_prime(x, fresh))),
        Not(Leq(w, x))))

    u1, u2, u3 = fresh(), fresh(), fresh()
    cond_c = Not(Exists((u1, u2, u3), And((
        _e_relation(w, u1, fresh), _e_relation(w, u2, fresh),
        _e_relation(w, u3, fresh),
        _strictly_below(u2, u1), _strictly_below(u3, u2)))))

    m1, m2, m3 = fresh(), fresh(), fresh()
    cond_d = Exists((m1, m2, m3), And((
        _in_max_u(w, m1, fresh), _in_max_u(w, m2, fresh),
        _in_max_u(w, m3, fresh),
        _neq(m1, m2), _neq(m1, m3), _neq(m2, m3))))

    n1, n2, n3 = fresh(), fresh(), fresh()
    cond_e = Exists((n1, n2, n3), And((
        _in_min_u(w, n1, fresh), _in_min_u(w, n2, fresh),
        _in_min_u(w, n3, fresh),
        _neq(n1, n2), _neq(n1, n3), _neq(n2, n3))))

    u = fresh()
    s1, s2, s3 = fresh(), fresh(), fresh()
    cond_f = Forall((u,), Implies(_in_max_u(w, u, fresh), Exists(
        (s1, s2, s3), And((
            _in_min_u(w, s1, fresh), _in_min_u(w, s2, fresh),
            _in_min_u(w, s3, fresh),
            Leq(s1, u), Leq(s2, u), _neq(s1, s2), Not(Leq(s3, u)))))))

    d = fresh()
    t1, t2, t3 = fresh(), fresh(), fresh()
    cond_g = Forall((d,), Implies(_in_min_u(w, d, fresh), Exists(
        (t1, t2, t3), And((
            _in_max_u(w, t1, fresh), _in_max_u(w, t2, fresh),
            _in_max_u(w, t3, fresh),
            Leq(d, t1), Leq(d, t2), _neq(t1, t2), Not(Leq(d, t3)))))))

    return And((cond_a, cond_b, cond_c, cond_d, cond_e, cond_f, cond_g))


def translate_phi_star(phi: AESentence) -> Formula:
    """Single universal quantifier over w: wherever the nice-neighbour-poset
    property holds, some tuple of neighbours of w satisfies the matrix
    against every tuple of neighbours.

    The universal y-block sits inside the scope of the existential x-block,
    as the matrix mentions both.
    """
    fresh = _Fresh()
    w = "W"
    xs = tuple(f"X{i}" for i in range(1, phi.n_exists + 1))
    ys = tuple(f"Y{i}" for i in range(1, phi.n_forall + 1))
    rename = {f"x{i}": f"X{i}" for i in range(1, phi.n_exists + 1)}
    rename.update({f"y{i}": f"Y{i}" for i in range(1, phi.n_forall + 1)})

    matrix = disj([
        conj([
            Leq(rename[l.lhs], rename[l.rhs]) if l.kind == LE
            else Not(Leq(rename[l.lhs], rename[l.rhs]))
            for l in conjunct
        ])
        for conjunct in phi.matrix
    ])

    if ys:
        y_guard = conj([_e_relation(w, y, fresh) for y in ys])
        inner: Formula = Forall(ys, Implies(y_guard, matrix))
    else:
        inner = matrix

    if xs:
        x_guard = [_e_relation(w, x, fresh) for x in xs]
        conclusion: Formula = Exists(xs, conj(x_guard + [inner]))
    else:
        conclusion = inner

    return Forall((w,), Implies(psi_formula(w, fresh), conclusion))


def emit_phi_star(phi: AESentence, fmt: str = "tptp") -> str:
    f = translate_phi_star(phi)
    if fmt == "tptp":
        return fol.to_tptp(f)
    if fmt == "sexp":
        return fol.to_sexp(f)
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# Instance verification

CONCLUSION_FAILS = "phi_star_fails_at_w"
CONCLUSION_HOLDS = "phi_holds_on_instance"


@dataclass
class ReductionReport:
    """Evidence bundle for one poset instance (and optionally one sentence)."""

    mode: str
    word: Term
    canonical_ok: bool
    eset_terms: list[Term]
    iso_ok: bool
    psi: PsiReport
    images: dict[str, Term] = field(default_factory=dict)
    eset_error: str | None = None
    embedding_samples_ok: bool | None = None
    phi_eval: dict | None = None
    conclusion: str | None = None

    @property
    def all_structure_checks(self) -> bool:
        return self.canonical_ok and self.iso_ok and self.psi.outcome

    def to_dict(self) -> dict:
        out = {
            "mode": self.mode,
            "word": print_term(self.word),
            "checks": {
                "word_canonical": self.canonical_ok,
                "eset_matches_image": self.iso_ok,
                "psi_holds": self.psi.outcome,
            },
            "eset": [print_term(t) for t in self.eset_terms],
            "images": {name: print_term(t) for name, t in self.images.items()},
            "psi": self.psi.to_dict(),
        }
        if self.eset_error is not None:
            out["eset_error"] = self.eset_error
        if self.embedding_samples_ok is not None:
            out["checks"]["embedding_samples"] = self.embedding_samples_ok
        if self.phi_eval is not None:
            out["phi_eval"] = self.phi_eval
        if self.conclusion is not None:
            out["conclusion"] = self.conclusion
        return out


def _mode_images(q: BipartiteStructure, arena: TermArena, mode: str,
                 chain=None) -> tuple[dict[str, Term], Term]:
    images = xi_embed(q, arena)
    word = build_wq(q, arena, images)
    if mode == "direct":
        return images, word
    if mode != "f3":
        raise ValueError(f"unknown mode {mode!r}")
    from .embed import generator_chain, zeta  # cycle-free at runtime only
    if chain is None:
        chain = generator_chain(arena, len(q.elements))
    word3 = zeta(word, chain)
    images3 = {name: zeta(t, chain) for name, t in images.items()}
    return images3, word3


def verify_lemma_wq(q: BipartiteStructure, arena: TermArena | None = None,
                    mode: str = "direct", chain=None) -> ReductionReport:
    """Check, on the instance ``q``: the built word is canonical, its
    neighbour set equals the embedded image of ``q`` with the same order,
    and the nice-neighbour-poset property holds."""
    if arena is None:
        arena = TermArena()
    images, word = _mode_images(q, arena, mode, chain)

    canonical_ok = is_canonical(word)
    psi = psi_check(word)

    eset_error: str | None = None
    try:
        eset_terms = sorted(e_set(word), key=lambda t: t.id)
    except UnsupportedShape as exc:
        eset_terms = []
        eset_error = str(exc)
    image_ids = {canonicalize(t).term.id for t in images.values()}
    eset_ids = {canonicalize(t).term.id for t in eset_terms}
    set_ok = bool(eset_terms) and image_ids == eset_ids

    order_ok = all(
        q.le(p, r) == leq(images[p], images[r])
        for p in q.elements for r in q.elements)

    poset_ok = False
    if set_ok:
        try:
            generic = poset_from_terms(eset_terms)
            poset_ok = _isomorphic_via_images(q, images, generic)
        except StructureError as exc:
            eset_error = str(exc)

    return ReductionReport(mode=mode, word=word, canonical_ok=canonical_ok,
                           eset_terms=eset_terms,
                           iso_ok=set_ok and order_ok and poset_ok, psi=psi,
                           images=images, eset_error=eset_error)


def _isomorphic_via_images(q: BipartiteStructure, images: dict[str, Term],
                           generic: BipartiteStructure) -> bool:
    """Does the structure recovered from the neighbour terms match ``q``
    under the name map q-element -> printed canonical image?"""
    name_of = {p: print_term(canonicalize(images[p]).term) for p in q.elements}
    if set(generic.up) != {name_of[a] for a in q.up}:
        return False
    if set(generic.down) != {name_of[b] for b in q.down}:
        return False
    mapped_edges = {(name_of[a], name_of[b]) for a, b in q.edges}
    return generic.edges == frozenset(mapped_edges)


def recovered_structure(q: BipartiteStructure,
                        images: dict[str, Term]) -> BipartiteStructure:
    """Rebuild a structure on Q's names with edges given by the term order,
    so sentence evaluations on Q and on the recovered poset align tuple by
    tuple."""
    edges = frozenset((a, b) for a in q.up for b in q.down
                      if leq(images[b], images[a]))
    return BipartiteStructure(q.up, q.down, edges)


def verify_counterexample(phi: AESentence, q: BipartiteStructure,
                          mode: str = "direct",
                          arena: TermArena | None = None) -> ReductionReport:
    """Full pipeline: verify the word checks, then evaluate ``phi`` both on
    ``q`` and on the poset recovered from the neighbour set, and require the
    two evaluations to agree on every x-tuple."""
    nice = is_nice(q)
    if not nice.nice:
        raise ValueError("instance must be nice; failing conditions: "
                         + ", ".join(k for k, v in nice.conditions.items()
                                     if not v))
    if arena is None:
        arena = TermArena()
    report = verify_lemma_wq(q, arena, mode)

    recovered = recovered_structure(q, report.images)
    on_q = eval_ae_sentence(phi, q, exhaustive=True)
    on_rec = eval_ae_sentence(phi, recovered, exhaustive=True)
    if on_q.holds != on_rec.holds or on_q.refutations != on_rec.refutations:
        raise InternalCheckError(
            "sentence evaluation differs between the instance and the "
            "recovered poset")

    report.phi_eval = {
        "on_instance": on_q.to_dict(),
        "on_recovered": on_rec.to_dict(),
        "cross_check": "agree",
    }
    if on_q.holds:
        report.conclusion = CONCLUSION_HOLDS
    else:
        if not report.all_structure_checks:
            raise InternalCheckError(
                "structure checks failed on a nice instance")
        report.conclusion = CONCLUSION_FAILS
    return report
