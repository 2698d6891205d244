"""Embedding countably generated free lattices into the rank-3 one.

Four polynomials in three independent arguments produce four independent
elements; iterating the step "keep all but the last three, append the four
polynomials of the last three" grows an independent set by one per stage.
The k-th member stabilizes as ``z_k``, always of the first polynomial's
shape over the last three members of the stage of size k + 2.  Substituting
``x_j -> z_j`` is then a lattice embedding into the rank-3 free lattice.

All stage terms share one DAG; their tree sizes explode but the number of
distinct nodes grows by a constant per stage.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .canonical import is_join_irreducible
from .order import is_independent, leq
from .terms import Term, TermArena, substitute, tree_size, variables


class ChainError(Exception):
    """An independence certification failed; the construction is unsound."""


def f_poly(i: int, p: Term, q: Term, r: Term, *,
           canonical_parts: bool = False) -> Term:
    """The four embedding polynomials:

      1: (p + q*r) * (q + p*r)
      2: (p + q*r) * (r + p*q)
      3: p*(q + r) + q*(p + r)
      4: p*(q + r) + r*(p + q)

    With ``canonical_parts`` the inner pairwise meets and joins are put into
    canonical form first; for independent arguments the result is then
    literally canonical.
    """
    arena = p.arena

    def m(a: Term, b: Term) -> Term:
        out = arena.meet([a, b])
        return canonicalize(out).term if canonical_parts else out

    def j(a: Term, b: Term) -> Term:
        out = arena.join([a, b])
        return canonicalize(out).term if canonical_parts else out

    if i == 1:
        return arena.meet([j(p, m(q, r)), j(q, m(p, r))])
    if i == 2:
        return arena.meet([j(p, m(q, r)), j(r, m(p, q))])
    if i == 3:
        return arena.join([m(p, j(q, r)), m(q, j(p, r))])
    if i == 4:
        return arena.join([m(p, j(q, r)), m(r, j(p, q))])
    raise ValueError(f"polynomial index must be 1..4, got {i}")


@dataclass
class GeneratorChain:
    """Stages of the iterated construction and the stabilized generators."""

    stages: list[tuple[Term, ...]]
    z: list[Term]

    def __len__(self) -> int:
        return len(self.z)


def generator_chain(arena: TermArena, n: int, *,
                    verify_limit: int = 10) -> GeneratorChain:
    """Build ``z_1 .. z_n`` inside the rank-3 free lattice.

    Stages up to size ``verify_limit`` are certified independent and every
    ``z_k`` is certified join irreducible; a certification failure is a hard
    error since everything downstream relies on it.
    """
    if n < 1:
        raise ValueError("need at least one generator")
    stages: list[tuple[Term, ...]] = [
        (arena.gen(1), arena.gen(2), arena.gen(3))]
    while len(stages[-1]) < n + 2:
        cur = stages[-1]
        p, q, r = cur[-3:]
        stages.append(cur[:-3] + tuple(
            f_poly(i, p, q, r) for i in (1, 2, 3, 4)))

    for stage in stages:
        if len(stage) <= verify_limit and not is_independent(list(stage)):
            raise ChainError(
                f"stage of size {len(stage)} is not independent")

    zs: list[Term] = []
    for k in range(1, n + 1):
        p, q, r = stages[k - 1][-3:]  # stage of size k + 2
        zk = f_poly(1, p, q, r)
        if not is_join_irreducible(zk):
            raise ChainError(f"z_{k} is not join irreducible")
        zs.append(zk)
    return GeneratorChain(stages, zs)


def zeta(t: Term, chain: GeneratorChain) -> Term:
    """Apply the embedding: substitute ``x_j -> z_j``."""
    needed = max(variables(t), default=0)
    if needed > len(chain.z):
        raise ChainError(
            f"term uses x{needed} but the chain has only {len(chain.z)} "
            f"generators")
    return substitute(t, {j: chain.z[j - 1] for j in range(1, needed + 1)})


def sample_embedding_check(chain: GeneratorChain, seed: int = 0,
                           samples: int = 25, n_gens: int = 4,
                           max_depth: int = 3) -> bool:
    """Spot-check that the substitution preserves and reflects order on
    random term pairs: leq(s, t) iff leq(zeta(s), zeta(t))."""
    if len(chain.z) < n_gens:
        n_gens = len(chain.z)
    arena = chain.z[0].arena
    rng = random.Random(seed)
    for _ in range(samples):
        s = random_term(rng, arena, n_gens=n_gens, max_depth=max_depth)
        t = random_term(rng, arena, n_gens=n_gens, max_depth=max_depth)
        if leq(s, t) != leq(zeta(s, chain), zeta(t, chain)):
            return False
    return True


def random_term(rng: random.Random, arena: TermArena, n_gens: int = 4,
                max_depth: int = 5) -> Term:
    """Seeded random term generator shared by the property suites."""
    if max_depth == 0 or rng.random() < 0.3:
        return arena.gen(rng.randint(1, n_gens))
    build = arena.meet if rng.random() < 0.5 else arena.join
    width = rng.randint(2, 3)
    return build([random_term(rng, arena, n_gens, max_depth - 1)
                  for _ in range(width)])


def verify_f3_lemma(q, arena: TermArena | None = None, *,
                    embed_seed: int | None = None):
    """Run the instance verification in rank-3 mode; the instance must be
    nice, which is rejected before any chain construction."""
    from .bipartite import is_nice
    from .reduction import verify_lemma_wq

    nice = is_nice(q)
    if not nice.nice:
        raise ValueError("instance must be nice; failing conditions: "
                         + ", ".join(k for k, v in nice.conditions.items()
                                     if not v))
    if arena is None:
        arena = TermArena()
    chain = generator_chain(arena, len(q.elements))
    report = verify_lemma_wq(q, arena, mode="f3", chain=chain)
    if embed_seed is not None:
        report.embedding_samples_ok = sample_embedding_check(chain, embed_seed)
    return report


def chain_stats(chain: GeneratorChain) -> list[dict]:
    """Per-stage DAG/tree growth numbers (for the stats CLI mode)."""
    out = []
    for stage in chain.stages:
        out.append({
            "stage_size": len(stage),
            "max_tree_size": max(tree_size(t) for t in stage),
        })
    return out
