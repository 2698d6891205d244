"""Free-lattice computation kernel.

Terms over generators x1, x2, ... with variadic meets and joins are interned
into a per-session DAG; on top of that sit the order decision procedure,
canonical forms, join covers and the neighbour-set analysis, finite
bipartite structures with a brute-force sentence evaluator, the poset
embedding pipeline, and the rank-3 embedding chain.
"""

from .bipartite import (AESentence, BipartiteStructure, FinitePoset, Literal,
                        eval_ae_sentence, graph_to_poset, is_nice,
                        parse_sentence, parse_structure, poset_from_terms,
                        poset_to_graph, serialize_sentence,
                        serialize_structure)
from .canonical import (CanonicalTerm, canonical_joinands, canonicalize,
                        is_canonical, is_join_irreducible)
from .covers import (PsiReport, UnsupportedShape, doubly_minimal_join_covers,
                     e_set, psi_check, refines)
from .embed import (ChainError, GeneratorChain, f_poly, generator_chain,
                    verify_f3_lemma, zeta)
from .order import equiv, is_independent, leq
from .reduction import (EmptyJoinError, ReductionReport, build_wq,
                        emit_phi_star, translate_phi_star,
                        verify_counterexample, verify_lemma_wq, xi_embed)
from .terms import (ParseError, RawTerm, Term, TermArena, TermError,
                    parse_raw, parse_term, print_term, substitute, tree_size,
                    variables)

__version__ = "0.1.0"
