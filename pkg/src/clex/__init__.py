"""Domain-consistent propagators for a lex ordering combined with row constraints."""

from .basic import (filter_among, filter_lex, lex_le, post_among, post_atleast, post_lex,
                    post_sequence_decomposed, post_ternary_sum, propagate_lex)
from .clex_generic import (ConstraintAdapter, c_max, c_min, clex_lb, clex_ub, filter_clex,
                           post_clex, propagate_clex, regular_adapter, sequence_adapter,
                           sum_row_adapter, true_adapter)
from .clex_regular import (build_product_dfa, clex_lb_regular, clex_ub_regular,
                           filter_clex_regular, lex_dfa, mark_consistent_arcs,
                           post_clex_regular, post_clex_regular_product,
                           product_state_bound)
from .clex_sequence import (channel_multivalued, filter_clex_sequence, post_clex_sequence,
                            propagate_clex_sequence)
from .engine import (BranchingOrder, Domain, Limits, Model, Outcome, Search, SearchStats,
                     Status, count_solutions, propagate_to_fixpoint, solve)
from .regular import (Dfa, DfaFormatError, LayeredGraph, build_layered_graph, filter_regular,
                      post_regular, propagate_regular, regular_max, regular_min)
from .sequence import (SequenceSpec, build_sequence_dfa, check_consistency_max,
                       check_consistency_min)

__version__ = "0.1.0"
