"""Minimum-span extraction and minimum-span coreference evaluation."""

__version__ = '0.1.0'

from .treebank import (ParseNode, SpanInterval, emit_bracketed,  # noqa: E402
                       parse_bracketed, subtree_span)
from .conll import (Document, Mention, Sentence, Token, read_conll,  # noqa: E402
                    read_min_sidecar, write_conll)
from .mina import (DEFAULT_POLICY, STRICT_POLICY, MinSpanResult,  # noqa: E402
                   TagPolicy, extract_min_span, mention_subtree,
                   min_spans_for_document)
from .heads import HeadResult, HeadRule, collins_np_head, head_span  # noqa: E402
from .metrics import (MatchingMode, ScoreReport, SpanIdentity,  # noqa: E402
                      b3_score, ceafe_score, lea_score, muc_score,
                      project_identities, score_all, score_modes)
from .stats import (containment_stats, length_stats,  # noqa: E402
                    overlap_distinctness)
from .compare import compare_boundaries  # noqa: E402
