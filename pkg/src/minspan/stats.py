"""Corpus statistics over extracted minimum spans.

Span lengths (maximum vs. minimum), agreement with manually annotated MIN
spans, and a check that overlapping mentions keep distinct minimum spans.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from .metrics import MatchingMode, SpanProjector, round_half_up
from .mina import DEFAULT_POLICY

logger = logging.getLogger(__name__)

__all__ = ['LengthStats', 'ContainmentStats', 'Violation', 'length_stats',
           'containment_stats', 'overlap_distinctness', 'fallback_mentions',
           'LENGTH_BINS', 'format_length_table', 'format_containment_table']

LENGTH_BINS = ('1', '2', '3', '>=4')


def _bin(length):
    return LENGTH_BINS[min(length, 4) - 1]


@dataclass
class LengthStats:
    mean_max_len: float
    mean_min_len: float
    histogram_max: dict
    histogram_min: dict
    mention_count: int
    fallback_count: int = 0
    warnings: list = field(default_factory=list)

    def to_dict(self):
        return {
            'mentions': self.mention_count,
            'mean_max_len': round_half_up(self.mean_max_len, 1),
            'mean_min_len': round_half_up(self.mean_min_len, 1),
            'mean_max_len_exact': self.mean_max_len,
            'mean_min_len_exact': self.mean_min_len,
            'histogram_max': dict(self.histogram_max),
            'histogram_min': dict(self.histogram_min),
            'fallbacks': self.fallback_count,
        }


@dataclass
class ContainmentStats:
    mina_contains_min_ratio: float
    head_contains_min_ratio: float
    evaluated: int
    mismatches: list = field(default_factory=list)
    head_mismatches: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_dict(self):
        return {
            'evaluated': self.evaluated,
            'mina_contains_min': round_half_up(self.mina_contains_min_ratio, 1),
            'head_contains_min': round_half_up(self.head_contains_min_ratio, 1),
            'mina_mismatches': len(self.mismatches),
            'head_mismatches': len(self.head_mismatches),
        }


@dataclass(frozen=True)
class Violation:
    mode: str
    first: object
    second: object
    tokens: tuple


def _key_mentions(docs):
    for doc in sorted(docs, key=lambda d: d.key):
        yield from doc.mentions()


def length_stats(docs, policy=DEFAULT_POLICY, projector=None):
    """Mean lengths and length histograms of maximum and minimum spans, in tokens."""
    projector = projector or SpanProjector(docs, policy)
    hist_max = dict.fromkeys(LENGTH_BINS, 0)
    hist_min = dict.fromkeys(LENGTH_BINS, 0)
    total_max = total_min = count = fallbacks = 0
    seen = set()
    for m in _key_mentions(docs):
        if m.location in seen:
            continue
        seen.add(m.location)
        result = projector.min_span(m)
        n_max, n_min = len(m.span), len(result.token_indices)
        total_max += n_max
        total_min += n_min
        hist_max[_bin(n_max)] += 1
        hist_min[_bin(n_min)] += 1
        fallbacks += result.used_fallback
        count += 1
    warnings = []
    if not count:
        warnings.append('no mentions; mean lengths reported as 0')
        for w in warnings:
            logger.warning(w)
        return LengthStats(0.0, 0.0, hist_max, hist_min, 0, 0, warnings)
    return LengthStats(total_max / count, total_min / count, hist_max, hist_min,
                       count, fallbacks, warnings)


def fallback_mentions(docs, policy=DEFAULT_POLICY, projector=None):
    """Key mentions whose minimum span fell back to the whole mention."""
    projector = projector or SpanProjector(docs, policy)
    return [m for m in _key_mentions(docs) if projector.min_span(m).used_fallback]


def containment_stats(docs, min_annotations, policy=DEFAULT_POLICY, head_table=None,
                      projector=None):
    """Share of mentions whose minimum span (or head) contains the annotated MIN.

    ``min_annotations`` maps ``(doc_id, part, sentence, max span)`` to the MIN
    span. Mentions without an annotation are left out of the ratios.
    """
    projector = projector or SpanProjector(docs, policy, head_table=head_table)
    warnings = []
    mismatches, head_mismatches = [], []
    evaluated = mina_hits = head_hits = 0
    used = set()
    seen = set()
    for m in _key_mentions(docs):
        if m.location in seen:
            continue
        seen.add(m.location)
        min_span = min_annotations.get(m.location)
        if min_span is None:
            warnings.append(f'no MIN annotation for {m}; excluded')
            continue
        used.add(m.location)
        wanted = set(min_span.indices())
        mina = set(projector.min_span(m).token_indices)
        head = {projector.head(m).token_index}
        evaluated += 1
        if wanted <= mina:
            mina_hits += 1
        else:
            mismatches.append((m, tuple(sorted(mina)), min_span))
        if wanted <= head:
            head_hits += 1
        else:
            head_mismatches.append((m, tuple(head), min_span))
    doc_keys = {d.key for d in docs}
    for key in sorted(set(min_annotations) - used):
        if key[:2] in doc_keys:
            warnings.append(f'MIN annotation {key} matches no mention')
    for w in warnings:
        logger.warning(w)
    if not evaluated:
        return ContainmentStats(0.0, 0.0, 0, warnings=warnings)
    return ContainmentStats(100 * mina_hits / evaluated, 100 * head_hits / evaluated,
                            evaluated, mismatches, head_mismatches, warnings)


def overlap_distinctness(docs, policy=DEFAULT_POLICY, head_table=None, projector=None):
    """Pairs of distinct, overlapping mentions that share a minimum span or a head.

    Returns violations for both modes; ``Violation.mode`` is ``'mina'`` or ``'head'``.
    """
    projector = projector or SpanProjector(docs, policy, head_table=head_table)
    by_sentence = defaultdict(dict)
    for m in _key_mentions(docs):
        by_sentence[(m.doc_id, m.part, m.sentence_index)].setdefault(m.span, m)
    violations = []
    for key in sorted(by_sentence):
        mentions = sorted(by_sentence[key].values(), key=lambda m: m.span)
        for a, b in combinations(mentions, 2):
            if not a.span.overlaps(b.span):
                continue
            for mode in (MatchingMode.MINA_SPAN, MatchingMode.HEAD_WORD):
                ia, ib = projector.identity(a, mode), projector.identity(b, mode)
                if ia == ib:
                    violations.append(Violation(mode.value, a, b, ia.tokens))
    return violations


def format_length_table(stats):
    lines = [f'{"":<14}{"mean":>8}' + ''.join(f'{b:>8}' for b in LENGTH_BINS)]
    for label, mean, hist in (('maximum span', stats.mean_max_len, stats.histogram_max),
                              ('MINA span', stats.mean_min_len, stats.histogram_min)):
        lines.append(f'{label:<14}{round_half_up(mean, 1):>8.1f}'
                     + ''.join(f'{hist[b]:>8}' for b in LENGTH_BINS))
    lines.append(f'mentions: {stats.mention_count}   fallbacks: {stats.fallback_count}')
    return '\n'.join(lines) + '\n'


def format_containment_table(stats):
    return (f'{"":<8}{"contains MIN (%)":>18}\n'
            f'{"MINA":<8}{round_half_up(stats.mina_contains_min_ratio, 1):>18.1f}\n'
            f'{"head":<8}{round_half_up(stats.head_contains_min_ratio, 1):>18.1f}\n'
            f'evaluated mentions: {stats.evaluated}\n')
