import pytest

from minspan.mina import DEFAULT_POLICY
from minspan.stats import (LENGTH_BINS, containment_stats, fallback_mentions,
                           format_containment_table, format_length_table,
                           length_stats, overlap_distinctness)
from minspan.treebank import SpanInterval

from corpus_builders import read, synthetic_corpus
from worked_trees import MANY_COMPANIES, FLIGHT_ATTENDANTS, SUSPECT_NAMES, OURS


def test_single_terminal_mention():
    docs = read([('d', 0, [('(NP (DT the) (NN cat))', [(0, 1, 0)])])])
    stats = length_stats(docs)
    assert (stats.mean_max_len, stats.mean_min_len) == (2.0, 2.0)
    assert stats.histogram_max == {'1': 0, '2': 1, '3': 0, '>=4': 0}
    assert stats.to_dict()['mean_min_len'] == 2.0


def test_empty_corpus():
    stats = length_stats([])
    assert stats.mention_count == 0 and stats.mean_max_len == 0.0
    assert stats.warnings


def test_histograms_and_fallbacks():
    docs = read([('d', 0, [(SUSPECT_NAMES, [(0, 8, 0), (0, 3, 1)]),
                           (OURS, [(0, 0, 2)])])])
    stats = length_stats(docs)
    assert stats.mention_count == 3
    assert stats.histogram_max == {'1': 1, '2': 0, '3': 0, '>=4': 2}
    # the name conjunction keeps all eight name tokens; the first name alone keeps four
    assert stats.histogram_min == {'1': 1, '2': 0, '3': 0, '>=4': 2}
    assert stats.fallback_count == 1
    assert [m.span for m in fallback_mentions(docs)] == [SpanInterval(0, 0)]
    assert 'fallbacks: 1' in format_length_table(stats)


@pytest.mark.parametrize('seed', [1, 2, 3])
def test_min_never_longer_than_max(seed):
    stats = length_stats(read(synthetic_corpus(seed)))
    assert stats.mean_min_len <= stats.mean_max_len
    assert sum(stats.histogram_max.values()) == stats.mention_count
    assert set(stats.histogram_min) == set(LENGTH_BINS)


def containment_docs():
    docs = read([('f', 0, [(MANY_COMPANIES, [(0, 6, 0)]), (FLIGHT_ATTENDANTS, [(0, 6, 1)])])])
    ann = {('f', 0, 0, SpanInterval(0, 6)): SpanInterval(0, 0),     # "many"
           ('f', 0, 1, SpanInterval(0, 6)): SpanInterval(6, 6)}     # "attendants"
    return docs, ann


def test_containment_examples():
    docs, ann = containment_docs()
    stats = containment_stats(docs, ann)
    assert stats.evaluated == 2
    assert stats.mina_contains_min_ratio == 50.0    # companies yes, attendants no
    assert stats.head_contains_min_ratio == 50.0    # companies no, attendants yes
    (miss,) = stats.mismatches
    assert miss[0].sentence_index == 1 and miss[1] == (0,)
    (head_miss,) = stats.head_mismatches
    assert head_miss[0].sentence_index == 0 and head_miss[1] == (6,)
    assert 'MINA' in format_containment_table(stats)


def test_containment_with_fallback_and_missing_annotation():
    docs = read([('o', 0, [(OURS, [(0, 0, 0)]), ('(NP (NN x))', [(0, 0, 1)])])])
    ann = {('o', 0, 0, SpanInterval(0, 0)): SpanInterval(0, 0)}
    stats = containment_stats(docs, ann)
    assert stats.evaluated == 1 and stats.mina_contains_min_ratio == 100.0
    assert any('no MIN annotation' in w for w in stats.warnings)


def test_corrupted_policy_never_contains_more():
    docs, ann = containment_docs()
    full = containment_stats(docs, ann)
    narrow = containment_stats(docs, ann, DEFAULT_POLICY.with_overrides(np_tags=['NP']))
    assert full.mina_contains_min_ratio >= narrow.mina_contains_min_ratio


CONJ = '(TOP (S (NP (NP (NNP John)) (CC and) (NP (NNP Mary))) (VP (VBD left)) (. .)))'


def test_conjunction_distinctness():
    docs = read([('c', 0, [(CONJ, [(0, 2, 0), (0, 0, 1), (2, 2, 2)])])])
    violations = overlap_distinctness(docs)
    assert not [v for v in violations if v.mode == 'mina']
    heads = [v for v in violations if v.mode == 'head']
    assert len(heads) == 1 and heads[0].tokens == (0,)


def test_disjoint_mentions_are_not_compared():
    tree = '(TOP (S (NP (NNP John)) (VP (VBD met) (NP (NNP John))) (. .)))'
    docs = read([('c', 0, [(tree, [(0, 0, 0), (2, 2, 0)])])])
    assert overlap_distinctness(docs) == []
    assert overlap_distinctness(read([('c', 0, [(tree, [])])])) == []
