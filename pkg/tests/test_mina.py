import random

import pytest
from hypothesis import given, settings, strategies as st

from minspan.errors import SpanOutOfBounds
from minspan.mina import (DEFAULT_POLICY, DUMMY_LABEL, STRICT_POLICY, TagPolicy,
                          extract_min_span, induced_subtree, mention_subtree,
                          min_spans_for_document)
from minspan.treebank import ParseNode, SpanInterval, emit_bracketed, parse_bracketed

from corpus_builders import random_tree, read
from worked_trees import (PRESENCE_SENTENCE, DEVELOPMENT_ZONE, GOLDEN_MINA, PRESENCE_GOLD, PRESENCE_SYS)


def words(tree, result):
    leaves = tree.leaves()
    by_index = {l.token_index: l.token for l in leaves}
    return [by_index[i] for i in result.token_indices]


# -- a declarative reference implementation ------------------------------------
#
# A constituent is searched iff its label is in the tag set T fixed by the first
# NP/VP constituent in level order, it comes no earlier than that node, and each
# of its ancestors either precedes that node (a pass-through) or is itself a
# searched, non-terminal T constituent.

def _is_token(node):
    return node.is_leaf or node.is_preterminal


def _level_order(tree):
    """(node, depth, ancestors) for every constituent, in level order."""
    out = []
    level = [(tree, 0, ())]
    while level:
        nxt = []
        for node, depth, anc in level:
            if _is_token(node):
                continue
            out.append((node, depth, anc))
            nxt.extend((c, depth + 1, anc + (node,)) for c in node.children)
        level = nxt
    return out


def _ok(node, policy):
    if node.is_leaf:
        return True
    return any(pos is None or pos not in policy.excluded_pos
               for pos, _ in node.preterminals())


def reference_min_span(tree, policy):
    order = _level_order(tree)
    index = {id(n): i for i, (n, _, _) in enumerate(order)}
    first = next((i for i, (n, _, _) in enumerate(order)
                  if n.label in policy.np_tags or n.label in policy.vp_tags), None)
    units = []
    if first is not None:
        label = order[first][0].label
        tags = policy.np_tags if label in policy.np_tags else policy.vp_tags

        def terminal(n):
            return all(_is_token(c) for c in n.children)

        for node, depth, anc in order:
            if node.label not in tags or index[id(node)] < first:
                continue
            if not all(index[id(a)] < first or (a.label in tags and not terminal(a))
                       for a in anc):
                continue
            if terminal(node):
                d = min(depth + (1 if c.is_leaf else 2) for c in node.children)
                units.append((d, node))
            else:
                units.extend((depth + (1 if c.is_leaf else 2), c)
                             for c in node.children if _is_token(c))
    units = [(d, n) for d, n in units if _ok(n, policy)]
    if not units:
        return sorted(l.token_index for l in tree.leaves()), True
    best = min(d for d, _ in units)
    return sorted({l.token_index for d, n in units if d == best for l in n.leaves()}), False


def leaf_depths(tree):
    depths = {}
    stack = [(tree, 0)]
    while stack:
        node, d = stack.pop()
        if node.is_leaf:
            depths[node.token_index] = d
        stack.extend((c, d + 1) for c in node.children)
    return depths


def root_paths(tree):
    """token index -> labels of the constituents above its preterminal."""
    paths = {}
    stack = [(tree, ())]
    while stack:
        node, path = stack.pop()
        if node.is_leaf:
            paths[node.token_index] = path
        elif node.is_preterminal:
            paths[node.children[0].token_index] = path
        else:
            stack.extend((c, path + (node.label,)) for c in node.children)
    return paths


def check_invariants(tree, policy=DEFAULT_POLICY):
    result = extract_min_span(tree, policy)
    indices = set(result.token_indices)
    all_indices = {l.token_index for l in tree.leaves()}
    assert indices and indices <= all_indices
    expected, fallback = reference_min_span(tree, policy)
    assert list(result.token_indices) == expected
    assert result.used_fallback == fallback
    if fallback:
        assert indices == all_indices
        return result
    # every unit sits at the same (minimum) token depth
    depths = leaf_depths(tree)
    for _, span in result.units:
        assert min(depths[i] for i in span.indices() if i in indices) == result.depth
    # opacity: below the pass-through prefix, every constituent is in the tag set
    tags = policy.np_tags | policy.vp_tags
    paths = root_paths(tree)
    for i in indices:
        path = paths[i]
        k = next(j for j, label in enumerate(path) if label in tags)
        group = policy.np_tags if path[k] in policy.np_tags else policy.vp_tags
        assert all(label in group for label in path[k:])
    # idempotence on the subtree induced by the result; only for trees with a
    # preterminal over every word, since pruning can turn "(QP w (JJ x))" into
    # "(QP w)", which reads as a preterminal
    if all(pos is not None for pos, _ in tree.preterminals()):
        again = extract_min_span(induced_subtree(tree, indices), policy)
        assert set(again.token_indices) == indices
    return result


# -- worked examples ----------------------------------------------------------

@pytest.mark.parametrize('name', sorted(GOLDEN_MINA))
def test_golden_trees(name):
    text, expected, fallback = GOLDEN_MINA[name]
    tree = parse_bracketed(text)
    result = extract_min_span(tree)
    assert words(tree, result) == expected
    assert result.used_fallback is fallback
    check_invariants(tree)


def test_development_zone_excludes_deeper_units():
    tree = parse_bracketed(DEVELOPMENT_ZONE)
    result = extract_min_span(tree)
    assert result.token_indices == (2, 7)
    assert result.depth == 2


def test_presence_gold_and_system_boundaries():
    tree = parse_bracketed(PRESENCE_SENTENCE)
    gold = mention_subtree(tree, SpanInterval(*PRESENCE_GOLD))
    assert gold.label == 'NP' and gold is tree.children[0].children[1].children[1]
    system = mention_subtree(tree, SpanInterval(*PRESENCE_SYS))
    assert system.label == DUMMY_LABEL
    assert [c.label for c in system.children] == ['NP', ',', 'PP', 'PP']
    for sub in (gold, system):
        assert extract_min_span(sub).token_indices == (4, 5, 6)


def test_span_out_of_bounds():
    tree = parse_bracketed(PRESENCE_SENTENCE)
    with pytest.raises(SpanOutOfBounds):
        mention_subtree(tree, SpanInterval(10, 20))


def test_single_terminal_np_is_not_split():
    tree = parse_bracketed('(NP (DT the) (NN cat))')
    assert extract_min_span(tree).token_indices == (0, 1)


def test_determiner_only_unit_is_skipped():
    tree = parse_bracketed('(NP (NP (DT all)) (PP (IN of) (NP (PRP them))))')
    result = extract_min_span(tree)
    assert result.used_fallback
    tree = parse_bracketed('(NP (DT all) (NP (NNS people)))')
    assert words(tree, extract_min_span(tree)) == ['people']


def test_pp_is_opaque():
    tree = parse_bracketed('(NP (NP (NNS copies)) (PP (IN of) (NP (NN it))))')
    assert words(tree, extract_min_span(tree)) == ['copies']


def test_verb_phrase_tag_set():
    tree = parse_bracketed('(VP (VBD said) (NP (PRP it)))')
    assert words(tree, extract_min_span(tree)) == ['said']
    tree = parse_bracketed('(SBAR (IN that) (S (VP (VBD left))))')
    assert words(tree, extract_min_span(tree)) == ['left']


def test_bare_leaves():
    tree = parse_bracketed('(NP (NP a copy) (PP of (NP it)))')
    assert words(tree, extract_min_span(tree)) == ['a', 'copy']


def test_strict_policy_keeps_quotes():
    tree = parse_bracketed("(NP (`` ``) (NP (NNP Investment) (NNP Canada)) ('' ''))")
    assert words(tree, extract_min_span(tree)) == ['Investment', 'Canada']
    assert words(tree, extract_min_span(tree, STRICT_POLICY)) == ['``', "''"]


def test_tag_policy_validation():
    with pytest.raises(ValueError):
        TagPolicy(np_tags={'NML'})
    with pytest.raises(ValueError):
        DEFAULT_POLICY.with_overrides(excluded_pos=['DT'])
    narrow = DEFAULT_POLICY.with_overrides(np_tags=['NP'])
    assert narrow.np_tags == frozenset({'NP'})
    assert STRICT_POLICY.excluded_pos == frozenset({'DT', 'CC'})


def test_corrupted_policy_drops_nested_tags():
    tree = parse_bracketed(DEVELOPMENT_ZONE)
    narrow = DEFAULT_POLICY.with_overrides(np_tags=['NP'])
    assert words(tree, extract_min_span(tree, narrow)) == ['new', 'zone']
    check_invariants(tree, narrow)


def test_min_spans_for_document(example_key):
    (doc,) = example_key
    results = min_spans_for_document(doc, doc.mentions())
    texts = {doc.mention_text(m): [doc.sentences[m.sentence_index].words[i]
                                   for i in r.token_indices]
             for m, r in results.items()}
    assert texts['an extensive presence'] == ['an', 'extensive', 'presence']
    assert texts['That presence'] == ['That', 'presence']


def test_missing_parse_is_reported():
    from minspan.errors import MissingParse
    (doc,) = read([('d', 0, [('(TOP (NP (NN x)))', [(0, 0, 0)])])])
    (m,) = doc.mentions()
    stripped = type(doc)(doc.doc_id, doc.part,
                         tuple(type(s)(s.tokens, None) for s in doc.sentences),
                         doc.chains)
    with pytest.raises(MissingParse):
        min_spans_for_document(stripped, [m])


def test_induced_subtree_prunes():
    tree = parse_bracketed(PRESENCE_SENTENCE)
    sub = induced_subtree(tree, {4, 5, 6})
    assert emit_bracketed(sub) == \
        '(TOP (S (VP (NP (NP (DT an) (JJ extensive) (NN presence))))))'


def test_deep_mention_tree():
    depth = 1000
    tree = ParseNode.preterminal('NN', 'x', 0)
    for _ in range(depth):
        tree = ParseNode('NP', [tree])
    assert extract_min_span(tree).token_indices == (0,)


# -- properties ---------------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(seed=st.integers(0, 2**32 - 1),
       policy=st.sampled_from([DEFAULT_POLICY, STRICT_POLICY]))
def test_random_trees_whole(seed, policy):
    check_invariants(random_tree(random.Random(seed), 40), policy)


@settings(max_examples=300, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), data=st.data())
def test_random_mention_spans(seed, data):
    tree = random_tree(random.Random(seed), 40, bare_leaf_rate=0.1)
    n = len(tree.leaves())
    start = data.draw(st.integers(0, n - 1))
    end = data.draw(st.integers(start, n - 1))
    sub = mention_subtree(tree, SpanInterval(start, end))
    assert sub.span == SpanInterval(start, end)
    result = check_invariants(sub)
    assert set(result.token_indices) <= set(range(start, end + 1))
