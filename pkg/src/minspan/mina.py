"""Minimum span extraction over constituency trees.

A mention's parse subtree is walked breadth first. The first noun- or
verb-phrase tag met fixes the set of tags the walk may descend into; any
constituent outside that set (PP, SBAR, ...) is opaque. Candidate units are
terminal constituents (dominating preterminals only, never split) and the
preterminal children of mixed constituents. A unit counts if it has a token
whose POS is not excluded (determiners, conjunctions, punctuation). The units
whose tokens sit closest to the root form the minimum span; when none exists
the whole mention is used.

>>> from minspan.treebank import parse_bracketed
>>> tree = parse_bracketed('(NP (NP (DT a) (NN copy)) (PP (IN of) (NP (DT the) (NN statement))))')
>>> extract_min_span(tree).token_indices
(0, 1)
"""
from collections import deque
from dataclasses import dataclass, field, replace

from .errors import MissingParse, SpanOutOfBounds
from .treebank import ParseNode, SpanInterval

__all__ = ['TagPolicy', 'MinSpanResult', 'DEFAULT_POLICY', 'STRICT_POLICY',
           'PUNCTUATION_POS', 'mention_subtree', 'extract_min_span',
           'min_spans_for_document', 'induced_subtree', 'DUMMY_LABEL']

DUMMY_LABEL = 'X'

PUNCTUATION_POS = frozenset({',', '.', ':', '``', "''", '-LRB-', '-RRB-', 'HYPH'})


@dataclass(frozen=True)
class TagPolicy:
    np_tags: frozenset = frozenset({'NP', 'NML', 'QP', 'NX'})
    vp_tags: frozenset = frozenset({'VP'})
    excluded_pos: frozenset = frozenset({'DT', 'CC'}) | PUNCTUATION_POS

    def __post_init__(self):
        for name in ('np_tags', 'vp_tags', 'excluded_pos'):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if 'NP' not in self.np_tags:
            raise ValueError('np_tags must contain NP')
        if 'VP' not in self.vp_tags:
            raise ValueError('vp_tags must contain VP')
        if not {'DT', 'CC'} <= self.excluded_pos:
            raise ValueError('excluded_pos must contain DT and CC')

    @classmethod
    def strict_paper(cls, **overrides):
        """Only determiners and conjunctions are excluded; punctuation counts."""
        return cls(excluded_pos=frozenset({'DT', 'CC'}), **overrides)

    def tag_set_for(self, label):
        if label in self.np_tags:
            return self.np_tags
        if label in self.vp_tags:
            return self.vp_tags
        return None

    def with_overrides(self, np_tags=None, vp_tags=None, excluded_pos=None):
        changes = {k: frozenset(v) for k, v in (('np_tags', np_tags),
                                                  ('vp_tags', vp_tags),
                                                  ('excluded_pos', excluded_pos))
                   if v is not None}
        return replace(self, **changes)


DEFAULT_POLICY = TagPolicy()
STRICT_POLICY = TagPolicy.strict_paper()


@dataclass(frozen=True)
class MinSpanResult:
    token_indices: tuple
    used_fallback: bool = False
    units: tuple = field(default=(), compare=False)
    depth: int = None

    def __len__(self):
        return len(self.token_indices)

    def as_set(self):
        return frozenset(self.token_indices)


def _is_token_node(node):
    return node.is_leaf or node.is_preterminal


def _pos_of(node):
    return node.label if node.is_preterminal else None


def mention_subtree(sentence_tree, span):
    """The constituent spanning exactly ``span``, or a dummy ``X`` node over
    the largest constituents that tile it."""
    root_span = sentence_tree.span
    if not root_span.contains(span):
        raise SpanOutOfBounds(span)
    node = sentence_tree
    # descend to the highest node with an exact match, if any
    while True:
        if node.span == span:
            return node
        inside = [c for c in node.children if c.span.contains(span)]
        if not inside:
            break
        node = inside[0]
    tiles = []
    stack = [node]
    while stack:
        current = stack.pop()
        cspan = current.span
        if span.contains(cspan):
            tiles.append(current)
        elif cspan.overlaps(span):
            stack.extend(reversed(current.children))
    return ParseNode(DUMMY_LABEL, tiles)


def _candidate_units(mention_tree, policy):
    """Yield ``(token depth, node, is_terminal_constituent)`` for every unit
    reachable under the tag-set rules, in breadth-first order."""
    tags = None
    queue = deque([(mention_tree, 0)])
    while queue:
        node, depth = queue.popleft()
        if _is_token_node(node):
            continue
        if tags is None:
            tags = policy.tag_set_for(node.label)
            if tags is None:
                queue.extend((child, depth + 1) for child in node.children)
                continue
        if node.label not in tags:
            continue
        if all(_is_token_node(child) for child in node.children):
            token_depth = min(depth + (1 if child.is_leaf else 2)
                              for child in node.children)
            yield token_depth, node, True
            continue
        for child in node.children:
            if child.is_leaf:
                yield depth + 1, child, False
            elif child.is_preterminal:
                yield depth + 2, child, False
            else:
                queue.append((child, depth + 1))


def _acceptable(node, policy):
    if node.is_leaf:
        return True
    if node.is_preterminal:
        return node.label not in policy.excluded_pos
    return any(pos is None or pos not in policy.excluded_pos
               for pos, _ in node.preterminals())


def extract_min_span(mention_tree, policy=DEFAULT_POLICY):
    """Minimum span of a mention given its parse subtree."""
    best_depth = None
    chosen = []
    for depth, node, _ in _candidate_units(mention_tree, policy):
        if not _acceptable(node, policy):
            continue
        if best_depth is None or depth < best_depth:
            best_depth = depth
            chosen = [node]
        elif depth == best_depth:
            chosen.append(node)
    if not chosen:
        indices = tuple(leaf.token_index for leaf in mention_tree.leaves())
        return MinSpanResult(indices, used_fallback=True,
                             units=((mention_tree.label, mention_tree.span),))
    indices = sorted({leaf.token_index for node in chosen for leaf in node.leaves()})
    units = tuple(sorted(((n.label if not n.is_leaf else '', n.span) for n in chosen),
                         key=lambda u: u[1]))
    return MinSpanResult(tuple(indices), used_fallback=False, units=units,
                         depth=best_depth)


def induced_subtree(tree, indices):
    """Copy of ``tree`` keeping only leaves whose index is in ``indices``;
    constituents left without leaves disappear."""
    keep = set(indices)
    built = {}
    stack = [(tree, False)]
    while stack:
        node, done = stack.pop()
        if node.is_leaf:
            built[id(node)] = node if node.token_index in keep else None
            continue
        if not done:
            stack.append((node, True))
            stack.extend((child, False) for child in node.children)
            continue
        children = [built[id(c)] for c in node.children if built[id(c)] is not None]
        built[id(node)] = (ParseNode(node.raw_label, children) if children else None)
    return built[id(tree)]


def min_spans_for_document(doc, mentions, policy=DEFAULT_POLICY):
    """Map each mention to its :class:`MinSpanResult`, using ``doc``'s trees."""
    results = {}
    for mention in mentions:
        results[mention] = _min_span_for(doc, mention.sentence_index,
                                         mention.span, policy, mention)
    return results


def _min_span_for(doc, sentence_index, span, policy, mention=None):
    if not 0 <= sentence_index < len(doc.sentences):
        raise SpanOutOfBounds(mention or (sentence_index, span))
    sentence = doc.sentences[sentence_index]
    if span.end >= len(sentence) or span.start < 0:
        raise SpanOutOfBounds(mention or (sentence_index, span))
    if sentence.tree is None:
        raise MissingParse(f'{doc.doc_id} part {doc.part} sentence {sentence_index} '
                           'has no parse tree; supply parsed key input')
    return extract_min_span(mention_subtree(sentence.tree, span), policy)
