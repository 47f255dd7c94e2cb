"""Collins-style head words, the single-token baseline for minimum spans.

Noun phrases use the NP rule list; other phrases take their last
non-punctuation token unless a head table is supplied.
"""
import enum
from collections import defaultdict
from dataclasses import dataclass

from .errors import EmptyTree, MinspanError
from .mina import DEFAULT_POLICY, PUNCTUATION_POS

__all__ = ['HeadRule', 'HeadResult', 'HeadTable', 'collins_np_head',
           'head_span', 'load_head_table']


class HeadRule(enum.Enum):
    LAST_WORD_POS = 'LastWordPOS'
    RIGHT_NN = 'RightNN'
    LEFT_NP = 'LeftNP'
    RIGHT_ADJ = 'RightAdj'
    RIGHT_CD = 'RightCD'
    RIGHT_JJ = 'RightJJ'
    LAST_WORD = 'LastWord'
    NON_NP_FALLBACK = 'NonNPFallback'
    HEAD_TABLE = 'HeadTable'


@dataclass(frozen=True)
class HeadResult:
    token_index: int
    rule_fired: HeadRule


# (rule, search from the right?, tags)
_NP_RULES = (
    (HeadRule.RIGHT_NN, True, frozenset({'NN', 'NNP', 'NNPS', 'NNS', 'NX', 'POS', 'JJR'})),
    (HeadRule.LEFT_NP, False, frozenset({'NP'})),
    (HeadRule.RIGHT_ADJ, True, frozenset({'$', 'ADJP', 'PRN'})),
    (HeadRule.RIGHT_CD, True, frozenset({'CD'})),
    (HeadRule.RIGHT_JJ, True, frozenset({'JJ', 'JJS', 'RB', 'QP'})),
)


class HeadTable:
    """Per-label head rules for non-NP phrases.

    Text format, one rule per line: ``TAG;left|right;TAG1,TAG2,...``. Several
    lines for one tag are tried in file order.
    """

    def __init__(self, rules=None):
        self.rules = defaultdict(list)
        for label, direction, tags in rules or ():
            self.add(label, direction, tags)

    def add(self, label, direction, tags):
        if direction not in ('left', 'right'):
            raise MinspanError(f'head table direction must be left or right, not {direction!r}')
        self.rules[label].append((direction == 'right', frozenset(tags)))

    def __contains__(self, label):
        return label in self.rules

    def pick(self, node):
        for from_right, tags in self.rules.get(node.label, ()):
            children = reversed(node.children) if from_right else node.children
            for child in children:
                if child.label in tags:
                    return child
        return None


def load_head_table(lines):
    if isinstance(lines, str):
        lines = lines.splitlines()
    table = HeadTable()
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        parts = line.split(';')
        if len(parts) != 3:
            raise MinspanError(f'head table line {lineno}: expected TAG;dir;TAGS')
        label, direction, tags = (p.strip() for p in parts)
        table.add(label, direction, [t.strip() for t in tags.split(',') if t.strip()])
    return table


def _last_content_token(node):
    pairs = node.preterminals()
    for pos, leaf in reversed(pairs):
        if pos not in PUNCTUATION_POS:
            return leaf.token_index
    return pairs[-1][1].token_index


def _np_pick(node):
    """Child chosen by the NP rules, or a token index for the word-level rules."""
    pairs = node.preterminals()
    if pairs[-1][0] == 'POS':
        return HeadRule.LAST_WORD_POS, pairs[-1][1].token_index
    for rule, from_right, tags in _NP_RULES:
        children = reversed(node.children) if from_right else node.children
        for child in children:
            if child.label in tags:
                return rule, child
    return HeadRule.LAST_WORD, pairs[-1][1].token_index


def _descend(node, policy, table, first_rule=None):
    rule = first_rule
    while True:
        if node.is_leaf:
            return HeadResult(node.token_index, rule)
        if node.is_preterminal:
            return HeadResult(node.children[0].token_index, rule)
        if node.label in policy.np_tags:
            fired, picked = _np_pick(node)
        elif table is not None and node.label in table:
            picked = table.pick(node)
            fired = HeadRule.HEAD_TABLE
            if picked is None:
                fired, picked = HeadRule.NON_NP_FALLBACK, _last_content_token(node)
        else:
            fired, picked = HeadRule.NON_NP_FALLBACK, _last_content_token(node)
        if rule is None:
            rule = fired
        if isinstance(picked, int):
            return HeadResult(picked, rule)
        node = picked


def collins_np_head(node, policy=DEFAULT_POLICY, table=None):
    """Head token of a noun phrase; constituents picked by a rule are
    descended into until one token remains."""
    if node is None:
        raise EmptyTree('no tree')
    if node.is_leaf or node.is_preterminal:
        return _descend(node, policy, table, HeadRule.LAST_WORD)
    return _descend(node, policy, table)


def head_span(mention_tree, policy=DEFAULT_POLICY, table=None):
    """Head of a mention subtree (which may be a dummy root)."""
    if mention_tree is None:
        raise EmptyTree('no tree')
    if mention_tree.label in policy.np_tags:
        return collins_np_head(mention_tree, policy, table)
    if table is not None and mention_tree.label in table:
        return _descend(mention_tree, policy, table)
    return HeadResult(_last_content_token(mention_tree), HeadRule.NON_NP_FALLBACK)
