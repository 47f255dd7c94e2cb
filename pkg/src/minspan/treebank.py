"""Constituency trees and the single-line bracketed (Penn Treebank) format.

Trees are immutable. All traversals are iterative, so arbitrarily deep trees
never hit the interpreter's recursion limit.

>>> tree = parse_bracketed('(NP (DT a) (NN copy))')
>>> tree.label, [leaf.token for leaf in tree.leaves()]
('NP', ['a', 'copy'])
>>> subtree_span(tree)
SpanInterval(start=0, end=1)
>>> emit_bracketed(tree)
'(NP (DT a) (NN copy))'
"""
import re
from collections import deque
from dataclasses import dataclass

from .errors import (EmptyConstituent, EmptyTree, TrailingGarbage,
                     UnbalancedBrackets)

__all__ = ['ParseNode', 'SpanInterval', 'parse_bracketed', 'emit_bracketed',
           'subtree_span', 'base_label', 'iter_bfs', 'node_depth']


@dataclass(frozen=True, order=True)
class SpanInterval:
    """Inclusive token interval ``[start, end]`` within one sentence."""
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f'span start {self.start} after end {self.end}')

    def __len__(self):
        return self.end - self.start + 1

    def __contains__(self, index):
        return self.start <= index <= self.end

    def indices(self):
        return range(self.start, self.end + 1)

    def contains(self, other):
        return self.start <= other.start and other.end <= self.end

    def overlaps(self, other):
        return self.start <= other.end and other.start <= self.end

    def __str__(self):
        return f'{self.start}-{self.end}'

    @classmethod
    def parse(cls, text):
        """Read the ``start-end`` notation used in TSV files."""
        start, sep, end = text.strip().partition('-')
        if not sep:
            return cls(int(start), int(start))
        return cls(int(start), int(end))


def base_label(label):
    """Strip functional tags and indices: ``NP-SBJ-1`` -> ``NP``, ``S=2`` -> ``S``.

    Labels starting with a dash (``-NONE-``, ``-LRB-``) are left untouched.
    """
    if not label or label[0] == '-':
        return label
    match = re.match(r'[^-=]+', label)
    return match.group() if match else label


class ParseNode:
    """A node of a constituency tree.

    A leaf carries ``token`` and ``token_index`` and has no children; every
    other node carries a label and at least one child. ``label`` is the base
    tag used by the algorithms, ``raw_label`` the tag as read (with any
    functional suffix), which is what gets emitted.
    """
    __slots__ = ('label', 'raw_label', 'children', 'token', 'token_index',
                 '_span', '_hash')

    def __init__(self, label, children=(), raw_label=None):
        children = tuple(children)
        if not children:
            raise EmptyConstituent(-1)
        raw = label if raw_label is None else raw_label
        object.__setattr__(self, 'raw_label', raw)
        object.__setattr__(self, 'label', base_label(label))
        object.__setattr__(self, 'children', children)
        object.__setattr__(self, 'token', None)
        object.__setattr__(self, 'token_index', None)
        object.__setattr__(self, '_span', None)
        object.__setattr__(self, '_hash', None)

    @classmethod
    def leaf(cls, token, token_index):
        node = object.__new__(cls)
        for name, value in (('label', ''), ('raw_label', ''), ('children', ()),
                            ('token', token), ('token_index', token_index),
                            ('_span', None), ('_hash', None)):
            object.__setattr__(node, name, value)
        return node

    @classmethod
    def preterminal(cls, pos, token, token_index):
        return cls(pos, (cls.leaf(token, token_index),))

    def __setattr__(self, name, value):
        raise AttributeError('ParseNode is immutable')

    @property
    def is_leaf(self):
        return self.token is not None

    @property
    def is_preterminal(self):
        return len(self.children) == 1 and self.children[0].is_leaf

    def leaves(self):
        """Word leaves in surface order."""
        result = []
        stack = [self]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                result.append(node)
            else:
                stack.extend(reversed(node.children))
        return result

    def preterminals(self):
        """``(pos, leaf)`` pairs in surface order; ``pos`` is None for bare leaves."""
        result = []
        stack = [(self, None)]
        while stack:
            node, parent = stack.pop()
            if node.is_leaf:
                pos = parent.label if parent is not None and parent.is_preterminal else None
                result.append((pos, node))
            else:
                stack.extend((child, node) for child in reversed(node.children))
        return result

    @property
    def span(self):
        if self._span is None:
            first = last = self
            while not first.is_leaf:
                first = first.children[0]
            while not last.is_leaf:
                last = last.children[-1]
            object.__setattr__(self, '_span',
                               SpanInterval(first.token_index, last.token_index))
        return self._span

    def _key(self):
        return (self.label, self.raw_label, self.token, self.token_index,
                len(self.children))

    def __eq__(self, other):
        if not isinstance(other, ParseNode):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if a._key() != b._key():
                return False
            stack.extend(zip(a.children, b.children))
        return True

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, '_hash', hash(emit_bracketed(self, indices=True)))
        return self._hash

    def __repr__(self):
        text = emit_bracketed(self)
        if len(text) > 80:
            text = text[:77] + '...'
        return f'ParseNode({text})'


def iter_bfs(root):
    """Yield ``(node, depth)`` in breadth-first order; ``root`` has depth 0."""
    queue = deque([(root, 0)])
    while queue:
        node, depth = queue.popleft()
        yield node, depth
        queue.extend((child, depth + 1) for child in node.children)


def node_depth(root, target):
    """Number of edges from ``root`` down to ``target`` (identity match)."""
    for node, depth in iter_bfs(root):
        if node is target:
            return depth
    raise ValueError('node is not part of the tree')


def subtree_span(node):
    """Token interval ``[first leaf index, last leaf index]`` covered by ``node``."""
    if node is None:
        raise EmptyTree('no tree')
    return node.span


_TOKEN_RE = re.compile(r'\(|\)|[^\s()]+')


def parse_bracketed(text):
    """Read one bracketed tree; leaves are numbered 0..n-1 in surface order."""
    stack = []      # [label, children, open offset]
    root = None
    next_index = 0
    expect_label = False
    for match in _TOKEN_RE.finditer(text):
        tok = match.group()
        pos = match.start()
        if root is not None:
            if tok == ')':
                raise UnbalancedBrackets(pos)
            raise TrailingGarbage(pos)
        if expect_label:
            expect_label = False
            if tok in '()':
                raise EmptyConstituent(stack[-1][2])
            stack[-1][0] = tok
            continue
        if tok == '(':
            stack.append([None, [], pos])
            expect_label = True
        elif tok == ')':
            if not stack:
                raise UnbalancedBrackets(pos)
            label, children, start = stack.pop()
            if not children:
                raise EmptyConstituent(start)
            node = ParseNode(label, children)
            if stack:
                stack[-1][1].append(node)
            else:
                root = node
        else:
            if not stack:
                raise TrailingGarbage(pos)
            stack[-1][1].append(ParseNode.leaf(tok, next_index))
            next_index += 1
    if stack:
        raise UnbalancedBrackets(len(text))
    if root is None:
        raise EmptyTree('no tree in input')
    return root


def emit_bracketed(node, indices=False):
    """Single-line bracketed form; ``indices`` appends ``/i`` to each token."""
    out = []
    stack = [node]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif item.is_leaf:
            out.append(f' {item.token}/{item.token_index}' if indices
                       else f' {item.token}')
        else:
            out.append(f' ({item.raw_label}')
            stack.append(')')
            stack.extend(reversed(item.children))
    return ''.join(out).lstrip()
