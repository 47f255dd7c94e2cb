"""Reading and writing CoNLL-2012 coreference files.

Column layout (1-based): word in column 4, POS in column 5, parse bit in
column 6, coreference field in the last column. Parse bits are rebuilt into
:class:`~minspan.treebank.ParseNode` trees; the coreference column is decoded
into :class:`Mention` objects grouped by entity.
"""
import logging
import re
from collections import defaultdict
from dataclasses import dataclass, field

from .errors import (CloseWithoutOpen, ColumnCountTooSmall,
                     CorefFieldMalformed, MinSidecarError,
                     MissingBeginDirective, ParseBitImbalance, UnclosedMention)
from .treebank import ParseNode, SpanInterval

logger = logging.getLogger(__name__)

__all__ = ['Token', 'Mention', 'Sentence', 'Document', 'read_conll',
           'write_conll', 'reconstruct_tree', 'decode_coref_column',
           'encode_coref_column', 'tree_to_parse_bits', 'read_min_sidecar',
           'write_min_sidecar']

WORD_COL, POS_COL, PARSE_COL = 3, 4, 5   # 0-based
MIN_COLUMNS = 7

_BEGIN_RE = re.compile(r'#begin document \((.*)\); part (\d+)')
_PARSE_BIT_RE = re.compile(r'^((?:\([^()*\s]+)*)\*(\)*)$')
_OPEN_LABEL_RE = re.compile(r'\(([^()*\s]+)')
_COREF_ITEM_RE = re.compile(r'(\()?(\d+)(\))?')
_COREF_FIELD_RE = re.compile(r'^(?:\(\d+\)|\(\d+|\d+\)|\|)+$')


@dataclass(frozen=True)
class Token:
    doc_id: str
    part: int
    sentence_index: int
    token_index: int
    word: str
    pos: str
    parse_bit: str
    coref_field: str
    columns: tuple = field(default=(), repr=False)


@dataclass(frozen=True, order=True)
class Mention:
    doc_id: str
    part: int
    sentence_index: int
    span: SpanInterval
    entity_id: int

    @property
    def location(self):
        """Entity-independent key: where the mention sits in the corpus."""
        return (self.doc_id, self.part, self.sentence_index, self.span)


@dataclass(frozen=True)
class Sentence:
    tokens: tuple
    tree: ParseNode = None

    def __len__(self):
        return len(self.tokens)

    @property
    def words(self):
        return [t.word for t in self.tokens]

    def text(self, span):
        return ' '.join(t.word for t in self.tokens[span.start:span.end + 1])


@dataclass(frozen=True)
class Document:
    doc_id: str
    part: int
    sentences: tuple
    chains: dict

    @property
    def key(self):
        return (self.doc_id, self.part)

    @property
    def has_parse(self):
        return all(s.tree is not None for s in self.sentences)

    def mentions(self):
        """All mentions sorted by position, then entity id."""
        return sorted((m for chain in self.chains.values() for m in chain),
                      key=lambda m: (m.sentence_index, m.span, m.entity_id))

    def mention_text(self, mention):
        return self.sentences[mention.sentence_index].text(mention.span)


def _has_brackets(bits):
    return any('(' in b or ')' in b for b in bits)


def reconstruct_tree(tokens, sentence=None):
    """Rebuild a sentence tree from parse bits, replacing each ``*`` by ``(POS word)``."""
    bits = [t.parse_bit for t in tokens]
    if sentence is None and tokens:
        sentence = tokens[0].sentence_index
    stack = []
    root = None
    for i, tok in enumerate(tokens):
        match = _PARSE_BIT_RE.match(tok.parse_bit)
        if not match:
            raise ParseBitImbalance(sentence, f'bad parse bit {tok.parse_bit!r}')
        if root is not None:
            raise ParseBitImbalance(sentence, 'tokens after the root closed')
        for label in _OPEN_LABEL_RE.findall(match.group(1)):
            stack.append((label, []))
        if not stack:
            raise ParseBitImbalance(sentence, f'token {i} outside any constituent')
        stack[-1][1].append(ParseNode.preterminal(tok.pos, tok.word, i))
        for _ in match.group(2):
            if not stack:
                raise ParseBitImbalance(sentence, 'too many closing brackets')
            label, children = stack.pop()
            node = ParseNode(label, children)
            if stack:
                stack[-1][1].append(node)
            else:
                root = node
    if stack or root is None:
        raise ParseBitImbalance(sentence, f'{len(stack)} unclosed constituents'
                                if bits else 'empty sentence')
    return root


def tree_to_parse_bits(tree):
    """Inverse of :func:`reconstruct_tree`: one parse bit per token."""
    bits = []
    # opens accumulate until the next token; a close is appended to the bit
    # of the last token inside the constituent
    pending = []
    stack = [(tree, False)]
    while stack:
        node, closing = stack.pop()
        if closing:
            bits[-1] += ')'
            continue
        if node.is_preterminal or node.is_leaf:
            bits.append(''.join(pending) + '*')
            pending = []
            continue
        pending.append(f'({node.raw_label}')
        stack.append((node, True))
        stack.extend((child, False) for child in reversed(node.children))
    return bits


def decode_coref_column(tokens, line_numbers=None):
    """Decode the coreference column of one sentence into mentions.

    Per-entity stacks: ``(N`` pushes the current index, ``N)`` pops the most
    recent open of N, ``(N)`` is a single-token mention.
    """
    open_stacks = defaultdict(list)
    mentions = []
    seen = set()
    for i, tok in enumerate(tokens):
        fld = tok.coref_field
        if fld in ('-', '_', ''):
            continue
        line = line_numbers[i] if line_numbers else None
        # items are usually "|"-separated, but "(1(1" style runs also occur
        if not _COREF_FIELD_RE.match(fld):
            raise CorefFieldMalformed(line, fld)
        for match in _COREF_ITEM_RE.finditer(fld.replace('|', ' ')):
            opens, entity, closes = match.group(1), int(match.group(2)), match.group(3)
            if opens and closes:
                start = i
            elif opens:
                open_stacks[entity].append(i)
                continue
            else:
                if not open_stacks[entity]:
                    raise CloseWithoutOpen(entity, tok.sentence_index, i)
                start = open_stacks[entity].pop()
            mention = Mention(tok.doc_id, tok.part, tok.sentence_index,
                              SpanInterval(start, i), entity)
            if mention in seen:
                logger.warning('duplicate mention %s dropped', mention)
                continue
            seen.add(mention)
            mentions.append(mention)
    for entity, stack in open_stacks.items():
        if stack:
            raise UnclosedMention(entity, tokens[0].sentence_index)
    return mentions


def encode_coref_column(mentions, length):
    """Coreference fields for a sentence of ``length`` tokens."""
    opens = defaultdict(list)
    singles = defaultdict(list)
    closes = defaultdict(list)
    for m in mentions:
        if m.span.start == m.span.end:
            singles[m.span.start].append(m)
        else:
            opens[m.span.start].append(m)
            closes[m.span.end].append(m)
    fields = []
    for i in range(length):
        items = []
        # closes innermost first, then singletons, then opens outermost first,
        # so per-entity stacks decode the same nesting back
        for m in sorted(closes[i], key=lambda m: (-m.span.start, m.entity_id)):
            items.append(f'{m.entity_id})')
        for m in sorted(singles[i], key=lambda m: m.entity_id):
            items.append(f'({m.entity_id})')
        for m in sorted(opens[i], key=lambda m: (-m.span.end, m.entity_id)):
            items.append(f'({m.entity_id}')
        fields.append('|'.join(items) if items else '-')
    return fields


def _build_document(doc_id, part, sentence_rows):
    sentences = []
    chains = defaultdict(list)
    for s_idx, rows in enumerate(sentence_rows):
        tokens = tuple(tok for tok, _ in rows)
        lines = [line for _, line in rows]
        bits = [t.parse_bit for t in tokens]
        tree = None
        if _has_brackets(bits):
            tree = reconstruct_tree(tokens, s_idx)
        for mention in decode_coref_column(tokens, lines):
            chains[mention.entity_id].append(mention)
        sentences.append(Sentence(tokens, tree))
    chains = {e: tuple(sorted(ms)) for e, ms in sorted(chains.items())}
    return Document(doc_id, part, tuple(sentences), chains)


def read_conll(stream, coref_column=None):
    """Read every ``#begin document`` block of ``stream`` into a :class:`Document`.

    ``coref_column`` is a 1-based column index overriding the default of the
    last column.
    """
    if isinstance(stream, str):
        stream = stream.splitlines()
    docs = []
    current = None      # (doc_id, part, sentences, rows)
    coref_idx = None if coref_column is None else coref_column - 1
    needed = MIN_COLUMNS if coref_idx is None else max(PARSE_COL + 1, coref_idx + 1)

    def finish_sentence():
        if current is not None and current[3]:
            current[2].append(current[3])
            current[3] = []

    for lineno, raw in enumerate(stream, 1):
        line = raw.rstrip('\n').rstrip('\r')
        stripped = line.strip()
        if stripped.startswith('#begin document'):
            if current is not None:
                finish_sentence()
                docs.append(_build_document(*current[:3]))
            match = _BEGIN_RE.match(stripped)
            if match:
                doc_id, part = match.group(1), int(match.group(2))
            else:
                doc_id, part = stripped[len('#begin document'):].strip(), 0
            current = [doc_id, part, [], []]
        elif stripped.startswith('#end document'):
            if current is None:
                raise MissingBeginDirective(lineno)
            finish_sentence()
            docs.append(_build_document(*current[:3]))
            current = None
        elif not stripped:
            finish_sentence()
        elif stripped.startswith('#'):
            continue
        else:
            if current is None:
                raise MissingBeginDirective(lineno)
            cols = stripped.split()
            if len(cols) < needed:
                raise ColumnCountTooSmall(lineno, len(cols), needed)
            tok = Token(doc_id=current[0], part=current[1],
                        sentence_index=len(current[2]),
                        token_index=len(current[3]),
                        word=cols[WORD_COL], pos=cols[POS_COL],
                        parse_bit=cols[PARSE_COL],
                        coref_field=cols[-1] if coref_idx is None else cols[coref_idx],
                        columns=tuple(cols))
            current[3].append((tok, lineno))
    if current is not None:
        finish_sentence()
        docs.append(_build_document(*current[:3]))
    return docs


def write_conll(docs, stream, coref_column=None):
    """Write documents back out; parse bits come from the trees, coreference
    fields from the chains."""
    for doc in docs:
        stream.write(f'#begin document ({doc.doc_id}); part {doc.part:03d}\n')
        by_sentence = defaultdict(list)
        for m in doc.mentions():
            by_sentence[m.sentence_index].append(m)
        for s_idx, sent in enumerate(doc.sentences):
            fields = encode_coref_column(by_sentence[s_idx], len(sent))
            bits = (tree_to_parse_bits(sent.tree) if sent.tree is not None
                    else [t.parse_bit for t in sent.tokens])
            for tok, bit, coref in zip(sent.tokens, bits, fields):
                cols = list(tok.columns) or [
                    tok.doc_id, str(tok.part), str(tok.token_index), tok.word,
                    tok.pos, bit, '-', '-', '-', '-', '*', coref]
                cols[WORD_COL] = tok.word
                cols[POS_COL] = tok.pos
                cols[PARSE_COL] = bit
                cols[-1 if coref_column is None else coref_column - 1] = coref
                stream.write('\t'.join(cols) + '\n')
            stream.write('\n')
        stream.write('#end document\n')


def read_min_sidecar(stream):
    """Read MIN annotations: ``doc_id part sentence max_start-end min_start-end``.

    Returns a dict keyed by ``(doc_id, part, sentence, max SpanInterval)``.
    """
    if isinstance(stream, str):
        stream = stream.splitlines()
    result = {}
    for lineno, line in enumerate(stream, 1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        cols = line.split('\t') if '\t' in line else line.split()
        if len(cols) != 5:
            raise MinSidecarError(f'line {lineno}: expected 5 columns, got {len(cols)}')
        try:
            key = (cols[0], int(cols[1]), int(cols[2]), SpanInterval.parse(cols[3]))
            min_span = SpanInterval.parse(cols[4])
        except ValueError as err:
            raise MinSidecarError(f'line {lineno}: {err}') from None
        if not key[3].contains(min_span):
            raise MinSidecarError(f'line {lineno}: MIN {min_span} outside max {key[3]}')
        result[key] = min_span
    return result


def write_min_sidecar(annotations, stream):
    for (doc_id, part, sent, max_span), min_span in sorted(annotations.items()):
        stream.write(f'{doc_id}\t{part}\t{sent}\t{max_span}\t{min_span}\n')
