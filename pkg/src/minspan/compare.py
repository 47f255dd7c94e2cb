"""Gold/system mention pairs that differ in maximum boundary but agree on
their minimum span."""
from collections import defaultdict
from dataclasses import dataclass

from .metrics import MatchingMode, SpanProjector, check_alignment
from .mina import DEFAULT_POLICY

__all__ = ['BoundaryMismatch', 'compare_boundaries']


@dataclass(frozen=True)
class BoundaryMismatch:
    key_mention: object
    sys_mention: object
    key_text: str
    sys_text: str
    min_tokens: tuple

    def to_dict(self):
        k, s = self.key_mention, self.sys_mention
        return {'doc_id': k.doc_id, 'part': k.part, 'sentence': k.sentence_index,
                'key_span': str(k.span), 'sys_span': str(s.span),
                'key_text': self.key_text, 'sys_text': self.sys_text,
                'min_tokens': list(self.min_tokens)}


def compare_boundaries(key_docs, sys_docs, policy=DEFAULT_POLICY, projector=None):
    """Every (key, system) mention pair with equal minimum span and unequal
    maximum span, ordered by document, sentence and span."""
    check_alignment(key_docs, sys_docs)
    projector = projector or SpanProjector(key_docs, policy)
    mode = MatchingMode.MINA_SPAN
    sys_by = {d.key: d for d in sys_docs}
    found = []
    for key_doc in sorted(key_docs, key=lambda d: d.key):
        index = defaultdict(list)
        for g in key_doc.mentions():
            index[projector.identity(g, mode)].append(g)
        seen = set()
        for s in sys_by[key_doc.key].mentions():
            ident = projector.identity(s, mode)
            for g in index.get(ident, ()):
                if g.span == s.span or (g.location, s.location) in seen:
                    continue
                seen.add((g.location, s.location))
                found.append(BoundaryMismatch(g, s, key_doc.mention_text(g),
                                              key_doc.mention_text(s), ident.tokens))
    found.sort(key=lambda b: (b.key_mention.doc_id, b.key_mention.part,
                              b.key_mention.sentence_index, b.key_mention.span,
                              b.sys_mention.span))
    return found
