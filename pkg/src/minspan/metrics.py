"""Coreference scores under a choice of mention matching.

Mentions are first projected to a :class:`SpanIdentity` (the maximum span,
the minimum span, the head word, or a MUC-style MIN match); two mentions are
the same mention iff their identities are equal. MUC, B-cubed, CEAF-e and
LEA are then computed over the projected entities. Counts are summed over
documents before dividing, so the corpus score is not an average of
per-document scores.
"""
import enum
import logging
import os
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import NamedTuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (DocumentSetMismatch, MinAnnotationMissing, MissingParse,
                     SpanOutOfBounds, TokenizationMismatch)
from .heads import head_span
from .mina import DEFAULT_POLICY, extract_min_span, mention_subtree

logger = logging.getLogger(__name__)

__all__ = ['MatchingMode', 'SpanIdentity', 'EntitySet', 'Score', 'ScoreReport',
           'SpanProjector', 'project_identities', 'muc_score', 'b3_score',
           'ceafe_score', 'lea_score', 'score_all', 'score_modes',
           'format_table', 'round_half_up', 'METRICS']

METRICS = ('muc', 'b3', 'ceafe', 'lea')
CONLL_METRICS = ('muc', 'b3', 'ceafe')


class MatchingMode(enum.Enum):
    MAX_SPAN = 'max'
    MINA_SPAN = 'mina'
    HEAD_WORD = 'head'
    MUC_MIN = 'mucmin'

    @classmethod
    def parse(cls, text):
        text = text.strip().lower()
        aliases = {'maxspan': 'max', 'minaspan': 'mina', 'min': 'mina',
                   'headword': 'head', 'muc_min': 'mucmin'}
        return cls(aliases.get(text, text))


@dataclass(frozen=True, order=True)
class SpanIdentity:
    doc_id: str
    part: int
    sentence_index: int
    tokens: tuple

    def __post_init__(self):
        if not self.tokens:
            raise ValueError('empty span identity')
        if list(self.tokens) != sorted(self.tokens):
            raise ValueError('span identity tokens must be sorted')

    @classmethod
    def of_span(cls, mention):
        return cls(mention.doc_id, mention.part, mention.sentence_index,
                   tuple(mention.span.indices()))


@dataclass
class EntitySet:
    entities: list
    warnings: list = field(default_factory=list)

    def __len__(self):
        return len(self.entities)

    def mentions(self):
        return {m for e in self.entities for m in e}


# -- metrics over plain partitions ------------------------------------------
#
# Each *_counts function returns (recall numerator, recall denominator,
# precision numerator, precision denominator); entities are iterables of
# hashable mentions.

def _index(entities):
    return {m: j for j, e in enumerate(entities) for m in e}


def _muc_side(key, resp_map):
    num = den = 0
    for entity in key:
        parts = set()
        unmatched = 0
        for m in entity:
            j = resp_map.get(m)
            if j is None:
                unmatched += 1
            else:
                parts.add(j)
        num += len(entity) - len(parts) - unmatched
        den += len(entity) - 1
    return num, den


def muc_counts(key, resp):
    r_num, r_den = _muc_side(key, _index(resp))
    p_num, p_den = _muc_side(resp, _index(key))
    return r_num, r_den, p_num, p_den


def _b3_side(key, resp_map):
    num = 0.0
    den = 0
    for entity in key:
        overlaps = defaultdict(int)
        for m in entity:
            j = resp_map.get(m)
            if j is not None:
                overlaps[j] += 1
        num += sum(c * c for c in overlaps.values()) / len(entity)
        den += len(entity)
    return num, den


def b3_counts(key, resp):
    r_num, r_den = _b3_side(key, _index(resp))
    p_num, p_den = _b3_side(resp, _index(key))
    return r_num, r_den, p_num, p_den


def phi4(k, r):
    return 2 * len(k & r) / (len(k) + len(r))


def ceafe_counts(key, resp):
    key = [frozenset(e) for e in key]
    resp = [frozenset(e) for e in resp]
    total = 0.0
    if key and resp:
        resp_map = _index(resp)
        sim = np.zeros((len(key), len(resp)))
        for i, k in enumerate(key):
            for j in {resp_map[m] for m in k if m in resp_map}:
                sim[i, j] = phi4(k, resp[j])
        rows, cols = linear_sum_assignment(sim, maximize=True)
        total = float(sim[rows, cols].sum())
    return total, len(key), total, len(resp)


def _lea_side(key, resp_map):
    num = 0.0
    den = 0
    for entity in key:
        size = len(entity)
        if size == 1:
            (m,) = entity
            j = resp_map.get(m)
            # a singleton is resolved only if it is a singleton on the other side
            common = 1 if j is not None and resp_map.sizes[j] == 1 else 0
            all_links = 1
        else:
            groups = defaultdict(int)
            for m in entity:
                j = resp_map.get(m)
                if j is not None:
                    groups[j] += 1
            common = sum(c * (c - 1) // 2 for c in groups.values())
            all_links = size * (size - 1) // 2
        num += size * common / all_links
        den += size
    return num, den


class _SizedIndex(dict):
    def __init__(self, entities):
        super().__init__(_index(entities))
        self.sizes = [len(e) for e in entities]


def lea_counts(key, resp):
    key = [set(e) for e in key]
    resp = [set(e) for e in resp]
    r_num, r_den = _lea_side(key, _SizedIndex(resp))
    p_num, p_den = _lea_side(resp, _SizedIndex(key))
    return r_num, r_den, p_num, p_den


_COUNTERS = {'muc': muc_counts, 'b3': b3_counts, 'ceafe': ceafe_counts,
             'lea': lea_counts}


class Score(NamedTuple):
    recall: float
    precision: float
    f1: float

    @classmethod
    def from_counts(cls, r_num, r_den, p_num, p_den):
        recall = r_num / r_den if r_den else 0.0
        precision = p_num / p_den if p_den else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        return cls(recall, precision, f1)


def muc_score(key, resp):
    """MUC link-based ``(recall, precision, F1)`` as fractions."""
    return Score.from_counts(*muc_counts(key, resp))


def b3_score(key, resp):
    return Score.from_counts(*b3_counts(key, resp))


def ceafe_score(key, resp):
    """Entity-based CEAF with the optimal one-to-one entity alignment."""
    return Score.from_counts(*ceafe_counts(key, resp))


def lea_score(key, resp):
    return Score.from_counts(*lea_counts(key, resp))


# -- projection -------------------------------------------------------------

def _worker_count():
    try:
        return max(1, int(os.environ.get('MINSPAN_THREADS', '') or os.cpu_count() or 1))
    except ValueError:
        return 1


class SpanProjector:
    """Maps mentions to span identities using the key documents' trees.

    One cache per mode; the minimum span of a location does not depend on
    which side the mention came from.
    """

    def __init__(self, key_docs, policy=DEFAULT_POLICY, min_annotations=None,
                 head_table=None):
        self.key_docs = {d.key: d for d in key_docs}
        self.policy = policy
        self.min_annotations = min_annotations
        self.head_table = head_table
        self._caches = {mode: {} for mode in MatchingMode}

    def _sentence(self, mention):
        doc = self.key_docs[(mention.doc_id, mention.part)]
        if not 0 <= mention.sentence_index < len(doc.sentences):
            raise SpanOutOfBounds(mention)
        sentence = doc.sentences[mention.sentence_index]
        if mention.span.end >= len(sentence):
            raise SpanOutOfBounds(mention)
        return sentence

    def mention_tree(self, mention):
        sentence = self._sentence(mention)
        if sentence.tree is None:
            raise MissingParse(
                f'{mention.doc_id} part {mention.part} sentence {mention.sentence_index}: '
                'key file has no parse trees; minimum spans need parsed key input')
        return mention_subtree(sentence.tree, mention.span)

    def min_span(self, mention):
        cache = self._caches[MatchingMode.MINA_SPAN]
        loc = mention.location
        if loc not in cache:
            cache[loc] = extract_min_span(self.mention_tree(mention), self.policy)
        return cache[loc]

    def head(self, mention):
        cache = self._caches[MatchingMode.HEAD_WORD]
        loc = mention.location
        if loc not in cache:
            cache[loc] = head_span(self.mention_tree(mention), self.policy, self.head_table)
        return cache[loc]

    def identity(self, mention, mode):
        """Identity of a single mention before collision handling (not MucMin)."""
        if mode is MatchingMode.MAX_SPAN or mode is MatchingMode.MUC_MIN:
            return SpanIdentity.of_span(mention)
        if mode is MatchingMode.MINA_SPAN:
            tokens = self.min_span(mention).token_indices
        else:
            tokens = (self.head(mention).token_index,)
        return SpanIdentity(mention.doc_id, mention.part, mention.sentence_index,
                            tuple(tokens))

    def _min_annotation(self, mention):
        if self.min_annotations is None:
            raise MinAnnotationMissing('MucMin matching needs a MIN sidecar file')
        try:
            return self.min_annotations[mention.location]
        except KeyError:
            raise MinAnnotationMissing(f'no MIN annotation for key mention {mention}') from None

    def _mucmin_identities(self, doc_key, mentions):
        """System mentions take the identity of the key mention they match:
        one that contains its MIN and stays inside its maximum span."""
        key_doc = self.key_docs[doc_key]
        by_sentence = defaultdict(list)
        for km in key_doc.mentions():
            by_sentence[km.sentence_index].append((km, self._min_annotation(km)))
        claimed = set()
        result = {}
        ordered = sorted(mentions)
        # exact maximum-span matches first, then the tightest enclosing key mention
        for exact in (True, False):
            for m in ordered:
                if m in result:
                    continue
                options = []
                for km, min_span in by_sentence[m.sentence_index]:
                    if km.location in claimed:
                        continue
                    if exact and km.span != m.span:
                        continue
                    if m.span.contains(min_span) and km.span.contains(m.span):
                        options.append((len(km.span), km.span, km.entity_id, km))
                if options:
                    km = min(options)[-1]
                    claimed.add(km.location)
                    result[m] = SpanIdentity.of_span(km)
        for m in ordered:
            result.setdefault(m, SpanIdentity.of_span(m))
        return result

    def project_document(self, doc_key, chains, mode, side='key'):
        """Entities of one document as frozensets of identities, plus warnings."""
        mentions = sorted(m for chain in chains.values() for m in chain)
        warnings = []
        if mode is MatchingMode.MUC_MIN and side != 'key':
            ident = self._mucmin_identities(doc_key, mentions)
        else:
            if mode is MatchingMode.MUC_MIN:
                for m in mentions:
                    self._min_annotation(m)
            ident = {m: self.identity(m, mode) for m in mentions}
        fallback = {m: SpanIdentity.of_span(m) for m in mentions}

        # distinct mentions of different entities sharing an identity fall
        # back to their maximum spans; repeat until stable
        reverted = set()
        while True:
            groups = defaultdict(list)
            for m in mentions:
                groups[ident[m]].append(m)
            changed = False
            for identity, group in sorted(groups.items()):
                entities = sorted({m.entity_id for m in group})
                if len(entities) < 2:
                    continue
                movable = [m for m in group if ident[m] != fallback[m]]
                if not movable:
                    continue
                warnings.append(
                    f'{mode.value} collision in {doc_key[0]} part {doc_key[1]} '
                    f'sentence {identity.sentence_index} tokens '
                    f'{",".join(map(str, identity.tokens))}: entities '
                    f'{", ".join(map(str, entities))} ({side}); using maximum spans')
                for m in movable:
                    ident[m] = fallback[m]
                    reverted.add(m)
                changed = True
            if not changed:
                break

        if mode in (MatchingMode.MINA_SPAN, MatchingMode.HEAD_WORD):
            groups = defaultdict(list)
            for m in mentions:
                groups[ident[m]].append(m)
            for identity, group in sorted(groups.items()):
                if len({m.location for m in group}) > 1:
                    warnings.append(
                        f'{mode.value} collision in {doc_key[0]} part {doc_key[1]} '
                        f'sentence {identity.sentence_index} tokens '
                        f'{",".join(map(str, identity.tokens))}: mentions of entity '
                        f'{group[0].entity_id} merged ({side})')

        owner = {}
        entities = []
        for entity_id in sorted(chains):
            members = set()
            for m in sorted(chains[entity_id]):
                identity = ident[m]
                if owner.get(identity, entity_id) != entity_id:
                    warnings.append(f'{side} mention {m} duplicates a mention of '
                                    f'entity {owner[identity]}; dropped')
                    continue
                owner[identity] = entity_id
                members.add(identity)
            if members:
                entities.append(frozenset(members))
        return entities, warnings


def project_identities(key_docs, side_docs, mode, policy=DEFAULT_POLICY,
                       min_annotations=None, head_table=None, side='key',
                       projector=None):
    """Project every chain of ``side_docs`` into one corpus-wide :class:`EntitySet`.

    Trees (and, for MucMin, key mentions) always come from ``key_docs``.
    """
    mode = mode if isinstance(mode, MatchingMode) else MatchingMode.parse(mode)
    projector = projector or SpanProjector(key_docs, policy, min_annotations, head_table)
    result = EntitySet([])
    for doc in side_docs:
        entities, warnings = projector.project_document(doc.key, doc.chains, mode, side)
        result.entities.extend(entities)
        result.warnings.extend(warnings)
    return result


# -- reports ----------------------------------------------------------------

def round_half_up(value, places=2):
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def _percent(value):
    return round_half_up(value * 100)


@dataclass
class ScoreReport:
    mode: MatchingMode
    metrics: dict
    warnings: list = field(default_factory=list)
    documents: dict = None

    @property
    def conll_avg(self):
        return sum(self.metrics[m].f1 for m in CONLL_METRICS) / len(CONLL_METRICS)

    def rounded(self):
        """Metric -> (R, P, F1) in percent, two decimals."""
        return {name: tuple(_percent(v) for v in (s.recall, s.precision, s.f1))
                for name, s in self.metrics.items()}

    def to_dict(self):
        out = {
            'mode': self.mode.value,
            'metrics': {name: dict(zip(('r', 'p', 'f1'), values))
                        for name, values in self.rounded().items()},
            'conll_avg': _percent(self.conll_avg),
            'warnings': list(self.warnings),
        }
        if self.documents is not None:
            out['documents'] = [
                {'doc_id': doc_id, 'part': part,
                 'metrics': {name: {'r': _percent(s.recall), 'p': _percent(s.precision),
                                    'f1': _percent(s.f1)}
                             for name, s in scores.items()}}
                for (doc_id, part), scores in sorted(self.documents.items())]
        return out


def check_alignment(key_docs, sys_docs):
    key_set = {d.key for d in key_docs}
    sys_set = {d.key for d in sys_docs}
    if key_set != sys_set:
        missing = sorted(key_set - sys_set)[:5]
        extra = sorted(sys_set - key_set)[:5]
        raise DocumentSetMismatch(f'key and system documents differ; '
                                  f'missing from system: {missing}, not in key: {extra}')
    key_by = {d.key: d for d in key_docs}
    for doc in sys_docs:
        key_doc = key_by[doc.key]
        if [len(s) for s in doc.sentences] != [len(s) for s in key_doc.sentences]:
            raise TokenizationMismatch(
                f'{doc.doc_id} part {doc.part}: system sentence/token layout '
                'differs from the key file')


def _document_counts(projector, key_doc, sys_doc, mode):
    key_ents, key_warn = projector.project_document(key_doc.key, key_doc.chains, mode, 'key')
    sys_ents, sys_warn = projector.project_document(key_doc.key, sys_doc.chains, mode,
                                                    'response')
    counts = {name: fn(key_ents, sys_ents) for name, fn in _COUNTERS.items()}
    return counts, key_warn + sys_warn


def score_modes(key_docs, sys_docs, modes, policy=DEFAULT_POLICY,
                min_annotations=None, head_table=None, per_document=False,
                workers=None):
    """Score the system against the key once per matching mode.

    Returns ``{mode: ScoreReport}`` in the order of ``modes``.
    """
    modes = [m if isinstance(m, MatchingMode) else MatchingMode.parse(m) for m in modes]
    check_alignment(key_docs, sys_docs)
    projector = SpanProjector(key_docs, policy, min_annotations, head_table)
    sys_by = {d.key: d for d in sys_docs}
    ordered = sorted(key_docs, key=lambda d: d.key)
    workers = workers or _worker_count()
    reports = {}
    for mode in modes:
        def work(doc, mode=mode):
            return _document_counts(projector, doc, sys_by[doc.key], mode)
        if workers > 1 and len(ordered) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(work, ordered))
        else:
            results = [work(doc) for doc in ordered]
        totals = {name: [0, 0, 0, 0] for name in _COUNTERS}
        warnings = []
        documents = {} if per_document else None
        for doc, (counts, warns) in zip(ordered, results):
            warnings.extend(warns)
            for name, values in counts.items():
                for i, v in enumerate(values):
                    totals[name][i] += v
            if per_document:
                documents[doc.key] = {name: Score.from_counts(*c) for name, c in counts.items()}
        for w in warnings:
            logger.warning(w)
        metrics = {name: Score.from_counts(*totals[name]) for name in METRICS}
        reports[mode] = ScoreReport(mode, metrics, warnings, documents)
    return reports


def score_all(key_docs, sys_docs, mode, policy=DEFAULT_POLICY, min_annotations=None,
              head_table=None, per_document=False, workers=None):
    mode = mode if isinstance(mode, MatchingMode) else MatchingMode.parse(mode)
    return score_modes(key_docs, sys_docs, [mode], policy, min_annotations,
                       head_table, per_document, workers)[mode]


_METRIC_NAMES = {'muc': 'MUC', 'b3': 'B3', 'ceafe': 'CEAFe', 'lea': 'LEA'}


def format_table(reports):
    """Text table with one column per matching mode."""
    reports = list(reports.values()) if isinstance(reports, dict) else list(reports)
    header = f'{"metric":<14}' + ''.join(f'{r.mode.value:>10}' for r in reports)
    lines = [header, '-' * len(header)]
    rounded = [r.rounded() for r in reports]
    for name in METRICS:
        for k, label in enumerate(('R', 'P', 'F1')):
            row = f'{_METRIC_NAMES[name] + " " + label:<14}'
            row += ''.join(f'{vals[name][k]:>10.2f}' for vals in rounded)
            lines.append(row)
    lines.append('-' * len(header))
    lines.append(f'{"CoNLL":<14}' + ''.join(f'{_percent(r.conll_avg):>10.2f}'
                                            for r in reports))
    return '\n'.join(lines) + '\n'
