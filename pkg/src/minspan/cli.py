"""Command line: ``minspan {score,extract,stats,compare}``.

Exit status is 0 on success, 1 on data errors (malformed files, missing
parses, mismatched documents) and 2 on usage errors. Reports go to standard
output, warnings to standard error.
"""
import argparse
import json
import logging
import sys
from dataclasses import dataclass, field

from . import __version__
from .compare import compare_boundaries
from .conll import read_conll, read_min_sidecar
from .errors import MinspanError
from .heads import load_head_table
from .metrics import MatchingMode, SpanProjector, format_table, score_modes
from .mina import DEFAULT_POLICY, STRICT_POLICY
from .stats import (containment_stats, format_containment_table,
                    format_length_table, length_stats, overlap_distinctness)

SUBCOMMANDS = ('score', 'extract', 'stats', 'compare')


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    key_path: str
    sys_path: str = None
    modes: list = field(default_factory=lambda: [MatchingMode.MAX_SPAN,
                                                 MatchingMode.MINA_SPAN,
                                                 MatchingMode.HEAD_WORD])
    np_tags: list = None
    vp_tags: list = None
    excluded_pos: list = None
    strict_paper: bool = False
    output_format: str = 'text'
    min_sidecar: str = None
    head_table: str = None
    per_document: bool = False
    coref_column: int = None

    def validate(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f'unknown subcommand {self.subcommand!r}')
        if self.subcommand in ('score', 'compare') and not self.sys_path:
            raise UsageError(f'{self.subcommand} needs --sys')
        if MatchingMode.MUC_MIN in self.modes and not self.min_sidecar:
            raise UsageError('--span mucmin needs --min-sidecar')
        allowed = {'score': ('text', 'json'), 'extract': ('tsv', 'json'),
                   'stats': ('text', 'json'), 'compare': ('text', 'json', 'tsv')}
        if self.output_format not in allowed[self.subcommand]:
            raise UsageError(f'{self.subcommand} supports --format '
                             f'{"/".join(allowed[self.subcommand])}')

    def policy(self):
        base = STRICT_POLICY if self.strict_paper else DEFAULT_POLICY
        try:
            return base.with_overrides(self.np_tags, self.vp_tags, self.excluded_pos)
        except ValueError as err:
            raise UsageError(str(err)) from None


def _read_docs(path, coref_column=None):
    with open(path, encoding='utf-8') as f:
        return read_conll(f, coref_column=coref_column)


def _head_table(config):
    if not config.head_table:
        return None
    with open(config.head_table, encoding='utf-8') as f:
        return load_head_table(f)


def _min_annotations(config):
    if not config.min_sidecar:
        return None
    with open(config.min_sidecar, encoding='utf-8') as f:
        return read_min_sidecar(f)


def _dump_json(payload, out):
    json.dump(payload, out, indent=2, sort_keys=True, ensure_ascii=False)
    out.write('\n')


def _run_score(config, out):
    key_docs = _read_docs(config.key_path, config.coref_column)
    sys_docs = _read_docs(config.sys_path, config.coref_column)
    reports = score_modes(key_docs, sys_docs, config.modes, config.policy(),
                          _min_annotations(config), _head_table(config),
                          per_document=config.per_document)
    if config.output_format == 'json':
        _dump_json([r.to_dict() for r in reports.values()], out)
    else:
        out.write(format_table(reports))
        if config.per_document:
            for report in reports.values():
                for doc in report.to_dict()['documents']:
                    f1s = '  '.join(f'{name} {vals["f1"]:.2f}'
                                    for name, vals in doc['metrics'].items())
                    out.write(f'{report.mode.value}\t{doc["doc_id"]}\t{doc["part"]}\t{f1s}\n')


def _run_extract(config, out):
    key_docs = _read_docs(config.key_path, config.coref_column)
    projector = SpanProjector(key_docs, config.policy(), head_table=_head_table(config))
    mode = config.modes[0]
    if mode not in (MatchingMode.MINA_SPAN, MatchingMode.HEAD_WORD):
        raise UsageError('extract supports --span mina or head')
    rows = []
    for doc in sorted(key_docs, key=lambda d: d.key):
        seen = set()
        for m in doc.mentions():
            if m.location in seen:
                continue
            seen.add(m.location)
            if mode is MatchingMode.MINA_SPAN:
                result = projector.min_span(m)
                tokens = result.token_indices
                fallback = result.used_fallback
                labels = [f'{label or "-"}:{span}' for label, span in result.units]
            else:
                result = projector.head(m)
                tokens = (result.token_index,)
                fallback = result.rule_fired.value == 'NonNPFallback'
                labels = [result.rule_fired.value]
            rows.append({'doc_id': m.doc_id, 'part': m.part,
                         'sentence': m.sentence_index, 'max_span': str(m.span),
                         'min_span': list(tokens), 'fallback': bool(fallback),
                         'units': labels, 'entity': m.entity_id})
    if config.output_format == 'json':
        _dump_json({'mode': mode.value, 'mentions': rows}, out)
        return
    out.write('doc_id\tpart\tsentence\tmax_span\tmin_span\tfallback\tunits\n')
    for r in rows:
        out.write(f'{r["doc_id"]}\t{r["part"]}\t{r["sentence"]}\t{r["max_span"]}\t'
                  f'{",".join(map(str, r["min_span"]))}\t{int(r["fallback"])}\t'
                  f'{" ".join(r["units"])}\n')


def _run_stats(config, out):
    key_docs = _read_docs(config.key_path, config.coref_column)
    policy = config.policy()
    projector = SpanProjector(key_docs, policy, head_table=_head_table(config))
    lengths = length_stats(key_docs, policy, projector=projector)
    violations = overlap_distinctness(key_docs, policy, projector=projector)
    annotations = _min_annotations(config)
    containment = (containment_stats(key_docs, annotations, policy, projector=projector)
                   if annotations is not None else None)
    mina_v = sum(v.mode == 'mina' for v in violations)
    head_v = sum(v.mode == 'head' for v in violations)
    if config.output_format == 'json':
        payload = {'lengths': lengths.to_dict(),
                   'distinctness': {'mina_collisions': mina_v, 'head_collisions': head_v},
                   'containment': containment.to_dict() if containment else None}
        _dump_json(payload, out)
        return
    out.write(format_length_table(lengths))
    out.write(f'overlapping mentions sharing a span: MINA {mina_v}, head {head_v}\n')
    if containment is not None:
        out.write(format_containment_table(containment))


def _run_compare(config, out):
    key_docs = _read_docs(config.key_path, config.coref_column)
    sys_docs = _read_docs(config.sys_path, config.coref_column)
    pairs = compare_boundaries(key_docs, sys_docs, config.policy())
    if config.output_format == 'json':
        _dump_json({'mismatches': [p.to_dict() for p in pairs]}, out)
        return
    if config.output_format == 'tsv':
        out.write('doc_id\tpart\tsentence\tkey_span\tsys_span\tkey_text\tsys_text\n')
        for p in pairs:
            d = p.to_dict()
            out.write(f'{d["doc_id"]}\t{d["part"]}\t{d["sentence"]}\t{d["key_span"]}\t'
                      f'{d["sys_span"]}\t{d["key_text"]}\t{d["sys_text"]}\n')
        return
    for p in pairs:
        d = p.to_dict()
        out.write(f'{d["doc_id"]} part {d["part"]} sentence {d["sentence"]}: '
                  f'key [{d["key_text"]}] ({d["key_span"]}) vs '
                  f'system [{d["sys_text"]}] ({d["sys_span"]})\n')
    out.write(f'{len(pairs)} boundary mismatches with equal minimum spans\n')


_RUNNERS = {'score': _run_score, 'extract': _run_extract, 'stats': _run_stats,
            'compare': _run_compare}


def run(config, out=None):
    """Execute one subcommand; returns the process exit status."""
    out = out or sys.stdout
    try:
        config.validate()
        _RUNNERS[config.subcommand](config, out)
    except UsageError as err:
        print(f'minspan: error: {err}', file=sys.stderr)
        return 2
    except (MinspanError, OSError, UnicodeDecodeError) as err:
        print(f'minspan: {err}', file=sys.stderr)
        return 1
    return 0


def _csv(text):
    return [t.strip() for t in text.split(',') if t.strip()]


def build_parser():
    parser = argparse.ArgumentParser(
        prog='minspan', description='Minimum-span coreference evaluation.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='subcommand', required=True)

    def common(p, needs_sys=False):
        p.add_argument('--key', required=True, help='key (gold) CoNLL file')
        if needs_sys:
            p.add_argument('--sys', required=True, help='system CoNLL file')
        p.add_argument('--np-tags', type=_csv, help='acceptable tags for noun phrases')
        p.add_argument('--vp-tags', type=_csv, help='acceptable tags for verb phrases')
        p.add_argument('--excluded-pos', type=_csv,
                       help='POS tags that never make a unit acceptable on their own')
        p.add_argument('--strict-paper', action='store_true',
                       help='exclude only DT and CC (punctuation counts as content)')
        p.add_argument('--head-table', help='head rules for non-NP phrases')
        p.add_argument('--coref-column', type=int,
                       help='1-based coreference column (default: last)')
        p.add_argument('-v', '--verbose', action='store_true')

    p = sub.add_parser('score', help='score a system file against a key file')
    common(p, needs_sys=True)
    p.add_argument('--span', default='max,mina,head',
                   help='comma-separated matching modes: max, mina, head, mucmin')
    p.add_argument('--format', default='text', choices=('text', 'json'))
    p.add_argument('--min-sidecar', help='MIN annotations (TSV) for mucmin')
    p.add_argument('--per-document', action='store_true')

    p = sub.add_parser('extract', help='list the minimum span of every key mention')
    common(p)
    p.add_argument('--span', default='mina', help='mina or head')
    p.add_argument('--format', default='tsv', choices=('tsv', 'json'))

    p = sub.add_parser('stats', help='span-length, distinctness and MIN statistics')
    common(p)
    p.add_argument('--min-sidecar', help='MIN annotations (TSV)')
    p.add_argument('--format', default='text', choices=('text', 'json'))

    p = sub.add_parser('compare', help='mentions differing only in maximum boundary')
    common(p, needs_sys=True)
    p.add_argument('--format', default='text', choices=('text', 'json', 'tsv'))
    return parser


def config_from_args(args):
    try:
        modes = [MatchingMode.parse(m) for m in _csv(getattr(args, 'span', 'mina'))]
    except ValueError as err:
        raise UsageError(f'unknown matching mode: {err}') from None
    if not modes:
        raise UsageError('no matching mode given')
    return RunConfig(
        subcommand=args.subcommand, key_path=args.key,
        sys_path=getattr(args, 'sys', None), modes=modes,
        np_tags=args.np_tags, vp_tags=args.vp_tags, excluded_pos=args.excluded_pos,
        strict_paper=args.strict_paper, output_format=args.format,
        min_sidecar=getattr(args, 'min_sidecar', None), head_table=args.head_table,
        per_document=getattr(args, 'per_document', False),
        coref_column=args.coref_column)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format='minspan: %(levelname)s: %(message)s', stream=sys.stderr)
    try:
        config = config_from_args(args)
    except UsageError as err:
        print(f'minspan: error: {err}', file=sys.stderr)
        return 2
    return run(config)


if __name__ == '__main__':
    sys.exit(main())
