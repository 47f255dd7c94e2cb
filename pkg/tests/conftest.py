import io
import random

import pytest

from minspan.conll import read_conll

from corpus_builders import conll_text

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if report.when != 'call' and not (report.when == 'setup' and report.skipped):
        return
    for marker in report.keywords:
        if marker.startswith('criterion_'):
            number = int(marker.split('_')[1])
            outcome = 'PASS' if report.passed else ('SKIP' if report.skipped else 'FAIL')
            previous = _CRITERIA.get(number, 'PASS')
            if previous == 'FAIL' or outcome == 'FAIL':
                _CRITERIA[number] = 'FAIL'
            elif previous == 'SKIP' or outcome == 'SKIP':
                _CRITERIA[number] = 'SKIP'
            else:
                _CRITERIA[number] = 'PASS'


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section('acceptance criteria')
    for number in sorted(_CRITERIA):
        terminalreporter.write_line(f'criterion {number}: {_CRITERIA[number]}')


@pytest.fixture
def rng():
    return random.Random(20240611)


# "This News Corp. has an extensive presence, of course in this country."
EXAMPLE_TREES = [
    '(TOP (S (NP (DT This) (NNP News) (NNP Corp.)) (VP (VBZ has) (NP (NP (DT an) '
    '(JJ extensive) (NN presence))) (, ,) (PP (IN of) (NP (NN course))) (PP (IN in) '
    '(NP (DT this) (NN country)))) (. .)))',
    '(TOP (S (NP (DT That) (NN presence)) (VP (MD may) (VP (VB be) (VP (VBG expanding) '
    '(ADVP (RB soon))))) (. .)))',
    '(TOP (S (NP (PRP It)) (VP (VBZ owns) (NP (NNS papers))) (. .)))',
]


def example_documents(system=False):
    presence = (4, 12) if system else (4, 6)
    return [('news', 0, [
        (EXAMPLE_TREES[0], [(0, 2, 1), (presence[0], presence[1], 0)]),
        (EXAMPLE_TREES[1], [(0, 1, 0)]),
        (EXAMPLE_TREES[2], [(0, 0, 1)]),
    ])]


@pytest.fixture
def example_key():
    return read_conll(io.StringIO(conll_text(example_documents())))


@pytest.fixture
def example_sys():
    return read_conll(io.StringIO(conll_text(example_documents(system=True))))
