"""
Scoring one system under every matching mode
============================================

Build a tiny key and system in CoNLL-2012 format, then score them with
maximum spans, minimum spans and head words.
"""
import io

from minspan import read_conll, score_modes
from minspan.metrics import format_table

KEY = """#begin document (news); part 000
news 0 0 This DT (TOP(S(NP* - - - Speaker#1 * (1
news 0 1 News NNP * - - - Speaker#1 * -
news 0 2 Corp. NNP *) - - - Speaker#1 * 1)
news 0 3 has VBZ (VP* - - - Speaker#1 * -
news 0 4 an DT (NP(NP* - - - Speaker#1 * (0
news 0 5 extensive JJ * - - - Speaker#1 * -
news 0 6 presence NN *)) - - - Speaker#1 * 0)
news 0 7 , , * - - - Speaker#1 * -
news 0 8 of IN (PP* - - - Speaker#1 * -
news 0 9 course NN (NP*)) - - - Speaker#1 * -
news 0 10 in IN (PP* - - - Speaker#1 * -
news 0 11 this DT (NP* - - - Speaker#1 * -
news 0 12 country NN *))) - - - Speaker#1 * -
news 0 13 . . *)) - - - Speaker#1 * -

news 0 0 That DT (TOP(S(NP* - - - Speaker#1 * (0
news 0 1 presence NN *) - - - Speaker#1 * 0)
news 0 2 grew VBD (VP*) - - - Speaker#1 * -
news 0 3 . . *)) - - - Speaker#1 * -

#end document
"""

# the system sees the same mentions, but over-extends the first "presence"
SYS = KEY.replace('news 0 6 presence NN *)) - - - Speaker#1 * 0)',
                  'news 0 6 presence NN *)) - - - Speaker#1 * -')
SYS = SYS.replace('news 0 12 country NN *))) - - - Speaker#1 * -',
                  'news 0 12 country NN *))) - - - Speaker#1 * 0)')

key = read_conll(io.StringIO(KEY))
system = read_conll(io.StringIO(SYS))

reports = score_modes(key, system, ['max', 'mina', 'head'])
print(format_table(list(reports.values())))

# warnings explain any identity collisions after projection
for mode, report in reports.items():
    for warning in report.warnings:
        print(mode.value, warning)
