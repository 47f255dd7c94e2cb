"""
Mention length statistics
=========================

Length histograms of maximum and minimum spans for a CoNLL-2012 file.
Pass a path on the command line, otherwise a small built-in sample is used.
"""
import io
import sys

from minspan import read_conll
from minspan.stats import (fallback_mentions, format_length_table, length_stats,
                           overlap_distinctness)

SAMPLE = """#begin document (sample); part 000
sample 0 0 many JJ (TOP(S(NP* - - - - * (0
sample 0 1 big JJ * - - - - * -
sample 0 2 oil NN (UCP* - - - - * -
sample 0 3 and CC * - - - - * -
sample 0 4 airline NN *) - - - - * -
sample 0 5 companies NNS *) - - - - * 0)
sample 0 6 merged VBD (VP*) - - - - * -
sample 0 7 . . *)) - - - - * -

sample 0 0 John NNP (TOP(S(NP(NP*) - - - - * (3|(1)
sample 0 1 and CC * - - - - * -
sample 0 2 Mary NNP (NP*)) - - - - * (2)|3)
sample 0 3 left VBD (VP*) - - - - * -
sample 0 4 . . *)) - - - - * -

#end document
"""

if len(sys.argv) > 1:
    with open(sys.argv[1], encoding='utf-8') as f:
        docs = read_conll(f)
else:
    docs = read_conll(io.StringIO(SAMPLE))

stats = length_stats(docs)
print(format_length_table(stats))

for mention in fallback_mentions(docs):
    print('fallback:', mention)

# coordinations share a head with their first conjunct, never a minimum span
for v in overlap_distinctness(docs):
    print(v.mode, 'tokens', v.tokens, 'shared')
