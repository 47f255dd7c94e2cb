"""
Minimum spans and heads on a few noun phrases
=============================================

Parse a bracketed tree, pick a mention span and compare the minimum span
with the syntactic head.
"""
from minspan import (STRICT_POLICY, SpanInterval, extract_min_span, head_span,
                     mention_subtree, parse_bracketed)

tree = parse_bracketed(
    '(TOP (S (NP (DT This) (NNP News) (NNP Corp.)) (VP (VBZ has) (NP (NP (DT an) '
    '(JJ extensive) (NN presence))) (, ,) (PP (IN of) (NP (NN course))) (PP (IN in) '
    '(NP (DT this) (NN country)))) (. .)))')
words = [leaf.token for leaf in tree.leaves()]


def show(span, policy=None):
    sub = mention_subtree(tree, SpanInterval(*span))
    result = extract_min_span(sub) if policy is None else extract_min_span(sub, policy)
    head = head_span(sub)
    print(' '.join(words[span[0]:span[1] + 1]))
    print('  min span:', [words[i] for i in result.token_indices],
          '(fallback)' if result.used_fallback else '')
    print('  head    :', words[head.token_index], head.rule_fired.name)


# the annotated span is a constituent
show((4, 6))

# a system span that swallows the rest of the clause is not one; a dummy root
# is built over it. The minimum span is unchanged, the head moves to "country"
show((4, 12))

# with only DT and CC excluded the result is the same: the comma hangs directly
# off the dummy root, and only children of a phrase can be units
show((4, 12), STRICT_POLICY)

# a coordination keeps every conjunct
names = parse_bracketed(
    '(NP (NP (NNP Joran) (NNP Van) (NNP Der) (NNP Sloot)) (NP (NNP Deepak) '
    '(NNP Kalpoe)) (CC and) (NP (NNP Satish) (NNP Kalpoe)))')
result = extract_min_span(names)
print([names.leaves()[i].token for i in result.token_indices])
