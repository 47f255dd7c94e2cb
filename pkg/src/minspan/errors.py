"""Exception hierarchy.

Every error raised on malformed input derives from :class:`MinspanError`, so
callers (and the command line) can separate data errors from programming
errors with a single ``except`` clause.
"""


class MinspanError(ValueError):
    pass


# -- bracketed trees --------------------------------------------------------

class TreeFormatError(MinspanError):
    pass


class UnbalancedBrackets(TreeFormatError):
    def __init__(self, position, message=None):
        self.position = position
        super().__init__(message or f'unbalanced brackets at offset {position}')


class EmptyConstituent(TreeFormatError):
    def __init__(self, position):
        self.position = position
        super().__init__(f'constituent without label or children at offset {position}')


class TrailingGarbage(TreeFormatError):
    def __init__(self, position):
        self.position = position
        super().__init__(f'unexpected input after the tree at offset {position}')


class EmptyTree(TreeFormatError):
    pass


# -- CoNLL files ------------------------------------------------------------

class ConllFormatError(MinspanError):
    pass


class MissingBeginDirective(ConllFormatError):
    def __init__(self, line):
        self.line = line
        super().__init__(f'line {line}: token row outside "#begin document" block')


class ColumnCountTooSmall(ConllFormatError):
    def __init__(self, line, found, needed):
        self.line = line
        super().__init__(f'line {line}: {found} columns, at least {needed} required')


class ParseBitImbalance(ConllFormatError):
    def __init__(self, sentence, detail=''):
        self.sentence = sentence
        msg = f'sentence {sentence}: parse bits do not form a tree'
        super().__init__(msg + (f' ({detail})' if detail else ''))


class CorefFieldMalformed(ConllFormatError):
    def __init__(self, line, field):
        self.line = line
        self.field = field
        super().__init__(f'line {line}: malformed coreference field {field!r}')


class UnclosedMention(ConllFormatError):
    def __init__(self, entity_id, sentence):
        self.entity_id = entity_id
        self.sentence = sentence
        super().__init__(f'sentence {sentence}: mention of entity {entity_id} never closed')


class CloseWithoutOpen(ConllFormatError):
    def __init__(self, entity_id, sentence, token):
        self.entity_id = entity_id
        self.sentence = sentence
        self.token = token
        super().__init__(f'sentence {sentence}, token {token}: '
                         f'entity {entity_id} closed but never opened')


class MinSidecarError(ConllFormatError):
    pass


# -- projection and scoring -------------------------------------------------

class SpanOutOfBounds(MinspanError):
    def __init__(self, mention):
        self.mention = mention
        super().__init__(f'mention outside its sentence: {mention}')


class MissingParse(MinspanError):
    pass


class MinAnnotationMissing(MinspanError):
    pass


class DocumentSetMismatch(MinspanError):
    pass


class TokenizationMismatch(MinspanError):
    pass
