class OrdataError(Exception):
    """ Base class of all errors raised by the toolkit. `kind` is the stable diagnostic tag. """

    kind = 'ERROR'

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def __str__(self):
        return '{}: {}'.format(self.kind, self.message)


class UnknownSymbolError(OrdataError):
    kind = 'UNKNOWN_SYMBOL'

    def __init__(self, symbol, where='alphabet'):
        super().__init__('symbol {!r} not in {}'.format(symbol, where), symbol=symbol)
        self.symbol = symbol


class AlphabetMismatchError(OrdataError):
    kind = 'ALPHABET_MISMATCH'


class DimensionMismatchError(OrdataError):
    kind = 'DIMENSION_MISMATCH'


class PreconditionViolated(OrdataError):
    kind = 'PRECONDITION_VIOLATED'

    def __init__(self, label, bound, actual):
        super().__init__('label {!r} has {} values, at least {} required'.format(label, actual, bound),
                         label=label, bound=bound, actual=actual)
        self.label = label
        self.bound = bound
        self.actual = actual


class DecodeFailed(OrdataError):
    kind = 'DECODE_FAILED'


class CapExceeded(OrdataError):
    kind = 'CAP_EXCEEDED'

    def __init__(self, cap, limit, message=None):
        super().__init__(message or '{} exceeds configured limit {}'.format(cap, limit), cap=cap, limit=limit)
        self.cap = cap
        self.limit = limit


class BudgetExhausted(OrdataError):
    kind = 'BUDGET_EXHAUSTED'

    def __init__(self, message, stats=None):
        super().__init__(message, stats=stats or {})
        self.stats = stats or {}


class NotATextError(OrdataError):
    kind = 'NOT_A_TEXT'

    def __init__(self, violated):
        super().__init__('not a text: {}'.format(violated), violated=violated)
        self.violated = violated


class ParseError(OrdataError):
    kind = 'PARSE_ERROR'

    def __init__(self, message, line=None, column=None):
        where = ''
        if line is not None:
            where = 'line {}'.format(line) if column is None else 'line {}, column {}'.format(line, column)
            where = ' ({})'.format(where)
        super().__init__('{}{}'.format(message, where), line=line, column=column)
        self.reason = message
        self.line = line
        self.column = column


class VerificationError(OrdataError):
    kind = 'VERIFICATION_FAILED'


class WitnessUnverified(OrdataError):
    """ A decoded witness whose membership re-check ran out of budget. """

    kind = 'WITNESS_UNVERIFIED'
