# coding=utf-8


class LvecError(Exception):
    exit_code = 1

    def __init__(self, *args, **kwargs):
        self.reason = kwargs.get("reason")
        super(LvecError, self).__init__(*args)


class UsageError(LvecError):
    exit_code = 1


class IndexOutOfRange(UsageError):
    pass


class NotAVectorNormalForm(UsageError):
    pass


class DimensionMismatch(UsageError):
    def __init__(self, *args, **kwargs):
        self.expression = kwargs.get("expression")
        super(DimensionMismatch, self).__init__(*args, **kwargs)


class DefinitionError(UsageError):
    pass


class ParseError(LvecError):
    exit_code = 2

    def __init__(self, *args, **kwargs):
        self.line = kwargs.get("line")
        self.column = kwargs.get("column")
        super(ParseError, self).__init__(*args, **kwargs)

    def __str__(self):
        message = super(ParseError, self).__str__()
        if self.line is None:
            return message
        return "{} (line {}, column {})".format(message, self.line, self.column)


class TypeCheckError(LvecError):
    exit_code = 3

    def __init__(self, *args, **kwargs):
        self.term = kwargs.get("term")
        super(TypeCheckError, self).__init__(*args, **kwargs)


class UnannotatedBinder(TypeCheckError):
    pass


class NonUniformFunctionType(TypeCheckError):
    pass


class MatchFailure(TypeCheckError):
    pass


class AmbiguousMatch(TypeCheckError):
    def __init__(self, *args, **kwargs):
        self.candidates = kwargs.get("candidates", [])
        super(AmbiguousMatch, self).__init__(*args, **kwargs)


class SortMismatch(TypeCheckError):
    pass


class ZeroNeedsAnnotation(TypeCheckError):
    pass


class UnboundVariable(TypeCheckError):
    pass


class TypeMismatch(TypeCheckError):
    def __init__(self, *args, **kwargs):
        self.inferred = kwargs.get("inferred")
        self.expected = kwargs.get("expected")
        super(TypeMismatch, self).__init__(*args, **kwargs)


class DerivationError(TypeCheckError):
    def __init__(self, *args, **kwargs):
        self.node = kwargs.get("node")
        super(DerivationError, self).__init__(*args, **kwargs)


class FuelExhausted(LvecError):
    exit_code = 4

    def __init__(self, *args, **kwargs):
        self.trace = kwargs.get("trace")
        super(FuelExhausted, self).__init__(*args, **kwargs)


class PropertyViolation(LvecError):
    exit_code = 5

    def __init__(self, *args, **kwargs):
        self.report = kwargs.get("report")
        super(PropertyViolation, self).__init__(*args, **kwargs)


class SRViolation(PropertyViolation):
    pass


class NormalizationViolation(PropertyViolation):
    pass


class CharacterisationViolation(PropertyViolation):
    pass


class SoundnessViolation(PropertyViolation):
    pass


class LemmaViolation(PropertyViolation):
    pass
