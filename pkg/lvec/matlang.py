# coding=utf-8
"""
Mat: a small language of matrices and vectors compiled to lvec terms.

Concrete syntax::

    [[1, 0], [0, 1]]        matrix, row by row
    [1/2*rt2, -1/2*rt2]     vector
    kron(x, y)              tensor product of two matrices or two vectors
    apply(x, y)             matrix-matrix or matrix-vector product
    H  ket0  ket1  plus  minus  id2
                            built-in names
    name = expression       definition, usable on later lines

Entries are scalar expressions.  Files hold one item per line, ``--``
starts a comment.
"""
import random
from dataclasses import dataclass
from typing import Optional, Union

from lvec.checker import EMPTY, TypeChecker
from lvec.encodings import (
    HADAMARD,
    KET_MINUS,
    KET_PLUS,
    MatRep,
    VecRep,
    basis_term,
    decode_vector,
    mat_tens,
    matmul_app,
    matrix_term,
    matrix_type,
    tens,
    unit_vector,
    vector_term,
    vector_type,
)
from lvec.errors import DimensionMismatch, LvecError, ParseError, SoundnessViolation, TypeMismatch
from lvec.log_utils import get_default_logger
from lvec.parser import Parser, make_thunk, tokenize
from lvec.printer import print_type
from lvec.rewrite import DEFAULT_FUEL, ReductionEngine
from lvec.scalars import INV_RT2, ONE, ZERO, Scalar, format_scalar
from lvec.terms import App
from lvec.type_core import type_equiv

log = get_default_logger(__name__)

HALF = ONE / Scalar(2)

ENTRY_CHOICES = (ZERO, ONE, -ONE, HALF, -HALF, INV_RT2, -INV_RT2)


# Expressions


class MatExpr(object):
    def __str__(self):
        return format_mat(self)


@dataclass(frozen=True, eq=True)
class MatLit(MatExpr):
    value: MatRep


@dataclass(frozen=True, eq=True)
class VecLit(MatExpr):
    value: VecRep


@dataclass(frozen=True, eq=True)
class TensorM(MatExpr):
    left: MatExpr
    right: MatExpr


@dataclass(frozen=True, eq=True)
class TensorV(MatExpr):
    left: MatExpr
    right: MatExpr


@dataclass(frozen=True, eq=True)
class ApplyMM(MatExpr):
    left: MatExpr
    right: MatExpr


@dataclass(frozen=True, eq=True)
class ApplyMV(MatExpr):
    left: MatExpr
    right: MatExpr


@dataclass(frozen=True)
class MatDim:
    """
    ``(rows, cols)`` for a matrix, ``rows`` alone for a vector
    """

    rows: int
    cols: Optional[int] = None

    @property
    def is_vector(self):
        return self.cols is None

    def __str__(self):
        if self.is_vector:
            return str(self.rows)
        return "({},{})".format(self.rows, self.cols)

    def to_dict(self):
        if self.is_vector:
            return {"kind": "vector", "size": self.rows}
        return {"kind": "matrix", "rows": self.rows, "cols": self.cols}


BUILTINS = {
    "H": MatLit(HADAMARD),
    "id2": MatLit(MatRep.identity(2)),
    "ket0": VecLit(unit_vector(1, 2)),
    "ket1": VecLit(unit_vector(2, 2)),
    "plus": VecLit(KET_PLUS),
    "minus": VecLit(KET_MINUS),
}


def _format_entries(values):
    return "[{}]".format(", ".join(format_scalar(value) for value in values))


def format_mat(expr):
    """
    Print an expression back in the concrete syntax
    >>> format_mat(ApplyMV(MatLit(MatRep.identity(2)), VecLit(VecRep.of([1, 0]))))
    'apply([[1, 0], [0, 1]], [1, 0])'
    """
    if isinstance(expr, MatLit):
        matrix = expr.value
        return "[{}]".format(", ".join(_format_entries(matrix.row(i)) for i in range(matrix.rows)))
    if isinstance(expr, VecLit):
        return _format_entries(expr.value)
    if isinstance(expr, (TensorM, TensorV)):
        return "kron({}, {})".format(format_mat(expr.left), format_mat(expr.right))
    return "apply({}, {})".format(format_mat(expr.left), format_mat(expr.right))


# Parsing


class MatParser(Parser):
    """
    Mat expressions on top of the lvec tokenizer and scalar grammar
    """

    def __init__(self, tokens, environment=None):
        super(MatParser, self).__init__(tokens)
        self.environment = dict(BUILTINS)
        self.environment.update(environment or {})

    def parse_expression(self):
        token = self.peek()
        if self.accept("["):
            if self.at("["):
                rows = [self._row()]
                while self.accept(","):
                    rows.append(self._row())
                self.expect("]")
                try:
                    return MatLit(MatRep.from_rows(rows))
                except DimensionMismatch as e:
                    self.fail(str(e), token)
            entries = self._entries()
            self.expect("]")
            return VecLit(VecRep(tuple(entries)))
        if token.kind == "name" and token.value in ("kron", "apply") and self.peek(1).value == "(":
            self.advance()
            self.expect("(")
            left = self.parse_expression()
            self.expect(",")
            right = self.parse_expression()
            self.expect(")")
            return self._combine_exprs(token, left, right)
        if token.kind == "name":
            self.advance()
            if token.value not in self.environment:
                self.fail("Unknown matrix or vector {!r}".format(token.value), token)
            return self.environment[token.value]
        if self.accept("("):
            inner = self.parse_expression()
            self.expect(")")
            return inner
        self.fail("Expected a matrix or vector but found {}".format(self.describe(token)))

    def _row(self):
        self.expect("[")
        entries = self._entries()
        self.expect("]")
        return entries

    def _entries(self):
        entries = [self.parse_scalar()]
        while self.accept(","):
            entries.append(self.parse_scalar())
        return entries

    def _combine_exprs(self, token, left, right):
        try:
            left_dim, right_dim = dim_check(left), dim_check(right)
        except DimensionMismatch as e:
            self.fail(str(e), token)
        if token.value == "kron":
            if left_dim.is_vector != right_dim.is_vector:
                self.fail("kron needs two matrices or two vectors, got {} and {}".format(left_dim, right_dim), token)
            return TensorV(left, right) if left_dim.is_vector else TensorM(left, right)
        if left_dim.is_vector:
            self.fail("apply needs a matrix on the left, got a vector of size {}".format(left_dim), token)
        return ApplyMV(left, right) if right_dim.is_vector else ApplyMM(left, right)


def parse_mat(text, environment=None):
    """
    :param text: one Mat expression
    :param environment: extra named expressions
    :return: MatExpr
    """
    parser = MatParser(tokenize(text), environment)
    result = parser.parse_expression()
    parser.expect_end()
    return result


@dataclass(frozen=True)
class MatItem:
    expr: MatExpr
    line: int
    name: Optional[str] = None


def parse_mat_program(text):
    """
    Parse a ``.mat`` file: one expression or ``name = expression`` per line
    :return: list of MatItem, definitions included
    """
    environment = {}
    items = []
    for number, line in enumerate(text.splitlines(), 1):
        source = line.split("--", 1)[0].strip()
        if not source:
            continue
        name = None
        head, sep, rest = source.partition("=")
        if sep and head.strip().isidentifier():
            name, source = head.strip(), rest
        try:
            expr = parse_mat(source, environment)
        except ParseError as e:
            raise ParseError(str(e.args[0]), line=number, column=e.column, reason=e.reason)
        if name is not None:
            environment[name] = expr
        items.append(MatItem(expr, number, name))
    log.debug("Parsed %d Mat items", len(items))
    return items


# Dimensions and numeric semantics


def dim_check(expr):
    """
    Dimension of an expression:
    ``kron(M, N) : (mm', nn')``, ``kron(u, v) : nm``,
    ``apply(M, N) : (m, n)`` for ``M : (m, k)`` and ``N : (k, n)``,
    ``apply(M, u) : m`` for ``M : (m, n)`` and ``u : n``
    :raise DimensionMismatch: naming the offending subexpression
    """
    if isinstance(expr, MatLit):
        return MatDim(expr.value.rows, expr.value.cols)
    if isinstance(expr, VecLit):
        if expr.value.dimension == 0:
            raise DimensionMismatch("Empty vector", expression=expr)
        return MatDim(expr.value.dimension)
    left, right = dim_check(expr.left), dim_check(expr.right)
    if isinstance(expr, TensorM):
        if left.is_vector or right.is_vector:
            raise DimensionMismatch("kron of a matrix and a vector in {}".format(expr), expression=expr)
        return MatDim(left.rows * right.rows, left.cols * right.cols)
    if isinstance(expr, TensorV):
        if not (left.is_vector and right.is_vector):
            raise DimensionMismatch("kron of a matrix and a vector in {}".format(expr), expression=expr)
        return MatDim(left.rows * right.rows)
    if left.is_vector:
        raise DimensionMismatch("A vector cannot be applied in {}".format(expr), expression=expr)
    if isinstance(expr, ApplyMV):
        if not right.is_vector or left.cols != right.rows:
            raise DimensionMismatch(
                "Cannot apply a {} matrix to a vector of size {} in {}".format(left, right, expr), expression=expr
            )
        return MatDim(left.rows)
    if right.is_vector or left.cols != right.rows:
        raise DimensionMismatch("Cannot multiply {} by {} in {}".format(left, right, expr), expression=expr)
    return MatDim(left.rows, right.cols)


def eval_numeric(expr):
    """
    Exact value of an expression over the scalar ring
    :return: MatRep or VecRep
    """
    dim_check(expr)
    return _evaluate(expr)


def _evaluate(expr):
    if isinstance(expr, (MatLit, VecLit)):
        return expr.value
    left, right = _evaluate(expr.left), _evaluate(expr.right)
    if isinstance(expr, (TensorM, TensorV)):
        return left.kron(right) if isinstance(expr, TensorM) else left.tensor(right)
    if isinstance(expr, ApplyMV):
        return left.apply(right)
    return left.matmul(right)


def value_type(value):
    if isinstance(value, MatRep):
        return matrix_type(value)
    return vector_type(value)


# Compilation


def compile_mat(expr, checker=None):
    """
    Translate an expression into a term, bottom-up.  Combinators are
    annotated with the types the checker gives the compiled operands, so the
    translation never looks at numeric values.
    :return: (Term, Type), the type being the one inferred for the term
    """
    dim_check(expr)
    checker = checker or TypeChecker()
    term = _compile(expr, checker)
    return term, checker.infer(EMPTY, term)[0]


def _compile(expr, checker):
    if isinstance(expr, MatLit):
        return matrix_term(expr.value)
    if isinstance(expr, VecLit):
        return vector_term(expr.value)
    left, right = _compile(expr.left, checker), _compile(expr.right, checker)
    if isinstance(expr, ApplyMV):
        return App(left, right)
    left_type, right_type = checker.infer(EMPTY, left)[0], checker.infer(EMPTY, right)[0]
    left_dim, right_dim = dim_check(expr.left), dim_check(expr.right)
    if isinstance(expr, TensorV):
        combinator = tens(left_dim.rows, right_dim.rows, left_type, right_type)
        return App(App(combinator, make_thunk(left)), make_thunk(right))
    shapes = (left_dim.rows, left_dim.cols), (right_dim.rows, right_dim.cols)
    if isinstance(expr, ApplyMM):
        combinator = matmul_app(*shapes, left_type=left_type, right_type=right_type)
    else:
        combinator = mat_tens(*shapes, left_type=left_type, right_type=right_type)
    return App(App(combinator, left), right)


# Soundness


@dataclass
class SoundnessReport:
    expression: MatExpr
    dimension: MatDim
    expected: Union[MatRep, VecRep]
    type_checked: bool = False
    decoded: Optional[list] = None
    steps: int = 0
    error: Optional[str] = None

    @property
    def passed(self):
        return self.error is None

    def to_dict(self):
        expected = self.expected.to_lists() if isinstance(self.expected, MatRep) else self.expected.to_list()
        decoded = None
        if self.decoded is not None:
            decoded = [value.to_list() for value in self.decoded]
        return {
            "expression": format_mat(self.expression),
            "dimension": self.dimension.to_dict(),
            "status": "pass" if self.passed else "fail",
            "type_checked": self.type_checked,
            "expected": expected,
            "decoded": decoded,
            "steps": self.steps,
            "error": self.error,
        }


def verify_soundness(expr, fuel=DEFAULT_FUEL, strict=True, checker=None):
    """
    Check that the compiled term has the type of the numeric value and
    that its normal form decodes to that value.  Matrix results are
    compared column by column, applying the compiled term to each basis
    vector.
    :param expr: MatExpr
    :param fuel: reduction budget per normalisation
    :param strict: raise instead of returning a failed report
    :param checker: TypeChecker to use
    :return: SoundnessReport
    :raise SoundnessViolation: when ``strict`` and a check fails
    """
    dimension = dim_check(expr)
    expected = _evaluate(expr)
    report = SoundnessReport(expr, dimension, expected)
    checker = checker or TypeChecker()
    engine = ReductionEngine(fuel=fuel)
    expected_type = value_type(expected)
    try:
        term, compiled_type = compile_mat(expr, checker)
        if not type_equiv(compiled_type, expected_type):
            raise TypeMismatch(
                "Compiled type {} is not the type {} of the value".format(
                    print_type(compiled_type, canonical=True), print_type(expected_type, canonical=True)
                ),
                inferred=compiled_type,
                expected=expected_type,
            )
        report.type_checked = True
        if dimension.is_vector:
            report.decoded = [_decode(engine, term, dimension.rows, report)]
            mismatch = report.decoded[0] != expected
        else:
            report.decoded = [
                _decode(engine, App(term, basis_term(j, dimension.cols)), dimension.rows, report)
                for j in range(1, dimension.cols + 1)
            ]
            mismatch = report.decoded != expected.columns()
        if mismatch:
            report.error = "Normal form decodes to a different value"
    except LvecError as e:
        report.error = "{}: {}".format(e.__class__.__name__, e)
    if report.passed:
        log.info("Mat expression %s is sound at type %s", format_mat(expr), print_type(expected_type))
    else:
        log.warning("Mat expression %s failed: %s", format_mat(expr), report.error)
        if strict:
            raise SoundnessViolation(report.error, report=report)
    return report


def _decode(engine, term, size, report):
    trace = engine.normalize(term)
    report.steps += len(trace.steps)
    return decode_vector(trace.final, size)


# Random expressions


class MatGenerator(object):
    """
    Random well-dimensioned expressions with every intermediate dimension
    at most ``max_dim`` and nesting at most ``max_depth``
    """

    def __init__(self, seed=None, max_dim=4, max_depth=3, entries=ENTRY_CHOICES):
        self.random = random.Random(seed)
        self.max_dim = max_dim
        self.max_depth = max_depth
        self.entries = tuple(entries)

    def expression(self):
        rows = self.random.randint(1, self.max_dim)
        if self.random.random() < 0.5:
            return self.vector(rows, self.max_depth)
        return self.matrix(rows, self.random.randint(1, self.max_dim), self.max_depth)

    def expressions(self, count):
        return [self.expression() for _ in range(count)]

    def _entry(self):
        return self.random.choice(self.entries)

    def _factorisations(self, n):
        return [(a, n // a) for a in range(2, n) if n % a == 0]

    def vector(self, size, depth):
        choices = ["literal"]
        if depth > 0:
            choices.append("apply")
            if self._factorisations(size):
                choices.append("kron")
        choice = self.random.choice(choices)
        if choice == "apply":
            inner = self.random.randint(1, self.max_dim)
            return ApplyMV(self.matrix(size, inner, depth - 1), self.vector(inner, depth - 1))
        if choice == "kron":
            left, right = self.random.choice(self._factorisations(size))
            return TensorV(self.vector(left, depth - 1), self.vector(right, depth - 1))
        return VecLit(VecRep(tuple(self._entry() for _ in range(size))))

    def matrix(self, rows, cols, depth):
        choices = ["literal"]
        if depth > 0:
            choices.append("apply")
            if self._factorisations(rows) and self._factorisations(cols):
                choices.append("kron")
        choice = self.random.choice(choices)
        if choice == "apply":
            inner = self.random.randint(1, self.max_dim)
            return ApplyMM(self.matrix(rows, inner, depth - 1), self.matrix(inner, cols, depth - 1))
        if choice == "kron":
            top, bottom = self.random.choice(self._factorisations(rows))
            left, right = self.random.choice(self._factorisations(cols))
            return TensorM(self.matrix(top, left, depth - 1), self.matrix(bottom, right, depth - 1))
        return MatLit(MatRep.from_rows([[self._entry() for _ in range(cols)] for _ in range(rows)]))


def verify_suite(expressions, fuel=DEFAULT_FUEL):
    """
    Run verify_soundness over many expressions without stopping at the
    first failure
    :return: list of SoundnessReport
    """
    checker = TypeChecker()
    reports = [verify_soundness(expr, fuel=fuel, strict=False, checker=checker) for expr in expressions]
    failed = sum(1 for report in reports if not report.passed)
    log.info("Verified %d Mat expressions, %d failed", len(reports), failed)
    return reports
