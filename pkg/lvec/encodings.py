# coding=utf-8
"""
Encodings of booleans, vectors, matrices and linear-algebra combinators.

An ``n``-dimensional vector ``(a1, ..., an)`` is the term
``a1 * e1 + ... + an * en`` where ``ei = \\x1:X1. ... \\xn:Xn. xi``, typed
``a1 * E1 + ... + an * En`` with ``Ei = forall X1 ... Xn. X1 -> ... -> Xn -> Xi``.
Zero coefficients are kept in both the term and the type.

A matrix is the abstraction over its frozen columns::

    mat(t1, ..., tn) = \\x:G. {((x) [t1]) ... [tn]}

whose type is ``forall #X. ([C1] -> ... -> [Cn] -> [#X]) -> #X`` where
``[T]`` is the thunk type ``I -> T``.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

from lvec.errors import DimensionMismatch, IndexOutOfRange, NotAVectorNormalForm
from lvec.log_utils import get_default_logger
from lvec.parser import make_release as release
from lvec.parser import make_thunk as thunk
from lvec.scalars import INV_RT2, ONE, ZERO, Scalar, format_scalar
from lvec.terms import (
    App,
    Lam,
    LinearForm,
    Var,
    Zero,
    all_names,
    erase_key,
    free_vars,
    fresh_name,
    make_sum,
    scale,
    to_linear_form,
)
from lvec.type_core import (
    Arrow,
    ForallG,
    ForallU,
    GenVar,
    Type,
    UnitVar,
    arrows,
    fresh_type_name,
    make_type_sum,
    scale_type,
    thunk_type,
    type_names,
)

log = get_default_logger(__name__)


# Numeric representations


@dataclass(frozen=True)
class VecRep:
    coefficients: Tuple[Scalar, ...]

    @classmethod
    def of(cls, values):
        return cls(tuple(Scalar.coerce(value) for value in values))

    @property
    def dimension(self):
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __getitem__(self, index):
        return self.coefficients[index]

    def tensor(self, other):
        """
        Kronecker product, ``self`` indexing the outer blocks
        """
        return VecRep(tuple(a * b for a in self.coefficients for b in other.coefficients))

    def to_list(self):
        return [format_scalar(value) for value in self.coefficients]


@dataclass(frozen=True)
class MatRep:
    """
    ``rows`` x ``cols`` matrix with row-major ``entries``
    """

    rows: int
    cols: int
    entries: Tuple[Scalar, ...]

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0 or len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                "A {}x{} matrix needs {} entries, got {}".format(
                    self.rows, self.cols, self.rows * self.cols, len(self.entries)
                )
            )

    @classmethod
    def from_rows(cls, rows):
        rows = [list(row) for row in rows]
        if not rows or not rows[0]:
            raise DimensionMismatch("A matrix needs at least one row and one column")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise DimensionMismatch("Matrix rows have different lengths")
        return cls(len(rows), width, tuple(Scalar.coerce(value) for row in rows for value in row))

    @classmethod
    def from_columns(cls, columns):
        columns = [list(column) for column in columns]
        height = len(columns[0])
        return cls(height, len(columns), tuple(columns[j][i] for i in range(height) for j in range(len(columns))))

    @classmethod
    def identity(cls, n):
        return cls.from_rows([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    def entry(self, i, j):
        return self.entries[i * self.cols + j]

    def row(self, i):
        return [self.entry(i, j) for j in range(self.cols)]

    def column(self, j):
        return VecRep(tuple(self.entry(i, j) for i in range(self.rows)))

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def apply(self, vector):
        if vector.dimension != self.cols:
            raise DimensionMismatch(
                "Cannot apply a {}x{} matrix to a vector of size {}".format(self.rows, self.cols, vector.dimension)
            )
        return VecRep(
            tuple(
                sum((self.entry(i, j) * vector[j] for j in range(self.cols)), ZERO) for i in range(self.rows)
            )
        )

    def matmul(self, other):
        if self.cols != other.rows:
            raise DimensionMismatch(
                "Cannot multiply {}x{} by {}x{}".format(self.rows, self.cols, other.rows, other.cols)
            )
        return MatRep.from_columns([self.apply(column) for column in other.columns()])

    def kron(self, other):
        columns = [left.tensor(right) for left in self.columns() for right in other.columns()]
        return MatRep.from_columns(columns)

    def to_lists(self):
        return [[format_scalar(value) for value in self.row(i)] for i in range(self.rows)]


# Basis vectors


def _check_index(i, n):
    if n <= 0:
        raise IndexOutOfRange("Dimension must be positive, got {}".format(n))
    if not 1 <= i <= n:
        raise IndexOutOfRange("Index {} is outside 1..{}".format(i, n))


@lru_cache(maxsize=256)
def basis_term(i, n):
    """
    ``\\x1:X1. ... \\xn:Xn. xi``
    """
    _check_index(i, n)
    body = Var("x{}".format(i))
    for k in range(n, 0, -1):
        body = Lam("x{}".format(k), UnitVar("X{}".format(k)), body)
    return body


@lru_cache(maxsize=256)
def basis_type(i, n):
    """
    ``forall X1 ... Xn. X1 -> ... -> Xn -> Xi``
    """
    _check_index(i, n)
    variables = [UnitVar("X{}".format(k)) for k in range(1, n + 1)]
    body = arrows(variables, variables[i - 1])
    for var in reversed(variables):
        body = ForallU(var.name, body)
    return body


def vector_term(vector):
    if vector.dimension == 0:
        raise IndexOutOfRange("Cannot encode an empty vector")
    n = vector.dimension
    return make_sum(scale(coeff, basis_term(i, n)) for i, coeff in enumerate(vector, 1))


def vector_type(vector):
    if vector.dimension == 0:
        raise IndexOutOfRange("Cannot encode an empty vector")
    n = vector.dimension
    return make_type_sum(scale_type(coeff, basis_type(i, n)) for i, coeff in enumerate(vector, 1))


def encode_vector(vector):
    """
    :param vector: VecRep
    :return: (Term, Type)
    """
    return vector_term(vector), vector_type(vector)


def decode_vector(normal_form, n):
    """
    Read a vector back from a normal form
    :param normal_form: LinearForm or Term
    :param n: expected dimension
    :return: VecRep
    :raise NotAVectorNormalForm: an atom is not a basis vector of dimension n
    """
    if not isinstance(normal_form, LinearForm):
        normal_form = to_linear_form(normal_form)
    keys = {erase_key(basis_term(i, n)): i for i in range(1, n + 1)}
    coefficients = [ZERO] * n
    for entry in normal_form:
        index = keys.get(erase_key(entry.atom))
        if index is None:
            raise NotAVectorNormalForm("{} is not a basis vector of dimension {}".format(entry.atom, n))
        coefficients[index - 1] = coefficients[index - 1] + entry.coeff
    return VecRep(tuple(coefficients))


def ones_vector(n):
    return VecRep(tuple(ONE for _ in range(n)))


def unit_vector(i, n):
    _check_index(i, n)
    return VecRep(tuple(ONE if k == i else ZERO for k in range(1, n + 1)))


# Thunks and matrices


def _infer(context, term):
    from lvec.checker import TypeChecker

    return TypeChecker().infer(context, term)[0]


def matrix_shape_type(column_types, result=None):
    """
    ``forall #X. ([C1] -> ... -> [Cn] -> [#X]) -> #X``
    """
    result = result or GenVar("X")
    shape = arrows([thunk_type(t) for t in column_types], thunk_type(result))
    return ForallG(result.name, Arrow(shape, result))


def mat_builder(columns, column_types=None, context=None):
    """
    ``\\x:G. {((x) [t1]) ... [tn]}``
    :param columns: column terms
    :param column_types: types of the columns, inferred in ``context`` when omitted
    :param context: typing context of the columns
    :return: Term
    """
    columns = list(columns)
    if column_types is None:
        log.debug("Inferring the types of %d matrix columns", len(columns))
        column_types = [_infer(context, column) for column in columns]
    avoid = set()
    for column in columns:
        avoid |= all_names(column)
    binder = fresh_name("x", avoid)
    result = GenVar("X")
    annotation = arrows([thunk_type(t) for t in column_types], thunk_type(result))
    body = Var(binder)
    for column in columns:
        body = App(body, thunk(column))
    return Lam(binder, annotation, release(body))


def matrix_term(matrix):
    return _matrix_term(matrix)


@lru_cache(maxsize=512)
def _matrix_term(matrix):
    columns = matrix.columns()
    return mat_builder([vector_term(column) for column in columns], [vector_type(column) for column in columns])


@lru_cache(maxsize=512)
def matrix_type(matrix):
    return matrix_shape_type([vector_type(column) for column in matrix.columns()])


def encode_matrix(matrix):
    return matrix_term(matrix), matrix_type(matrix)


def generic_matrix_type(cols):
    """
    Matrix type with a general variable per column, for combinators built
    without operand values
    """
    return matrix_shape_type([GenVar("C{}".format(j)) for j in range(1, cols + 1)])


def generic_vector_type():
    return GenVar("V")


def projection_matrix(i, n):
    _check_index(i, n)
    return MatRep.from_rows([[ONE if (r == c == i) else ZERO for c in range(1, n + 1)] for r in range(1, n + 1)])


def projection(i, n):
    """
    ``mat(0, ..., ei, ..., 0)``, the zero columns being zero-coefficient vectors
    """
    return matrix_term(projection_matrix(i, n))


def _operand_type(operand, given=None):
    """
    Annotation of a combinator binder: ``given`` when set, else the encoding
    of a concrete operand, else None for a generic combinator
    """
    if given is not None:
        return given
    if isinstance(operand, MatRep):
        return matrix_type(operand)
    if isinstance(operand, VecRep):
        return vector_type(operand)
    return None


def diag(n, vector=None):
    """
    ``\\b:[V]. mat((p1) {b}, ..., (pn) {b})`` sending a frozen vector to the
    diagonal matrix
    :param vector: VecRep or vector type of the frozen argument, generic when omitted
    """
    if isinstance(vector, VecRep) and vector.dimension != n:
        raise DimensionMismatch("diag of size {} applied to a vector of size {}".format(n, vector.dimension))
    b = Var("b")
    columns = [App(projection(i, n), release(b)) for i in range(1, n + 1)]
    vector = vector if isinstance(vector, Type) else _operand_type(vector)
    if vector is None:
        annotation = thunk_type(generic_vector_type())
        return Lam("b", annotation, mat_builder(columns, [GenVar("C{}".format(i)) for i in range(1, n + 1)]))
    annotation = thunk_type(vector)
    return Lam("b", annotation, mat_builder(columns, context={"b": annotation}))


def diagonal_matrix(vector):
    n = vector.dimension
    return MatRep.from_rows([[vector[i] if i == j else ZERO for j in range(n)] for i in range(n)])


def col(i, n, matrix=None):
    """
    ``\\x:M. (x) ei``, extracting the i-th of n columns
    :param matrix: MatRep or matrix type of the argument, generic when omitted
    """
    _check_index(i, n)
    if isinstance(matrix, MatRep) and matrix.cols != n:
        raise DimensionMismatch("col of {} columns applied to a {}x{} matrix".format(n, matrix.rows, matrix.cols))
    annotation = matrix if isinstance(matrix, Type) else _operand_type(matrix)
    if annotation is None:
        annotation = generic_matrix_type(n)
    return Lam("x", annotation, App(Var("x"), basis_term(i, n)))


def _shape(operand):
    if isinstance(operand, MatRep):
        return operand.rows, operand.cols
    return tuple(operand)


def matmul_app(left, right, left_type=None, right_type=None):
    """
    ``\\x. \\y. mat((x) ((col1) y), ..., (x) ((colk) y))``

    The binders are annotated with the operand types and the column types
    are those the checker gives the columns under these binders.

    :param left: MatRep, or its (rows, cols) shape
    :param right: MatRep, or its (rows, cols) shape
    :param left_type: matrix type of the left operand, taken from ``left`` when a MatRep
    :param right_type: matrix type of the right operand
    """
    left_rows, left_cols = _shape(left)
    right_rows, right_cols = _shape(right)
    if left_cols != right_rows:
        raise DimensionMismatch(
            "Cannot multiply {}x{} by {}x{}".format(left_rows, left_cols, right_rows, right_cols)
        )
    x_type = _operand_type(left, left_type)
    y_type = _operand_type(right, right_type)
    x, y = Var("x"), Var("y")
    if x_type is None or y_type is None:
        columns = [App(x, App(col(k, right_cols), y)) for k in range(1, right_cols + 1)]
        column_types = [GenVar("C{}".format(k)) for k in range(1, right_cols + 1)]
        x_type, y_type = generic_matrix_type(left_cols), generic_matrix_type(right_cols)
        return Lam("x", x_type, Lam("y", y_type, mat_builder(columns, column_types)))
    columns = [App(x, App(col(k, right_cols, y_type), y)) for k in range(1, right_cols + 1)]
    return Lam("x", x_type, Lam("y", y_type, mat_builder(columns, context={"x": x_type, "y": y_type})))


def _spread_matrix(n, m, outer):
    """
    ``(mn) x n`` matrix sending ``ek`` to the sum of the ``e((i-1)m+j)`` with
    ``i = k`` when ``outer`` else ``j = k``, one per column of the auxiliary
    matrices used by tens
    """
    size = n * m
    matrices = []
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            target = (i - 1) * m + j
            source_count = n if outer else m
            source = i if outer else j
            rows = [[ZERO] * source_count for _ in range(size)]
            rows[target - 1][source - 1] = ONE
            matrices.append(MatRep.from_rows(rows))
    return matrices


def _spread(n, m, vector, outer):
    """
    ``\\b:[V]. mat((Q11) {b}, ..., (Qnm) {b})``
    :param vector: type ``V`` of the frozen vector, generic when None
    """
    b = Var("b")
    matrices = _spread_matrix(n, m, outer)
    columns = [App(matrix_term(q), release(b)) for q in matrices]
    if vector is None:
        annotation = thunk_type(generic_vector_type())
        column_types = [GenVar("C{}".format(k)) for k in range(1, len(matrices) + 1)]
        return Lam("b", annotation, mat_builder(columns, column_types))
    annotation = thunk_type(vector)
    return Lam("b", annotation, mat_builder(columns, context={"b": annotation}))


def tens(u, v, first_type=None, second_type=None):
    """
    ``\\b. \\c. ((m1) b) (((m2) c) ones)``: tensor of two frozen vectors
    :param u: VecRep, or its dimension
    :param v: VecRep, or its dimension
    :param first_type: vector type frozen in ``b``, taken from ``u`` when a VecRep
    :param second_type: vector type frozen in ``c``
    """
    n = u.dimension if isinstance(u, VecRep) else int(u)
    m = v.dimension if isinstance(v, VecRep) else int(v)
    if n <= 0 or m <= 0:
        raise IndexOutOfRange("Tensor dimensions must be positive")
    first_type = _operand_type(u, first_type)
    second_type = _operand_type(v, second_type)
    if first_type is None or second_type is None:
        first_type, second_type = None, None
    first = _spread(n, m, first_type, outer=True)
    second = _spread(n, m, second_type, outer=False)
    ones = vector_term(ones_vector(n * m))
    body = App(App(first, Var("b")), App(App(second, Var("c")), ones))
    if first_type is None:
        b_type, c_type = thunk_type(GenVar("U")), thunk_type(GenVar("V"))
    else:
        b_type, c_type = thunk_type(first_type), thunk_type(second_type)
    return Lam("b", b_type, Lam("c", c_type, body))


def tensor_vectors(u, v):
    """
    ``((tens) [u]) [v]``
    """
    return App(App(tens(u, v), thunk(vector_term(u))), thunk(vector_term(v)))


def mat_tens(left, right, left_type=None, right_type=None):
    """
    ``\\b. \\c. mat(((tens) [(col1) b]) [(col1) c], ...)`` column by column in
    Kronecker order
    :param left: MatRep, or its (rows, cols) shape
    :param right: MatRep, or its (rows, cols) shape
    :param left_type: matrix type of the left operand, taken from ``left`` when a MatRep
    :param right_type: matrix type of the right operand
    """
    left_rows, left_cols = _shape(left)
    right_rows, right_cols = _shape(right)
    b_type = _operand_type(left, left_type)
    c_type = _operand_type(right, right_type)
    typed = b_type is not None and c_type is not None
    if not typed:
        b_type, c_type = generic_matrix_type(left_cols), generic_matrix_type(right_cols)
    context = {"b": b_type, "c": c_type}
    lefts = [App(col(j, left_cols, b_type), Var("b")) for j in range(1, left_cols + 1)]
    rights = [App(col(k, right_cols, c_type), Var("c")) for k in range(1, right_cols + 1)]
    if typed:
        left_types = [_infer(context, column) for column in lefts]
        right_types = [_infer(context, column) for column in rights]
    columns = []
    for j, left_column in enumerate(lefts):
        for k, right_column in enumerate(rights):
            if typed:
                combinator = tens(left_rows, right_rows, left_types[j], right_types[k])
            else:
                combinator = tens(left_rows, right_rows)
            columns.append(App(App(combinator, thunk(left_column)), thunk(right_column)))
    if typed:
        body = mat_builder(columns, context=context)
    else:
        body = mat_builder(columns, [GenVar("C{}".format(k)) for k in range(1, len(columns) + 1)])
    return Lam("b", b_type, Lam("c", c_type, body))


# Booleans and the Hadamard example


def true_term():
    return basis_term(1, 2)


def false_term():
    return basis_term(2, 2)


def true_type():
    return basis_type(1, 2)


def false_type():
    return basis_type(2, 2)


HADAMARD = MatRep.from_rows([[INV_RT2, INV_RT2], [INV_RT2, -INV_RT2]])
KET_PLUS = HADAMARD.column(0)
KET_MINUS = HADAMARD.column(1)


def hadamard():
    return matrix_term(HADAMARD)


def hadamard_type():
    return matrix_type(HADAMARD)


def ket_plus():
    return vector_term(KET_PLUS)


def ket_minus():
    return vector_term(KET_MINUS)


def plus_type():
    return vector_type(KET_PLUS)


def minus_type():
    return vector_type(KET_MINUS)


def identity_term():
    return Lam("x", UnitVar("X"), Var("x"))


def if_then_else(condition, then_branch, else_branch):
    """
    Linear test ``{((r) [s]) [t]}``
    """
    return release(App(App(condition, thunk(then_branch)), thunk(else_branch)))


# Pairs


def pair(first, second, first_type, second_type):
    """
    ``\\x:(U -> V -> X). ((x) b) c``
    """
    result = UnitVar("X")
    avoid = free_vars(first) | free_vars(second)
    binder = fresh_name("x", avoid)
    return Lam(binder, Arrow(first_type, Arrow(second_type, result)), App(App(Var(binder), first), second))


def _projection_of_pair(first_type, second_type, index):
    result = UnitVar("X")
    annotation = ForallU("X", Arrow(Arrow(first_type, Arrow(second_type, result)), result))
    selected = Var("y") if index == 1 else Var("z")
    selector = Lam("y", first_type, Lam("z", second_type, selected))
    return Lam("x", annotation, App(Var("x"), selector))


def _component_types(first_type, second_type, context):
    """
    Component types of a projection, unspecified ones named apart from the
    type variables of ``context`` so the projection generalises over them
    """
    bindings = () if context is None else context.items()
    avoid = {"X"}
    for _, unit in bindings:
        avoid |= type_names(unit)
    if first_type is None:
        first_type = UnitVar(fresh_type_name("U", avoid))
        avoid.add(first_type.name)
    if second_type is None:
        second_type = UnitVar(fresh_type_name("V", avoid))
    return first_type, second_type


def pi1(first_type=None, second_type=None, context=None):
    """
    ``\\x:(forall X. (U -> V -> X) -> X). (x) \\y:U. \\z:V. y``
    :param context: Context or mapping the projection is used in
    """
    return _projection_of_pair(*_component_types(first_type, second_type, context), 1)


def pi2(first_type=None, second_type=None, context=None):
    return _projection_of_pair(*_component_types(first_type, second_type, context), 2)


def zero_vector_term(n):
    return vector_term(VecRep(tuple(ZERO for _ in range(n))))


def is_zero_term(term):
    return isinstance(term, Zero) or to_linear_form(term).is_zero()
