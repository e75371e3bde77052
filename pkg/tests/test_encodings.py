# coding=utf-8
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lvec.checker import EMPTY, TypeChecker, validate
from lvec.encodings import (
    HADAMARD,
    KET_MINUS,
    KET_PLUS,
    MatRep,
    VecRep,
    basis_term,
    basis_type,
    decode_vector,
    diag,
    diagonal_matrix,
    encode_matrix,
    encode_vector,
    false_term,
    false_type,
    hadamard,
    hadamard_type,
    if_then_else,
    ket_minus,
    ket_plus,
    mat_tens,
    matrix_term,
    matrix_type,
    minus_type,
    pair,
    pi1,
    pi2,
    plus_type,
    tens,
    tensor_vectors,
    true_term,
    true_type,
    unit_vector,
    vector_term,
    vector_type,
)
from lvec.errors import DimensionMismatch, IndexOutOfRange, NotAVectorNormalForm
from lvec.parser import make_thunk
from lvec.printer import print_term
from lvec.rewrite import normalize
from lvec.scalars import INV_RT2, ONE, ZERO
from lvec.terms import App, Scale, Sum, Var, erase_key, make_sum
from lvec.type_core import GenVar, UnitVar, equiv_modulo_zero, make_type_sum, thunk_type, type_equiv

checker = TypeChecker()


def _type_of(term, context=EMPTY):
    type_, derivation = checker.infer(context, term)
    assert validate(derivation)
    return type_


class TestBasis:
    def test_term(self):
        assert print_term(basis_term(2, 3)) == "\\x1:X1. \\x2:X2. \\x3:X3. x2"

    def test_booleans(self):
        assert true_term() == basis_term(1, 2)
        assert false_type() == basis_type(2, 2)

    @pytest.mark.parametrize("i, n", [(1, 1), (1, 2), (2, 2), (3, 3)])
    def test_type(self, i, n):
        assert type_equiv(_type_of(basis_term(i, n)), basis_type(i, n))

    @pytest.mark.parametrize("i, n", [(0, 2), (3, 2), (1, 0)])
    def test_out_of_range(self, i, n):
        with pytest.raises(IndexOutOfRange):
            basis_term(i, n)

    def test_vector_type(self):
        term, type_ = encode_vector(VecRep.of([2, 0, 1]))
        assert type_equiv(_type_of(term), type_)


class TestNumeric:
    def test_hadamard_squared(self):
        assert HADAMARD.matmul(HADAMARD) == MatRep.identity(2)

    def test_apply(self):
        assert HADAMARD.apply(KET_PLUS) == unit_vector(1, 2)
        assert HADAMARD.apply(KET_MINUS) == unit_vector(2, 2)

    def test_kron(self):
        product = MatRep.identity(2).kron(HADAMARD)
        assert (product.rows, product.cols) == (4, 4)
        assert product.entry(3, 3) == -INV_RT2
        assert product.entry(0, 2) == ZERO

    def test_tensor(self):
        assert VecRep.of([1, 2]).tensor(VecRep.of([0, 1])) == VecRep.of([0, 1, 0, 2])

    def test_shapes(self):
        with pytest.raises(DimensionMismatch):
            MatRep.from_rows([[1, 0], [1]])
        with pytest.raises(DimensionMismatch):
            HADAMARD.apply(VecRep.of([1, 0, 0]))
        with pytest.raises(DimensionMismatch):
            HADAMARD.matmul(MatRep.identity(3))


class TestDecode:
    def test_decode(self):
        term = Sum(basis_term(2, 2), App(basis_term(1, 1), Var("y")))
        with pytest.raises(NotAVectorNormalForm):
            decode_vector(term, 2)

    def test_missing_entries_are_zero(self):
        assert decode_vector(basis_term(2, 3), 3) == VecRep.of([0, 1, 0])


entries = st.sampled_from([ZERO, ONE, -ONE, INV_RT2])


@st.composite
def _matrix_and_vector(draw):
    rows = draw(st.integers(min_value=1, max_value=3))
    cols = draw(st.integers(min_value=1, max_value=3))
    matrix = MatRep.from_rows([[draw(entries) for _ in range(cols)] for _ in range(rows)])
    vector = VecRep(tuple(draw(entries) for _ in range(cols)))
    return matrix, vector


class TestMatrices:
    def test_hadamard_type(self):
        assert type_equiv(_type_of(hadamard()), hadamard_type())

    def test_matrix_type(self):
        term, type_ = encode_matrix(MatRep.from_rows([[1, 2], [0, -1], [1, 1]]))
        assert type_equiv(_type_of(term), type_)

    @given(_matrix_and_vector())
    @settings(max_examples=20, deadline=None)
    def test_application_computes_the_product(self, case):
        matrix, vector = case
        trace = normalize(App(matrix_term(matrix), encode_vector(vector)[0]))
        assert decode_vector(trace.final, matrix.rows) == matrix.apply(vector)


class TestHadamard:
    def test_on_true(self):
        type_ = _type_of(App(hadamard(), true_term()))
        assert type_equiv(type_, plus_type())
        assert decode_vector(normalize(App(hadamard(), true_term())).final, 2) == KET_PLUS

    def test_on_false(self):
        assert type_equiv(_type_of(App(hadamard(), false_term())), minus_type())

    def test_on_plus(self):
        term = App(hadamard(), ket_plus())
        type_ = _type_of(term)
        assert equiv_modulo_zero(type_, true_type())
        assert not type_equiv(type_, true_type()), "the cancelled summand stays with a zero coefficient"
        assert erase_key(normalize(term).final) == erase_key(true_term())

    def test_on_minus(self):
        term = App(hadamard(), ket_minus())
        assert equiv_modulo_zero(_type_of(term), false_type())
        assert erase_key(normalize(term).final) == erase_key(false_term())


class TestLinearTest:
    context = {"a": UnitVar("A"), "b": UnitVar("A")}

    def test_true_branch(self):
        assert normalize(if_then_else(true_term(), Var("a"), Var("b"))).final == Var("a")

    def test_false_branch(self):
        assert normalize(if_then_else(false_term(), Var("a"), Var("b"))).final == Var("b")

    def test_superposition(self):
        final = normalize(if_then_else(ket_plus(), Var("a"), Var("b"))).final
        assert final == Sum(Scale(INV_RT2, Var("a")), Scale(INV_RT2, Var("b")))

    def test_type(self):
        type_ = _type_of(if_then_else(true_term(), Var("a"), Var("b")), self.context)
        assert type_equiv(type_, UnitVar("A"))


class TestPairs:
    def test_projections_of_a_sum_of_pairs(self):
        U, V, U2, V2 = UnitVar("U"), UnitVar("V"), UnitVar("U2"), UnitVar("V2")
        context = {"b": U, "c": V, "b2": U2, "c2": V2}
        pairs = Sum(pair(Var("b"), Var("c"), U, V), pair(Var("b2"), Var("c2"), U2, V2))
        term = App(Sum(pi1(context=context), pi2(context=context)), pairs)
        assert type_equiv(_type_of(term, context), make_type_sum([U, U2, V, V2]))
        assert normalize(term).final == make_sum([Var("b"), Var("c"), Var("b2"), Var("c2")])

    def test_projection_components_avoid_the_context(self):
        projection = pi1(context={"b": UnitVar("U"), "c": UnitVar("V1")})
        assert projection.body.arg.annotation == UnitVar("U1")
        assert projection.body.arg.body.annotation == UnitVar("V")

    def test_projection_is_generalised(self):
        type_ = _type_of(pi2())
        assert str(type_).startswith("forall U V.")


class TestTensor:
    def test_vectors(self):
        u, v = VecRep.of([1, 0]), VecRep.of([0, 1])
        term = tensor_vectors(u, v)
        assert type_equiv(_type_of(term), vector_type(u.tensor(v)))
        assert decode_vector(normalize(term).final, 4) == VecRep.of([0, 1, 0, 0])

    def test_typed_by_dimension(self):
        term = App(
            App(tens(2, 2, vector_type(KET_PLUS), vector_type(KET_MINUS)), make_thunk(vector_term(KET_PLUS))),
            make_thunk(vector_term(KET_MINUS)),
        )
        assert type_equiv(_type_of(term), vector_type(KET_PLUS.tensor(KET_MINUS)))
        assert decode_vector(normalize(term).final, 4) == KET_PLUS.tensor(KET_MINUS)

    def test_generic_without_types(self):
        combinator = tens(2, 3)
        assert combinator.annotation == thunk_type(GenVar("U"))
        assert combinator.body.annotation == thunk_type(GenVar("V"))

    def test_matrices(self):
        term = App(App(mat_tens(HADAMARD, HADAMARD), matrix_term(HADAMARD)), matrix_term(HADAMARD))
        assert type_equiv(_type_of(term), matrix_type(HADAMARD.kron(HADAMARD)))

    def test_matrices_typed_by_shape(self):
        identity = MatRep.identity(2)
        combinator = mat_tens((2, 2), (2, 2), matrix_type(HADAMARD), matrix_type(identity))
        term = App(App(combinator, matrix_term(HADAMARD)), matrix_term(identity))
        assert type_equiv(_type_of(term), matrix_type(HADAMARD.kron(identity)))

    def test_diagonal_of_a_frozen_vector(self):
        vector = VecRep.of([2, -1])
        term = App(diag(2, vector), make_thunk(vector_term(vector)))
        assert type_equiv(_type_of(term), matrix_type(diagonal_matrix(vector)))
        first = normalize(App(term, basis_term(1, 2))).final
        assert decode_vector(first, 2) == VecRep.of([2, 0])
