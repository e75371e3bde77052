# coding=utf-8
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lvec.errors import ParseError
from lvec.parser import (
    Definition,
    Expression,
    TypeDefinition,
    make_release,
    make_thunk,
    parse_program,
    parse_term,
    parse_type,
)
from lvec.printer import print_term, print_type
from lvec.scalars import INV_RT2, MINUS_ONE, TWO
from lvec.terms import App, Inst, Lam, Scale, Sum, Var, Zero
from lvec.type_core import IDENTITY_TYPE, Arrow, ForallG, ForallU, GenVar, ScaleT, SumT, UnitVar

X, Y = UnitVar("X"), UnitVar("Y")


class TestTerms:
    def test_lambda(self):
        assert parse_term("\\x:X. x") == Lam("x", X, Var("x"))

    def test_unicode_lambda(self):
        assert parse_term("λx:X. x") == parse_term("\\x:X. x")

    def test_unannotated_lambda(self):
        term = parse_term("\\x. x")
        assert isinstance(term, Lam) and term.annotation is None

    def test_application_is_left_associative(self):
        assert parse_term("(f) x y") == App(App(Var("f"), Var("x")), Var("y"))

    def test_scaling_and_sum(self):
        assert parse_term("2 * x + y") == Sum(Scale(TWO, Var("x")), Var("y"))

    def test_difference(self):
        assert parse_term("x - y") == Sum(Var("x"), Scale(MINUS_ONE, Var("y")))

    def test_rt2_coefficient(self):
        assert parse_term("1/2*rt2 * x") == Scale(INV_RT2, Var("x"))

    def test_zero(self):
        assert isinstance(parse_term("0"), Zero)

    def test_ascribed_zero(self):
        term = parse_term("(0 : X -> X)")
        assert isinstance(term, Zero)
        assert term.annotation == Arrow(X, X)

    def test_thunk_and_release(self):
        assert parse_term("[x]") == make_thunk(Var("x"))
        assert parse_term("[x]").annotation == IDENTITY_TYPE
        assert parse_term("{x}") == make_release(Var("x"))

    def test_instantiation(self):
        assert parse_term("x@[X, Y]") == Inst(Var("x"), (X, Y))

    def test_lambda_argument_without_parentheses(self):
        assert parse_term("(f) \\x:X. x") == App(Var("f"), Lam("x", X, Var("x")))

    @pytest.mark.parametrize(
        "text",
        ["(x", "\\x:X x", "2 x", "x +", "\\x:X + Y. x", "(x : X)", "x )", "forall"],
    )
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse_term(text)

    def test_error_position(self):
        with pytest.raises(ParseError) as error:
            parse_term("(x")
        assert error.value.line == 1
        assert "line 1" in str(error.value)


class TestTypes:
    def test_arrow_is_right_associative(self):
        assert parse_type("X -> Y -> X") == Arrow(X, Arrow(Y, X))

    def test_forall(self):
        assert parse_type("forall X #Y. X -> #Y") == ForallU("X", ForallG("Y", Arrow(X, GenVar("Y"))))

    def test_sum_and_scale(self):
        assert parse_type("2 * X + Y") == SumT(ScaleT(TWO, X), Y)

    def test_difference(self):
        assert parse_type("X - Y") == SumT(X, ScaleT(MINUS_ONE, Y))

    def test_arrow_domain_must_be_unit(self):
        with pytest.raises(ParseError):
            parse_type("(X + Y) -> X")

    def test_arrow_codomain_is_a_general_type(self):
        assert parse_type("Y -> 2 * X + Y") == Arrow(Y, SumT(ScaleT(TWO, X), Y))
        assert parse_type("forall #W. Y -> 2 * #W") == ForallG("W", Arrow(Y, ScaleT(TWO, GenVar("W"))))

    def test_closed_arrow_in_a_sum(self):
        assert parse_type("(X -> Y) + X") == SumT(Arrow(X, Y), X)

    def test_forall_needs_a_binder(self):
        with pytest.raises(ParseError):
            parse_type("forall . X")

    def test_print_read_back(self):
        for text in [
            "forall X Y. X -> Y -> X",
            "X -> (2 * Y + X)",
            "forall #X. (X -> #X) -> #X",
            "(X -> Y) + 2 * (forall Y. Y -> X) + X -> Y",
        ]:
            assert parse_type(print_type(parse_type(text))) == parse_type(text)


class TestPrograms:
    def test_items(self):
        program = parse_program(
            "-- a comment\n"
            "type B = forall X Y. X -> Y -> X\n"
            "id = \\x:X.\n"
            "  x\n"
            "(id) y\n"
        )
        assert [type(item) for item in program] == [TypeDefinition, Definition, Expression]
        assert program[0].name == "B"
        assert program[1].name == "id" and program[1].term == Lam("x", X, Var("x"))
        assert program[1].line == 3
        assert program[2].line == 5

    def test_bad_item(self):
        with pytest.raises(ParseError):
            parse_program("a = \n")

    def test_unfinished_item_is_reported_on_its_own_line(self):
        with pytest.raises(ParseError) as error:
            parse_program("a = x\nb = (y\n\n-- trailing\n")
        assert (error.value.line, error.value.column) == (2, 7)


names = st.sampled_from(["x", "y", "z"])


def _terms():
    leaves = names.map(Var)
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            st.builds(lambda name, body: Lam(name, X, body), names, inner),
            st.builds(App, inner, inner),
            st.builds(Sum, inner, inner),
            st.builds(lambda body: Scale(TWO, body), inner),
            st.builds(lambda body: Scale(INV_RT2, body), inner),
        ),
        max_leaves=8,
    )


class TestRoundTrip:
    @given(_terms())
    def test_print_then_parse(self, term):
        assert parse_term(print_term(term)) == term
