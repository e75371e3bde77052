# coding=utf-8
from lvec.parser import parse_term
from lvec.scalars import TWO, Scalar
from lvec.terms import (
    App,
    Lam,
    Scale,
    Sum,
    Var,
    Zero,
    erase_instantiations,
    erase_key,
    free_vars,
    fresh_name,
    make_sum,
    normalize_type_names,
    substitute,
    summands,
    term_size,
    to_linear_form,
)
from lvec.type_core import UnitVar

X = UnitVar("X")


class TestEquality:
    def test_alpha_equivalence(self):
        assert Lam("x", X, Var("x")) == Lam("y", X, Var("y"))

    def test_annotation_matters(self):
        assert Lam("x", X, Var("x")) != Lam("x", UnitVar("Y"), Var("x"))

    def test_erase_key_ignores_annotations(self):
        assert erase_key(Lam("x", X, Var("x"))) == erase_key(Lam("x", UnitVar("Y"), Var("x")))

    def test_sums_up_to_associativity_and_commutativity(self):
        x, y, z = Var("x"), Var("y"), Var("z")
        assert Sum(Sum(x, y), z) == Sum(z, Sum(y, x))

    def test_zeros_are_equal_whatever_they_carry(self):
        assert Zero() == Zero(witness=Var("x"))

    def test_free_and_bound_differ(self):
        assert Lam("x", X, Var("y")) != Lam("x", X, Var("x"))

    def test_usable_in_sets(self):
        assert len({parse_term("\\x:X. x"), parse_term("\\y:X. y")}) == 1


class TestVariables:
    def test_free_vars(self):
        assert free_vars(parse_term("\\x:X. (x) y + z")) == {"y", "z"}

    def test_zero_payload_is_not_free(self):
        assert free_vars(Zero(witness=Var("x"))) == frozenset()

    def test_fresh_name(self):
        assert fresh_name("x", set()) == "x"
        assert fresh_name("x3", {"x"}) == "x1"

    def test_substitute(self):
        result = substitute(parse_term("(x) y"), "x", Var("z"))
        assert result == parse_term("(z) y")

    def test_substitute_stops_at_binder(self):
        term = parse_term("\\x:X. x")
        assert substitute(term, "x", Var("z")) == term

    def test_substitute_avoids_capture(self):
        result = substitute(parse_term("\\y:X. (x) y"), "x", Var("y"))
        assert isinstance(result, Lam)
        assert result.binder != "y", "the binder must be renamed"
        assert free_vars(result) == {"y"}
        assert result == parse_term("\\w:X. (y) w")

    def test_substitute_renames_pinned_type_variable(self):
        value = parse_term("\\a:X. \\b:Y. b")
        result = substitute(parse_term("\\y:Y. x"), "x", value)
        assert result.annotation == UnitVar("Y1")
        assert result.body == value

    def test_substitute_keeps_rigid_type_variable(self):
        term = parse_term("\\y:Y. x")
        result = substitute(term, "x", parse_term("\\b:Y. b"), rigid={UnitVar("Y")})
        assert result == parse_term("\\y:Y. \\b:Y. b")

    def test_substitute_without_occurrence_renames_nothing(self):
        term = parse_term("\\y:Y. y")
        assert substitute(term, "x", parse_term("\\b:Y. b")) == term

    def test_normalize_type_names(self):
        left = parse_term("\\y:Y1. \\a:X. \\b:Y. b")
        right = parse_term("\\y:Y2. \\a:X. \\b:Y. b")
        assert left != right
        assert normalize_type_names(left) == normalize_type_names(right)
        assert normalize_type_names(left) != normalize_type_names(parse_term("\\y:Y. \\a:X. \\b:Y. b"))

    def test_substitute_through_zero_witness(self):
        result = substitute(Zero(witness=Var("x")), "x", Var("z"))
        assert result.witness == Var("z")


class TestStructure:
    def test_summands_left_to_right(self):
        x, y, z = Var("x"), Var("y"), Var("z")
        assert summands(Sum(x, Sum(y, z))) == [x, y, z]

    def test_make_sum(self):
        assert make_sum([]) == Zero()
        assert make_sum([Var("x")]) == Var("x")

    def test_term_size(self):
        assert term_size(parse_term("(x) y")) == 3

    def test_erase_instantiations(self):
        term = parse_term("(x@[X]) y")
        assert erase_instantiations(term) == App(Var("x"), Var("y"))


class TestLinearForm:
    def test_merge_and_drop_zero(self):
        x, y = Var("x"), Var("y")
        form = to_linear_form(Sum(Sum(Scale(TWO, x), x), Sum(Scale(Scalar(0), y), Zero())))
        assert [(entry.coeff, entry.atom) for entry in form] == [(Scalar(3), x)]

    def test_cancellation(self):
        assert to_linear_form(parse_term("x - x")).is_zero()

    def test_nested_scalings(self):
        form = to_linear_form(parse_term("2 * (3 * x + y)"))
        assert form.coefficient_of(Var("x")) == Scalar(6)
        assert form.coefficient_of(Var("y")) == TWO
        assert form.coefficient_of(Var("z")) == Scalar(0)

    def test_to_term(self):
        assert to_linear_form(parse_term("x + x")).to_term() == Scale(TWO, Var("x"))
