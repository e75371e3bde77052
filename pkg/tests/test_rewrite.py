# coding=utf-8
import pytest

from lvec.errors import FuelExhausted, UsageError
from lvec.meta import y_combinator_term
from lvec.parser import parse_term
from lvec.printer import print_term
from lvec.rewrite import (
    ReductionEngine,
    canonical_form,
    fire,
    format_trace,
    is_normal,
    normalize,
    normalize_random,
    redexes,
    step,
)
from lvec.scalars import Scalar
from lvec.terms import Scale, Var, Zero


def _fired(text, rule, position=(), detail=None):
    return fire(parse_term(text), rule, position, detail).after


class TestRules:
    @pytest.mark.parametrize(
        "text, rule, expected",
        [
            ("0 * x", "E1", "0"),
            ("1 * x", "E2", "x"),
            ("2 * 0", "E3", "0"),
            ("2 * 3 * x", "E4", "6 * x"),
            ("2 * (x + y)", "E5", "2 * x + 2 * y"),
            ("2 * x + 3 * x", "F1", "5 * x"),
            ("2 * x + x", "F2", "3 * x"),
            ("x + x", "F3", "2 * x"),
            ("x + 0", "F4", "x"),
            ("(f + g) x", "A1", "(f) x + (g) x"),
            ("(f) (x + y)", "A2", "(f) x + (f) y"),
            ("(2 * f) x", "A3", "2 * (f) x"),
            ("(f) (2 * x)", "A4", "2 * (f) x"),
            ("(0) x", "A5", "0"),
            ("(f) 0", "A6", "0"),
            ("(\\x:X. (x) x) y", "B", "(y) y"),
        ],
    )
    def test_contraction(self, text, rule, expected):
        assert _fired(text, rule) == parse_term(expected)

    def test_zero_keeps_what_it_replaced(self):
        result = _fired("0 * x", "E1")
        assert isinstance(result, Zero)
        assert result.witness == Var("x")

    def test_factorisation_pair(self):
        assert _fired("x + y + x", "F3", (), (0, 2)) == parse_term("2 * x + y")

    def test_factorisation_only_on_outermost_sum(self):
        term = parse_term("(x + x) + y")
        with pytest.raises(UsageError):
            fire(term, "F3", (0,))
        assert fire(term, "F3").after == parse_term("2 * x + y")

    def test_beta_needs_a_basis_argument(self):
        with pytest.raises(UsageError):
            fire(parse_term("(\\x:X. x) (y + z)"), "B")

    def test_rule_that_does_not_apply(self):
        with pytest.raises(UsageError):
            fire(parse_term("x + y"), "F3")

    def test_unknown_rule(self):
        with pytest.raises(UsageError):
            fire(parse_term("x"), "Q1")

    def test_missing_position(self):
        with pytest.raises(UsageError):
            fire(parse_term("x"), "E2", (0, 0))


class TestContexts:
    def test_under_scaling(self):
        fired = fire(parse_term("2 * (\\x:X. x) y"), "B", (0,))
        assert fired.contexts == ("CtxScale",)
        assert fired.after == parse_term("2 * y")

    def test_under_application(self):
        fired = fire(parse_term("(f) ((\\x:X. x) y)"), "B", (1,))
        assert fired.contexts == ("CtxAppRight",)
        fired = fire(parse_term("((\\x:X. x) f) y"), "B", (0,))
        assert fired.contexts == ("CtxAppLeft",)

    def test_under_sum(self):
        fired = fire(parse_term("z + (\\x:X. x) y"), "B", (1,))
        assert fired.contexts == ("CtxSumRight",)
        assert fired.after == parse_term("z + y")

    def test_under_lambda(self):
        fired = fire(parse_term("\\z:X. (\\x:X. x) z"), "B", (0,))
        assert fired.contexts == ("CtxLam",)
        assert fired.after == parse_term("\\z:X. z")

    def test_beta_renames_pinned_annotation(self):
        fired = fire(parse_term("(\\x:X. \\y:Y. x) \\a:X. \\b:Y. b"), "B")
        assert fired.after == parse_term("\\y:Y1. \\a:X. \\b:Y. b")

    def test_beta_under_binder_keeps_shared_variable(self):
        fired = fire(parse_term("\\w:Y. (\\x:X. \\y:Y. x) \\b:Y. b"), "B", (0,))
        assert fired.after == parse_term("\\w:Y. \\y:Y. \\b:Y. b")


class TestStrategy:
    def test_inner_sum_first(self):
        fired = step(parse_term("2 * (x + x)"))
        assert fired.rule == "F3"
        assert fired.position == (0,)

    def test_distribute_then_merge(self):
        term = parse_term("2 * (x + x)")
        distributed = fire(term, "E5").after
        merged = fire(distributed, "F1").after
        assert merged == Scale(Scalar(4), Var("x"))

    def test_algebra_before_application(self):
        fired = step(parse_term("(\\x:X. x) y + 0"))
        assert fired.rule == "F4"

    def test_application_rules_before_beta(self):
        fired = step(parse_term("(\\x:X. x) (y + z)"))
        assert fired.rule == "A2"

    def test_normal_form(self):
        assert step(parse_term("\\x:X. x")) is None
        assert is_normal(parse_term("(x) y + 2 * z"))
        assert redexes(parse_term("x")) == []


class TestNormalize:
    def test_duplication_over_sum(self):
        trace = normalize(parse_term("(\\x:X. (x) x) (y + z)"))
        assert print_term(trace.final) == "(y) y + (z) z"

    def test_cancellation_gives_zero(self):
        trace = normalize(parse_term("(\\x:X. x) (2 * y) - 2 * y"))
        assert isinstance(trace.final, Zero)

    def test_final_is_canonical(self):
        trace = normalize(parse_term("x + y + x"))
        assert trace.final == canonical_form(trace.final)
        assert trace.final == parse_term("2 * x + y")

    def test_every_step_replays(self):
        trace = normalize(parse_term("(f + 2 * g) (x + x) + (\\x:X. x) (y - y)"))
        current = trace.steps[0].before
        for fired in trace.steps:
            assert fired.before == current
            assert fire(fired.before, fired.rule, fired.position, fired.detail).after == fired.after
            current = fired.after
        assert trace.final == canonical_form(current)
        assert trace.fuel_used == len(trace.steps)

    def test_format_trace(self):
        trace = normalize(parse_term("(\\x:X. x) y"))
        lines = format_trace(trace).splitlines()
        assert len(lines) == 3
        assert lines[-1] == "=>  y"
        assert "B" in lines[1]

    def test_to_dict(self):
        document = normalize(parse_term("x + x")).to_dict()
        assert document["final"] == "2 * x"
        assert document["fuel_used"] == 1
        assert document["steps"][0]["rule"] == "F3"

    @pytest.mark.parametrize("seed", range(5))
    def test_random_strategy_agrees(self, seed):
        term = parse_term("(f + 2 * g) (x + x) + (\\x:X. (x) x) (y + 1/2 * z)")
        assert normalize_random(term, seed).final == normalize(term).final

    def test_random_strategy_is_seeded(self):
        term = parse_term("(f + g) (x + y) + 2 * (z + z)")
        first = [s.rule for s in normalize_random(term, 7).steps]
        second = [s.rule for s in normalize_random(term, 7).steps]
        assert first == second


class TestFuel:
    def test_exhausted(self):
        with pytest.raises(FuelExhausted) as error:
            ReductionEngine(fuel=50).normalize(y_combinator_term())
        assert error.value.exit_code == 4
        assert error.value.trace.fuel_used == 50

    def test_override(self):
        with pytest.raises(FuelExhausted):
            ReductionEngine().normalize(y_combinator_term(), fuel=10)

    @pytest.mark.parametrize("fuel", [0, -1, None])
    def test_must_be_positive(self, fuel):
        with pytest.raises(UsageError):
            ReductionEngine(fuel=fuel)
