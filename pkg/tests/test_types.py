# coding=utf-8
import logging

import pytest
from hypothesis import given, settings

from lvec.checker import EMPTY
from lvec.errors import SortMismatch
from lvec.parser import parse_term, parse_type
from lvec.scalars import Scalar
from lvec.type_core import (
    ORDER_SEARCH_LIMIT,
    Arrow,
    ForallU,
    GenVar,
    ScaleT,
    SumT,
    UnitVar,
    Witness,
    as_unit,
    canonical_key,
    canonicalize,
    check_well_formed,
    equiv_modulo_zero,
    free_type_vars,
    make_type_sum,
    order_approx,
    replace_free,
    subst_type,
    type_equiv,
)
from tests import oracle

X, Y = UnitVar("X"), UnitVar("Y")


class TestEquivalence:
    @pytest.mark.parametrize(
        "left, right",
        [
            ("2 * X + X", "3 * X"),
            ("X + Y", "Y + X"),
            ("(X + Y) + #Z", "X + (Y + #Z)"),
            ("2 * (X + Y)", "2 * X + 2 * Y"),
            ("1 * X", "X"),
            ("2 * 1/2 * X", "X"),
            ("forall X. X -> X", "forall Y. Y -> Y"),
            ("Y -> (X + X)", "Y -> 2 * X"),
            ("forall #X. Y -> (#X + #X)", "forall #W. Y -> 2 * #W"),
        ],
    )
    def test_equivalent(self, left, right):
        assert type_equiv(parse_type(left), parse_type(right))

    @pytest.mark.parametrize(
        "left, right",
        [
            ("X", "Y"),
            ("X", "#X"),
            ("X", "2 * X"),
            ("forall X. X -> X", "forall Y. Y -> X"),
            ("X -> Y", "Y -> X"),
        ],
    )
    def test_not_equivalent(self, left, right):
        assert not type_equiv(parse_type(left), parse_type(right))


class TestZeroRetention:
    def test_zero_summand_is_kept(self):
        left, right = parse_type("X + 0 * Y"), parse_type("X")
        assert not type_equiv(left, right)
        assert equiv_modulo_zero(left, right)

    def test_cancelled_summand_is_kept(self):
        assert type_equiv(parse_type("X - X"), parse_type("0 * X"))
        assert not type_equiv(parse_type("X - X"), parse_type("0 * Y"))
        assert equiv_modulo_zero(parse_type("X - X"), parse_type("0 * Y"))

    def test_canonical_entries(self):
        canonical = canonicalize(parse_type("2 * X + #Z + 0 * Y"))
        assert len(canonical) == 3
        assert len(canonical.units) == 2
        assert len(canonical.gvars) == 1
        assert len(canonical.without_zeros()) == 2

    def test_as_unit(self):
        assert as_unit(parse_type("1 * (X -> X)")) == Arrow(X, X)
        assert as_unit(parse_type("1/2 * X + 1/2 * X")) == X
        assert as_unit(parse_type("2 * X")) is None
        assert as_unit(parse_type("X + 0 * Y")) is None
        assert as_unit(GenVar("X")) is None


class TestSubstitution:
    def test_avoids_capture(self):
        result = subst_type(parse_type("forall Y. Y -> X"), X, Y)
        assert result == parse_type("forall W. W -> Y")
        assert free_type_vars(result) == {Y}

    def test_unit_variable_takes_unit_only(self):
        with pytest.raises(SortMismatch):
            subst_type(X, X, parse_type("X + Y"))

    def test_unchecked(self):
        result = subst_type(Arrow(Y, X), X, parse_type("X + Y"), check_sort=False)
        assert type_equiv(result, parse_type("Y -> (X + Y)"))

    def test_unit_equivalent_replacement(self):
        assert subst_type(X, X, parse_type("1 * Y")) == Y

    def test_general_variable_takes_anything(self):
        result = subst_type(parse_type("Y -> #Z"), GenVar("Z"), parse_type("2 * X + Y"))
        assert type_equiv(result, parse_type("Y -> (2 * X + Y)"))

    def test_replace_free(self):
        boolean = parse_type("forall X Y. X -> Y -> X")
        result = replace_free(parse_type("T -> T"), {"T": boolean})
        assert result == Arrow(boolean, boolean)

    def test_replace_free_keeps_bound(self):
        result = replace_free(parse_type("forall T. T -> U"), {"T": X, "U": Y})
        assert result == parse_type("forall T. T -> Y")

    def test_replace_free_sort(self):
        with pytest.raises(SortMismatch):
            replace_free(parse_type("T -> X"), {"T": parse_type("X + Y")})


class TestWellFormed:
    def test_sum_under_forall(self):
        with pytest.raises(SortMismatch):
            check_well_formed(ForallU("X", SumT(X, X)))

    def test_sum_as_domain(self):
        with pytest.raises(SortMismatch):
            check_well_formed(Arrow(SumT(X, Y), X))

    def test_well_formed(self):
        check_well_formed(parse_type("forall X. X -> (X + 2 * Y)"))


class TestOrder:
    def test_reflexive_on_equivalent(self):
        assert order_approx(parse_type("2 * X"), parse_type("X + X"))

    def test_adds_zero_summands(self):
        assert order_approx(parse_type("X"), parse_type("X + 0 * Y"))
        assert not order_approx(parse_type("X + 0 * Y"), parse_type("X"))

    def test_through_arrows(self):
        assert order_approx(parse_type("Y -> X"), parse_type("Y -> (X + 0 * Y)"))

    def test_split_needs_witness(self):
        larger = parse_type("2 * forall X. X -> X")
        smaller = parse_type("(forall X. X -> X) + (Y -> Y)")
        assert not order_approx(larger, smaller)
        witness = Witness(EMPTY, parse_term("\\x:X. x"))
        assert order_approx(larger, smaller, witness)

    def test_coefficients_must_match(self):
        assert not order_approx(parse_type("2 * X"), parse_type("X"))


class TestAgainstReference:
    @given(oracle.types, oracle.types)
    @settings(max_examples=150)
    def test_decision_agrees(self, left, right):
        assert type_equiv(left, right) == oracle.equivalent(left, right)
        assert equiv_modulo_zero(left, right) == oracle.equivalent_modulo_zero(left, right)

    @given(oracle.types)
    @settings(max_examples=60, deadline=None)
    def test_axioms_are_sound(self, start):
        for other in oracle.closure(start, limit=25):
            assert type_equiv(start, other), "{} and {} are related by the axioms".format(start, other)
            assert oracle.equivalent(start, other)

    @given(oracle.types)
    @settings(max_examples=60)
    def test_canonical_form_is_equivalent(self, t):
        assert type_equiv(canonicalize(t).to_type(), t)


@pytest.mark.slow
class TestExhaustive:
    def test_equivalence_classes_agree(self):
        classes = {}
        zero_free = {}
        for t in oracle.all_types(7):
            classes.setdefault(oracle.linear_key(t), set()).add(canonical_key(t))
            dropped = frozenset((atom, c) for atom, c in oracle.linear(t).items() if not c.is_zero())
            zero_free.setdefault(dropped, set()).add(canonicalize(t).without_zeros().key)
        assert all(len(keys) == 1 for keys in classes.values())
        assert len({key for keys in classes.values() for key in keys}) == len(classes)
        assert all(len(keys) == 1 for keys in zero_free.values())
        assert len({key for keys in zero_free.values() for key in keys}) == len(zero_free)

    def test_order_agrees_on_flat_types(self):
        representatives = {}
        for t in oracle.all_types(7, flat=True):
            representatives.setdefault(oracle.linear_key(t), t)
        for larger in representatives.values():
            for smaller in representatives.values():
                assert order_approx(larger, smaller) == oracle.at_least_flat(larger, smaller), (larger, smaller)

    def test_order_through_arrow_codomains(self):
        representatives = {}
        for t in oracle.all_types(5, flat=True):
            representatives.setdefault(oracle.linear_key(t), t)
        for larger in representatives.values():
            for smaller in representatives.values():
                expected = oracle.at_least_flat(larger, smaller)
                assert order_approx(Arrow(Y, larger), Arrow(Y, smaller)) == expected, (larger, smaller)


class TestOrderLimits:
    def test_gives_up_on_many_summands(self, caplog):
        zeros = [ScaleT(Scalar(0), Arrow(Y, ScaleT(Scalar(k), X))) for k in range(1, ORDER_SEARCH_LIMIT + 1)]
        smaller = make_type_sum([X] + zeros)
        with caplog.at_level(logging.DEBUG, logger="lvec.type_core"):
            assert not order_approx(X, smaller)
        assert "gives up on {} summands".format(ORDER_SEARCH_LIMIT + 1) in caplog.text

    def test_within_the_limit(self):
        zeros = [ScaleT(Scalar(0), Arrow(Y, ScaleT(Scalar(k), X))) for k in range(1, ORDER_SEARCH_LIMIT)]
        assert order_approx(X, make_type_sum([X] + zeros))
