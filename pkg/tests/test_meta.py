# coding=utf-8
import pytest

from lvec.checker import TypeChecker
from lvec.encodings import false_term, hadamard, ket_plus, true_term
from lvec.errors import LemmaViolation, PropertyViolation, SRViolation
from lvec.generators import TermGenerator, curated_corpus
from lvec.meta import (
    EXPECTED,
    FAIL,
    PASS,
    SUITE_ERRORS,
    MetaHarness,
    PropertyReport,
    Record,
    factorisation_witness,
    y_combinator_term,
)
from lvec.printer import print_term
from lvec.rewrite import normalize
from lvec.terms import App, Lam, Sum, Var
from lvec.type_core import UnitVar, type_equiv


@pytest.fixture(scope="module")
def harness():
    return MetaHarness(seed=7, count=12, random_traces=3, max_depth=2, max_dim=2)


@pytest.fixture(scope="module")
def corpus(harness):
    return harness.corpus(include_projections=False)


class TestCorpus:
    def test_curated_members_type(self):
        checker = TypeChecker()
        for member in curated_corpus(2):
            assert type_equiv(checker.infer(member.context, member.term)[0], member.type), member.origin

    def test_seeded(self):
        first = TermGenerator(seed=3, max_depth=2, max_dim=2).corpus(8)
        second = TermGenerator(seed=3, max_depth=2, max_dim=2).corpus(8)
        assert [print_term(m.term) for m in first] == [print_term(m.term) for m in second]

    def test_generated_members_are_indexed(self, harness, corpus):
        assert [member.index for member in corpus] == list(range(len(corpus)))
        assert corpus.seed == harness.seed
        assert corpus.to_dict()["size"] == len(corpus)


class TestSuites:
    def test_subject_reduction(self, harness, corpus):
        report = harness.subject_reduction(corpus)
        assert report.passed, [record.message for record in report.violations]
        assert report.summary()[PASS] == len(corpus)

    @pytest.mark.parametrize("argument", [true_term, false_term, ket_plus])
    def test_subject_reduction_of_hadamard(self, harness, argument):
        record = harness.check_subject_reduction(App(hadamard(), argument()))
        assert record.status == PASS, record.message

    def test_strong_normalization(self, harness, corpus):
        report = harness.check_strong_normalization(corpus)
        assert report.passed, [record.message for record in report.violations]
        assert all(record.details["longest"] >= record.details["steps"] for record in report.records)

    def test_expected_divergence(self, harness):
        record = harness.expected_divergence(fuel=60)
        assert record.status == EXPECTED
        assert record.index == -1

    def test_term_characterisation(self, harness, corpus):
        report = harness.term_characterisation(corpus)
        assert report.passed, [record.message for record in report.violations]

    def test_confluence(self, harness, corpus):
        report = harness.confluence(corpus)
        assert report.passed, [record.message for record in report.violations]

    def test_lemmas(self, harness):
        reports = harness.lemmas(count=20)
        assert [report.name for report in reports] == [
            "lemma-weakening",
            "lemma-substitution",
            "lemma-basis-terms",
            "lemma-scalars",
            "lemma-sums",
        ]
        for report in reports:
            assert report.passed, (report.name, [record.message for record in report.violations])

    @pytest.mark.slow
    def test_lemmas_at_scale(self, harness):
        for report in harness.lemmas(count=200):
            assert len(report.records) == 200
            assert report.summary()[PASS] > 0, report.name
            assert report.passed, (report.name, [record.message for record in report.violations])

    def test_threads_keep_member_order(self, corpus):
        threaded = MetaHarness(seed=7, random_traces=1, workers=4, max_depth=2, max_dim=2)
        report = threaded.check_strong_normalization(corpus)
        assert [record.index for record in report.records] == [member.index for member in corpus]


class TestReports:
    def _report(self):
        return PropertyReport(
            "subject-reduction",
            [Record(0, PASS, "x"), Record(1, FAIL, "y", "type grew"), Record(-1, EXPECTED, "z")],
            seed=3,
        )

    def test_summary(self):
        report = self._report()
        assert report.summary() == {PASS: 1, FAIL: 1, EXPECTED: 1}
        assert not report.passed
        assert report.to_dict()["seed"] == 3

    def test_raise_for_violations(self):
        report = self._report()
        with pytest.raises(SRViolation) as error:
            report.raise_for_violations(SUITE_ERRORS["sr"])
        assert error.value.report is report
        assert error.value.exit_code == 5
        assert "first at member 1: type grew" in str(error.value)

    def test_passing_report_returns_itself(self):
        report = PropertyReport("lemma-sums", [Record(0, PASS)])
        assert report.raise_for_violations(LemmaViolation) is report

    def test_suite_errors(self):
        assert issubclass(SUITE_ERRORS["confluence"], PropertyViolation)
        assert SUITE_ERRORS["lemmas"] is LemmaViolation

    def test_record_to_dict(self):
        record = Record(2, FAIL, "x", "broken", {"steps": 4})
        assert record.to_dict() == {"index": 2, "status": FAIL, "term": "x", "message": "broken", "steps": 4}
        assert "message" not in Record(0, PASS, "x").to_dict()


class TestWitness:
    def test_merged_summand(self):
        identity = Lam("y", UnitVar("Y"), Var("y"))
        step = normalize(Sum(identity, identity)).steps[0]
        assert step.rule == "F3"
        witness = factorisation_witness(step)
        assert witness.term == identity
        assert len(witness.context) == 0

    def test_fixpoint_term_is_closed(self):
        assert print_term(y_combinator_term()).startswith("(\\x:X.")
