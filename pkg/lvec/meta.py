# coding=utf-8
"""
Executable property suites: weak subject reduction, strong normalisation,
characterisation of closed normal forms, confluence of the two engines and
the generation lemmas the proofs rely on.

Every suite returns a PropertyReport with one record per corpus member,
ordered by member index.  ``raise_for_violations`` turns a failed report
into the matching PropertyViolation.
"""
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from lvec.checker import EMPTY, TypeChecker
from lvec.encodings import basis_type
from lvec.errors import (
    CharacterisationViolation,
    FuelExhausted,
    LemmaViolation,
    LvecError,
    NormalizationViolation,
    PropertyViolation,
    SRViolation,
    TypeCheckError,
)
from lvec.generators import TermGenerator, curated_corpus
from lvec.log_utils import get_default_logger
from lvec.printer import print_term, print_type
from lvec.rewrite import DEFAULT_FUEL, ReductionEngine, subterm
from lvec.scalars import ZERO
from lvec.terms import App, Lam, Scale, Sum, Var, Zero, normalize_type_names, substitute, summands, to_linear_form
from lvec.type_core import (
    SumT,
    UnitVar,
    Witness,
    as_unit,
    canonicalize,
    equiv_modulo_zero,
    order_approx,
    scale_type,
    type_equiv,
)

log = get_default_logger(__name__)

FACTORISATION_RULES = ("F1", "F2", "F3", "F4")

PASS = "pass"
FAIL = "fail"
EXPECTED = "expected"


@dataclass
class Record:
    index: int
    status: str
    term: str = ""
    message: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self):
        result = {"index": self.index, "status": self.status, "term": self.term}
        if self.message:
            result["message"] = self.message
        result.update(self.details)
        return result


@dataclass
class PropertyReport:
    name: str
    records: list = field(default_factory=list)
    seed: object = None

    @property
    def violations(self):
        return [record for record in self.records if record.status == FAIL]

    @property
    def passed(self):
        return not self.violations

    def summary(self):
        counts = {PASS: 0, FAIL: 0, EXPECTED: 0}
        for record in self.records:
            counts[record.status] = counts.get(record.status, 0) + 1
        return counts

    def to_dict(self):
        return {
            "property": self.name,
            "seed": self.seed,
            "summary": self.summary(),
            "records": [record.to_dict() for record in self.records],
        }

    def raise_for_violations(self, error=PropertyViolation):
        if self.passed:
            return self
        first = self.violations[0]
        raise error(
            "{}: {} violation(s), first at member {}: {}".format(
                self.name, len(self.violations), first.index, first.message
            ),
            report=self,
        )


def y_combinator_term(basis=None):
    """
    ``(\\x:X. b + (x) x) \\x:X. b + (x) x``, untypable and without normal form
    """
    basis = basis or Lam("y", basis_type(1, 1), Var("y"))
    half = Lam("x", UnitVar("X"), Sum(basis, App(Var("x"), Var("x"))))
    return App(half, half)


def path_context(term, position, context=EMPTY):
    """
    Context at ``position``: ``context`` extended with the binders crossed
    """
    for index in position:
        if isinstance(term, Lam):
            unit = as_unit(term.annotation) if term.annotation is not None else None
            if unit is not None:
                context = context.extend(term.binder, unit)
        term = term.children()[index]
    return context


def factorisation_witness(step, context=EMPTY):
    """
    The summand merged by a factorisation step, typed in the context of the redex
    :return: Witness or None for the zero-removal rule
    """
    if step.rule not in FACTORISATION_RULES[:3] or not step.detail:
        return None
    node = subterm(step.before, step.position)
    part = summands(node)[step.detail[0]]
    if isinstance(part, Scale):
        part = part.body
    return Witness(path_context(step.before, step.position, context), part)


class MetaHarness(object):
    """
    :param seed: seed of the term generator and of the randomized traces
    :param count: generated corpus size
    :param fuel: reduction budget per normalisation
    :param random_traces: randomized traces per member in the normalisation suite
    :param workers: threads used to process corpus members
    """

    def __init__(self, seed=0, count=300, fuel=DEFAULT_FUEL, random_traces=10, workers=1, max_depth=3, max_dim=3):
        self.seed = seed
        self.count = count
        self.fuel = fuel
        self.random_traces = random_traces
        self.workers = workers
        self.max_depth = max_depth
        self.max_dim = max_dim
        self.engine = ReductionEngine(fuel=fuel)

    # corpora

    def generator(self, seed=None):
        return TermGenerator(
            seed=self.seed if seed is None else seed, max_depth=self.max_depth, max_dim=self.max_dim
        )

    def generated_corpus(self, count=None):
        return self.generator().corpus(self.count if count is None else count)

    def corpus(self, count=None, include_projections=True):
        """
        Curated members first, then generated ones
        """
        result = curated_corpus(self.max_dim, include_projections=include_projections)
        result.seed = self.seed
        return result.extend(self.generated_corpus(count))

    def _map(self, function, members):
        members = list(members)
        if self.workers > 1 and len(members) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                return list(pool.map(function, members))
        return [function(member) for member in members]

    # weak subject reduction

    def check_subject_reduction(self, term, context=EMPTY, index=0, checker=None):
        """
        Follow the deterministic trace of ``term``.  Steps outside the
        factorisation group keep the current type; a factorisation step may
        move to a type S with S >= T (using the merged summand as witness)
        that also types the term before the step.
        :return: Record
        """
        checker = checker or TypeChecker()
        shown = print_term(term)
        try:
            current, _ = checker.infer(context, term)
        except TypeCheckError as e:
            return Record(index, FAIL, shown, "Initial term does not type: {}".format(e))
        initial = current
        try:
            trace = self.engine.normalize(term)
        except FuelExhausted as e:
            return Record(index, FAIL, shown, str(e))
        for number, step in enumerate(trace.steps, 1):
            if step.rule in FACTORISATION_RULES:
                failure, current = self._factorisation_step(checker, context, step, current)
            else:
                failure = self._preserving_step(checker, context, step, current)
            if failure is not None:
                log.warning("Subject reduction fails at step %d (%s) of %s", number, step.rule, shown)
                return Record(
                    index,
                    FAIL,
                    shown,
                    "step {} ({}) {}".format(number, step.rule, failure),
                    {"steps": len(trace.steps), "type": print_type(initial), "after": str(step.after)},
                )
        return Record(
            index,
            PASS,
            shown,
            details={
                "steps": len(trace.steps),
                "type": print_type(initial, canonical=True),
                "final_type": print_type(current, canonical=True),
            },
        )

    @staticmethod
    def _preserving_step(checker, context, step, current):
        try:
            checker.check(context, step.after, current)
        except TypeCheckError as e:
            return "does not preserve {}: {}".format(print_type(current), e)
        return None

    @staticmethod
    def _factorisation_step(checker, context, step, current):
        try:
            larger, _ = checker.infer(context, step.after)
        except TypeCheckError as e:
            return "reduct does not type: {}".format(e), current
        witness = factorisation_witness(step, context)
        if not order_approx(larger, current, witness):
            return "{} is not above {}".format(print_type(larger), print_type(current)), current
        if not equiv_modulo_zero(larger, current):
            try:
                checker.check(context, step.before, larger)
            except TypeCheckError as e:
                return "term before the step does not have {}: {}".format(print_type(larger), e), current
        return None, larger

    def subject_reduction(self, corpus):
        report = PropertyReport("subject-reduction", seed=self.seed)
        report.records = self._map(
            lambda member: self.check_subject_reduction(member.term, member.context, member.index), corpus
        )
        log.info("Subject reduction: %s", report.summary())
        return report

    # strong normalisation

    def check_strong_normalization(self, corpus, fuel=None):
        """
        Deterministic and ``random_traces`` randomized normalisations of every
        member terminate within the fuel
        """
        fuel = fuel or self.fuel
        report = PropertyReport("strong-normalisation", seed=self.seed)

        def run(member):
            shown = print_term(member.term)
            lengths = []
            try:
                lengths.append(len(self.engine.normalize(member.term, fuel).steps))
                for offset in range(self.random_traces):
                    seed = (self.seed or 0) * 1000003 + member.index * 101 + offset
                    lengths.append(len(self.engine.normalize_random(member.term, seed, fuel).steps))
            except FuelExhausted as e:
                return Record(member.index, FAIL, shown, str(e), {"traces": len(lengths)})
            return Record(member.index, PASS, shown, details={"steps": lengths[0], "longest": max(lengths)})

        report.records = self._map(run, corpus)
        log.info("Strong normalisation: %s", report.summary())
        return report

    def expected_divergence(self, fuel=1000):
        """
        The untypable fixpoint term must be rejected by the checker and exhaust the fuel
        """
        term = y_combinator_term()
        shown = print_term(term)
        try:
            TypeChecker().infer(EMPTY, term)
            return Record(-1, FAIL, shown, "fixpoint term was accepted by the checker")
        except TypeCheckError:
            pass
        try:
            self.engine.normalize(term, fuel)
        except FuelExhausted:
            log.warning("Fixpoint term exhausted %s steps, as expected", fuel)
            return Record(-1, EXPECTED, shown, "untypable, exhausts {} steps".format(fuel))
        return Record(-1, FAIL, shown, "fixpoint term reached a normal form")

    # characterisation of closed terms

    def check_term_characterisation(self, term, index=0, checker=None):
        """
        The normal form of a closed term of type ``sum a_i * U_i`` splits into
        basis terms of the ``U_i`` whose coefficients add up to ``a_i``
        """
        checker = checker or TypeChecker()
        shown = print_term(term)
        try:
            type_, _ = checker.infer(EMPTY, term)
            final = self.engine.normalize(term).final
        except LvecError as e:
            return Record(index, FAIL, shown, str(e))
        entries = canonicalize(type_).entries
        form = to_linear_form(final)
        candidates = []
        for entry in form:
            fits = [i for i, unit in enumerate(entries) if self._inhabits(checker, entry.atom, unit.atom)]
            if not fits:
                return Record(index, FAIL, shown, "summand {} matches no unit of {}".format(entry.atom, type_))
            candidates.append(fits)
        for assignment in itertools.islice(itertools.product(*candidates), 10000):
            totals = [ZERO] * len(entries)
            for entry, group in zip(form, assignment):
                totals[group] = totals[group] + entry.coeff
            if all(total == unit.coeff for total, unit in zip(totals, entries)):
                return Record(
                    index,
                    PASS,
                    shown,
                    details={"type": print_type(type_, canonical=True), "normal_form": print_term(final)},
                )
        return Record(
            index,
            FAIL,
            shown,
            "coefficients of {} do not add up to the decomposition of {}".format(
                print_term(final), print_type(type_, canonical=True)
            ),
        )

    @staticmethod
    def _inhabits(checker, term, unit):
        if not unit.is_unit:
            return False
        try:
            checker.check(EMPTY, term, unit)
        except TypeCheckError:
            return False
        return True

    def term_characterisation(self, corpus):
        report = PropertyReport("term-characterisation", seed=self.seed)
        report.records = self._map(lambda member: self.check_term_characterisation(member.term, member.index), corpus)
        log.info("Term characterisation: %s", report.summary())
        return report

    # confluence

    def confluence(self, corpus):
        """
        Randomized traces reach the normal form of the deterministic strategy
        """
        report = PropertyReport("confluence", seed=self.seed)

        def run(member):
            shown = print_term(member.term)
            try:
                expected = self.engine.normalize(member.term).final
                expected_key = normalize_type_names(expected).key
                for offset in range(self.random_traces):
                    seed = (self.seed or 0) * 7919 + member.index * 31 + offset
                    final = self.engine.normalize_random(member.term, seed).final
                    if normalize_type_names(final).key != expected_key:
                        return Record(
                            member.index,
                            FAIL,
                            shown,
                            "trace {} ends in {} instead of {}".format(offset, print_term(final), print_term(expected)),
                        )
            except FuelExhausted as e:
                return Record(member.index, FAIL, shown, str(e))
            return Record(member.index, PASS, shown, details={"normal_form": print_term(expected)})

        report.records = self._map(run, corpus)
        return report

    # generation lemmas

    def lemma_weakening(self, count=200):
        """
        Adding an unused variable to the context keeps every typing
        """
        generator = self.generator(self.seed + 1 if self.seed is not None else None)
        report = PropertyReport("lemma-weakening", seed=self.seed)
        checker = TypeChecker()
        for index in range(count):
            instance = generator.open_instance()
            shown = print_term(instance.term)
            try:
                type_, _ = checker.infer(instance.context, instance.term)
            except TypeCheckError as e:
                report.records.append(Record(index, EXPECTED, shown, "rejected by the checker: {}".format(e)))
                continue
            n = generator.random.randint(1, 3)
            extra = basis_type(generator.random.randint(1, n), n)
            widened = instance.context.extend("w", extra)
            try:
                checker.check(widened, instance.term, type_)
            except TypeCheckError as e:
                report.records.append(Record(index, FAIL, shown, str(e)))
                continue
            report.records.append(Record(index, PASS, shown))
        return report

    def lemma_substitution(self, count=200):
        """
        ``G, x:U |- t : T`` and ``G |- b : U`` give ``G |- t[b/x] : T``
        """
        generator = self.generator(self.seed + 2 if self.seed is not None else None)
        report = PropertyReport("lemma-substitution", seed=self.seed)
        checker = TypeChecker()
        for index in range(count):
            instance = generator.open_instance()
            shown = print_term(instance.term)
            try:
                type_, _ = checker.infer(instance.context, instance.term)
                checker.check(EMPTY, instance.value, instance.unit)
            except TypeCheckError as e:
                report.records.append(Record(index, EXPECTED, shown, "rejected by the checker: {}".format(e)))
                continue
            replaced = substitute(instance.term, instance.name, instance.value, instance.context.free_type_vars())
            try:
                checker.check(EMPTY, replaced, type_)
            except TypeCheckError as e:
                report.records.append(Record(index, FAIL, shown, str(e)))
                continue
            report.records.append(Record(index, PASS, shown))
        return report

    def lemma_basis_terms(self, count=200):
        """
        A basis term always has a unit type
        """
        generator = self.generator(self.seed + 3 if self.seed is not None else None)
        report = PropertyReport("lemma-basis-terms", seed=self.seed)
        checker = TypeChecker()
        for index in range(count):
            term = generator.basis_candidate()
            shown = print_term(term)
            try:
                type_, _ = checker.infer(EMPTY, term)
            except TypeCheckError as e:
                report.records.append(Record(index, EXPECTED, shown, "rejected by the checker: {}".format(e)))
                continue
            if as_unit(type_) is None:
                report.records.append(Record(index, FAIL, shown, "{} is not a unit type".format(print_type(type_))))
            else:
                report.records.append(Record(index, PASS, shown))
        return report

    def lemma_scalars(self, count=200):
        """
        ``a * t : T`` gives ``T == a * R`` with ``t : R``, and ``0`` or ``a * 0``
        only ever get a type ``0 * R``
        """
        generator = self.generator(self.seed + 4 if self.seed is not None else None)
        report = PropertyReport("lemma-scalars", seed=self.seed)
        checker = TypeChecker()
        for index in range(count):
            body = generator.term()
            alpha = generator.random.choice(generator.scalars)
            scaled = Scale(alpha, body)
            shown = print_term(scaled)
            try:
                whole, _ = checker.infer(EMPTY, scaled)
                inner, _ = checker.infer(EMPTY, body)
                zero, _ = checker.infer(EMPTY, Scale(alpha, Zero(witness=body)))
            except TypeCheckError as e:
                report.records.append(Record(index, EXPECTED, shown, "rejected by the checker: {}".format(e)))
                continue
            if not type_equiv(whole, scale_type(alpha, inner)):
                message = "{} is not {} times the body type".format(whole, alpha)
                report.records.append(Record(index, FAIL, shown, message))
            elif any(not entry.coeff.is_zero() for entry in canonicalize(zero)):
                report.records.append(Record(index, FAIL, shown, "zero typed {}".format(print_type(zero))))
            else:
                report.records.append(Record(index, PASS, shown))
        return report

    def lemma_sums(self, count=200):
        """
        ``t + r : S`` gives ``S == T + R`` with ``t : T`` and ``r : R``
        """
        generator = self.generator(self.seed + 5 if self.seed is not None else None)
        report = PropertyReport("lemma-sums", seed=self.seed)
        checker = TypeChecker()
        for index in range(count):
            n = generator.random.randint(1, generator.max_dim)
            left, right = generator.vector(n, 1), generator.vector(n, 1)
            shown = print_term(Sum(left, right))
            try:
                whole, _ = checker.infer(EMPTY, Sum(left, right))
                first, _ = checker.infer(EMPTY, left)
                second, _ = checker.infer(EMPTY, right)
            except TypeCheckError as e:
                report.records.append(Record(index, EXPECTED, shown, "rejected by the checker: {}".format(e)))
                continue
            if not type_equiv(whole, SumT(first, second)):
                report.records.append(Record(index, FAIL, shown, "{} is not the sum of its parts".format(whole)))
            else:
                report.records.append(Record(index, PASS, shown))
        return report

    def lemmas(self, count=200):
        return [
            self.lemma_weakening(count),
            self.lemma_substitution(count),
            self.lemma_basis_terms(count),
            self.lemma_scalars(count),
            self.lemma_sums(count),
        ]


SUITE_ERRORS = {
    "sr": SRViolation,
    "sn": NormalizationViolation,
    "charact": CharacterisationViolation,
    "confluence": PropertyViolation,
    "lemmas": LemmaViolation,
}
