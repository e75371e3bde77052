# coding=utf-8
"""
Algorithmic type checking for annotated terms.

Inference is syntax directed: variables read the context, abstractions
introduce an arrow and generalise the type variables they are the first to
mention, scalings and sums type component-wise, and applications solve the
instantiation of the function's quantifiers (and of the argument's own
outer quantifiers) by first-order sorted unification on canonical forms.

Every inference builds a :class:`Derivation` that an independent
:func:`validate` can replay rule by rule.
"""
import itertools
from dataclasses import dataclass, field
from typing import Tuple

from lvec.errors import (
    AmbiguousMatch,
    DerivationError,
    MatchFailure,
    NonUniformFunctionType,
    SortMismatch,
    TypeCheckError,
    TypeMismatch,
    UnannotatedBinder,
    UnboundVariable,
    ZeroNeedsAnnotation,
)
from lvec.log_utils import get_default_logger
from lvec.scalars import ZERO, Scalar
from lvec.terms import App, Inst, Lam, Scale, Sum, Var, Zero, erase_instantiations
from lvec.type_core import (
    FORALL_CLASSES,
    META_PREFIX,
    Arrow,
    GenVar,
    ScaleT,
    SumT,
    UnitVar,
    as_unit,
    atom_key,
    canonicalize,
    check_well_formed,
    forall,
    foralls,
    free_type_vars,
    free_vars_in_order,
    fresh_type_name,
    is_closed,
    make_type_sum,
    scale_type,
    strip_foralls,
    subst_many,
    subst_type,
    type_equiv,
    type_names,
    var_of_sort,
)

log = get_default_logger(__name__)

AX = "ax"
ZERO_I = "0I"
ARROW_I = "->I"
ARROW_E = "->E"
FORALL_I = "forall-I"
FORALL_E = "forall-E"
ALPHA_I = "alpha-I"
SUM_I = "+I"
EQUIV = "equiv"


class Context(object):
    """
    Ordered typing context, each term variable bound at most once.
    Extending with a bound name drops the previous binding.
    """

    def __init__(self, bindings=()):
        self._bindings = tuple(bindings)

    @classmethod
    def of(cls, mapping):
        return cls(tuple(mapping.items()))

    def items(self):
        return self._bindings

    def names(self):
        return [name for name, _ in self._bindings]

    def lookup(self, name):
        for bound, unit in self._bindings:
            if bound == name:
                return unit
        return None

    def extend(self, name, unit):
        kept = tuple((bound, t) for bound, t in self._bindings if bound != name)
        return Context(kept + ((name, unit),))

    def free_type_vars(self):
        result = frozenset()
        for _, unit in self._bindings:
            result = result | free_type_vars(unit)
        return result

    def type_names(self):
        names = set()
        for _, unit in self._bindings:
            names |= type_names(unit)
        return names

    @property
    def key(self):
        return tuple(sorted((name, unit.key) for name, unit in self._bindings))

    def __contains__(self, name):
        return self.lookup(name) is not None

    def __len__(self):
        return len(self._bindings)

    def __eq__(self, other):
        if not isinstance(other, Context):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __str__(self):
        return ", ".join("{}:{}".format(name, unit) for name, unit in self._bindings)

    def __repr__(self):
        return "Context({})".format(self)


EMPTY = Context()


@dataclass(frozen=True, eq=False)
class Derivation:
    """
    Node of a typing derivation: ``context |- term : type`` by ``rule``.
    ``payload`` carries the rule-specific data the validator needs, for
    instance the instantiated type of a forall-E node.
    """

    rule: str
    context: Context
    term: object
    type: object
    premises: Tuple["Derivation", ...] = ()
    payload: dict = field(default_factory=dict)

    def nodes(self):
        yield self
        for premise in self.premises:
            yield from premise.nodes()

    def size(self):
        return sum(1 for _ in self.nodes())

    def rules(self):
        return {node.rule for node in self.nodes()}

    def to_dict(self):
        return {
            "rule": self.rule,
            "context": {name: str(unit) for name, unit in self.context.items()},
            "term": str(self.term),
            "type": str(self.type),
            "premises": [premise.to_dict() for premise in self.premises],
        }


def _is_meta(t):
    return isinstance(t, (UnitVar, GenVar)) and t.is_meta


def _bind(subst, var, value):
    """
    Extend an idempotent substitution with ``var := value``
    """
    result = {}
    for name, (bound, bound_value) in subst.items():
        if var in free_type_vars(bound_value):
            bound_value = subst_type(bound_value, var, value, check_sort=False)
        result[name] = (bound, bound_value)
    result[var.name] = (var, value)
    return result


def _apply(t, subst):
    free = free_type_vars(t)
    for var, value in subst.values():
        if var in free:
            t = subst_type(t, var, value, check_sort=False)
    return t


def _metas(t):
    return [v for v in free_vars_in_order(t) if _is_meta(v)]


class TypeChecker(object):
    """
    Type checker for Church-style annotated terms.
    :param max_solutions: unifier solutions explored per application before giving up
    :param max_open: largest number of outer quantifiers of an argument opened for matching
    """

    def __init__(self, max_solutions=16, max_open=8):
        self.max_solutions = max_solutions
        self.max_open = max_open
        self._counter = itertools.count(1)

    # public api

    def infer(self, context, term):
        """
        Synthesize the type of ``term``
        :param context: Context or mapping from names to unit types
        :param term: Term
        :return: (Type, Derivation)
        """
        context = _as_context(context)
        derivation = self._infer(context, term)
        self._revalidate(derivation)
        return derivation.type, derivation

    def check(self, context, term, expected):
        """
        Check ``term`` against ``expected``
        :return: Derivation concluding ``expected``
        :raise TypeMismatch:
        """
        context = _as_context(context)
        check_well_formed(expected)
        derivation = self._check(context, term, expected)
        self._revalidate(derivation)
        return derivation

    @staticmethod
    def _revalidate(derivation):
        failure = validation_failure(derivation)
        if failure is not None:
            node, reason = failure
            raise DerivationError(
                "Internal derivation rejected at rule {}: {}".format(node.rule, reason), node=node, term=node.term
            )

    # inference

    def _infer(self, context, term):
        if isinstance(term, Var):
            unit = context.lookup(term.name)
            if unit is None:
                raise UnboundVariable("Variable {} is not in the context".format(term.name), term=term)
            return Derivation(AX, context, term, unit)
        if isinstance(term, Lam):
            return self._infer_lambda(context, term, generalize=True)
        if isinstance(term, App):
            return self._infer_application(context, term)
        if isinstance(term, Zero):
            return self._infer_zero(context, term)
        if isinstance(term, Scale):
            body = self._infer(context, term.body)
            return Derivation(ALPHA_I, context, term, ScaleT(term.coeff, body.type), (body,))
        if isinstance(term, Sum):
            left = self._infer(context, term.left)
            right = self._infer(context, term.right)
            return Derivation(SUM_I, context, term, SumT(left.type, right.type), (left, right))
        if isinstance(term, Inst):
            derivation = self._infer(context, term.body)
            for argument in term.types:
                check_well_formed(argument)
                derivation = self._forall_elim(derivation, argument, term)
            return derivation
        raise TypeCheckError("Unknown term {!r}".format(term), term=term)

    def _infer_lambda(self, context, term, generalize):
        annotation = term.annotation
        if annotation is None:
            raise UnannotatedBinder("Binder {} has no type annotation".format(term.binder), term=term)
        check_well_formed(annotation)
        unit = as_unit(annotation)
        if unit is None:
            raise SortMismatch("Annotation {} of {} is not a unit type".format(annotation, term.binder), term=term)
        inner = context.extend(term.binder, unit)
        # an open annotation keeps nested abstractions in one chain, generalised once at the top
        if isinstance(term.body, Lam) and not is_closed(unit):
            body = self._infer_lambda(inner, term.body, generalize=False)
        else:
            body = self._infer(inner, term.body)
        derivation = Derivation(ARROW_I, context, term, Arrow(unit, body.type), (body,), {"binder": term.binder})
        if generalize:
            derivation = self._generalize(derivation, free_vars_in_order(derivation.type))
        return derivation

    def _generalize(self, derivation, candidates):
        bound = derivation.context.free_type_vars()
        variables = [var for var in candidates if var not in bound and not _is_meta(var)]
        if not variables:
            return derivation
        if any(entry.is_general for entry in canonicalize(derivation.type)):
            return derivation
        for var in reversed(variables):
            derivation = self._forall_intro(derivation, var)
        return derivation

    @staticmethod
    def _forall_intro(derivation, var):
        entries = canonicalize(derivation.type).entries
        conclusion = make_type_sum(scale_type(entry.coeff, forall(var, entry.atom)) for entry in entries)
        return Derivation(
            FORALL_I, derivation.context, derivation.term, conclusion, (derivation,), {"var": var}
        )

    def _forall_elim(self, derivation, argument, term=None):
        entries = canonicalize(derivation.type).entries
        kinds = {type(entry.atom) for entry in entries}
        if len(kinds) != 1 or not issubclass(kinds.pop(), FORALL_CLASSES):
            raise MatchFailure(
                "Cannot instantiate {}: not a quantified type".format(derivation.type),
                term=derivation.term if term is None else term,
            )
        summands = []
        for entry in entries:
            summands.append(scale_type(entry.coeff, subst_type(entry.atom.body, entry.atom.binder_var(), argument)))
        return Derivation(
            FORALL_E,
            derivation.context,
            derivation.term if term is None else term,
            make_type_sum(summands),
            (derivation,),
            {"type": argument},
        )

    def _infer_zero(self, context, term):
        if term.witness is not None:
            try:
                witness = self._infer(context, term.witness)
            except TypeCheckError:
                if term.annotation is None:
                    raise
                log.debug("Zero witness %s does not type, using the ascription", term.witness)
            else:
                return Derivation(ZERO_I, context, term, ScaleT(ZERO, witness.type), (witness,))
        if term.annotation is not None:
            check_well_formed(term.annotation)
            log.warning("Trusting the ascription 0 : %s without an inhabitant", term.annotation)
            return Derivation(ZERO_I, context, term, ScaleT(ZERO, term.annotation), (), {"ascribed": True})
        raise ZeroNeedsAnnotation("A bare 0 needs an ascription (0 : 0*T)", term=term)

    # application

    def _fresh_meta(self, var):
        base = var.name.lstrip(META_PREFIX).rstrip("0123456789'") or "X"
        return var_of_sort(var.sort, "{}{}{}".format(META_PREFIX, base, next(self._counter)))

    def _infer_application(self, context, term):
        function = self._infer(context, term.fun)
        argument = self._infer(context, term.arg)
        avoid = context.type_names() | type_names(function.type) | type_names(argument.type)

        entries = canonicalize(function.type).entries
        if any(entry.is_general for entry in entries):
            raise NonUniformFunctionType(
                "Function type {} has a general variable summand".format(function.type), term=term
            )
        prefixes, bodies = [], []
        for entry in entries:
            prefix, body = strip_foralls(entry.atom)
            if not isinstance(body, Arrow):
                raise NonUniformFunctionType("{} is not a function type".format(entry.atom), term=term)
            prefixes.append(prefix)
            bodies.append(body)
        shape = [var.sort for var in prefixes[0]]
        if any([var.sort for var in prefix] != shape for prefix in prefixes):
            raise NonUniformFunctionType(
                "Summands of {} do not share a quantifier prefix".format(function.type), term=term
            )
        binders = []
        for var in prefixes[0]:
            name = fresh_type_name(var.name, avoid)
            avoid.add(name)
            binders.append(var_of_sort(var.sort, name))
        renamed = [
            subst_many(body, list(zip(prefix, binders)), check_sort=False) for prefix, body in zip(prefixes, bodies)
        ]
        domain = renamed[0].domain
        for body in renamed[1:]:
            if not type_equiv(body.domain, domain):
                raise NonUniformFunctionType(
                    "Summands of {} do not share a domain".format(function.type), term=term
                )
        codomains = [body.codomain for body in renamed]
        alphas = [entry.coeff for entry in entries]
        uniform = make_type_sum(
            scale_type(alpha, foralls(binders, Arrow(domain, codomain))) for alpha, codomain in zip(alphas, codomains)
        )
        function_premise = Derivation(EQUIV, context, term.fun, uniform, (function,))

        arg_entries = canonicalize(argument.type).entries
        betas = [entry.coeff for entry in arg_entries]
        for opened in range(0, self._max_openable(arg_entries) + 1):
            solutions = self._solve(binders, domain, arg_entries, opened)
            if not solutions:
                continue
            conclusions = {}
            for solution in solutions:
                built = self._conclude(
                    context,
                    term,
                    (function_premise, argument),
                    (binders, domain, codomains, alphas),
                    betas,
                    solution,
                    avoid,
                )
                if built is not None:
                    conclusions.setdefault(canonicalize(built.type).key, built)
            if len(conclusions) > 1:
                candidates = [d.type for d in conclusions.values()]
                raise AmbiguousMatch(
                    "Application has {} incomparable typings; add an explicit instantiation t@[T]".format(
                        len(candidates)
                    ),
                    candidates=candidates,
                    term=term,
                )
            if conclusions:
                return next(iter(conclusions.values()))
        raise MatchFailure(
            "Argument of type {} does not match the domain {}".format(argument.type, domain), term=term
        )

    def _max_openable(self, entries):
        """
        Number of outer quantifiers every argument summand has, with equal sorts
        """
        shapes = []
        for entry in entries:
            if entry.is_general:
                return 0
            prefix, _ = strip_foralls(entry.atom)
            shapes.append([var.sort for var in prefix])
        limit = min(len(shape) for shape in shapes)
        common = 0
        while common < min(limit, self.max_open) and len({shape[common] for shape in shapes}) == 1:
            common += 1
        return common

    def _solve(self, binders, domain, arg_entries, opened):
        """
        Solve U[?f_j/X] == V_j[?a/Y] for every argument summand j,
        the argument metavariables ?a being shared
        :return: list of (function metas per summand, argument metas, substitution)
        """
        first_prefix, _ = strip_foralls(arg_entries[0].atom)
        shared = [self._fresh_meta(var) for var in first_prefix[:opened]]
        per_summand = []
        problems = []
        for entry in arg_entries:
            atom = entry.atom
            for meta in shared:
                atom = subst_type(atom.body, atom.binder_var(), meta, check_sort=False)
            metas = [self._fresh_meta(var) for var in binders]
            pattern = subst_many(domain, list(zip(binders, metas)), check_sort=False)
            per_summand.append(metas)
            problems.append((pattern, atom))
        solutions = []
        for subst in itertools.islice(self._unify_all(problems, {}), self.max_solutions):
            solutions.append((per_summand, shared, subst))
        log.debug("Opening %s argument binders gives %s solutions", opened, len(solutions))
        return solutions

    def _unify_all(self, problems, subst):
        if not problems:
            yield subst
            return
        (left, right), rest = problems[0], problems[1:]
        for extended in self.unify(left, right, subst):
            yield from self._unify_all(rest, extended)

    def _conclude(self, context, term, premises, shape, betas, solution, avoid):
        function_premise, argument = premises
        binders, domain, codomains, alphas = shape
        per_summand, shared, subst = solution
        instantiations = [[_apply(meta, subst) for meta in metas] for metas in per_summand]
        opened = [_apply(meta, subst) for meta in shared]
        # unsolved metavariables become fresh rigid variables
        unsolved = []
        for t in [t for row in instantiations for t in row] + opened:
            for meta in _metas(t):
                if meta not in unsolved:
                    unsolved.append(meta)
        rigid = {}
        for meta in unsolved:
            base = meta.name.lstrip(META_PREFIX).rstrip("0123456789'") or "X"
            name = fresh_type_name(base, avoid)
            avoid.add(name)
            rigid[meta.name] = (meta, var_of_sort(meta.sort, name))
        if rigid:
            instantiations = [[_apply(t, rigid) for t in row] for row in instantiations]
            opened = [_apply(t, rigid) for t in opened]
        try:
            expected_argument = make_type_sum(
                scale_type(beta, subst_many(domain, list(zip(binders, row))))
                for beta, row in zip(betas, instantiations)
            )
            conclusion = make_type_sum(
                scale_type(alpha * beta, subst_many(codomain, list(zip(binders, row))))
                for alpha, codomain in zip(alphas, codomains)
                for beta, row in zip(betas, instantiations)
            )
        except SortMismatch:
            return None
        argument_premise = argument
        for value in opened:
            argument_premise = self._forall_elim(argument_premise, value)
        if not type_equiv(argument_premise.type, expected_argument):
            log.debug("Discarding a solution: %s is not %s", argument_premise.type, expected_argument)
            return None
        payload = {
            "binders": list(binders),
            "domain": domain,
            "codomains": list(codomains),
            "alphas": list(alphas),
            "betas": list(betas),
            "instantiations": instantiations,
        }
        derivation = Derivation(ARROW_E, context, term, conclusion, (function_premise, argument_premise), payload)
        fresh = [var for _, var in rigid.values()]
        if fresh:
            present = [var for var in free_vars_in_order(conclusion) if var in fresh]
            derivation = self._generalize(derivation, present)
        return derivation

    # unification

    def unify(self, left, right, subst):
        """
        Unify two types on their canonical forms
        :return: generator of substitutions
        """
        left_canon = canonicalize(_apply(left, subst))
        right_canon = canonicalize(_apply(right, subst))
        if left_canon.key == right_canon.key:
            yield subst
            return
        for lone, other in ((left_canon, right_canon), (right_canon, left_canon)):
            if len(lone) != 1:
                continue
            entry = lone.entries[0]
            if not (entry.is_general and entry.atom.is_meta) or entry.coeff.is_zero():
                continue
            value = scale_type(entry.coeff.inverse(), other.to_type())
            if entry.atom in free_type_vars(value):
                continue
            yield _bind(subst, entry.atom, value)
            return
        if len(left_canon) != len(right_canon):
            return
        yield from self._match_entries(list(left_canon.entries), list(right_canon.entries), subst)

    def _match_entries(self, lefts, rights, subst):
        if not lefts:
            yield subst
            return
        first, rest = lefts[0], lefts[1:]
        for index, candidate in enumerate(rights):
            if candidate.coeff != first.coeff:
                continue
            others = rights[:index] + rights[index + 1 :]
            for extended in self._unify_atoms(first.atom, candidate.atom, subst):
                yield from self._match_entries(rest, others, extended)

    def _unify_atoms(self, left, right, subst):
        left = _apply(left, subst)
        right = _apply(right, subst)
        if atom_key(left) == atom_key(right):
            yield subst
            return
        for var, value in ((left, right), (right, left)):
            if _is_meta(var):
                bound = _bind_meta(var, value, subst)
                if bound is not None:
                    yield bound
                    return
        if isinstance(left, Arrow) and isinstance(right, Arrow):
            for extended in self.unify(left.domain, right.domain, subst):
                yield from self.unify(left.codomain, right.codomain, extended)
            return
        if isinstance(left, FORALL_CLASSES) and type(left) is type(right):
            avoid = type_names(left) | type_names(right)
            for _, value in subst.values():
                avoid |= type_names(value)
            rigid = var_of_sort(left.sort, fresh_type_name(left.binder, avoid))
            left_body = subst_type(left.body, left.binder_var(), rigid, check_sort=False)
            right_body = subst_type(right.body, right.binder_var(), rigid, check_sort=False)
            for extended in self.unify(left_body, right_body, subst):
                if any(rigid in free_type_vars(value) for _, value in extended.values()):
                    continue
                yield extended

    # checking

    def _check(self, context, term, expected):
        derivation = self._infer(context, term)
        if type_equiv(derivation.type, expected):
            return _equiv_node(derivation, expected)
        instantiated = self._instantiate_to(derivation, expected)
        if instantiated is not None:
            return instantiated
        generalized = self._generalize_to(context, term, expected)
        if generalized is not None:
            return generalized
        raise TypeMismatch(
            "{} has type {}, expected {}".format(
                term, canonicalize(derivation.type).to_type(), canonicalize(expected).to_type()
            ),
            inferred=derivation.type,
            expected=expected,
            term=term,
        )

    def _instantiate_to(self, derivation, expected):
        entries = canonicalize(derivation.type).entries
        if any(entry.is_general for entry in entries):
            return None
        for opened in range(1, self._max_openable(entries) + 1):
            first_prefix, _ = strip_foralls(entries[0].atom)
            metas = [self._fresh_meta(var) for var in first_prefix[:opened]]
            summands = []
            for entry in entries:
                atom = entry.atom
                for meta in metas:
                    atom = subst_type(atom.body, atom.binder_var(), meta, check_sort=False)
                summands.append(scale_type(entry.coeff, atom))
            pattern = make_type_sum(summands)
            subst = next(self.unify(pattern, expected, {}), None)
            if subst is None:
                continue
            result = derivation
            avoid = type_names(expected) | type_names(derivation.type)
            for meta in metas:
                value = _apply(meta, subst)
                if _metas(value):
                    # vacuous quantifier, any variable of the right sort will do
                    value = var_of_sort(meta.sort, fresh_type_name("X", avoid))
                result = self._forall_elim(result, value)
            if type_equiv(result.type, expected):
                return _equiv_node(result, expected)
        return None

    def _generalize_to(self, context, term, expected):
        entries = canonicalize(expected).entries
        if not entries or any(not isinstance(entry.atom, FORALL_CLASSES) for entry in entries):
            return None
        if len({type(entry.atom) for entry in entries}) != 1:
            return None
        avoid = context.type_names() | type_names(expected)
        first = entries[0].atom
        fresh = var_of_sort(first.sort, fresh_type_name(first.binder, avoid))
        opened = make_type_sum(
            scale_type(entry.coeff, subst_type(entry.atom.body, entry.atom.binder_var(), fresh)) for entry in entries
        )
        try:
            inner = self._check(context, term, opened)
        except TypeMismatch:
            return None
        return _equiv_node(self._forall_intro(inner, fresh), expected)


def _bind_meta(var, value, subst):
    if isinstance(var, UnitVar):
        value = as_unit(value)
        if value is None:
            return None
    if var in free_type_vars(value):
        return None
    return _bind(subst, var, value)


def _equiv_node(derivation, expected):
    if derivation.type.key == expected.key:
        return derivation
    return Derivation(EQUIV, derivation.context, derivation.term, expected, (derivation,))


def _as_context(context):
    if context is None:
        return EMPTY
    if isinstance(context, Context):
        return context
    return Context.of(context)


# validation


def _same_term(left, right):
    return erase_instantiations(left).key == erase_instantiations(right).key


def _sum_of(entries, transform):
    return make_type_sum(scale_type(entry.coeff, transform(entry.atom)) for entry in entries)


def _check_node(node):
    """
    :return: reason the node does not instantiate its rule, or None
    """
    term, premises = node.term, node.premises
    same_context = all(premise.context == node.context for premise in premises)
    if node.rule == AX:
        if not isinstance(term, Var) or premises:
            return "ax concludes a variable without premises"
        unit = node.context.lookup(term.name)
        if unit is None or not type_equiv(unit, node.type):
            return "{} is not bound to {} in the context".format(term.name, node.type)
        return None
    if node.rule == ZERO_I:
        if not isinstance(term, Zero):
            return "0I concludes the term 0"
        if node.payload.get("ascribed"):
            if term.annotation is None or not type_equiv(node.type, ScaleT(ZERO, term.annotation)):
                return "ascribed 0 must have type 0 times its ascription"
            return None
        if len(premises) != 1 or not same_context:
            return "0I needs one premise in the same context"
        if not type_equiv(node.type, ScaleT(ZERO, premises[0].type)):
            return "0I concludes 0 times the premise type"
        return None
    if node.rule == ARROW_I:
        if not isinstance(term, Lam) or term.annotation is None or len(premises) != 1:
            return "->I concludes an annotated abstraction from one premise"
        premise = premises[0]
        if premise.context != node.context.extend(term.binder, term.annotation):
            return "->I premise context must extend the conclusion context with the binder"
        if not _same_term(premise.term, term.body):
            return "->I premise must type the body"
        if not type_equiv(node.type, Arrow(term.annotation, premise.type)):
            return "->I concludes an arrow from the annotation to the body type"
        return None
    if node.rule == ARROW_E:
        return _check_elimination(node, same_context)
    if node.rule == FORALL_I:
        if len(premises) != 1 or not same_context or not _same_term(premises[0].term, term):
            return "forall-I has one premise about the same term"
        var = node.payload.get("var")
        if var is None or var in node.context.free_type_vars():
            return "forall-I variable {} is free in the context".format(var)
        entries = canonicalize(premises[0].type).entries
        if any(entry.is_general for entry in entries):
            return "forall-I needs a sum of unit types"
        if not type_equiv(node.type, _sum_of(entries, lambda atom: forall(var, atom))):
            return "forall-I conclusion does not quantify every summand"
        return None
    if node.rule == FORALL_E:
        if len(premises) != 1 or not same_context or not _same_term(premises[0].term, term):
            return "forall-E has one premise about the same term"
        argument = node.payload.get("type")
        entries = canonicalize(premises[0].type).entries
        kinds = {type(entry.atom) for entry in entries}
        if argument is None or len(kinds) != 1 or not issubclass(kinds.pop(), FORALL_CLASSES):
            return "forall-E needs a sum of quantified types with a common sort"
        try:
            instantiated = _sum_of(entries, lambda atom: subst_type(atom.body, atom.binder_var(), argument))
        except SortMismatch:
            return "forall-E instantiates a unit variable with a general type"
        if not type_equiv(node.type, instantiated):
            return "forall-E conclusion is not the instantiated premise"
        return None
    if node.rule == ALPHA_I:
        if not isinstance(term, Scale) or len(premises) != 1 or not same_context:
            return "alpha-I types the scaled term from its body"
        if not _same_term(premises[0].term, term.body):
            return "alpha-I types the scaled term from its body"
        if not type_equiv(node.type, ScaleT(term.coeff, premises[0].type)):
            return "alpha-I conclusion is not the scaled premise type"
        return None
    if node.rule == SUM_I:
        if not isinstance(term, Sum) or len(premises) != 2 or not same_context:
            return "+I has two premises"
        if not _same_term(premises[0].term, term.left) or not _same_term(premises[1].term, term.right):
            return "+I premises must type both summands"
        if not type_equiv(node.type, SumT(premises[0].type, premises[1].type)):
            return "+I conclusion is not the sum of the premise types"
        return None
    if node.rule == EQUIV:
        if len(premises) != 1 or not same_context or not _same_term(premises[0].term, term):
            return "equiv has one premise about the same term"
        if not type_equiv(node.type, premises[0].type):
            return "{} is not equivalent to {}".format(node.type, premises[0].type)
        return None
    return "unknown rule {}".format(node.rule)


def _check_elimination(node, same_context):
    term, premises, payload = node.term, node.premises, node.payload
    if not isinstance(term, App) or len(premises) != 2 or not same_context:
        return "->E has a function and an argument premise"
    if not _same_term(premises[0].term, term.fun) or not _same_term(premises[1].term, term.arg):
        return "->E premises must type the function and the argument"
    try:
        binders = payload["binders"]
        domain = payload["domain"]
        codomains = payload["codomains"]
        alphas = payload["alphas"]
        betas = payload["betas"]
        instantiations = payload["instantiations"]
    except KeyError as error:
        return "->E payload lacks {}".format(error)
    if len(codomains) != len(alphas) or len(betas) != len(instantiations):
        return "->E payload sizes disagree"
    function_type = make_type_sum(
        scale_type(alpha, foralls(binders, Arrow(domain, codomain))) for alpha, codomain in zip(alphas, codomains)
    )
    if not type_equiv(premises[0].type, function_type):
        return "function premise {} is not {}".format(premises[0].type, function_type)
    try:
        argument_type = make_type_sum(
            scale_type(beta, subst_many(domain, list(zip(binders, row)))) for beta, row in zip(betas, instantiations)
        )
        conclusion = make_type_sum(
            scale_type(Scalar.coerce(alpha) * beta, subst_many(codomain, list(zip(binders, row))))
            for alpha, codomain in zip(alphas, codomains)
            for beta, row in zip(betas, instantiations)
        )
    except SortMismatch:
        return "->E instantiation violates a sort"
    if not type_equiv(premises[1].type, argument_type):
        return "argument premise {} is not {}".format(premises[1].type, argument_type)
    if not type_equiv(node.type, conclusion):
        return "->E conclusion {} is not {}".format(node.type, conclusion)
    return None


def validation_failure(derivation):
    """
    First node that does not instantiate its rule schema
    :return: (node, reason) or None
    """
    for node in derivation.nodes():
        reason = _check_node(node)
        if reason is not None:
            return node, reason
    return None


def validate(derivation):
    """
    Check every node of a derivation against its rule schema
    :return: bool
    """
    failure = validation_failure(derivation)
    if failure is not None:
        node, reason = failure
        log.info("Derivation rejected at %s: %s", node.rule, reason)
        return False
    return True


def infer(context, term):
    return TypeChecker().infer(context, term)


def check(context, term, expected):
    return TypeChecker().check(context, term, expected)
