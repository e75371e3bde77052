# coding=utf-8
"""
Small-step and big-step reduction.

The deterministic strategy first normalises the algebraic skeleton
(scalings and sums, rules E1-E5 and F1-F4) bottom-up, then distributes
applications over sums, scalings and zeros (A1-A6) at the leftmost
outermost position and only then contracts a beta-redex (B) whose argument
is a basis term.  Reduction is allowed everywhere, the context rules give
congruence under scalings, sums, both sides of applications and
abstractions.
"""
import random
from dataclasses import dataclass, field
from typing import Optional, Tuple

from lvec.errors import FuelExhausted, UsageError
from lvec.log_utils import get_default_logger
from lvec.scalars import ONE, TWO
from lvec.terms import (
    App,
    Inst,
    Lam,
    Scale,
    Sum,
    Zero,
    erase_instantiations,
    make_sum,
    substitute,
    summands,
    to_linear_form,
)
from lvec.type_core import free_type_vars

log = get_default_logger(__name__)

DEFAULT_FUEL = 100000

ALGEBRAIC_RULES = ("E1", "E2", "E3", "E4", "E5", "F1", "F2", "F3", "F4")
APPLICATION_RULES = ("A5", "A6", "A1", "A3", "A2", "A4")
BETA_RULE = "B"
RULES = ALGEBRAIC_RULES + ("B", "A1", "A2", "A3", "A4", "A5", "A6")
CONTEXT_RULES = ("CtxScale", "CtxSumRight", "CtxAppRight", "CtxAppLeft", "CtxLam")


@dataclass(frozen=True)
class Redex:
    """
    An enabled rule at ``position``.  ``detail`` selects the summands a
    factorisation rule works on, as indices into the flattened sum.
    """

    rule: str
    position: Tuple[int, ...]
    detail: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class Step:
    rule: str
    before: object
    after: object
    position: Tuple[int, ...] = ()
    detail: Optional[Tuple[int, ...]] = None
    contexts: Tuple[str, ...] = ()

    def to_dict(self):
        return {
            "rule": self.rule,
            "position": list(self.position),
            "contexts": list(self.contexts),
            "before": str(self.before),
            "after": str(self.after),
        }


@dataclass
class Trace:
    initial: object
    final: object
    steps: list = field(default_factory=list)

    @property
    def fuel_used(self):
        return len(self.steps)

    def to_dict(self):
        return {
            "initial": str(self.initial),
            "final": str(self.final),
            "fuel_used": self.fuel_used,
            "steps": [step.to_dict() for step in self.steps],
        }


def format_position(position):
    """
    >>> format_position((0, 1))
    '0.1'
    >>> format_position(())
    '-'
    """
    return ".".join(str(index) for index in position) or "-"


def format_trace(trace):
    lines = ["    {}".format(trace.initial)]
    for number, step in enumerate(trace.steps, 1):
        lines.append(
            "{:>3} {:<3} @{:<8} {}".format(number, step.rule, format_position(step.position), step.after)
        )
    lines.append("=>  {}".format(trace.final))
    return "\n".join(lines)


def subterm(term, position):
    for index in position:
        children = term.children()
        if index >= len(children):
            raise UsageError("Position {} does not exist".format(format_position(position)))
        term = children[index]
    return term


def replace_at(term, position, value):
    if not position:
        return value
    index, rest = position[0], position[1:]
    if isinstance(term, Lam) and index == 0:
        return Lam(term.binder, term.annotation, replace_at(term.body, rest, value))
    if isinstance(term, App):
        if index == 0:
            return App(replace_at(term.fun, rest, value), term.arg)
        return App(term.fun, replace_at(term.arg, rest, value))
    if isinstance(term, Scale) and index == 0:
        return Scale(term.coeff, replace_at(term.body, rest, value))
    if isinstance(term, Sum):
        if index == 0:
            return Sum(replace_at(term.left, rest, value), term.right)
        return Sum(term.left, replace_at(term.right, rest, value))
    if isinstance(term, Inst) and index == 0:
        return Inst(replace_at(term.body, rest, value), term.types)
    raise UsageError("Position {} does not exist".format(format_position(position)))


def _path_type_vars(term, position):
    """
    Annotation variables of the binders crossed on the way to ``position``
    """
    result = frozenset()
    for index in position:
        if isinstance(term, Lam) and term.annotation is not None:
            result = result | free_type_vars(term.annotation)
        term = term.children()[index]
    return result


def context_rules(term, position):
    """
    Context rules crossed when going from the root down to ``position``
    """
    names = []
    for index in position:
        if isinstance(term, Scale):
            names.append("CtxScale")
        elif isinstance(term, Sum):
            names.append("CtxSumRight")
        elif isinstance(term, App):
            names.append("CtxAppLeft" if index == 0 else "CtxAppRight")
        elif isinstance(term, Lam):
            names.append("CtxLam")
        term = term.children()[index]
    return tuple(names)


def _preorder(term, position=(), inside_sum=False):
    yield position, term, inside_sum
    is_sum = isinstance(term, Sum)
    for index, child in enumerate(term.children()):
        yield from _preorder(child, position + (index,), is_sum)


def _postorder(term, position=(), inside_sum=False):
    is_sum = isinstance(term, Sum)
    for index, child in enumerate(term.children()):
        yield from _postorder(child, position + (index,), is_sum)
    yield position, term, inside_sum


def _scaled_parts(part):
    if isinstance(part, Scale):
        return part.coeff, part.body, True
    return ONE, part, False


def _algebraic_redexes(node, inside_sum):
    if isinstance(node, Scale):
        coeff, body = node.coeff, node.body
        if coeff.is_zero():
            yield "E1", None
        if coeff.is_one():
            yield "E2", None
        if isinstance(body, Zero):
            yield "E3", None
        if isinstance(body, Scale):
            yield "E4", None
        if isinstance(body, Sum):
            yield "E5", None
    elif isinstance(node, Sum) and not inside_sum:
        parts = summands(node)
        for index, part in enumerate(parts):
            if isinstance(part, Zero):
                yield "F4", (index,)
        for i in range(len(parts)):
            if isinstance(parts[i], Zero):
                continue
            _, left_atom, left_scaled = _scaled_parts(parts[i])
            for j in range(i + 1, len(parts)):
                if isinstance(parts[j], Zero):
                    continue
                _, right_atom, right_scaled = _scaled_parts(parts[j])
                if left_atom.key != right_atom.key:
                    continue
                if left_scaled and right_scaled:
                    yield "F1", (i, j)
                elif left_scaled or right_scaled:
                    yield "F2", (i, j)
                else:
                    yield "F3", (i, j)


def _application_redexes(node):
    if not isinstance(node, App):
        return
    fun, arg = node.fun, node.arg
    if isinstance(fun, Zero):
        yield "A5"
    if isinstance(arg, Zero):
        yield "A6"
    if isinstance(fun, Sum):
        yield "A1"
    if isinstance(fun, Scale):
        yield "A3"
    if isinstance(arg, Sum):
        yield "A2"
    if isinstance(arg, Scale):
        yield "A4"


def _is_beta_redex(node):
    return isinstance(node, App) and isinstance(node.fun, Lam) and node.arg.is_basis


def iter_redexes(term):
    """
    Enabled redexes in the order the deterministic strategy tries them
    """
    for position, node, inside_sum in _postorder(term):
        for rule, detail in _algebraic_redexes(node, inside_sum):
            yield Redex(rule, position, detail)
    for position, node, _ in _preorder(term):
        for rule in _application_redexes(node):
            yield Redex(rule, position)
    for position, node, _ in _preorder(term):
        if _is_beta_redex(node):
            yield Redex(BETA_RULE, position)


def _contract_algebraic(rule, node, detail):
    if rule == "E1":
        return Zero(witness=node.body)
    if rule == "E2":
        return node.body
    if rule == "E3":
        return node.body
    if rule == "E4":
        return Scale(node.coeff * node.body.coeff, node.body.body)
    if rule == "E5":
        return Sum(Scale(node.coeff, node.body.left), Scale(node.coeff, node.body.right))
    parts = summands(node)
    if rule == "F4":
        (index,) = detail
        return make_sum(parts[:index] + parts[index + 1 :])
    i, j = detail
    left_coeff, atom, left_scaled = _scaled_parts(parts[i])
    right_coeff, _, right_scaled = _scaled_parts(parts[j])
    if rule == "F3":
        merged = Scale(TWO, atom)
    else:
        merged = Scale(left_coeff + right_coeff, atom)
    rebuilt = parts[:i] + [merged] + parts[i + 1 : j] + parts[j + 1 :]
    return make_sum(rebuilt)


def _contract_application(rule, node):
    fun, arg = node.fun, node.arg
    if rule in ("A5", "A6"):
        return Zero(witness=node)
    if rule == "A1":
        return Sum(App(fun.left, arg), App(fun.right, arg))
    if rule == "A2":
        return Sum(App(fun, arg.left), App(fun, arg.right))
    if rule == "A3":
        return Scale(fun.coeff, App(fun.body, arg))
    if rule == "A4":
        return Scale(arg.coeff, App(fun, arg.body))
    raise UsageError("Unknown rule {}".format(rule))


def _enabled(term, rule, position, detail):
    node = subterm(term, position)
    if rule in ALGEBRAIC_RULES:
        inside_sum = bool(position) and isinstance(subterm(term, position[:-1]), Sum)
        found = [(r, d) for r, d in _algebraic_redexes(node, inside_sum) if r == rule]
        if not found:
            return node, None
        if detail is None:
            return node, found[0]
        return node, (rule, tuple(detail)) if (rule, tuple(detail)) in found else None
    if rule == BETA_RULE:
        return node, (rule, None) if _is_beta_redex(node) else None
    if rule in _application_redexes(node):
        return node, (rule, None)
    return node, None


def fire(term, rule, position=(), detail=None):
    """
    Apply ``rule`` at ``position``
    :param term: whole term
    :param rule: rule name, e.g. "E4" or "A1"
    :param position: tuple of child indices
    :param detail: summand indices for F rules, the first matching pair when omitted
    :return: Step
    """
    if rule not in RULES:
        raise UsageError("Unknown rule {}".format(rule))
    position = tuple(position)
    node, enabled = _enabled(term, rule, position, detail)
    if enabled is None:
        raise UsageError("Rule {} does not apply at position {}".format(rule, format_position(position)))
    _, detail = enabled
    if rule == BETA_RULE:
        rigid = _path_type_vars(term, position + (0, 0))
        contracted = substitute(node.fun.body, node.fun.binder, node.arg, rigid)
    elif rule in ALGEBRAIC_RULES:
        contracted = _contract_algebraic(rule, node, detail)
    else:
        contracted = _contract_application(rule, node)
    after = replace_at(term, position, contracted)
    return Step(rule, term, after, position, detail, context_rules(term, position))


def canonical_form(term):
    """
    Normal form presented as its canonical linear combination
    """
    if isinstance(term, Zero):
        return term
    form = to_linear_form(term)
    if form.is_zero():
        return Zero()
    return form.to_term()


class ReductionEngine(object):
    """
    Reduction with a step budget.
    :param fuel: maximal number of steps of one normalisation, default 100000
    """

    def __init__(self, fuel=DEFAULT_FUEL):
        if fuel is None or fuel <= 0:
            raise UsageError("Fuel must be positive, got {}".format(fuel))
        self.fuel = fuel

    @staticmethod
    def redexes(term):
        return list(iter_redexes(term))

    @staticmethod
    def step(term):
        """
        One step of the deterministic strategy
        :return: Step or None on a normal form
        """
        redex = next(iter_redexes(term), None)
        if redex is None:
            return None
        return fire(term, redex.rule, redex.position, redex.detail)

    def normalize(self, term, fuel=None):
        return self._run(term, fuel, lambda current: self.step(current))

    def normalize_random(self, term, seed=None, fuel=None):
        """
        Normalise picking uniformly among all enabled redexes
        """
        rng = random.Random(seed)

        def choose(current):
            candidates = self.redexes(current)
            if not candidates:
                return None
            redex = rng.choice(candidates)
            return fire(current, redex.rule, redex.position, redex.detail)

        return self._run(term, fuel, choose)

    def _run(self, term, fuel, next_step):
        fuel = self.fuel if fuel is None else fuel
        if fuel <= 0:
            raise UsageError("Fuel must be positive, got {}".format(fuel))
        initial = term
        current = erase_instantiations(term)
        steps = []
        while True:
            step = next_step(current)
            if step is None:
                break
            if len(steps) >= fuel:
                log.warning("Fuel of %s steps exhausted", fuel)
                partial = Trace(initial, current, steps)
                raise FuelExhausted(
                    "No normal form within {} steps".format(fuel),
                    trace=partial,
                    reason="fuel",
                )
            log.debug("%s at %s", step.rule, format_position(step.position))
            steps.append(step)
            current = step.after
        log.info("Normal form reached after %s steps", len(steps))
        return Trace(initial, canonical_form(current), steps)


def step(term):
    return ReductionEngine.step(term)


def redexes(term):
    return ReductionEngine.redexes(term)


def normalize(term, fuel=DEFAULT_FUEL):
    return ReductionEngine(fuel).normalize(term)


def normalize_random(term, seed=None, fuel=DEFAULT_FUEL):
    return ReductionEngine(fuel).normalize_random(term, seed)


def is_normal(term):
    return next(iter_redexes(term), None) is None
