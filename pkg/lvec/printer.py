# coding=utf-8
"""
Pretty printer for terms and types.

The output is read back by :mod:`lvec.parser`.  Sums are printed in the
canonical order of their summands so that printing is stable under
associativity and commutativity.
"""
from lvec.scalars import format_scalar
from lvec.terms import App, Inst, Lam, Scale, Sum, Term, Var, Zero, free_vars, summands
from lvec.type_core import (
    IDENTITY_TYPE,
    FORALL_CLASSES,
    Arrow,
    ForallG,
    GenVar,
    ScaleT,
    SumT,
    UnitVar,
    canonicalize,
)


def print_type(t, canonical=False):
    """
    :param t: Type
    :param canonical: print the canonical decomposition instead of the syntax
    :return: str
    """
    if canonical:
        t = canonicalize(t).to_type()
    return _type(t)


def _type(t):
    if isinstance(t, SumT):
        parts = []
        stack = [t]
        while stack:
            current = stack.pop()
            if isinstance(current, SumT):
                stack.append(current.right)
                stack.append(current.left)
            else:
                parts.append(current)
        # an arrow or quantifier reaches to the end of the sum unless closed
        shown = [_type_scaled(part, closed=True) for part in parts[:-1]]
        return " + ".join(shown + [_type_scaled(parts[-1])])
    return _type_scaled(t)


def _type_scaled(t, closed=False):
    if isinstance(t, ScaleT):
        body = t.body
        if isinstance(body, SumT):
            inner = "({})".format(_type(body))
        else:
            inner = _type_scaled(body, closed)
        return "{} * {}".format(format_scalar(t.coeff), inner)
    if closed and isinstance(t, (Arrow,) + FORALL_CLASSES):
        return "({})".format(_type_unit(t))
    return _type_unit(t)


def _type_unit(t):
    if isinstance(t, FORALL_CLASSES):
        binders = []
        while isinstance(t, FORALL_CLASSES):
            binders.append("#" + t.binder if isinstance(t, ForallG) else t.binder)
            t = t.body
        return "forall {}. {}".format(" ".join(binders), _type_unit(t))
    if isinstance(t, Arrow):
        domain = _type_atom(t.domain)
        codomain = t.codomain
        if isinstance(codomain, (SumT, ScaleT)):
            right = "({})".format(_type(codomain))
        else:
            right = _type_unit(codomain)
        return "{} -> {}".format(domain, right)
    return _type_atom(t)


def _type_atom(t):
    if isinstance(t, UnitVar):
        return t.name
    if isinstance(t, GenVar):
        return "#" + t.name
    return "({})".format(_type(t))


def print_term(t, canonical=True):
    """
    :param t: Term
    :param canonical: order summands of every sum by their nameless key
    :return: str
    """
    return _Printer(canonical).term(t)


class _Printer(object):
    def __init__(self, canonical):
        self.canonical = canonical

    def term(self, t):
        if isinstance(t, Lam) and not self._is_thunk(t):
            annotation = "" if t.annotation is None else ":" + _type_unit(t.annotation)
            return "\\{}{}. {}".format(t.binder, annotation, self.term(t.body))
        return self.sum(t)

    def sum(self, t):
        if isinstance(t, Sum):
            parts = summands(t)
            if self.canonical:
                parts = sorted(parts, key=lambda item: item.key)
            return " + ".join(self.scaled(part) for part in parts)
        return self.scaled(t)

    def scaled(self, t):
        if isinstance(t, Scale):
            return "{} * {}".format(format_scalar(t.coeff), self.scaled(t.body))
        return self.app(t)

    def app(self, t):
        if isinstance(t, App) and not self._is_release(t):
            return "({}) {}".format(self.term(t.fun), self.atom(t.arg))
        return self.atom(t)

    def atom(self, t):
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Zero):
            if t.annotation is not None:
                return "(0 : {})".format(_type(t.annotation))
            return "0"
        if self._is_thunk(t):
            return "[{}]".format(self.term(t.body))
        if self._is_release(t):
            return "{{{}}}".format(self.term(t.fun))
        if isinstance(t, Inst):
            return "{}@[{}]".format(self.atom(t.body), ", ".join(_type(a) for a in t.types))
        if isinstance(t, Term):
            return "({})".format(self.term(t))
        raise TypeError("Cannot print {!r}".format(t))

    @staticmethod
    def _is_thunk(t):
        return (
            isinstance(t, Lam)
            and t.annotation is not None
            and t.annotation.key == IDENTITY_TYPE.key
            and t.binder not in free_vars(t.body)
        )

    @staticmethod
    def _is_release(t):
        if not isinstance(t, App) or not isinstance(t.arg, Lam):
            return False
        identity = t.arg
        return (
            identity.annotation is not None
            and identity.annotation.key == UnitVar("Z").key
            and isinstance(identity.body, Var)
            and identity.body.name == identity.binder
        )


def format_derivation(derivation, indent=0):
    """
    Indented text rendering of a derivation tree, conclusion first
    """
    lines = []
    _derivation_lines(derivation, indent, lines)
    return "\n".join(lines)


def _derivation_lines(node, indent, lines):
    context = ", ".join("{}:{}".format(name, _type(t)) for name, t in node.context.items())
    lines.append(
        "{}[{}] {} |- {} : {}".format(
            "  " * indent, node.rule, context, print_term(node.term), print_type(node.type, canonical=True)
        )
    )
    for premise in node.premises:
        _derivation_lines(premise, indent + 1, lines)
