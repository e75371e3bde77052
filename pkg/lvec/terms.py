# coding=utf-8
"""
Term syntax of the vectorial lambda-calculus.

Terms are immutable dataclasses.  Equality and hashing go through a
nameless key: bound variables become de Bruijn indices, sums are compared
as multisets of their flattened summands and every ``Zero`` equals every
other ``Zero`` whatever payload it carries.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Tuple

from lvec.log_utils import get_default_logger
from lvec.scalars import ONE, Scalar
from lvec.type_core import free_type_vars, free_vars_in_order, fresh_type_name, subst_type, var_of_sort

log = get_default_logger(__name__)

VAR_FREE = 0
VAR_BOUND = 1
LAM = 2
APP = 3
ZERO = 4
SCALE = 5
SUM = 6
INST = 7


class Term(object):
    """
    Base class of every term node
    """

    def nameless_key(self, env=()):
        raise NotImplementedError

    @cached_property
    def key(self):
        return self.nameless_key(())

    def __eq__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return self.key == other.key

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash(self.key)

    def __str__(self):
        from lvec.printer import print_term

        return print_term(self)

    @property
    def is_basis(self):
        return False

    def children(self):
        return ()


def _lookup(env, name):
    for depth, bound in enumerate(reversed(env)):
        if bound == name:
            return depth
    return None


def _type_key(annotation):
    if annotation is None:
        return ()
    return (annotation.key,)


@dataclass(frozen=True, eq=False)
class Var(Term):
    name: str

    def nameless_key(self, env=()):
        depth = _lookup(env, self.name)
        if depth is None:
            return (VAR_FREE, self.name)
        return (VAR_BOUND, depth)

    @property
    def is_basis(self):
        return True


@dataclass(frozen=True, eq=False)
class Lam(Term):
    binder: str
    annotation: Optional[object]
    body: Term

    def nameless_key(self, env=()):
        return (LAM, _type_key(self.annotation), self.body.nameless_key(env + (self.binder,)))

    @property
    def is_basis(self):
        return True

    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False)
class App(Term):
    fun: Term
    arg: Term

    def nameless_key(self, env=()):
        return (APP, self.fun.nameless_key(env), self.arg.nameless_key(env))

    def children(self):
        return (self.fun, self.arg)


@dataclass(frozen=True, eq=False)
class Zero(Term):
    """
    The null vector.
    ``annotation`` is a surface ascription ``(0 : T)`` and ``witness`` is a
    term the zero stands for, kept by the rewrite rules producing zeros so the
    typing rule for ``0`` still has a premise after reduction.
    """

    annotation: Optional[object] = None
    witness: Optional[Term] = None

    def nameless_key(self, env=()):
        return (ZERO,)


@dataclass(frozen=True, eq=False)
class Scale(Term):
    coeff: Scalar
    body: Term

    def nameless_key(self, env=()):
        return (SCALE, self.coeff.sort_key(), self.body.nameless_key(env))

    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False)
class Sum(Term):
    left: Term
    right: Term

    def nameless_key(self, env=()):
        return (SUM, tuple(sorted(s.nameless_key(env) for s in summands(self))))

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class Inst(Term):
    """
    Explicit instantiation of the outer quantifiers of ``body``'s type
    """

    body: Term
    types: Tuple[object, ...] = field(default_factory=tuple)

    def nameless_key(self, env=()):
        return (INST, self.body.nameless_key(env), tuple(t.key for t in self.types))

    @property
    def is_basis(self):
        return self.body.is_basis

    def children(self):
        return (self.body,)


def summands(term):
    """
    Flatten nested sums, left to right
    :param term:
    :return: list of terms that are not sums
    """
    result = []
    stack = [term]
    while stack:
        current = stack.pop()
        if isinstance(current, Sum):
            stack.append(current.right)
            stack.append(current.left)
        else:
            result.append(current)
    return result


def make_sum(terms):
    """
    Left-nested sum of the given terms, ``Zero`` for none
    """
    terms = list(terms)
    if not terms:
        return Zero()
    result = terms[0]
    for item in terms[1:]:
        result = Sum(result, item)
    return result


def scale(coeff, term):
    coeff = Scalar.coerce(coeff)
    if coeff.is_one():
        return term
    return Scale(coeff, term)


def free_vars(term):
    """
    Free term variables.  Zero payloads are not part of the term.
    >>> sorted(free_vars(Lam("x", None, App(Var("x"), Var("y")))))
    ['y']
    """
    if isinstance(term, Var):
        return frozenset([term.name])
    if isinstance(term, Lam):
        return free_vars(term.body) - {term.binder}
    if isinstance(term, Zero):
        return frozenset()
    result = frozenset()
    for child in term.children():
        result = result | free_vars(child)
    return result


def all_names(term):
    """
    Every variable name occurring in the term, bound or free, payloads included
    """
    if isinstance(term, Var):
        return {term.name}
    if isinstance(term, Lam):
        return {term.binder} | all_names(term.body)
    if isinstance(term, Zero):
        return all_names(term.witness) if term.witness is not None else set()
    names = set()
    for child in term.children():
        names |= all_names(child)
    return names


def fresh_name(base, avoid):
    """
    First name derived from ``base`` that is not in ``avoid``
    >>> fresh_name("x", {"x", "x1"})
    'x2'
    """
    base = base.rstrip("0123456789") or base
    if base not in avoid:
        return base
    index = 1
    while "{}{}".format(base, index) in avoid:
        index += 1
    return "{}{}".format(base, index)


def substitute(term, name, value, rigid=frozenset()):
    """
    Capture-avoiding substitution term[value/name].
    Distributes over scalings and sums; rewrites inside zero witnesses so the
    witness stays meaningful in the new term.

    Type variables are captured too: an annotation variable of ``value`` is
    generalised where ``value`` was typed, so a binder of ``term`` whose
    annotation mentions the same variable would pin it.  Such variables are
    renamed in ``term`` first, unless they are ``rigid``.

    :param term:
    :param name: variable replaced
    :param value: replacement term
    :param rigid: type variable nodes shared with the surrounding context, never renamed
    :return: new term
    """
    clash = (annotation_type_vars(value) & _enclosing_type_vars(term, name)) - frozenset(rigid)
    if clash:
        avoid = {var.name for var in annotation_type_vars(term) | annotation_type_vars(value) | frozenset(rigid)}
        mapping = {}
        for var in sorted(clash, key=lambda v: (v.sort, v.name)):
            fresh = fresh_type_name(var.name, avoid)
            avoid.add(fresh)
            mapping[var] = var_of_sort(var.sort, fresh)
        log.debug("Renaming annotation variables %s before substituting %s", sorted(v.name for v in clash), name)
        term = rename_type_vars(term, mapping)
    return _substitute(term, name, value, free_vars(value))


def _annotation_vars(annotation):
    if annotation is None:
        return frozenset()
    return free_type_vars(annotation)


def annotation_type_vars(term):
    """
    Free type variables of every annotation, ascription and instantiation in ``term``
    """
    if isinstance(term, Lam):
        return _annotation_vars(term.annotation) | annotation_type_vars(term.body)
    if isinstance(term, Zero):
        result = _annotation_vars(term.annotation)
        if term.witness is not None:
            result = result | annotation_type_vars(term.witness)
        return result
    result = frozenset()
    if isinstance(term, Inst):
        for argument in term.types:
            result = result | free_type_vars(argument)
    for child in term.children():
        result = result | annotation_type_vars(child)
    return result


def _enclosing_type_vars(term, name):
    """
    Annotation variables of the binders of ``term`` above a free occurrence of ``name``
    """
    if name not in free_vars(term):
        return frozenset()
    if isinstance(term, Lam):
        if term.binder == name:
            return frozenset()
        return _annotation_vars(term.annotation) | _enclosing_type_vars(term.body, name)
    result = frozenset()
    for child in term.children():
        result = result | _enclosing_type_vars(child, name)
    return result


def rename_type_vars(term, mapping):
    """
    Rename free type variables in every annotation of ``term``
    :param mapping: dict from variable node to variable node of the same sort
    """
    if not mapping:
        return term

    def rename(t):
        if t is None:
            return None
        for var, target in mapping.items():
            t = subst_type(t, var, target, check_sort=False)
        return t

    if isinstance(term, Var):
        return term
    if isinstance(term, Lam):
        return Lam(term.binder, rename(term.annotation), rename_type_vars(term.body, mapping))
    if isinstance(term, App):
        return App(rename_type_vars(term.fun, mapping), rename_type_vars(term.arg, mapping))
    if isinstance(term, Zero):
        witness = None if term.witness is None else rename_type_vars(term.witness, mapping)
        return Zero(rename(term.annotation), witness)
    if isinstance(term, Scale):
        return Scale(term.coeff, rename_type_vars(term.body, mapping))
    if isinstance(term, Sum):
        return Sum(rename_type_vars(term.left, mapping), rename_type_vars(term.right, mapping))
    if isinstance(term, Inst):
        return Inst(rename_type_vars(term.body, mapping), tuple(rename(t) for t in term.types))
    raise TypeError("Unknown term node {!r}".format(term))


def normalize_type_names(term):
    """
    Rename the annotation variables of ``term`` to ``$1``, ``$2``, ... in
    order of first occurrence, so terms differing only in those names compare equal
    """
    order = []
    _annotation_vars_in_order(term, order)
    return rename_type_vars(term, {var: var_of_sort(var.sort, "${}".format(i)) for i, var in enumerate(order, 1)})


def _annotation_vars_in_order(term, seen):
    annotations = []
    if isinstance(term, (Lam, Zero)):
        annotations.append(term.annotation)
    elif isinstance(term, Inst):
        annotations.extend(term.types)
    for annotation in annotations:
        if annotation is not None:
            free_vars_in_order(annotation, seen=seen)
    if isinstance(term, Zero):
        if term.witness is not None:
            _annotation_vars_in_order(term.witness, seen)
        return
    children = term.children()
    if isinstance(term, Sum):
        # summand order depends on the names being normalised
        children = sorted(summands(term), key=erase_key)
    for child in children:
        _annotation_vars_in_order(child, seen)


def _substitute(term, name, value, value_free):
    if isinstance(term, Var):
        return value if term.name == name else term
    if isinstance(term, Lam):
        if term.binder == name or name not in free_vars(term.body):
            return term
        binder, body = term.binder, term.body
        if binder in value_free:
            new_binder = fresh_name(binder, value_free | all_names(body) | {name})
            log.debug("Renaming binder %s to %s to avoid capture", binder, new_binder)
            body = _substitute(body, binder, Var(new_binder), frozenset([new_binder]))
            binder = new_binder
        return Lam(binder, term.annotation, _substitute(body, name, value, value_free))
    if isinstance(term, App):
        return App(_substitute(term.fun, name, value, value_free), _substitute(term.arg, name, value, value_free))
    if isinstance(term, Zero):
        if term.witness is None:
            return term
        return Zero(term.annotation, _substitute(term.witness, name, value, value_free))
    if isinstance(term, Scale):
        return Scale(term.coeff, _substitute(term.body, name, value, value_free))
    if isinstance(term, Sum):
        return Sum(_substitute(term.left, name, value, value_free), _substitute(term.right, name, value, value_free))
    if isinstance(term, Inst):
        return Inst(_substitute(term.body, name, value, value_free), term.types)
    raise TypeError("Unknown term node {!r}".format(term))


def erase_instantiations(term):
    """
    Drop every ``Inst`` marker, they carry no computational content
    """
    if isinstance(term, Inst):
        return erase_instantiations(term.body)
    if isinstance(term, Lam):
        return Lam(term.binder, term.annotation, erase_instantiations(term.body))
    if isinstance(term, App):
        return App(erase_instantiations(term.fun), erase_instantiations(term.arg))
    if isinstance(term, Scale):
        return Scale(term.coeff, erase_instantiations(term.body))
    if isinstance(term, Sum):
        return Sum(erase_instantiations(term.left), erase_instantiations(term.right))
    return term


def erase_key(term, env=()):
    """
    Nameless key ignoring binder annotations, used when comparing reduced
    terms with freshly built encodings
    """
    if isinstance(term, Var):
        return term.nameless_key(env)
    if isinstance(term, Lam):
        return (LAM, (), erase_key(term.body, env + (term.binder,)))
    if isinstance(term, App):
        return (APP, erase_key(term.fun, env), erase_key(term.arg, env))
    if isinstance(term, Scale):
        return (SCALE, term.coeff.sort_key(), erase_key(term.body, env))
    if isinstance(term, Sum):
        return (SUM, tuple(sorted(erase_key(s, env) for s in summands(term))))
    if isinstance(term, Inst):
        return erase_key(term.body, env)
    return term.nameless_key(env)


def term_size(term):
    return 1 + sum(term_size(child) for child in term.children())


@dataclass(frozen=True)
class LinearEntry:
    coeff: Scalar
    atom: Term


class LinearForm(object):
    """
    Canonical linear combination of atoms (terms that are neither zero,
    scaling nor sum).  Atoms are pairwise distinct up to alpha-equivalence,
    sorted by their nameless key and carry non-zero coefficients.
    """

    def __init__(self, entries=()):
        self.entries = tuple(entries)

    @classmethod
    def from_pairs(cls, pairs):
        merged = {}
        order = []
        for coeff, atom in pairs:
            coeff = Scalar.coerce(coeff)
            if atom.key in merged:
                previous = merged[atom.key]
                merged[atom.key] = LinearEntry(previous.coeff + coeff, previous.atom)
            else:
                merged[atom.key] = LinearEntry(coeff, atom)
                order.append(atom.key)
        entries = [merged[key] for key in sorted(order) if not merged[key].coeff.is_zero()]
        return cls(entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return "LinearForm({})".format(", ".join("{}:{}".format(e.coeff, e.atom) for e in self.entries))

    @property
    def key(self):
        return tuple((entry.atom.key, entry.coeff.sort_key()) for entry in self.entries)

    def coefficient_of(self, atom):
        for entry in self.entries:
            if entry.atom.key == atom.key:
                return entry.coeff
        return Scalar(0)

    def is_zero(self):
        return not self.entries

    def to_term(self):
        return make_sum(scale(entry.coeff, entry.atom) for entry in self.entries)


def _collect(term, coeff, pairs):
    if isinstance(term, Zero):
        return
    if isinstance(term, Scale):
        _collect(term.body, coeff * term.coeff, pairs)
        return
    if isinstance(term, Sum):
        for item in summands(term):
            _collect(item, coeff, pairs)
        return
    pairs.append((coeff, term))


def to_linear_form(term):
    """
    Canonical linear combination of a term: the algebraic skeleton
    (zero, scalings and sums) normalised by the elementary and
    factorisation laws, atoms left untouched.
    >>> from lvec.scalars import TWO
    >>> x = Var("x")
    >>> form = to_linear_form(Sum(Sum(Scale(TWO, x), x), Zero()))
    >>> [(str(e.coeff), str(e.atom)) for e in form]
    [('3', 'x')]
    """
    pairs = []
    _collect(term, ONE, pairs)
    return LinearForm.from_pairs(pairs)
