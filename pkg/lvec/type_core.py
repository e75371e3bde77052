# coding=utf-8
"""
Types with unit and general variables, their canonical decomposition and
the decision procedure for type equivalence.

A type is canonicalised into a coefficient-tagged list of pairwise
inequivalent unit types and general variables.  Zero coefficients are
kept: ``R + 0*T`` is not equivalent to ``R``.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

from lvec.errors import SortMismatch
from lvec.log_utils import get_default_logger
from lvec.scalars import ONE, ZERO, Scalar

log = get_default_logger(__name__)

UNIT_SORT = "unit"
GENERAL_SORT = "general"
META_PREFIX = "?"
ORDER_SEARCH_LIMIT = 10

T_UVAR_FREE = 0
T_UVAR_BOUND = 1
T_GVAR_FREE = 2
T_GVAR_BOUND = 3
T_ARROW = 4
T_FORALL_U = 5
T_FORALL_G = 6
T_SCALE = 7
T_SUM = 8


class Type(object):
    """
    Base class of every type node.  ``==`` is alpha-equivalence on the
    syntax; use :func:`type_equiv` for the equivalence relation on types.
    """

    def structural_key(self, env=()):
        raise NotImplementedError

    @cached_property
    def key(self):
        return self.structural_key(())

    def __eq__(self, other):
        if not isinstance(other, Type):
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
        from lvec.printer import print_type

        return print_type(self)

    @property
    def is_unit(self):
        return False


def _bound_index(env, sort, name):
    for depth, (bound_sort, bound_name) in enumerate(reversed(env)):
        if bound_sort == sort and bound_name == name:
            return depth
    return None


@dataclass(frozen=True, eq=False)
class UnitVar(Type):
    name: str

    sort = UNIT_SORT

    def structural_key(self, env=()):
        depth = _bound_index(env, UNIT_SORT, self.name)
        if depth is None:
            return (T_UVAR_FREE, self.name)
        return (T_UVAR_BOUND, depth)

    @property
    def is_unit(self):
        return True

    @property
    def is_meta(self):
        return self.name.startswith(META_PREFIX)


@dataclass(frozen=True, eq=False)
class GenVar(Type):
    name: str

    sort = GENERAL_SORT

    def structural_key(self, env=()):
        depth = _bound_index(env, GENERAL_SORT, self.name)
        if depth is None:
            return (T_GVAR_FREE, self.name)
        return (T_GVAR_BOUND, depth)

    @property
    def is_meta(self):
        return self.name.startswith(META_PREFIX)


@dataclass(frozen=True, eq=False)
class Arrow(Type):
    domain: Type
    codomain: Type

    def structural_key(self, env=()):
        return (T_ARROW, self.domain.structural_key(env), self.codomain.structural_key(env))

    @property
    def is_unit(self):
        return True


@dataclass(frozen=True, eq=False)
class ForallU(Type):
    binder: str
    body: Type

    sort = UNIT_SORT

    def structural_key(self, env=()):
        return (T_FORALL_U, self.body.structural_key(env + ((UNIT_SORT, self.binder),)))

    @property
    def is_unit(self):
        return True

    def binder_var(self):
        return UnitVar(self.binder)


@dataclass(frozen=True, eq=False)
class ForallG(Type):
    binder: str
    body: Type

    sort = GENERAL_SORT

    def structural_key(self, env=()):
        return (T_FORALL_G, self.body.structural_key(env + ((GENERAL_SORT, self.binder),)))

    @property
    def is_unit(self):
        return True

    def binder_var(self):
        return GenVar(self.binder)


@dataclass(frozen=True, eq=False)
class ScaleT(Type):
    coeff: Scalar
    body: Type

    def structural_key(self, env=()):
        return (T_SCALE, self.coeff.sort_key(), self.body.structural_key(env))


@dataclass(frozen=True, eq=False)
class SumT(Type):
    left: Type
    right: Type

    def structural_key(self, env=()):
        return (T_SUM, self.left.structural_key(env), self.right.structural_key(env))


FORALL_CLASSES = (ForallU, ForallG)

IDENTITY_TYPE = ForallU("Z", Arrow(UnitVar("Z"), UnitVar("Z")))


def forall(var, body):
    """
    Quantify ``body`` over the variable node ``var``
    """
    if isinstance(var, UnitVar):
        return ForallU(var.name, body)
    if isinstance(var, GenVar):
        return ForallG(var.name, body)
    raise TypeError("Cannot quantify over {!r}".format(var))


def var_of_sort(sort, name):
    return UnitVar(name) if sort == UNIT_SORT else GenVar(name)


def thunk_type(body):
    """
    Type ``I -> body`` of a frozen term
    """
    return Arrow(IDENTITY_TYPE, body)


def arrows(domains, codomain):
    """
    Right-nested ``D1 -> ... -> Dn -> codomain``
    """
    result = codomain
    for domain in reversed(list(domains)):
        result = Arrow(domain, result)
    return result


def foralls(variables, body):
    result = body
    for var in reversed(list(variables)):
        result = forall(var, result)
    return result


def make_type_sum(types):
    types = list(types)
    if not types:
        raise ValueError("A type sum needs at least one summand")
    result = types[0]
    for item in types[1:]:
        result = SumT(result, item)
    return result


def scale_type(coeff, body):
    coeff = Scalar.coerce(coeff)
    if coeff.is_one():
        return body
    return ScaleT(coeff, body)


# Free variables


def free_type_vars(t):
    """
    Free type variables as a frozenset of variable nodes
    >>> sorted(v.name for v in free_type_vars(ForallU("X", Arrow(UnitVar("X"), UnitVar("Y")))))
    ['Y']
    """
    if isinstance(t, (UnitVar, GenVar)):
        return frozenset([t])
    if isinstance(t, Arrow):
        return free_type_vars(t.domain) | free_type_vars(t.codomain)
    if isinstance(t, FORALL_CLASSES):
        return free_type_vars(t.body) - {t.binder_var()}
    if isinstance(t, ScaleT):
        return free_type_vars(t.body)
    if isinstance(t, SumT):
        return free_type_vars(t.left) | free_type_vars(t.right)
    raise TypeError("Unknown type node {!r}".format(t))


def free_vars_in_order(t, bound=frozenset(), seen=None):
    """
    Free type variables in order of first occurrence, left to right
    """
    if seen is None:
        seen = []
    if isinstance(t, (UnitVar, GenVar)):
        if t not in bound and t not in seen:
            seen.append(t)
    elif isinstance(t, Arrow):
        free_vars_in_order(t.domain, bound, seen)
        free_vars_in_order(t.codomain, bound, seen)
    elif isinstance(t, FORALL_CLASSES):
        free_vars_in_order(t.body, bound | {t.binder_var()}, seen)
    elif isinstance(t, ScaleT):
        free_vars_in_order(t.body, bound, seen)
    elif isinstance(t, SumT):
        free_vars_in_order(t.left, bound, seen)
        free_vars_in_order(t.right, bound, seen)
    return seen


def type_names(t):
    """
    Every variable name in ``t``, bound or free
    """
    if isinstance(t, (UnitVar, GenVar)):
        return {t.name}
    if isinstance(t, Arrow):
        return type_names(t.domain) | type_names(t.codomain)
    if isinstance(t, FORALL_CLASSES):
        return {t.binder} | type_names(t.body)
    if isinstance(t, ScaleT):
        return type_names(t.body)
    return type_names(t.left) | type_names(t.right)


def fresh_type_name(base, avoid):
    base = base.rstrip("0123456789'") or base
    if base not in avoid:
        return base
    index = 1
    while "{}{}".format(base, index) in avoid:
        index += 1
    return "{}{}".format(base, index)


# Canonical decomposition


@dataclass(frozen=True)
class CanonicalEntry:
    coeff: Scalar
    atom: Type
    atom_key: tuple

    @property
    def is_general(self):
        return isinstance(self.atom, GenVar)


class CanonicalType(object):
    """
    Canonical decomposition ``sum a_i * U_i + sum b_j * X_j`` of a type.
    Entries are sorted by the nameless key of their atom; zero
    coefficients are retained.
    """

    def __init__(self, entries):
        self.entries = tuple(entries)

    @property
    def units(self):
        return tuple(entry for entry in self.entries if not entry.is_general)

    @property
    def gvars(self):
        return tuple(entry for entry in self.entries if entry.is_general)

    @cached_property
    def key(self):
        return tuple((entry.atom_key, entry.coeff.sort_key()) for entry in self.entries)

    def __eq__(self, other):
        if not isinstance(other, CanonicalType):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self):
        return "CanonicalType({})".format(", ".join("{}:{}".format(e.coeff, e.atom) for e in self.entries))

    def without_zeros(self):
        return CanonicalType(entry for entry in self.entries if not entry.coeff.is_zero())

    def single_unit(self):
        """
        The unit type when the decomposition is exactly ``1*U``, else None
        """
        if len(self.entries) == 1 and self.entries[0].coeff.is_one() and not self.entries[0].is_general:
            return self.entries[0].atom
        return None

    def to_type(self):
        return make_type_sum(scale_type(entry.coeff, entry.atom) for entry in self.entries)


def _flatten(t, coeff, env, out):
    if isinstance(t, ScaleT):
        _flatten(t.body, coeff * t.coeff, env, out)
    elif isinstance(t, SumT):
        _flatten(t.left, coeff, env, out)
        _flatten(t.right, coeff, env, out)
    else:
        out.append((coeff, t, atom_key(t, env)))


def atom_key(t, env=()):
    """
    Nameless key of a unit type or general variable, with every embedded
    type canonicalised, so equivalent unit types get equal keys
    """
    if isinstance(t, (UnitVar, GenVar)):
        return t.structural_key(env)
    if isinstance(t, Arrow):
        return (T_ARROW, canonical_key(t.domain, env), canonical_key(t.codomain, env))
    if isinstance(t, ForallU):
        return (T_FORALL_U, canonical_key(t.body, env + ((UNIT_SORT, t.binder),)))
    if isinstance(t, ForallG):
        return (T_FORALL_G, canonical_key(t.body, env + ((GENERAL_SORT, t.binder),)))
    raise TypeError("{!r} is not an atom".format(t))


def _entries(t, env=()):
    flat = []
    _flatten(t, ONE, env, flat)
    merged = {}
    for coeff, atom, key in flat:
        if key in merged:
            previous = merged[key]
            merged[key] = (previous[0] + coeff, previous[1])
        else:
            merged[key] = (coeff, atom)
    return [(key, merged[key][0], merged[key][1]) for key in sorted(merged)]


def canonical_key(t, env=()):
    return tuple((key, coeff.sort_key()) for key, coeff, _ in _entries(t, env))


def canonicalize(t):
    """
    Canonical decomposition of ``t``
    :param t: Type
    :return: CanonicalType
    """
    return CanonicalType(CanonicalEntry(coeff, atom, key) for key, coeff, atom in _entries(t))


def type_equiv(left, right):
    """
    Decide ``left == right`` modulo the equivalence axioms on types
    """
    return canonical_key(left) == canonical_key(right)


def equiv_modulo_zero(left, right):
    """
    Equivalence after discarding every summand with a zero coefficient
    """
    return canonicalize(left).without_zeros().key == canonicalize(right).without_zeros().key


def as_unit(t):
    """
    Return the unit type ``t`` is equivalent to, or None
    """
    if t.is_unit:
        return t
    return canonicalize(t).single_unit()


def is_closed(t):
    return not free_type_vars(t)


# Substitution


def subst_type(t, var, value, check_sort=True):
    """
    Capture-avoiding substitution t[value/var]
    :param t: Type
    :param var: UnitVar or GenVar node
    :param value: replacement
    :param check_sort: a unit variable only accepts a type equivalent to a unit
    :return: Type
    """
    if isinstance(var, UnitVar):
        unit = as_unit(value)
        if unit is None:
            if check_sort:
                raise SortMismatch("Cannot substitute {} for unit variable {}".format(value, var.name))
        else:
            value = unit
    return _subst(t, var, value, free_type_vars(value))


def _subst(t, var, value, value_free):
    if isinstance(t, (UnitVar, GenVar)):
        return value if t == var else t
    if isinstance(t, Arrow):
        return Arrow(_subst(t.domain, var, value, value_free), _subst(t.codomain, var, value, value_free))
    if isinstance(t, FORALL_CLASSES):
        bound = t.binder_var()
        if bound == var or var not in free_type_vars(t.body):
            return t
        body, binder = t.body, t.binder
        if bound in value_free:
            avoid = {v.name for v in value_free} | type_names(body) | {var.name}
            binder = fresh_type_name(binder, avoid)
            body = _subst(body, bound, var_of_sort(bound.sort, binder), frozenset())
        return type(t)(binder, _subst(body, var, value, value_free))
    if isinstance(t, ScaleT):
        return ScaleT(t.coeff, _subst(t.body, var, value, value_free))
    if isinstance(t, SumT):
        return SumT(_subst(t.left, var, value, value_free), _subst(t.right, var, value, value_free))
    raise TypeError("Unknown type node {!r}".format(t))


def subst_many(t, pairs, check_sort=True):
    """
    Iterated substitution T[A1/X1]...[An/Xn], left to right
    """
    for var, value in pairs:
        t = subst_type(t, var, value, check_sort=check_sort)
    return t


def replace_free(t, mapping):
    """
    Replace free unit variables by name with whole types, used to expand
    type abbreviations.  A non-unit replacement in a unit position raises
    SortMismatch.
    """
    if isinstance(t, UnitVar):
        return mapping.get(t.name, t)
    if isinstance(t, GenVar):
        return t
    if isinstance(t, Arrow):
        domain = replace_free(t.domain, mapping)
        if as_unit(domain) is None:
            raise SortMismatch("Arrow domain {} is not a unit type".format(domain))
        return Arrow(as_unit(domain), replace_free(t.codomain, mapping))
    if isinstance(t, FORALL_CLASSES):
        inner = dict(mapping)
        inner.pop(t.binder, None)
        body = replace_free(t.body, inner)
        if as_unit(body) is None:
            raise SortMismatch("Quantifier body {} is not a unit type".format(body))
        return type(t)(t.binder, as_unit(body))
    if isinstance(t, ScaleT):
        return ScaleT(t.coeff, replace_free(t.body, mapping))
    return SumT(replace_free(t.left, mapping), replace_free(t.right, mapping))


def check_well_formed(t):
    """
    Arrow domains and quantifier bodies must be unit types
    :raise SortMismatch:
    """
    if isinstance(t, Arrow):
        if as_unit(t.domain) is None:
            raise SortMismatch("Arrow domain {} is not a unit type".format(t.domain))
        check_well_formed(t.domain)
        check_well_formed(t.codomain)
    elif isinstance(t, FORALL_CLASSES):
        if as_unit(t.body) is None:
            raise SortMismatch("Quantifier body {} is not a unit type".format(t.body))
        check_well_formed(t.body)
    elif isinstance(t, ScaleT):
        check_well_formed(t.body)
    elif isinstance(t, SumT):
        check_well_formed(t.left)
        check_well_formed(t.right)


def strip_foralls(unit):
    """
    Split a unit type into its outer quantifier prefix and the rest
    :return: (list of variable nodes, body)
    """
    prefix = []
    while isinstance(unit, FORALL_CLASSES):
        prefix.append(unit.binder_var())
        unit = unit.body
    return prefix, unit


def type_size(t):
    if isinstance(t, (UnitVar, GenVar)):
        return 1
    if isinstance(t, Arrow):
        return 1 + type_size(t.domain) + type_size(t.codomain)
    if isinstance(t, (ForallU, ForallG, ScaleT)):
        return 1 + type_size(t.body)
    return 1 + type_size(t.left) + type_size(t.right)


# Ordering


@dataclass(frozen=True)
class Witness:
    """
    Typing witness for the coefficient-splitting rule of the order:
    a context and a term expected to inhabit both split types
    """

    context: object
    term: object


def order_approx(larger, smaller, witness=None):
    """
    Sound approximation of ``larger >= smaller`` for the factorisation order.

    Holds when the types are equivalent, when ``smaller`` only adds
    zero-coefficient summands, when a coefficient of ``larger`` is split into
    several summands each inhabited by the witness, and under congruence
    through arrows and quantifiers.  False means "not established", which
    is also the answer when ``smaller`` has more than ORDER_SEARCH_LIMIT
    summands.

    :param larger: S in ``S >= T``
    :param smaller: T in ``S >= T``
    :param witness: optional Witness used for coefficient splits
    :return: bool
    """
    if type_equiv(larger, smaller):
        return True
    big = list(canonicalize(larger).entries)
    small = list(canonicalize(smaller).entries)
    if len(small) > ORDER_SEARCH_LIMIT:
        log.debug("order_approx gives up on %s summands, the search stops at %s", len(small), ORDER_SEARCH_LIMIT)
        return False
    groups = [[] for _ in big]
    return _assign(big, small, 0, groups, witness)


def _assign(big, small, index, groups, witness):
    if index == len(small):
        return _groups_valid(big, groups, witness)
    entry = small[index]
    for position in range(len(big)):
        groups[position].append(entry)
        if _assign(big, small, index + 1, groups, witness):
            return True
        groups[position].pop()
    if entry.coeff.is_zero():
        # T >= T + 0*R
        return _assign(big, small, index + 1, groups, witness)
    return False


def _groups_valid(big, groups, witness):
    for entry, group in zip(big, groups):
        if not group:
            return False
        total = ZERO
        for item in group:
            total = total + item.coeff
        if total != entry.coeff:
            return False
        for item in group:
            if item.atom_key == entry.atom_key:
                continue
            if _atom_order(entry.atom, item.atom):
                continue
            # the split rule needs the witness at both sides of the split
            if witness is None or not _witness_types(witness, entry.atom) or not _witness_types(witness, item.atom):
                return False
    return True


def _atom_order(larger, smaller):
    """
    Congruence: U -> T >= U -> R when T >= R, and under a quantifier
    """
    if isinstance(larger, Arrow) and isinstance(smaller, Arrow):
        return type_equiv(larger.domain, smaller.domain) and order_approx(larger.codomain, smaller.codomain)
    if isinstance(larger, FORALL_CLASSES) and type(larger) is type(smaller):
        avoid = type_names(larger) | type_names(smaller)
        name = fresh_type_name(larger.binder, avoid)
        fresh = var_of_sort(larger.sort, name)
        left = _subst(larger.body, larger.binder_var(), fresh, frozenset([fresh]))
        right = _subst(smaller.body, smaller.binder_var(), fresh, frozenset([fresh]))
        return order_approx(left, right)
    return False


def _witness_types(witness, unit):
    from lvec.checker import TypeChecker
    from lvec.errors import TypeCheckError

    try:
        TypeChecker().check(witness.context, witness.term, unit)
    except TypeCheckError as error:
        log.debug("Witness %s does not inhabit %s: %s", witness.term, unit, error)
        return False
    return True


# Type tuples used by derivations


def entries_of(coeffs, units):
    """
    Build ``sum coeffs[i] * units[i]``
    """
    return make_type_sum(ScaleT(Scalar.coerce(c), u) for c, u in zip(coeffs, units))


TypeVector = Tuple[Type, ...]
