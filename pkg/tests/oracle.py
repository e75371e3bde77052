# coding=utf-8
"""
Reference evaluation of types as linear combinations, written apart from
lvec.type_core, and hypothesis strategies for small types.
"""
from hypothesis import strategies as st

from lvec.scalars import INV_RT2, ONE, TWO, ZERO
from lvec.type_core import Arrow, ForallG, ForallU, GenVar, ScaleT, SumT, UnitVar

SCALARS = (ZERO, ONE, TWO, INV_RT2)


def linear(t, env=()):
    """
    Map atom -> coefficient, zero coefficients included
    """
    out = {}
    _add(t, ONE, env, out)
    return out


def _add(t, coeff, env, out):
    if isinstance(t, ScaleT):
        _add(t.body, coeff * t.coeff, env, out)
    elif isinstance(t, SumT):
        _add(t.left, coeff, env, out)
        _add(t.right, coeff, env, out)
    else:
        atom = _atom(t, env)
        out[atom] = out.get(atom, ZERO) + coeff


def _frozen(mapping):
    return frozenset(mapping.items())


def _variable(sort, name, env):
    for depth, bound in enumerate(reversed(env)):
        if bound == (sort, name):
            return (sort, "bound", depth)
    return (sort, "free", name)


def _atom(t, env):
    if isinstance(t, UnitVar):
        return _variable("u", t.name, env)
    if isinstance(t, GenVar):
        return _variable("g", t.name, env)
    if isinstance(t, Arrow):
        return ("arrow", _frozen(linear(t.domain, env)), _frozen(linear(t.codomain, env)))
    if isinstance(t, ForallU):
        return ("all-u", _frozen(linear(t.body, env + (("u", t.binder),))))
    if isinstance(t, ForallG):
        return ("all-g", _frozen(linear(t.body, env + (("g", t.binder),))))
    raise TypeError(t)


def equivalent(left, right):
    return linear(left) == linear(right)


def equivalent_modulo_zero(left, right):
    def drop(mapping):
        return {atom: coeff for atom, coeff in mapping.items() if not coeff.is_zero()}

    return drop(linear(left)) == drop(linear(right))


# one-step rewriting with the equivalence axioms


def rewrites(t):
    """
    Every type one axiom application away from ``t``, at the top or below
    scalings, sums and arrow codomains
    """
    if isinstance(t, ScaleT):
        if t.coeff.is_one():
            yield t.body
        if isinstance(t.body, ScaleT):
            yield ScaleT(t.coeff * t.body.coeff, t.body.body)
        if isinstance(t.body, SumT):
            yield SumT(ScaleT(t.coeff, t.body.left), ScaleT(t.coeff, t.body.right))
        for inner in rewrites(t.body):
            yield ScaleT(t.coeff, inner)
    elif isinstance(t, SumT):
        left, right = t.left, t.right
        yield SumT(right, left)
        if isinstance(left, SumT):
            yield SumT(left.left, SumT(left.right, right))
        if isinstance(right, SumT):
            yield SumT(SumT(left, right.left), right.right)
        if isinstance(left, ScaleT) and isinstance(right, ScaleT) and left.body == right.body:
            yield ScaleT(left.coeff + right.coeff, left.body)
        if left == right:
            yield ScaleT(TWO, left)
        for inner in rewrites(left):
            yield SumT(inner, right)
        for inner in rewrites(right):
            yield SumT(left, inner)
    elif isinstance(t, Arrow):
        for inner in rewrites(t.codomain):
            yield Arrow(t.domain, inner)
    if not isinstance(t, ScaleT):
        yield ScaleT(ONE, t)


def closure(t, limit=40):
    seen = {t.key: t}
    frontier = [t]
    while frontier and len(seen) < limit:
        current = frontier.pop(0)
        for candidate in rewrites(current):
            if candidate.key not in seen:
                seen[candidate.key] = candidate
                frontier.append(candidate)
    return list(seen.values())


# strategies


scalars = st.sampled_from(SCALARS)
unit_vars = st.sampled_from([UnitVar("X"), UnitVar("Y")])
gen_vars = st.sampled_from([GenVar("X"), GenVar("Z")])


def _units(general):
    return st.recursive(
        unit_vars,
        lambda inner: st.one_of(
            st.builds(Arrow, inner, general),
            st.builds(lambda body: ForallU("X", body), inner),
            st.builds(lambda body: ForallG("Z", body), inner),
        ),
        max_leaves=3,
    )


def _generals(leaves):
    return st.recursive(
        leaves,
        lambda inner: st.one_of(st.builds(ScaleT, scalars, inner), st.builds(SumT, inner, inner)),
        max_leaves=4,
    )


flat_types = _generals(st.one_of(unit_vars, gen_vars))
units = _units(flat_types)
types = _generals(st.one_of(units, gen_vars))


# exhaustive enumeration

ALPHABET_SCALARS = (ZERO, ONE, TWO)
ALPHABET_UNITS = (UnitVar("X"), UnitVar("Y"))


def all_types(max_size, flat=False):
    """
    Every well-formed type of size at most ``max_size`` over the variables
    X and Y and the scalars 0, 1 and 2, quantifiers binding X.  ``flat``
    leaves out arrows and quantifiers.
    :return: list of types, smallest first
    """
    units = {1: list(ALPHABET_UNITS)}
    generals = {1: list(ALPHABET_UNITS)}
    for size in range(2, max_size + 1):
        layer = []
        if not flat:
            for left in range(1, size - 1):
                layer.extend(Arrow(d, c) for d in units[left] for c in generals[size - 1 - left])
            layer.extend(ForallU("X", body) for body in units[size - 1])
        units[size] = layer
        combined = list(layer)
        combined.extend(ScaleT(coeff, body) for coeff in ALPHABET_SCALARS for body in generals[size - 1])
        for left in range(1, size - 1):
            combined.extend(SumT(a, b) for a in generals[left] for b in generals[size - 1 - left])
        generals[size] = combined
    return [t for size in range(1, max_size + 1) for t in generals[size]]


def linear_key(t):
    return _frozen(linear(t))


def at_least_flat(larger, smaller):
    """
    Reference ``larger >= smaller`` for types without arrows or quantifiers:
    ``smaller`` keeps every summand of ``larger`` with its coefficient and
    only adds zero-coefficient summands
    """
    big, small = linear(larger), linear(smaller)
    if any(small.get(atom) != coeff for atom, coeff in big.items()):
        return False
    return all(coeff.is_zero() for atom, coeff in small.items() if atom not in big)
