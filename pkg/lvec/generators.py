# coding=utf-8
"""
Random well-typed terms for the property suites.

Terms are assembled from constructions whose typing is known (basis
vectors, scalings, sums, applications of the identity, of matrices and of
projections, thunk and release, the linear test) so almost every candidate
is accepted; the checker still has the last word and rejections are counted.
"""
import random
from dataclasses import dataclass, field
from typing import Optional

from lvec.checker import EMPTY, Context, TypeChecker
from lvec.encodings import (
    MatRep,
    VecRep,
    basis_term,
    basis_type,
    false_term,
    hadamard,
    identity_term,
    if_then_else,
    ket_minus,
    ket_plus,
    matrix_term,
    projection,
    true_term,
    vector_term,
    vector_type,
)
from lvec.errors import TypeCheckError
from lvec.log_utils import get_default_logger
from lvec.parser import make_release, make_thunk
from lvec.printer import print_term, print_type
from lvec.scalars import INV_RT2, MINUS_ONE, ONE, TWO, ZERO, Scalar
from lvec.terms import App, Lam, Scale, Sum, Var, term_size
from lvec.type_core import IDENTITY_TYPE, thunk_type

log = get_default_logger(__name__)

HALF = ONE / Scalar(2)

DEFAULT_SCALARS = (ONE, TWO, MINUS_ONE, HALF, INV_RT2, -INV_RT2, ZERO)

# matrices are built without zero entries: a zero column summand dropped
# under the matrix binder would no longer match its annotation
MATRIX_ENTRIES = (ONE, MINUS_ONE, TWO, HALF, INV_RT2, -INV_RT2)

VECTOR_SHAPES = ("basis", "literal", "scale", "sum", "identity", "matrix", "thunk", "test")


@dataclass
class CorpusMember:
    index: int
    term: object
    type: object
    context: Context = EMPTY
    origin: str = "generated"

    def to_dict(self):
        return {
            "index": self.index,
            "origin": self.origin,
            "context": str(self.context),
            "term": print_term(self.term),
            "type": print_type(self.type, canonical=True),
        }


@dataclass
class Corpus:
    members: list = field(default_factory=list)
    attempts: int = 0
    rejected: int = 0
    seed: Optional[int] = None

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    @property
    def rejection_rate(self):
        if not self.attempts:
            return 0.0
        return self.rejected / self.attempts

    def add(self, term, type_, context=EMPTY, origin="generated"):
        member = CorpusMember(len(self.members), term, type_, context, origin)
        self.members.append(member)
        return member

    def extend(self, other):
        for member in other:
            self.add(member.term, member.type, member.context, member.origin)
        self.attempts += other.attempts
        self.rejected += other.rejected
        return self

    def to_dict(self):
        return {
            "seed": self.seed,
            "size": len(self.members),
            "attempts": self.attempts,
            "rejected": self.rejected,
            "rejection_rate": round(self.rejection_rate, 4),
            "members": [member.to_dict() for member in self.members],
        }


@dataclass(frozen=True)
class OpenInstance:
    """
    ``context, name : unit |- term`` together with a closed basis term
    ``value`` of type ``unit``, as needed by the substitution lemma
    """

    context: Context
    name: str
    unit: object
    term: object
    value: object


class TermGenerator(object):
    """
    :param seed: random seed
    :param max_depth: nesting depth of constructions
    :param max_dim: largest vector dimension
    :param max_size: candidates larger than this many nodes are rejected
    :param scalars: coefficients to draw from
    """

    def __init__(self, seed=None, max_depth=3, max_dim=3, max_size=400, scalars=DEFAULT_SCALARS, checker=None):
        self.seed = seed
        self.random = random.Random(seed)
        self.max_depth = max_depth
        self.max_dim = max_dim
        self.max_size = max_size
        self.scalars = tuple(scalars)
        self.checker = checker or TypeChecker()

    # closed terms

    def term(self):
        n = self.random.randint(1, self.max_dim)
        return self.vector(n, self.random.randint(0, self.max_depth))

    def vector(self, n, depth, leaves=()):
        """
        A term of some type ``sum a_i * E_i^n``
        :param leaves: extra leaf builders ``(dimension, factory)`` usable at this size
        """
        shapes = ["basis", "literal"] if depth <= 0 else list(VECTOR_SHAPES)
        usable = [factory for dimension, factory in leaves if dimension == n]
        if usable:
            shapes.append("leaf")
        shape = self.random.choice(shapes)
        if shape == "leaf":
            return self.random.choice(usable)()
        if shape == "basis":
            return basis_term(self.random.randint(1, n), n)
        if shape == "literal":
            return vector_term(VecRep(tuple(self._scalar() for _ in range(n))))
        if shape == "scale":
            return Scale(self._scalar(), self.vector(n, depth - 1, leaves))
        if shape == "sum":
            return Sum(self.vector(n, depth - 1, leaves), self.vector(n, depth - 1, leaves))
        if shape == "identity":
            return App(identity_term(), self.vector(n, depth - 1, leaves))
        if shape == "matrix":
            inner = self.random.randint(1, self.max_dim)
            matrix = MatRep.from_rows(
                [[self.random.choice(MATRIX_ENTRIES) for _ in range(inner)] for _ in range(n)]
            )
            return App(matrix_term(matrix), self.vector(inner, depth - 1, leaves))
        if shape == "thunk":
            return make_release(make_thunk(self.vector(n, depth - 1, leaves)))
        condition = self.vector(2, depth - 1, leaves)
        return if_then_else(condition, self.vector(n, depth - 1, leaves), self.vector(n, depth - 1, leaves))

    def _scalar(self):
        return self.random.choice(self.scalars)

    def corpus(self, count, max_attempts=None):
        """
        :param count: number of accepted members wanted
        :param max_attempts: give up after this many candidates, default ``10 * count``
        :return: Corpus
        """
        result = Corpus(seed=self.seed)
        max_attempts = max_attempts or 10 * count
        while len(result) < count and result.attempts < max_attempts:
            result.attempts += 1
            candidate = self.term()
            if term_size(candidate) > self.max_size:
                result.rejected += 1
                continue
            try:
                type_, _ = self.checker.infer(EMPTY, candidate)
            except TypeCheckError as e:
                result.rejected += 1
                log.debug("Rejected %s: %s", print_term(candidate), e)
                continue
            result.add(candidate, type_)
        log.info(
            "Generated %d terms in %d attempts (rejection rate %.3f)",
            len(result),
            result.attempts,
            result.rejection_rate,
        )
        return result

    # open terms

    def open_instance(self, depth=None):
        """
        A term using a variable ``x`` of unit type, and a basis term of that type.
        The variable is either a basis-vector variable or a frozen vector.
        """
        depth = self.max_depth if depth is None else depth
        n = self.random.randint(1, self.max_dim)
        x = Var("x")
        if self.random.random() < 0.5:
            i = self.random.randint(1, n)
            unit, value = basis_type(i, n), basis_term(i, n)
            leaves = ((n, lambda: x),)
        else:
            frozen = VecRep(tuple(self._scalar() for _ in range(n)))
            unit, value = thunk_type(vector_type(frozen)), make_thunk(vector_term(frozen))
            leaves = ((n, lambda: make_release(x)),)
        term = self.vector(n, depth, leaves)
        context = EMPTY.extend("x", unit)
        return OpenInstance(context, "x", unit, term, value)

    def basis_candidate(self):
        """
        A closed basis term: a basis vector, a matrix, a frozen vector or the identity
        """
        n = self.random.randint(1, self.max_dim)
        choice = self.random.choice(("basis", "matrix", "thunk", "identity"))
        if choice == "basis":
            return basis_term(self.random.randint(1, n), n)
        if choice == "matrix":
            cols = self.random.randint(1, self.max_dim)
            return matrix_term(
                MatRep.from_rows([[self.random.choice(MATRIX_ENTRIES) for _ in range(cols)] for _ in range(n)])
            )
        if choice == "thunk":
            return make_thunk(self.vector(n, self.max_depth - 1))
        return identity_term()


def curated_corpus(max_dim=3, include_projections=True, checker=None):
    """
    Hand-picked terms: booleans, the Hadamard examples and small
    combinator applications.  Projections carry zero columns under their
    binder, ``include_projections=False`` leaves them out.
    :return: Corpus
    """
    checker = checker or TypeChecker()
    h = hadamard()
    candidates = [
        ("true", true_term()),
        ("false", false_term()),
        ("identity", identity_term()),
        ("H", h),
        ("(H) true", App(h, true_term())),
        ("(H) false", App(h, false_term())),
        ("|+>", ket_plus()),
        ("|->", ket_minus()),
        ("(H) |+>", App(h, ket_plus())),
        ("(H) |->", App(h, ket_minus())),
        ("(H) ((H) true)", App(h, App(h, true_term()))),
        ("linear test", if_then_else(ket_plus(), basis_term(1, 3), basis_term(3, 3))),
        ("thunk", make_release(make_thunk(ket_minus()))),
        ("frozen identity", Lam("f", IDENTITY_TYPE, identity_term())),
    ]
    for n in range(1, max_dim + 1):
        for i in range(1, n + 1):
            candidates.append(("e{}^{}".format(i, n), basis_term(i, n)))
            if not include_projections:
                continue
            candidates.append(("p{}^{}".format(i, n), projection(i, n)))
            ones = VecRep(tuple(ONE for _ in range(n)))
            candidates.append(("(p{}^{}) ones".format(i, n), App(projection(i, n), vector_term(ones))))
    result = Corpus()
    for origin, term in candidates:
        result.attempts += 1
        try:
            type_, _ = checker.infer(EMPTY, term)
        except TypeCheckError as e:
            result.rejected += 1
            log.warning("Curated term %s does not type: %s", origin, e)
            continue
        result.add(term, type_, origin=origin)
    return result

