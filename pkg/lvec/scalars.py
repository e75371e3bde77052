# coding=utf-8
"""
Exact scalars of the ring Q[rt2].

Every coefficient handled by terms and types is a :class:`Scalar`, i.e. a
pair of rationals ``(a, b)`` standing for ``a + b*rt2``.  Equality is exact,
which is what coefficient merging and type equivalence rely on.

>>> half_rt2 = Scalar(0, Fraction(1, 2))
>>> str(half_rt2 * half_rt2)
'1/2'
>>> str(half_rt2 + half_rt2)
'rt2'
"""
import abc
from fractions import Fraction
from functools import total_ordering

from lvec.log_utils import get_default_logger

log = get_default_logger(__name__)


class RingElement(abc.ABC):
    """
    Contract every scalar ring implementation honours.
    Terms and types only use these operations, so another exact ring
    can be plugged in by implementing them.
    """

    @abc.abstractmethod
    def __add__(self, other):
        pass

    @abc.abstractmethod
    def __mul__(self, other):
        pass

    @abc.abstractmethod
    def __neg__(self):
        pass

    @abc.abstractmethod
    def is_zero(self):
        pass

    @abc.abstractmethod
    def is_one(self):
        pass

    @abc.abstractmethod
    def sort_key(self):
        pass


@total_ordering
class Scalar(RingElement):
    """
    Element ``a + b*rt2`` with ``a`` and ``b`` rationals.
    Instances are immutable and hashable.
    The order is the structural order on ``(a, b)``, used only to make
    printing and hashing deterministic.
    """

    __slots__ = ("_a", "_b")

    def __init__(self, a=0, b=0):
        self._a = Fraction(a)
        self._b = Fraction(b)

    @property
    def a(self):
        return self._a

    @property
    def b(self):
        return self._b

    @classmethod
    def coerce(cls, value):
        """
        Turn ints, Fractions and Scalars into a Scalar
        :param value:
        :return: Scalar
        """
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value, 0)
        raise TypeError("Cannot use {!r} as a scalar".format(value))

    def __repr__(self):
        return "Scalar({}, {})".format(self._a, self._b)

    def __str__(self):
        return format_scalar(self)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._a == other.a and self._b == other.b

    def __lt__(self, other):
        other = Scalar.coerce(other)
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return hash((self._a, self._b))

    def __add__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return Scalar(self._a + other.a, self._b + other.b)

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        # (a1 + b1 rt2)(a2 + b2 rt2) = (a1 a2 + 2 b1 b2) + (a1 b2 + a2 b1) rt2
        return Scalar(
            self._a * other.a + 2 * self._b * other.b,
            self._a * other.b + other.a * self._b,
        )

    def __rmul__(self, other):
        return self * other

    def __neg__(self):
        return Scalar(-self._a, -self._b)

    def __truediv__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def conjugate(self):
        return Scalar(self._a, -self._b)

    def norm(self):
        """
        Field norm a^2 - 2 b^2, a rational, zero only for the zero scalar
        """
        return self._a * self._a - 2 * self._b * self._b

    def inverse(self):
        """
        Multiplicative inverse through the conjugate
        :return: Scalar
        """
        norm = self.norm()
        if norm == 0:
            raise ZeroDivisionError("The zero scalar has no inverse")
        return Scalar(self._a / norm, -self._b / norm)

    def is_zero(self):
        return self._a == 0 and self._b == 0

    def is_one(self):
        return self._a == 1 and self._b == 0

    def is_rational(self):
        return self._b == 0

    def sort_key(self):
        return (self._a, self._b)

    def to_float(self):
        return float(self._a) + float(self._b) * 2**0.5


ZERO = Scalar(0)
ONE = Scalar(1)
TWO = Scalar(2)
MINUS_ONE = Scalar(-1)
RT2 = Scalar(0, 1)
INV_RT2 = Scalar(0, Fraction(1, 2))


def add(x, y):
    return Scalar.coerce(x) + Scalar.coerce(y)


def mul(x, y):
    return Scalar.coerce(x) * Scalar.coerce(y)


def neg(x):
    return -Scalar.coerce(x)


def is_zero(x):
    return Scalar.coerce(x).is_zero()


def is_one(x):
    return Scalar.coerce(x).is_one()


def _format_rt2_part(b):
    if b == 1:
        return "rt2"
    return "{}*rt2".format(b)


def format_scalar(x):
    """
    Print a scalar in the surface syntax read back by the parser
    >>> format_scalar(Scalar(Fraction(-1, 2)))
    '-1/2'
    >>> format_scalar(Scalar(0, Fraction(1, 2)))
    '1/2*rt2'
    >>> format_scalar(Scalar(1, -1))
    '(1 - rt2)'
    """
    a, b = x.a, x.b
    if b == 0:
        return str(a)
    if a == 0:
        if b == -1:
            return "-rt2"
        return _format_rt2_part(b)
    if b < 0:
        return "({} - {})".format(a, _format_rt2_part(-b))
    return "({} + {})".format(a, _format_rt2_part(b))
