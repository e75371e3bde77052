# coding=utf-8
"""
Recursive-descent parser for scalars, types, terms and programs.

Surface syntax::

    scalars   1   -1/2   rt2   1/2*rt2   (1 + rt2)
    types     X   #X   U -> T   forall X #Y. U   s * T   T + R   T - R
    terms     x   \\x:U. t   (t) r   0   (0 : T)   s * t   t + r   t - r
              [t]  (thunk)   {t}  (release)   t@[T1, T2]  (instantiation)
    programs  name = term          one item per line, indented lines
              type Name = Type     continue the previous item, -- comments
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from lvec.errors import ParseError
from lvec.log_utils import get_default_logger
from lvec.scalars import MINUS_ONE, RT2, Scalar
from lvec.terms import App, Inst, Lam, Scale, Sum, Var, Zero, all_names, fresh_name
from lvec.type_core import (
    IDENTITY_TYPE,
    Arrow,
    ForallG,
    ForallU,
    GenVar,
    ScaleT,
    SumT,
    UnitVar,
    as_unit,
)

log = get_default_logger(__name__)

KEYWORDS = {"forall", "rt2"}

TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)"
    r"|(?P<newline>\n)"
    r"|(?P<comment>--[^\n]*)"
    r"|(?P<num>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<sym>->|→|λ|∀|[\\.:()\[\]{}+\-*/#,@=])"
)

SYMBOL_ALIASES = {"→": "->", "λ": "\\", "∀": "forall"}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int


def tokenize(text):
    """
    :param text: source text
    :return: list of Token, ending with an ``eof`` token
    """
    tokens = []
    line, line_start, position = 1, 0, 0
    while position < len(text):
        match = TOKEN_RE.match(text, position)
        if match is None:
            raise ParseError(
                "Unexpected character {!r}".format(text[position]), line=line, column=position - line_start + 1
            )
        kind = match.lastgroup
        value = match.group(kind)
        column = position - line_start + 1
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind == "sym":
            value = SYMBOL_ALIASES.get(value, value)
            tokens.append(Token("name" if value == "forall" else "sym", value, line, column))
        elif kind in ("num", "name"):
            tokens.append(Token(kind, value, line, column))
        position = match.end()
    tokens.append(Token("eof", "", line, position - line_start + 1))
    return tokens


class Parser(object):
    """
    Parser over a token list.  ``pos`` can be saved and restored for the
    few places where the grammar needs backtracking (a leading scalar).
    """

    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    @classmethod
    def from_text(cls, text):
        return cls(tokenize(text))

    # token helpers

    def peek(self, offset=0):
        index = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[index]

    def advance(self):
        token = self.peek()
        if token.kind != "eof":
            self.pos += 1
        return token

    def at(self, value, kind=None):
        token = self.peek()
        if kind is not None and token.kind != kind:
            return False
        return token.value == value and token.kind != "eof"

    def accept(self, value):
        if self.at(value):
            return self.advance()
        return None

    def expect(self, value):
        token = self.peek()
        if token.value != value or token.kind == "eof":
            self.fail("Expected {!r} but found {}".format(value, self.describe(token)))
        return self.advance()

    @staticmethod
    def describe(token):
        if token.kind == "eof":
            return "end of input"
        return repr(token.value)

    def fail(self, message, token=None):
        token = token or self.peek()
        raise ParseError(message, line=token.line, column=token.column)

    def expect_end(self):
        if self.peek().kind != "eof":
            self.fail("Unexpected {} after the end of the expression".format(self.describe(self.peek())))

    # scalars

    def parse_scalar(self):
        """
        Full scalar expression: ``+ - * /``, parentheses, integers and ``rt2``
        """
        value = self._scalar_term()
        while self.at("+") or self.at("-"):
            op = self.advance().value
            right = self._scalar_term()
            value = value + right if op == "+" else value - right
        return value

    def _scalar_term(self):
        value = self._scalar_unary()
        while self.at("*") or self.at("/"):
            saved = self.pos
            op = self.advance()
            try:
                right = self._scalar_unary()
            except ParseError:
                self.pos = saved
                break
            value = self._combine(value, op, right)
        return value

    def _combine(self, value, op, right):
        if op.value == "*":
            return value * right
        if right.is_zero():
            self.fail("Division by zero in scalar", op)
        return value / right

    def _scalar_unary(self):
        if self.accept("-"):
            return -self._scalar_unary()
        return self._scalar_factor()

    def _scalar_factor(self):
        token = self.peek()
        if token.kind == "num":
            self.advance()
            return Scalar(int(token.value))
        if token.kind == "name" and token.value == "rt2":
            self.advance()
            return RT2
        if token.value == "(" and token.kind == "sym":
            self.advance()
            value = self.parse_scalar()
            self.expect(")")
            return value
        self.fail("Expected a scalar but found {}".format(self.describe(token)))

    def parse_coefficient(self):
        """
        Scalar in front of ``*`` in a term or type: a factor, optional
        divisions and optional ``*rt2`` factors
        """
        negative = False
        while self.accept("-"):
            negative = not negative
        value = self._scalar_factor()
        while self.at("/"):
            op = self.advance()
            value = self._combine(value, op, self._scalar_factor())
        while self.at("*") and self.peek(1).kind == "name" and self.peek(1).value == "rt2":
            self.advance()
            self.advance()
            value = value * RT2
        return -value if negative else value

    def _try_coefficient(self):
        saved = self.pos
        try:
            coeff = self.parse_coefficient()
        except ParseError:
            self.pos = saved
            return None
        if not self.at("*"):
            self.pos = saved
            return None
        self.advance()
        return coeff

    # types

    def parse_type(self):
        result = self._type_scaled()
        while self.at("+") or self.at("-"):
            op = self.advance().value
            right = self._type_scaled()
            result = SumT(result, right if op == "+" else ScaleT(MINUS_ONE, right))
        return result

    def _type_scaled(self):
        coeff = self._try_coefficient()
        if coeff is not None:
            return ScaleT(coeff, self._type_scaled())
        if self.at("-"):
            self.advance()
            return ScaleT(MINUS_ONE, self._type_scaled())
        return self.parse_unit_type()

    def parse_unit_type(self):
        token = self.peek()
        if token.kind == "name" and token.value == "forall":
            self.advance()
            binders = []
            while not self.at("."):
                general = bool(self.accept("#"))
                name = self._name("a type variable")
                binders.append((general, name))
            if not binders:
                self.fail("Expected a type variable after 'forall'")
            self.expect(".")
            body = self._unit(self.parse_unit_type(), token)
            for general, name in reversed(binders):
                body = ForallG(name, body) if general else ForallU(name, body)
            return body
        domain = self._type_atom()
        if self.accept("->"):
            unit = as_unit(domain)
            if unit is None:
                self.fail("The domain of an arrow must be a unit type", token)
            return Arrow(unit, self.parse_type())
        return domain

    def _unit(self, t, token):
        unit = as_unit(t)
        if unit is None:
            self.fail("Expected a unit type", token)
        return unit

    def _type_atom(self):
        token = self.peek()
        if self.accept("#"):
            return GenVar(self._name("a general type variable"))
        if token.kind == "name" and token.value not in KEYWORDS:
            self.advance()
            return UnitVar(token.value)
        if self.accept("("):
            result = self.parse_type()
            self.expect(")")
            return result
        self.fail("Expected a type but found {}".format(self.describe(token)))

    def _name(self, what):
        token = self.peek()
        if token.kind != "name" or token.value in KEYWORDS:
            self.fail("Expected {} but found {}".format(what, self.describe(token)))
        self.advance()
        return token.value

    # terms

    def parse_term(self):
        if self.at("\\"):
            return self._lambda()
        result = self._scaled()
        while self.at("+") or self.at("-"):
            op = self.advance().value
            right = self._scaled()
            result = Sum(result, right if op == "+" else Scale(MINUS_ONE, right))
        return result

    def _lambda(self):
        self.expect("\\")
        binder = self._name("a binder")
        annotation = None
        if self.accept(":"):
            token = self.peek()
            annotation = self._unit(self.parse_unit_type(), token)
        self.expect(".")
        return Lam(binder, annotation, self.parse_term())

    def _scaled(self):
        coeff = self._try_coefficient()
        if coeff is not None:
            return Scale(coeff, self._scaled())
        if self.at("-"):
            self.advance()
            return Scale(MINUS_ONE, self._scaled())
        if self.at("\\"):
            return self._lambda()
        return self._application()

    def _application(self):
        result = self._postfix()
        while True:
            if self.at("\\"):
                return App(result, self._lambda())
            if not self._starts_atom():
                return result
            result = App(result, self._postfix())

    def _starts_atom(self):
        token = self.peek()
        if token.kind == "name":
            return token.value not in KEYWORDS
        if token.kind == "num":
            return token.value == "0" and not (self.peek(1).value == "*" and self.peek(1).kind == "sym")
        return token.kind == "sym" and token.value in ("(", "[", "{")

    def _postfix(self):
        result = self._atom()
        while self.at("@"):
            self.advance()
            self.expect("[")
            types = [self.parse_type()]
            while self.accept(","):
                types.append(self.parse_type())
            self.expect("]")
            result = Inst(result, tuple(types))
        return result

    def _atom(self):
        token = self.peek()
        if token.kind == "name" and token.value not in KEYWORDS:
            self.advance()
            return Var(token.value)
        if token.kind == "num":
            if token.value != "0":
                self.fail("Only the scalar 0 can stand alone as a term; write a scaling 's * t'")
            self.advance()
            return Zero()
        if self.accept("["):
            body = self.parse_term()
            self.expect("]")
            return make_thunk(body)
        if self.accept("{"):
            body = self.parse_term()
            self.expect("}")
            return make_release(body)
        if self.accept("("):
            inner = self.parse_term()
            if self.accept(":"):
                annotation = self.parse_type()
                if not isinstance(inner, Zero):
                    self.fail("Only the term 0 takes a type ascription", token)
                inner = Zero(annotation=annotation)
            self.expect(")")
            return inner
        self.fail("Expected a term but found {}".format(self.describe(token)))


def make_thunk(body):
    """
    ``[t]``: freeze ``t`` under an abstraction over the identity type
    """
    binder = fresh_name("f", all_names(body))
    return Lam(binder, IDENTITY_TYPE, body)


def make_release(body):
    """
    ``{t}``: apply ``t`` to the identity
    """
    return App(body, Lam("z", UnitVar("Z"), Var("z")))


def parse_term(text):
    parser = Parser.from_text(text)
    result = parser.parse_term()
    parser.expect_end()
    return result


def parse_type(text):
    parser = Parser.from_text(text)
    result = parser.parse_type()
    parser.expect_end()
    return result


def parse_scalar(text):
    """
    >>> str(parse_scalar("1/2*rt2 + 1/2*rt2"))
    'rt2'
    """
    parser = Parser.from_text(text)
    result = parser.parse_scalar()
    parser.expect_end()
    return result


def parse_fraction(text):
    value = parse_scalar(text)
    if not value.is_rational():
        raise ParseError("{} is not rational".format(text))
    return Fraction(value.a)


# programs


@dataclass(frozen=True)
class Definition:
    name: str
    term: object
    line: int


@dataclass(frozen=True)
class TypeDefinition:
    name: str
    type: object
    line: int


@dataclass(frozen=True)
class Expression:
    term: object
    line: int
    name: Optional[str] = None


def _items(tokens):
    """
    Split a token list into items: a new item starts at every token
    in column one
    """
    current = []
    for token in tokens:
        if token.kind == "eof":
            break
        if token.column == 1 and current:
            yield current
            current = []
        current.append(token)
    if current:
        yield current


def parse_program(text):
    """
    Parse a ``.lvec`` source
    :param text:
    :return: list of Definition, TypeDefinition and Expression
    """
    program = []
    for item in _items(tokenize(text)):
        first, last = item[0], item[-1]
        # an item ends right after its last token
        parser = Parser(item + [Token("eof", "", last.line, last.column + len(last.value))])
        if first.kind == "name" and first.value == "type" and len(item) > 2 and item[2].value == "=":
            parser.advance()
            name = parser._name("a type name")
            parser.expect("=")
            program.append(TypeDefinition(name, parser.parse_type(), first.line))
        elif first.kind == "name" and len(item) > 1 and item[1].value == "=" and item[1].kind == "sym":
            parser.advance()
            parser.advance()
            program.append(Definition(first.value, parser.parse_term(), first.line))
        else:
            program.append(Expression(parser.parse_term(), first.line))
        parser.expect_end()
    log.debug("Parsed %s program items", len(program))
    return program
