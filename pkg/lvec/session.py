# coding=utf-8
"""
Named definitions and the operations the command line and the REPL run on
them: parsing with definition expansion, reduction, type inference and
type equivalence.
"""
import os
from dataclasses import dataclass
from importlib import resources

from lvec.checker import EMPTY, TypeChecker
from lvec.errors import DefinitionError, UsageError
from lvec.log_utils import get_default_logger
from lvec.parser import Definition, Expression, TypeDefinition, parse_program, parse_term, parse_type
from lvec.rewrite import DEFAULT_FUEL, ReductionEngine
from lvec.terms import App, Inst, Lam, Scale, Sum, Var, Zero, free_vars, substitute
from lvec.type_core import as_unit, check_well_formed, equiv_modulo_zero, replace_free, type_equiv

log = get_default_logger(__name__)

PRELUDE_PREFIX = "prelude:"

EQUIVALENT = "equivalent"
EQUIVALENT_MODULO_ZERO = "equivalent-modulo-zero"
NOT_EQUIVALENT = "not-equivalent"


def prelude_source():
    return resources.files("lvec").joinpath("prelude.lvec").read_text(encoding="utf-8")


@dataclass
class Result:
    """
    Outcome of evaluating one expression of a program
    """

    term: object
    line: int = 0
    name: str = None


class Session(object):
    """
    Definitions loaded so far, plus the options used to run them.
    A definition only sees the ones before it, so definitions are acyclic.
    :param fuel: reduction budget, default 100000
    :param seed: seed of the randomized engine
    :param trace: keep every step when normalising
    :param load_prelude: start with the shipped definitions
    """

    def __init__(self, fuel=DEFAULT_FUEL, seed=None, trace=False, load_prelude=True, checker=None):
        self.fuel = fuel
        self.seed = seed
        self.trace = trace
        self.engine = ReductionEngine(fuel=fuel)
        self.checker = checker or TypeChecker()
        self.definitions = {}
        self.types = {}
        self.prelude_loaded = False
        if load_prelude:
            self.load_prelude()

    # loading

    def load_prelude(self):
        if not self.prelude_loaded:
            self.load_text(prelude_source(), source="prelude")
            self.prelude_loaded = True
        return self

    def load_file(self, path):
        if path == "prelude":
            self.load_prelude()
            return []
        if not os.path.exists(path):
            raise UsageError("No such file: {}".format(path))
        with open(path, "r", encoding="utf-8") as fp:
            return self.load_text(fp.read(), source=path)

    def load_text(self, text, source="<input>"):
        """
        Add the definitions of a program
        :return: list of Result, one per bare expression
        """
        results = []
        for item in parse_program(text):
            if isinstance(item, TypeDefinition):
                self.define_type(item.name, item.type)
            elif isinstance(item, Definition):
                self.define(item.name, item.term)
            elif isinstance(item, Expression):
                results.append(Result(self.expand(item.term), item.line, item.name))
        log.info("Loaded %s: %d definitions, %d types", source, len(self.definitions), len(self.types))
        return results

    def define(self, name, term):
        if name in self.definitions:
            log.warning("Definition %s shadows an earlier one", name)
        self.definitions[name] = self.expand(term)
        return self.definitions[name]

    def define_type(self, name, type_):
        if name in self.types:
            log.warning("Type %s shadows an earlier one", name)
        self.types[name] = self.expand_type(type_)
        return self.types[name]

    # expansion

    def expand_type(self, type_):
        if not self.types:
            return type_
        expanded = replace_free(type_, self.types)
        check_well_formed(expanded)
        return expanded

    def _expand_unit(self, annotation):
        if annotation is None:
            return None
        expanded = self.expand_type(annotation)
        return as_unit(expanded) or expanded

    def expand(self, term):
        """
        Replace defined names by their definitions and type abbreviations by their types
        """
        term = self._expand_annotations(term)
        for name in sorted(free_vars(term)):
            if name in self.definitions:
                term = substitute(term, name, self.definitions[name])
        return term

    def _expand_annotations(self, term):
        if not self.types:
            return term
        if isinstance(term, Var):
            return term
        if isinstance(term, Lam):
            return Lam(term.binder, self._expand_unit(term.annotation), self._expand_annotations(term.body))
        if isinstance(term, App):
            return App(self._expand_annotations(term.fun), self._expand_annotations(term.arg))
        if isinstance(term, Zero):
            witness = None if term.witness is None else self._expand_annotations(term.witness)
            annotation = None if term.annotation is None else self.expand_type(term.annotation)
            return Zero(annotation, witness)
        if isinstance(term, Scale):
            return Scale(term.coeff, self._expand_annotations(term.body))
        if isinstance(term, Sum):
            return Sum(self._expand_annotations(term.left), self._expand_annotations(term.right))
        if isinstance(term, Inst):
            return Inst(self._expand_annotations(term.body), tuple(self.expand_type(t) for t in term.types))
        raise UsageError("Unknown term node {!r}".format(term))

    # references

    def resolve_term(self, text):
        """
        ``prelude:NAME`` or ``@NAME`` refers to a definition, a path to an
        existing file to the last expression (or definition) in it, anything
        else is parsed as a term
        """
        if text.startswith(PRELUDE_PREFIX):
            self.load_prelude()
            return self.lookup(text[len(PRELUDE_PREFIX):])
        if text.startswith("@"):
            return self.lookup(text[1:])
        if os.path.isfile(text):
            results = self.load_file(text)
            if results:
                return results[-1].term
            raise UsageError("{} has no expression to run".format(text))
        return self.expand(parse_term(text))

    def resolve_type(self, text):
        return self.expand_type(parse_type(text))

    def lookup(self, name):
        if name not in self.definitions:
            raise DefinitionError("No definition named {}".format(name))
        return self.definitions[name]

    def name_of(self, term):
        """
        Name of a definition alpha-equal to ``term``, if any
        """
        for name in sorted(self.definitions):
            if self.definitions[name].key == term.key:
                return name
        return None

    # operations

    def normalize(self, term, randomized=False):
        if randomized:
            return self.engine.normalize_random(term, self.seed)
        return self.engine.normalize(term)

    def step(self, term):
        return self.engine.step(term)

    def infer(self, term, context=EMPTY):
        return self.checker.infer(context, term)

    def check(self, term, expected, context=EMPTY):
        return self.checker.check(context, term, expected)

    @staticmethod
    def equiv(left, right):
        """
        :return: one of ``equivalent``, ``equivalent-modulo-zero``, ``not-equivalent``
        """
        if type_equiv(left, right):
            return EQUIVALENT
        if equiv_modulo_zero(left, right):
            return EQUIVALENT_MODULO_ZERO
        return NOT_EQUIVALENT
