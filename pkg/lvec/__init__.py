import os

from .checker import EMPTY, Context, TypeChecker
from .meta import MetaHarness
from .parser import parse_program, parse_term, parse_type
from .printer import print_term, print_type
from .rewrite import ReductionEngine
from .session import Session

with open(os.path.join(os.path.dirname(__file__), "VERSION")) as file:
    __version__ = file.read().strip()

__all__ = [
    "Context",
    "EMPTY",
    "MetaHarness",
    "ReductionEngine",
    "Session",
    "TypeChecker",
    "parse_program",
    "parse_term",
    "parse_type",
    "print_term",
    "print_type",
]
