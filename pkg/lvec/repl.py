# coding=utf-8
"""
Line-oriented interactive session.

A line is a definition (``name = term``), a type abbreviation
(``type Name = T``), a term to normalise, or a command starting with ``:``.
"""
import click

from lvec.errors import LvecError
from lvec.log_utils import get_default_logger
from lvec.printer import format_derivation, print_term, print_type
from lvec.rewrite import format_position, format_trace
from lvec.session import Session

log = get_default_logger(__name__)

PROMPT = "lvec> "

HELP = """\
  name = term        add a definition
  type Name = T      add a type abbreviation
  term               normalise and print the normal form
  :type term         infer and print the canonical type
  :derive term       print the typing derivation
  :step term         fire one reduction step
  :trace term        normalise showing every step
  :load FILE         load definitions (``prelude`` for the shipped ones)
  :defs              list definitions
  :help              this text
  :quit              leave"""


class Quit(Exception):
    pass


class Repl(object):
    """
    :param session: Session to run commands in, a fresh one with the prelude by default
    """

    def __init__(self, session=None):
        self.session = session or Session()
        self.commands = {
            "type": self.type_of,
            "derive": self.derive,
            "step": self.step,
            "trace": self.trace,
            "load": self.load,
            "defs": self.defs,
            "help": self.help,
            "quit": self.quit,
            "q": self.quit,
        }

    def handle_line(self, line):
        """
        Run one line
        :return: text to show, possibly empty
        :raise Quit: on ``:quit``
        """
        line = line.strip()
        if not line or line.startswith("--"):
            return ""
        try:
            if line.startswith(":"):
                name, _, argument = line[1:].partition(" ")
                command = self.commands.get(name)
                if command is None:
                    return "error: unknown command :{} (try :help)".format(name)
                return command(argument.strip())
            return self.evaluate(line)
        except LvecError as e:
            log.debug("Line failed: %s", line)
            return "error: {}: {}".format(type(e).__name__, e)

    def evaluate(self, line):
        before = set(self.session.definitions)
        results = self.session.load_text(line, source="<repl>")
        outputs = []
        for result in results:
            trace = self.session.normalize(result.term)
            outputs.append(print_term(trace.final))
        if not outputs:
            added = sorted(set(self.session.definitions) - before)
            return "defined {}".format(", ".join(added)) if added else ""
        return "\n".join(outputs)

    # commands

    def type_of(self, argument):
        type_, _ = self.session.infer(self.session.resolve_term(argument))
        return print_type(type_, canonical=True)

    def derive(self, argument):
        _, derivation = self.session.infer(self.session.resolve_term(argument))
        return format_derivation(derivation)

    def step(self, argument):
        term = self.session.resolve_term(argument)
        fired = self.session.step(term)
        if fired is None:
            return "normal form: {}".format(print_term(term))
        return "{} @{}  {}".format(fired.rule, format_position(fired.position), print_term(fired.after))

    def trace(self, argument):
        return format_trace(self.session.normalize(self.session.resolve_term(argument)))

    def load(self, argument):
        if not argument:
            return "error: :load needs a file name"
        results = self.session.load_file(argument)
        lines = [print_term(self.session.normalize(result.term).final) for result in results]
        lines.append("loaded {} ({} definitions)".format(argument, len(self.session.definitions)))
        return "\n".join(lines)

    def defs(self, argument=""):
        names = sorted(self.session.definitions)
        types = sorted(self.session.types)
        lines = []
        if types:
            lines.append("types: {}".format(" ".join(types)))
        lines.append("terms: {}".format(" ".join(names)))
        return "\n".join(lines)

    @staticmethod
    def help(argument=""):
        return HELP

    @staticmethod
    def quit(argument=""):
        raise Quit()

    # loop

    def run(self, read=input, echo=click.echo):
        """
        Read lines until end of input or ``:quit``
        """
        echo("lvec interactive session, :help for commands")
        while True:
            try:
                line = read(PROMPT)
            except (EOFError, KeyboardInterrupt):
                echo("")
                break
            try:
                output = self.handle_line(line)
            except Quit:
                break
            if output:
                echo(output)
        log.info("Session closed")
