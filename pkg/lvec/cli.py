# coding=utf-8
"""
Command line entry point ``lvec``
"""
from dataclasses import dataclass

import click

from lvec import __version__
from lvec.encodings import MatRep
from lvec.errors import LvecError, PropertyViolation, SoundnessViolation
from lvec.log_utils import configure_logging, get_default_logger
from lvec.matlang import MatGenerator, compile_mat, dim_check, eval_numeric, format_mat, parse_mat_program, verify_suite
from lvec.meta import SUITE_ERRORS, MetaHarness
from lvec.printer import format_derivation, print_term, print_type
from lvec.repl import Repl
from lvec.rewrite import DEFAULT_FUEL, format_trace
from lvec.session import Session
from lvec.terms import free_vars, term_size
from lvec.utils import render, text_table

log = get_default_logger(__name__)

SUITES = ("sr", "sn", "charact", "confluence", "lemmas")


@dataclass
class Options:
    fmt: str = "text"
    query: str = None
    fuel: int = DEFAULT_FUEL
    seed: int = 0
    prelude: bool = True
    _session: Session = None

    @property
    def session(self):
        if self._session is None:
            self._session = Session(fuel=self.fuel, seed=self.seed, load_prelude=self.prelude)
        return self._session

    def emit(self, document, text=None):
        click.echo(render(document, self.fmt, self.query, text))


pass_options = click.make_pass_decorator(Options)


@click.group()
@click.version_option(__version__, prog_name="lvec")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", envvar="LVEC_FORMAT")
@click.option("--query", default=None, help="JMESPath expression applied to the JSON document")
@click.option("-v", "--verbose", count=True, help="Repeat for more detail: info, debug")
@click.option("--fuel", type=click.IntRange(min=1), default=DEFAULT_FUEL, envvar="LVEC_FUEL", show_default=True)
@click.option("--seed", type=int, default=0, envvar="LVEC_SEED", show_default=True)
@click.option("--no-prelude", is_flag=True, help="Do not load the shipped definitions")
@click.pass_context
def cli(ctx, fmt, query, verbose, fuel, seed, no_prelude):
    """Interpreter, type checker and property suites for a linear lambda-calculus over vectors."""
    configure_logging(verbose)
    ctx.obj = Options(fmt=fmt, query=query, fuel=fuel, seed=seed, prelude=not no_prelude)


# terms


@cli.command()
@click.argument("source")
@click.option("--type", "as_type", is_flag=True, help="Parse SOURCE as a type")
@pass_options
def parse(options, source, as_type):
    """Parse and print SOURCE canonically."""
    session = options.session
    if as_type:
        parsed = session.resolve_type(source)
        options.emit({"type": print_type(parsed), "canonical": print_type(parsed, canonical=True)}, print_type(parsed))
        return
    term = session.resolve_term(source)
    shown = print_term(term)
    options.emit({"term": shown, "size": term_size(term), "free": sorted(free_vars(term))}, shown)


@cli.command()
@click.argument("source")
@click.option("--trace", is_flag=True, help="Show every step")
@click.option("--random", "randomized", is_flag=True, help="Pick redexes at random, seeded by --seed")
@pass_options
def normalize(options, source, trace, randomized):
    """Reduce SOURCE to its normal form."""
    session = options.session
    result = session.normalize(session.resolve_term(source), randomized=randomized)
    document = result.to_dict()
    if not trace:
        document.pop("steps")
    name = session.name_of(result.final)
    if name is not None:
        document["name"] = name
    text = format_trace(result) if trace else print_term(result.final)
    if name is not None:
        text = "{}  ({})".format(text, name)
    options.emit(document, text)


@cli.command()
@click.argument("source")
@click.option("--expect", default=None, help="Check against this type instead of inferring")
@click.option("--derivation", is_flag=True, help="Show the typing derivation")
@pass_options
def typecheck(options, source, expect, derivation):
    """Infer (or check) the type of SOURCE."""
    session = options.session
    term = session.resolve_term(source)
    if expect is None:
        type_, tree = session.infer(term)
    else:
        type_ = session.resolve_type(expect)
        tree = session.check(term, type_)
    shown = print_type(type_, canonical=True)
    document = {"term": print_term(term), "type": shown}
    if derivation:
        document["derivation"] = tree.to_dict()
    text = shown
    if derivation:
        text = "{}\n{}".format(shown, format_derivation(tree))
    options.emit(document, text)


@cli.command()
@click.argument("left")
@click.argument("right")
@pass_options
def equiv(options, left, right):
    """Compare two types up to the equivalence of types."""
    session = options.session
    first, second = session.resolve_type(left), session.resolve_type(right)
    verdict = session.equiv(first, second)
    options.emit(
        {
            "left": print_type(first, canonical=True),
            "right": print_type(second, canonical=True),
            "verdict": verdict,
        },
        verdict,
    )


@cli.command()
@pass_options
def prelude(options):
    """List the shipped definitions with their types."""
    session = Session(fuel=options.fuel, seed=options.seed)
    rows = []
    for name, term in session.definitions.items():
        type_, _ = session.infer(term)
        rows.append({"name": name, "type": print_type(type_, canonical=True)})
    types = [{"name": name, "type": print_type(t)} for name, t in session.types.items()]
    text = text_table([[row["name"], row["type"]] for row in rows], ["name", "type"])
    options.emit({"types": types, "definitions": rows}, text)


@cli.command()
@pass_options
def repl(options):
    """Start an interactive session."""
    Repl(options.session).run()


# property suites


def _report_text(report):
    summary = report.summary()
    lines = [
        "{}: {} pass, {} fail, {} expected (seed {})".format(
            report.name, summary.get("pass", 0), summary.get("fail", 0), summary.get("expected", 0), report.seed
        )
    ]
    shown = [record for record in report.records if record.status != "pass"]
    if shown:
        rows = [[record.index, record.status, record.message] for record in shown]
        lines.append(text_table(rows, ["member", "status", "message"]))
    return "\n".join(lines)


@cli.command()
@click.argument("suite", type=click.Choice(SUITES))
@click.option("--count", type=click.IntRange(min=0), default=300, show_default=True, help="Generated corpus size")
@click.option("--seed", type=int, default=None, help="Overrides the global seed")
@click.option("--fuel", type=click.IntRange(min=1), default=None, help="Overrides the global fuel")
@click.option("--random-traces", type=click.IntRange(min=0), default=10, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@pass_options
def meta(options, suite, count, seed, fuel, random_traces, workers):
    """Run a property suite over a corpus of well-typed terms."""
    harness = MetaHarness(
        seed=options.seed if seed is None else seed,
        count=count,
        fuel=options.fuel if fuel is None else fuel,
        random_traces=random_traces,
        workers=workers,
    )
    if suite == "lemmas":
        reports = harness.lemmas(count)
    elif suite == "sr":
        reports = [harness.subject_reduction(harness.corpus(include_projections=False))]
    elif suite == "sn":
        report = harness.check_strong_normalization(harness.corpus())
        report.records.append(harness.expected_divergence())
        reports = [report]
    elif suite == "charact":
        reports = [harness.term_characterisation(harness.corpus())]
    else:
        reports = [harness.confluence(harness.corpus())]
    document = {"suite": suite, "reports": [report.to_dict() for report in reports]}
    options.emit(document, "\n".join(_report_text(report) for report in reports))
    for report in reports:
        report.raise_for_violations(SUITE_ERRORS.get(suite, PropertyViolation))


# Mat


def _value_lists(value):
    if isinstance(value, MatRep):
        return value.to_lists()
    return value.to_list()


@cli.group()
def mat():
    """Matrix expressions compiled to terms."""


@mat.command("check")
@click.argument("source", type=click.File("r", encoding="utf-8"))
@pass_options
def mat_check(options, source):
    """Dimension-check every expression of a .mat file."""
    items = parse_mat_program(source.read())
    rows = [
        {"line": item.line, "expression": format_mat(item.expr), "dimension": str(dim_check(item.expr))}
        for item in items
    ]
    text = text_table(
        [[row["line"], row["dimension"], row["expression"]] for row in rows], ["line", "dimension", "expression"]
    )
    options.emit({"items": rows}, text)


@mat.command("eval")
@click.argument("source", type=click.File("r", encoding="utf-8"))
@pass_options
def mat_eval(options, source):
    """Evaluate every expression of a .mat file numerically."""
    rows = []
    for item in parse_mat_program(source.read()):
        value = _value_lists(eval_numeric(item.expr))
        rows.append({"line": item.line, "expression": format_mat(item.expr), "value": value})
    text = "\n".join("{} = {}".format(row["expression"], row["value"]) for row in rows)
    options.emit({"items": rows}, text)


@mat.command("compile")
@click.argument("source", type=click.File("r", encoding="utf-8"))
@pass_options
def mat_compile(options, source):
    """Compile every expression of a .mat file to a term and its type."""
    rows = []
    for item in parse_mat_program(source.read()):
        term, type_ = compile_mat(item.expr)
        rows.append({"line": item.line, "term": print_term(term), "type": print_type(type_, canonical=True)})
    text = "\n".join("{} : {}".format(row["term"], row["type"]) for row in rows)
    options.emit({"items": rows}, text)


@mat.command("verify")
@click.argument("source", type=click.File("r", encoding="utf-8"), required=False)
@click.option(
    "--random", "random_count", type=click.IntRange(min=0), default=0, help="Also verify this many random expressions"
)
@click.option("--max-dim", type=click.IntRange(min=1, max=4), default=4, show_default=True)
@click.option("--max-depth", type=click.IntRange(min=0), default=3, show_default=True)
@pass_options
def mat_verify(options, source, random_count, max_dim, max_depth):
    """Check that compiled expressions type and compute their numeric value."""
    expressions = []
    if source is not None:
        expressions.extend(item.expr for item in parse_mat_program(source.read()))
    if random_count:
        generator = MatGenerator(seed=options.seed, max_dim=max_dim, max_depth=max_depth)
        expressions.extend(generator.expressions(random_count))
    if not expressions:
        raise click.UsageError("Nothing to verify: give a FILE or --random N")
    reports = verify_suite(expressions, fuel=options.fuel)
    failed = [report for report in reports if not report.passed]
    rows = [
        [index, "pass" if report.passed else "fail", report.steps, format_mat(report.expression)]
        for index, report in enumerate(reports)
    ]
    text = "{}\n{} verified, {} failed".format(
        text_table(rows, ["case", "status", "steps", "expression"]), len(reports), len(failed)
    )
    options.emit({"reports": [report.to_dict() for report in reports], "failed": len(failed)}, text)
    if failed:
        raise SoundnessViolation("{} of {} Mat expressions failed".format(len(failed), len(reports)))


def main(args=None):
    """
    Run the command line and return its exit status
    """
    try:
        result = cli.main(args=args, prog_name="lvec", standalone_mode=False)
    except LvecError as e:
        log.debug("Command failed", exc_info=True)
        click.echo("error: {}: {}".format(e.__class__.__name__, e), err=True)
        return e.exit_code
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except click.ClickException as e:
        e.show()
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    raise SystemExit(main())
