"""
Semantic commands: model checking, countermodel search and quantale enumeration.
"""

from collections import Counter
from pathlib import Path

from logic.quantale import format_quantale, load_quantale
from logic.semantics import (
    ModelReport,
    enumerate_quantales,
    find_countermodel,
    format_countermodel,
    holds,
    load_countermodel,
    load_sigma,
)
from logic.syntax import parse_sequent
from utils.helpers import write_output
from utils.input_validation import argument_type, is_valid_valuation, parse_valuation
from utils.pretty_printing import (
    pretty_print_countermodel,
    pretty_print_enumerated,
    pretty_print_model,
)
from .core import (
    EXIT_BUDGET,
    EXIT_OK,
    EXIT_REFUTED,
    Command,
    CommandResult,
    UsageError,
    input_errors,
)


class ModelCommand(Command):
    """
    Command to evaluate a sequent in one model.

    The model is either a countermodel report (``--report``) or a quantale file
    with optional ``--sigma`` and ``--valuation``.
    """

    name = "model"

    def configure(self, parser) -> None:
        parser.add_argument("sequent", nargs="?", help="sequent; defaults to the one stored in the report")
        parser.add_argument("--report", type=Path, help="countermodel report file")
        parser.add_argument("--quantale", type=Path, help="quantale file")
        parser.add_argument("--sigma", type=Path, help="file of 'sigma index=<table>' lines")
        parser.add_argument(
            "--valuation",
            type=argument_type(is_valid_valuation, "invalid valuation", parse_valuation),
            help="atom values such as a=0,b=1",
        )

    @input_errors
    def execute(self, context) -> CommandResult:
        args = context.args
        if args.report is not None:
            report = load_countermodel(args.report)
        elif args.quantale is not None:
            Q = load_quantale(args.quantale)
            sigma = load_sigma(Q, args.sigma) if args.sigma is not None else None
            report = ModelReport(Q, sigma, {})
        else:
            raise UsageError("model needs --report or --quantale")
        if args.valuation:
            report = ModelReport(report.quantale, report.sigma, {**report.valuation, **args.valuation}, report.sequent)

        sequent = parse_sequent(args.sequent) if args.sequent else report.sequent
        if sequent is None:
            raise UsageError("no sequent given and the report stores none")
        result = holds(report.quantale, report.sigma, report.valuation, sequent)
        pretty_print_model(report, sequent, result)
        return CommandResult(success=True, data=result, exit_code=EXIT_OK if result else EXIT_REFUTED)

    def description(self) -> str:
        return "Evaluates a sequent in a quantale under a subexponential interpretation and valuation."


class CountermodelCommand(Command):
    """
    Command to search finite quantales for a refutation of a sequent.
    """

    name = "countermodel"

    def configure(self, parser) -> None:
        parser.add_argument("sequent", help="sequent to refute")

    @input_errors
    def execute(self, context) -> CommandResult:
        args = context.args
        sequent = parse_sequent(args.sequent)
        witness = find_countermodel(sequent, context.signature(), args.max_size, jobs=args.jobs)
        saved_to = None
        if witness is not None and args.out:
            saved_to = str(write_output(args.out, "countermodel.txt", format_countermodel(witness)))
        pretty_print_countermodel(sequent, witness, args.max_size, saved_to)
        if witness is not None and not args.out:
            print(format_countermodel(witness))
        return CommandResult(
            success=True,
            data=witness,
            exit_code=EXIT_REFUTED if witness is not None else EXIT_BUDGET,
        )

    def description(self) -> str:
        return "Searches quantales up to --max-size for a countermodel and emits the witness."


class EnumerateCommand(Command):
    """
    Command to list all quantales up to isomorphism.

    Without ``--out`` the quantale files are streamed to standard output,
    separated by blank lines.
    """

    name = "enumerate"

    def configure(self, parser) -> None:
        parser.add_argument("--unital", action="store_true", help="only unital quantales")

    @input_errors
    def execute(self, context) -> CommandResult:
        args = context.args
        sizes: Counter = Counter()
        unital: Counter = Counter()
        for Q in enumerate_quantales(args.max_size, unital_only=args.unital):
            sizes[Q.n] += 1
            unital[Q.n] += Q.is_unital
            text = format_quantale(Q)
            if args.out:
                write_output(args.out, f"q{Q.n}_{sizes[Q.n]:04d}.qnt", text)
            else:
                print(text)
        if args.out:
            for size in sorted(sizes):
                pretty_print_enumerated(size, sizes[size], unital[size])
        return CommandResult(success=True, data=dict(sizes), exit_code=EXIT_OK)

    def description(self) -> str:
        return "Enumerates finite quantales up to isomorphism, one file per quantale."
