"""
Representation command: relational representation and conucleus transport.
"""

from pathlib import Path

from logic.core import RepresentationError
from logic.quantale import all_conuclei, classify_conucleus, load_conucleus, load_quantale
from logic.representation import build_relational, transport_conucleus, transport_preserves_flags
from utils.pretty_printing import pretty_print_representation
from .core import EXIT_OK, EXIT_REFUTED, Command, CommandResult, input_errors


class RepresentCommand(Command):
    """
    Command to represent a unital quantale by relations on its carrier.

    Every conucleus (or the one given with ``--conucleus``) is transported to the
    relations and its unital, central and ssi flags are compared.
    """

    name = "represent"

    def configure(self, parser) -> None:
        parser.add_argument("--quantale", type=Path, required=True, help="quantale file")
        parser.add_argument("--conucleus", type=Path, help="conucleus file; default: all conuclei")

    @input_errors
    def execute(self, context) -> CommandResult:
        args = context.args
        Q = load_quantale(args.quantale)
        family, report = build_relational(Q, strict=False)

        conuclei = [load_conucleus(Q, args.conucleus)] if args.conucleus else list(all_conuclei(Q))
        flags, kept = [], []
        for I in conuclei:
            flags.append(classify_conucleus(Q, I))
            try:
                kept.append(transport_preserves_flags(Q, transport_conucleus(Q, I, family)))
            except RepresentationError as e:
                report.witnesses.append(str(e))
                kept.append(False)
        report.checks["conuclei"] = all(kept)

        pretty_print_representation(report, flags, kept)
        return CommandResult(success=True, data=report, exit_code=EXIT_OK if report.passed else EXIT_REFUTED)

    def description(self) -> str:
        return "Builds the relational representation of a quantale and transports its conuclei."
