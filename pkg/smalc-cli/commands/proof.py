"""
Proof commands: cut-free search and derivation checking.
"""

from pathlib import Path

from logic.calculus import (
    ProofStatus,
    check_derivation,
    format_derivation,
    parse_derivation,
    prove,
)
from logic.core import SignatureError
from logic.syntax import parse_sequent, sequent_formulas, unknown_indices
from utils.helpers import write_output
from utils.pretty_printing import pretty_print_check, pretty_print_proof_result
from .core import EXIT_BUDGET, EXIT_OK, EXIT_REFUTED, Command, CommandResult, input_errors

STATUS_EXIT_CODES = {
    ProofStatus.PROVED: EXIT_OK,
    ProofStatus.EXHAUSTED: EXIT_REFUTED,
    ProofStatus.BUDGET: EXIT_BUDGET,
}


class ProveCommand(Command):
    """
    Command to search for a cut-free derivation of a sequent.
    """

    name = "prove"

    def configure(self, parser) -> None:
        parser.add_argument("sequent", help='sequent such as "a, a\\b -> b"')
        parser.add_argument("--no-stats", action="store_true", help="omit the search statistics table")

    @input_errors
    def execute(self, context) -> CommandResult:
        args = context.args
        goal = parse_sequent(args.sequent)
        sig = context.signature()
        unknown = unknown_indices(sig, sequent_formulas(goal))
        if unknown:
            raise SignatureError(f"unknown subexponential index {unknown[0]}")

        result = prove(goal, sig, args.mode, context.budget())
        pretty_print_proof_result(goal, result, show_stats=not args.no_stats)
        if result.derivation is not None and args.out:
            path = write_output(args.out, "proof.drv", format_derivation(result.derivation))
            print(f"Derivation saved to {path}")
        return CommandResult(
            success=True,
            data=result,
            exit_code=STATUS_EXIT_CODES[result.status],
        )

    def description(self) -> str:
        return "Searches for a cut-free derivation of a sequent and prints the proof tree."


class CheckCommand(Command):
    """
    Command to verify a derivation file rule by rule.
    """

    name = "check"

    def configure(self, parser) -> None:
        parser.add_argument("derivation", type=Path, help="derivation file in the indented tree format")

    @input_errors
    def execute(self, context) -> CommandResult:
        args = context.args
        derivation = parse_derivation(args.derivation.read_text(encoding="utf-8"))
        problems = check_derivation(derivation, context.signature(), args.mode)
        pretty_print_check(derivation, problems)
        return CommandResult(
            success=True,
            data=problems,
            exit_code=EXIT_REFUTED if problems else EXIT_OK,
        )

    def description(self) -> str:
        return "Checks every rule application of a derivation file."
