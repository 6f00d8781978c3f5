"""
Grammar command: sentence parsing as derivability.
"""

from pathlib import Path

from logic.grammar import load_lexicon, parse_sentence
from logic.syntax import format_formula
from utils.helpers import sentence_words
from utils.pretty_printing import pretty_print_parse
from .core import Command, CommandResult, input_errors
from .proof import STATUS_EXIT_CODES


class ParseCommand(Command):
    """
    Command to parse a sentence with a categorial lexicon.
    """

    name = "parse"

    def configure(self, parser) -> None:
        parser.add_argument("--lexicon", type=Path, required=True, help="lexicon file")
        parser.add_argument("sentence", nargs="+", help="words of the sentence")

    @input_errors
    def execute(self, context) -> CommandResult:
        args = context.args
        lexicon = load_lexicon(args.lexicon)
        words = sentence_words(args.sentence)
        outcome = parse_sentence(words, lexicon, args.mode, context.budget(), jobs=args.jobs)
        pretty_print_parse(words, format_formula(lexicon.target), outcome)
        return CommandResult(
            success=True,
            data=outcome,
            exit_code=STATUS_EXIT_CODES[outcome.result.status],
        )

    def description(self) -> str:
        return "Parses a sentence by proving its type assignment derives the lexicon target."
