"""
Categorial-grammar front end.

A lexicon maps words to one or more formulas. Parsing a sentence is proving
the sequent ``types(w1), ..., types(wn) -> target`` for some choice of types.
"""

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from logic.calculus import Mode, ProofResult, ProofStatus, SearchBudget, prove
from logic.core import FormulaSyntaxError, LexiconError, SignatureError, ShardRunner
from logic.syntax import (
    Atom,
    Formula,
    Sequent,
    Signature,
    empty_signature,
    format_formula,
    load_signature,
    parse_formula,
    unknown_indices,
)

logger = logging.getLogger(__name__)


@dataclass
class Lexicon:
    entries: Dict[str, Tuple[Formula, ...]]
    target: Formula = Atom("s")
    signature: Signature = field(default_factory=empty_signature)

    def types_of(self, word: str) -> Tuple[Formula, ...]:
        try:
            return self.entries[word]
        except KeyError:
            raise LexiconError(f"unknown word {word!r}") from None

    def problems(self) -> List[str]:
        found = []
        for word, types in self.entries.items():
            if not types:
                found.append(f"word {word!r} has no type")
            for formula in types:
                for index in unknown_indices(self.signature, [formula]):
                    found.append(f"word {word!r}: unknown index {index} in {format_formula(formula)}")
        for index in unknown_indices(self.signature, [self.target]):
            found.append(f"target: unknown index {index}")
        return found


@dataclass
class ParseOutcome:
    """Result of parsing one sentence: the deciding proof result and the types used."""

    result: ProofResult
    assignment: Optional[Tuple[Formula, ...]] = None
    tried: int = 0

    @property
    def proved(self) -> bool:
        return self.result.proved


def parse_lexicon_text(
    text: str, base_dir: Union[str, Path, None] = None, source: str = "<lexicon>"
) -> Lexicon:
    """
    Read a lexicon.

    Lines are ``signature <path>`` (relative to ``base_dir``), ``target <formula>``
    and ``word <token> : <formula>``; ``#`` starts a comment. Repeating a word adds
    another type for it.

    Raises:
        LexiconError: On malformed lines, a bad signature file or unknown indices.
    """
    base = Path(base_dir) if base_dir is not None else Path(".")
    entries: Dict[str, List[Formula]] = {}
    target: Formula = Atom("s")
    signature = empty_signature()
    problems = []

    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        where = f"{source}:{number}"
        try:
            if keyword == "signature" and rest:
                signature = load_signature(base / rest)
            elif keyword == "target" and rest:
                target = parse_formula(rest)
            elif keyword == "word" and ":" in rest:
                word, _, body = (part.strip() for part in rest.partition(":"))
                if not word or " " in word:
                    problems.append(f"{where}: bad word {word!r}")
                    continue
                entries.setdefault(word, []).append(parse_formula(body))
            else:
                problems.append(f"{where}: cannot read {line!r}")
        except FormulaSyntaxError as e:
            problems.append(f"{where}: {e}")
        except SignatureError as e:
            problems.append(f"{where}: {e}")
        except OSError as e:
            problems.append(f"{where}: cannot open signature: {e}")
    if problems:
        raise LexiconError("malformed lexicon", problems)

    lexicon = Lexicon({w: tuple(ts) for w, ts in entries.items()}, target, signature)
    problems = lexicon.problems()
    if problems:
        raise LexiconError("invalid lexicon", problems)
    return lexicon


def load_lexicon(path: Union[str, Path]) -> Lexicon:
    path = Path(path)
    logger.debug("loading lexicon %s", path)
    return parse_lexicon_text(path.read_text(encoding="utf-8"), path.parent, str(path))


def assignments(words: Sequence[str], lex: Lexicon) -> Iterator[Tuple[Formula, ...]]:
    """Every choice of one type per word, in lexicon order, generated lazily."""
    return itertools.product(*(lex.types_of(w) for w in words))


def parse_sentence(
    words: Sequence[str],
    lex: Lexicon,
    mode: Mode = Mode.L1,
    budget: Optional[SearchBudget] = None,
    jobs: int = 1,
) -> ParseOutcome:
    """
    Decide whether ``words`` form a phrase of the lexicon's target category.

    Args:
        words (Sequence[str]): Tokens of the sentence.
        lex (Lexicon): Type assignment and signature.
        mode (Mode): Calculus variant.
        budget (Optional[SearchBudget]): Limits for each proof search.
        jobs (int): Worker count for trying assignments.

    Returns:
        ParseOutcome: The first proved assignment in declared order, otherwise
        an aggregate failure (``NotProvedBudget`` if any search ran out of budget).

    Raises:
        LexiconError: If a word is not in the lexicon.
    """
    if not words:
        raise LexiconError("empty sentence")
    for word in words:
        lex.types_of(word)

    results: List[ProofResult] = []

    def attempt(types: Tuple[Formula, ...]) -> ProofResult:
        return prove(Sequent(types, lex.target), lex.signature, mode, budget)

    def accept(result: ProofResult) -> bool:
        results.append(result)
        return result.proved

    position, result = ShardRunner(jobs).first(attempt, assignments(words, lex), accept)
    if position is not None:
        chosen = next(itertools.islice(assignments(words, lex), position, None))
        logger.debug("parsed %r with assignment %d", " ".join(words), position)
        return ParseOutcome(result, chosen, position + 1)

    status = ProofStatus.EXHAUSTED
    if any(r.status == ProofStatus.BUDGET for r in results):
        status = ProofStatus.BUDGET
    return ParseOutcome(ProofResult(status), None, len(results))
