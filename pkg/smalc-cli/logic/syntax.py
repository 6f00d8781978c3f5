"""
Formulas, sequents and subexponential signatures, together with the text
formats that carry them.

Concrete formula syntax (ASCII)::

    a  1  A * B  A \\ B  B / A  A & B  A | B  !{s}A

Precedence from tightest: ``!{s}``, ``*``, ``\\`` and ``/``, ``&``, ``|``.
Product, ``&`` and ``|`` associate to the left; a division takes at most one
division at its own level, so ``a/b/c`` must be written with parentheses.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedInput, VisitError

from logic.core import FormulaSyntaxError, SignatureError
from utils.input_validation import is_valid_identifier

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Product:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class LDiv:
    """``left \\ right``: consumes ``left`` on its left."""

    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class RDiv:
    """``left / right``: consumes ``right`` on its right and yields ``left``."""

    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class With:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Plus:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Bang:
    index: str
    body: "Formula"


Formula = Union[Atom, Unit, Product, LDiv, RDiv, With, Plus, Bang]


@dataclass(frozen=True)
class Sequent:
    antecedent: Tuple[Formula, ...]
    succedent: Formula

    def __str__(self) -> str:
        return format_sequent(self)


_GRAMMAR = r"""
    ?formula: disj
    sequent: antecedent "->" disj
    antecedent: (disj ("," disj)*)?

    ?disj: conj
         | disj "|" conj     -> plus
    ?conj: div
         | conj "&" div      -> with_
    ?div: prod
        | prod "\\" prod     -> ldiv
        | prod "/" prod      -> rdiv
    ?prod: unary
         | prod "*" unary    -> product
    ?unary: "!" "{" IDENT "}" unary -> bang
          | primary
    ?primary: IDENT          -> atom
            | "1"            -> unit
            | "(" disj ")"

    IDENT: /[a-zA-Z][a-zA-Z0-9_]*/

    %import common.WS
    %ignore WS
"""


@v_args(inline=True)
class _FormulaBuilder(Transformer):
    def atom(self, name):
        return Atom(str(name))

    def unit(self):
        return Unit()

    def bang(self, index, body):
        return Bang(str(index), body)

    def product(self, left, right):
        return Product(left, right)

    def ldiv(self, left, right):
        return LDiv(left, right)

    def rdiv(self, left, right):
        return RDiv(left, right)

    def with_(self, left, right):
        return With(left, right)

    def plus(self, left, right):
        return Plus(left, right)

    def antecedent(self, *formulas):
        return tuple(formulas)

    def sequent(self, antecedent, succedent):
        return Sequent(antecedent, succedent)


_PARSER = Lark(_GRAMMAR, start=["formula", "sequent"], parser="lalr")
_BUILDER = _FormulaBuilder()


def _parse(text: str, start: str):
    try:
        tree = _PARSER.parse(text, start=start)
    except UnexpectedCharacters as e:
        raise FormulaSyntaxError(f"unknown token {text[e.pos_in_stream]!r}", e.pos_in_stream) from None
    except UnexpectedInput as e:
        position = getattr(e, "pos_in_stream", None)
        token = getattr(e, "token", None)
        if position is None or (token is not None and token.type == "$END"):
            position = len(text)
        raise FormulaSyntaxError("syntax error", position) from None
    try:
        return _BUILDER.transform(tree)
    except VisitError as e:
        raise FormulaSyntaxError(str(e.orig_exc)) from None


def parse_formula(text: str) -> Formula:
    """
    Parse a single formula.

    Args:
        text (str): Formula in the concrete syntax.

    Returns:
        Formula: The formula tree.

    Raises:
        FormulaSyntaxError: On an unknown token or a malformed formula.
    """
    return _parse(text, "formula")


def parse_sequent(text: str) -> Sequent:
    """
    Parse ``A1, ..., An -> B``; ``-> B`` has an empty antecedent.

    Raises:
        FormulaSyntaxError: On malformed text or an empty succedent.
    """
    if "->" in text and not text.rsplit("->", 1)[1].strip():
        raise FormulaSyntaxError("empty succedent", len(text))
    return _parse(text, "sequent")


# Binding strength used by the printer; larger binds tighter.
_PLUS, _WITH, _DIV, _PROD, _UNARY = 1, 2, 3, 4, 5


def _level(formula: Formula) -> int:
    if isinstance(formula, Plus):
        return _PLUS
    if isinstance(formula, With):
        return _WITH
    if isinstance(formula, (LDiv, RDiv)):
        return _DIV
    if isinstance(formula, Product):
        return _PROD
    return _UNARY


def _wrap(formula: Formula, minimum: int) -> str:
    text = format_formula(formula)
    return text if _level(formula) >= minimum else f"({text})"


def format_formula(formula: Formula) -> str:
    """Print a formula with the fewest parentheses that re-parse to the same tree."""
    if isinstance(formula, Atom):
        return formula.name
    if isinstance(formula, Unit):
        return "1"
    if isinstance(formula, Bang):
        return f"!{{{formula.index}}}{_wrap(formula.body, _UNARY)}"
    if isinstance(formula, Product):
        return f"{_wrap(formula.left, _PROD)} * {_wrap(formula.right, _UNARY)}"
    if isinstance(formula, LDiv):
        return f"{_wrap(formula.left, _PROD)} \\ {_wrap(formula.right, _PROD)}"
    if isinstance(formula, RDiv):
        return f"{_wrap(formula.left, _PROD)} / {_wrap(formula.right, _PROD)}"
    if isinstance(formula, With):
        return f"{_wrap(formula.left, _WITH)} & {_wrap(formula.right, _DIV)}"
    if isinstance(formula, Plus):
        return f"{_wrap(formula.left, _PLUS)} | {_wrap(formula.right, _WITH)}"
    raise TypeError(f"not a formula: {formula!r}")


def format_sequent(sequent: Sequent) -> str:
    antecedent = ", ".join(format_formula(f) for f in sequent.antecedent)
    succedent = format_formula(sequent.succedent)
    return f"{antecedent} -> {succedent}" if antecedent else f"-> {succedent}"


def _walk(formula: Formula) -> Iterator[Formula]:
    stack = [formula]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Bang):
            stack.append(node.body)
        elif not isinstance(node, (Atom, Unit)):
            stack.append(node.right)
            stack.append(node.left)


def atoms(*formulas: Formula) -> List[str]:
    """Atom names in left-to-right order of first occurrence."""
    seen: Dict[str, None] = {}
    for formula in formulas:
        for node in _walk(formula):
            if isinstance(node, Atom):
                seen.setdefault(node.name, None)
    return list(seen)


def bang_indices(*formulas: Formula) -> List[str]:
    """Subexponential indices in left-to-right order of first occurrence."""
    seen: Dict[str, None] = {}
    for formula in formulas:
        for node in _walk(formula):
            if isinstance(node, Bang):
                seen.setdefault(node.index, None)
    return list(seen)


def sequent_formulas(sequent: Sequent) -> Tuple[Formula, ...]:
    return sequent.antecedent + (sequent.succedent,)


def contains_unit(*formulas: Formula) -> bool:
    return any(isinstance(node, Unit) for formula in formulas for node in _walk(formula))


# --------------------------------------------------------------------------- #
# Signatures
# --------------------------------------------------------------------------- #

STRUCTURAL_SETS = ("W", "C", "E")


@dataclass(frozen=True)
class RawSignature:
    """Signature as written by a user, before closure and validation."""

    indices: Tuple[str, ...]
    order: Tuple[Tuple[str, str], ...] = ()
    weakening: FrozenSet[str] = frozenset()
    contraction: FrozenSet[str] = frozenset()
    exchange: FrozenSet[str] = frozenset()


@dataclass(frozen=True)
class Signature:
    """
    A validated subexponential signature.

    ``order`` is the reflexive-transitive closure of the declared pairs, so
    ``(s, t) in order`` reads ``s ⪯ t``.
    """

    indices: Tuple[str, ...]
    order: FrozenSet[Tuple[str, str]]
    weakening: FrozenSet[str]
    contraction: FrozenSet[str]
    exchange: FrozenSet[str]

    def leq(self, s: str, t: str) -> bool:
        return (s, t) in self.order

    def subset(self, name: str) -> FrozenSet[str]:
        return {"W": self.weakening, "C": self.contraction, "E": self.exchange}[name]

    def __contains__(self, index: str) -> bool:
        return index in self.indices


def _closure(indices: Sequence[str], pairs: Iterable[Tuple[str, str]]) -> FrozenSet[Tuple[str, str]]:
    relation = {(s, s) for s in indices} | set(pairs)
    for k in indices:
        for i in indices:
            if (i, k) not in relation:
                continue
            for j in indices:
                if (k, j) in relation:
                    relation.add((i, j))
    return frozenset(relation)


def signature_problems(raw: RawSignature) -> List[str]:
    """Every reason ``raw`` is not a valid signature, in a stable order."""
    problems = []
    seen = set()
    for index in raw.indices:
        if not is_valid_identifier(index):
            problems.append(f"invalid index name {index!r}")
        if index in seen:
            problems.append(f"duplicate index {index}")
        seen.add(index)

    for s, t in raw.order:
        for name in (s, t):
            if name not in seen:
                problems.append(f"order pair {s} <= {t} uses unknown index {name}")

    subsets = dict(zip(STRUCTURAL_SETS, (raw.weakening, raw.contraction, raw.exchange)))
    for label, members in subsets.items():
        for name in sorted(members - seen):
            problems.append(f"set {label} uses unknown index {name}")
    if problems:
        return problems

    order = _closure(raw.indices, raw.order)
    for label, members in subsets.items():
        for s in raw.indices:
            if s not in members:
                continue
            for t in raw.indices:
                if (s, t) in order and t not in members:
                    problems.append(f"not upward-closed: {label} misses {t} above {s}")
    for s in raw.indices:
        if s in raw.weakening and s in raw.contraction and s not in raw.exchange:
            problems.append(f"W∩C ⊄ E: index {s}")
    return problems


def validate_signature(raw: Union[RawSignature, Signature]) -> Signature:
    """
    Close the declared order and check the structural subsets.

    Closure is applied to the order only; a subset that is not upward-closed
    is reported, never repaired. Validating a ``Signature`` returns it unchanged.

    Raises:
        SignatureError: With one problem per violation.
    """
    if isinstance(raw, Signature):
        raw = RawSignature(
            raw.indices,
            tuple(sorted(raw.order)),
            raw.weakening,
            raw.contraction,
            raw.exchange,
        )
    problems = signature_problems(raw)
    if problems:
        raise SignatureError("invalid signature", problems)
    return Signature(
        indices=tuple(raw.indices),
        order=_closure(raw.indices, raw.order),
        weakening=frozenset(raw.weakening),
        contraction=frozenset(raw.contraction),
        exchange=frozenset(raw.exchange),
    )


def parse_signature_text(text: str, source: str = "<signature>") -> Signature:
    """
    Read the line-oriented signature format::

        index s
        order s <= t
        set W = s,t

    Raises:
        SignatureError: On malformed lines or an invalid signature.
    """
    indices: List[str] = []
    order: List[Tuple[str, str]] = []
    subsets: Dict[str, FrozenSet[str]] = {name: frozenset() for name in STRUCTURAL_SETS}
    problems = []

    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "index" and rest and " " not in rest:
            indices.append(rest)
        elif keyword == "order" and rest.count("<=") == 1:
            s, t = (part.strip() for part in rest.split("<="))
            order.append((s, t))
        elif keyword == "set" and "=" in rest:
            name, _, members = (part.strip() for part in rest.partition("="))
            if name not in subsets:
                problems.append(f"{source}:{number}: unknown set {name!r}")
                continue
            subsets[name] = frozenset(m.strip() for m in members.split(",") if m.strip())
        else:
            problems.append(f"{source}:{number}: cannot read {line!r}")
    if problems:
        raise SignatureError("malformed signature file", problems)

    raw = RawSignature(tuple(indices), tuple(order), subsets["W"], subsets["C"], subsets["E"])
    return validate_signature(raw)


def load_signature(path: Union[str, Path]) -> Signature:
    path = Path(path)
    logger.debug("loading signature %s", path)
    return parse_signature_text(path.read_text(encoding="utf-8"), source=str(path))


def format_signature(signature: Signature) -> str:
    lines = [f"index {s}" for s in signature.indices]
    for s in signature.indices:
        for t in signature.indices:
            if s != t and signature.leq(s, t):
                lines.append(f"order {s} <= {t}")
    for name in STRUCTURAL_SETS:
        members = [s for s in signature.indices if s in signature.subset(name)]
        lines.append(f"set {name} = {','.join(members)}".rstrip())
    return "\n".join(lines) + "\n"


def empty_signature() -> Signature:
    return validate_signature(RawSignature(()))


def unknown_indices(signature: Optional[Signature], formulas: Iterable[Formula]) -> List[str]:
    known = signature.indices if signature is not None else ()
    return [s for s in bang_indices(*formulas) if s not in known]
