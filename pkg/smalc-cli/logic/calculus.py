"""
Sequent calculus for non-commutative linear logic with subexponentials.

The module holds the rule table (read backwards for search and forwards for
checking), the derivation checker, bounded cut-free proof search and the
indented text format for derivations.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple

from logic.core import DerivationError, FormulaSyntaxError
from logic.syntax import (
    Atom,
    Bang,
    Formula,
    LDiv,
    Plus,
    Product,
    RDiv,
    Sequent,
    Signature,
    Unit,
    With,
    format_sequent,
    parse_sequent,
    sequent_formulas,
    unknown_indices,
)

logger = logging.getLogger(__name__)


class Mode(str, Enum):
    L = "L"
    LSTAR = "Lstar"
    L1 = "L1"


class RuleId(str, Enum):
    AX = "Ax"
    LDIV_L = "LDivL"
    LDIV_R = "LDivR"
    RDIV_L = "RDivL"
    RDIV_R = "RDivR"
    PROD_L = "ProdL"
    PROD_R = "ProdR"
    UNIT_L = "UnitL"
    UNIT_R = "UnitR"
    WITH_L1 = "WithL1"
    WITH_L2 = "WithL2"
    WITH_R = "WithR"
    PLUS_L = "PlusL"
    PLUS_R1 = "PlusR1"
    PLUS_R2 = "PlusR2"
    BANG_L = "BangL"
    BANG_R = "BangR"
    NCONTR1 = "NContr1"
    NCONTR2 = "NContr2"
    EX1 = "Ex1"
    EX2 = "Ex2"
    WEAK_BANG = "WeakBang"
    CUT = "Cut"


INDEXED_RULES = frozenset(
    {
        RuleId.BANG_L,
        RuleId.BANG_R,
        RuleId.NCONTR1,
        RuleId.NCONTR2,
        RuleId.EX1,
        RuleId.EX2,
        RuleId.WEAK_BANG,
    }
)
CONTRACTION_RULES = frozenset({RuleId.NCONTR1, RuleId.NCONTR2})


@dataclass(frozen=True)
class RuleInstance:
    """
    One backward application of a rule to a goal.

    ``position`` is the principal formula's place in the goal antecedent and
    ``split`` the context boundary (or destination) chosen by the rule.
    """

    rule: RuleId
    premises: Tuple[Sequent, ...]
    index: Optional[str] = None
    position: Optional[int] = None
    split: Optional[int] = None


@dataclass(frozen=True)
class Derivation:
    conclusion: Sequent
    rule: RuleId
    premises: Tuple["Derivation", ...] = ()
    index: Optional[str] = None

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def uses_cut(self) -> bool:
        return self.rule == RuleId.CUT or any(p.uses_cut() for p in self.premises)

    def nodes(self) -> Iterator["Derivation"]:
        yield self
        for premise in self.premises:
            yield from premise.nodes()


@dataclass
class SearchBudget:
    max_depth: int = 40
    max_contractions_per_branch: int = 3
    max_nodes: int = 1_000_000

    def __post_init__(self):
        for name in ("max_depth", "max_contractions_per_branch", "max_nodes"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be strictly positive")


class ProofStatus(str, Enum):
    PROVED = "Proved"
    EXHAUSTED = "NotProvedExhausted"
    BUDGET = "NotProvedBudget"


@dataclass
class SearchStats:
    nodes: int = 0
    rounds: int = 0
    depth_reached: int = 0
    depth_cutoffs: int = 0
    contraction_cutoffs: int = 0
    node_cutoffs: int = 0
    loop_cutoffs: int = 0
    cache_hits: int = 0

    def as_dict(self) -> Dict[str, int]:
        return dict(self.__dict__)


@dataclass
class ProofResult:
    status: ProofStatus
    derivation: Optional[Derivation] = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def proved(self) -> bool:
        return self.status == ProofStatus.PROVED


# --------------------------------------------------------------------------- #
# Rule table
# --------------------------------------------------------------------------- #


def _replace(context: Tuple[Formula, ...], i: int, *formulas: Formula) -> Tuple[Formula, ...]:
    return context[:i] + tuple(formulas) + context[i + 1 :]


def _right_rules(goal: Sequent, sig: Signature, mode: Mode):
    gamma, succ = goal.antecedent, goal.succedent
    if isinstance(succ, LDiv):
        yield RuleInstance(RuleId.LDIV_R, (Sequent((succ.left,) + gamma, succ.right),)), None
    elif isinstance(succ, RDiv):
        yield RuleInstance(RuleId.RDIV_R, (Sequent(gamma + (succ.right,), succ.left),)), None
    elif isinstance(succ, Plus):
        yield RuleInstance(RuleId.PLUS_R1, (Sequent(gamma, succ.left),)), None
        yield RuleInstance(RuleId.PLUS_R2, (Sequent(gamma, succ.right),)), None
    elif isinstance(succ, Bang) and all(isinstance(f, Bang) for f in gamma):
        failing = [f.index for f in gamma if not sig.leq(succ.index, f.index)]
        violation = None
        if failing:
            violation = (
                f"promotion side condition: {succ.index} ⪯ {failing[0]} does not hold"
            )
        instance = RuleInstance(RuleId.BANG_R, (Sequent(gamma, succ.body),), index=succ.index)
        yield instance, violation


def _left_rules(goal: Sequent, mode: Mode):
    gamma, succ = goal.antecedent, goal.succedent
    table = (
        (RuleId.PROD_L, Product),
        (RuleId.UNIT_L, Unit),
        (RuleId.WITH_L1, With),
        (RuleId.WITH_L2, With),
        (RuleId.BANG_L, Bang),
    )
    for rule, shape in table:
        for i, formula in enumerate(gamma):
            if not isinstance(formula, shape):
                continue
            if rule == RuleId.PROD_L:
                premise = _replace(gamma, i, formula.left, formula.right)
            elif rule == RuleId.UNIT_L:
                if mode != Mode.L1:
                    continue
                premise = _replace(gamma, i)
            elif rule == RuleId.WITH_L1:
                premise = _replace(gamma, i, formula.left)
            elif rule == RuleId.WITH_L2:
                premise = _replace(gamma, i, formula.right)
            else:
                premise = _replace(gamma, i, formula.body)
            index = formula.index if rule == RuleId.BANG_L else None
            yield RuleInstance(rule, (Sequent(premise, succ),), index=index, position=i), None


def _modal_rules(goal: Sequent, sig: Signature):
    gamma, succ = goal.antecedent, goal.succedent
    n = len(gamma)
    bangs = [(i, f) for i, f in enumerate(gamma) if isinstance(f, Bang)]

    def missing(index: str, label: str, members) -> Optional[str]:
        return None if index in members else f"index {index} not in {label}"

    for i, f in bangs:
        violation = missing(f.index, "W", sig.weakening)
        premise = Sequent(_replace(gamma, i), succ)
        yield RuleInstance(RuleId.WEAK_BANG, (premise,), f.index, i), violation

    # Ex1 reads the conclusion as Γ', !A, Δ, Θ; backwards the !A moves right past Δ.
    for i, f in bangs:
        violation = missing(f.index, "E", sig.exchange)
        rest = _replace(gamma, i)
        for j in range(i + 1, n):
            premise = Sequent(rest[:j] + (f,) + rest[j:], succ)
            yield RuleInstance(RuleId.EX1, (premise,), f.index, i, j), violation
    for i, f in bangs:
        violation = missing(f.index, "E", sig.exchange)
        rest = _replace(gamma, i)
        for j in range(0, i):
            premise = Sequent(rest[:j] + (f,) + rest[j:], succ)
            yield RuleInstance(RuleId.EX2, (premise,), f.index, i, j), violation

    # NContr1 keeps the occurrence and adds a copy after Δ; NContr2 adds one before Δ.
    for i, f in bangs:
        violation = missing(f.index, "C", sig.contraction)
        for k in range(i + 1, n + 1):
            premise = Sequent(gamma[:k] + (f,) + gamma[k:], succ)
            yield RuleInstance(RuleId.NCONTR1, (premise,), f.index, i, k), violation
    for i, f in bangs:
        violation = missing(f.index, "C", sig.contraction)
        for k in range(0, i + 1):
            premise = Sequent(gamma[:k] + (f,) + gamma[k:], succ)
            yield RuleInstance(RuleId.NCONTR2, (premise,), f.index, i, k), violation


def _binary_rules(goal: Sequent):
    gamma, succ = goal.antecedent, goal.succedent
    n = len(gamma)
    if isinstance(succ, With):
        yield RuleInstance(RuleId.WITH_R, (Sequent(gamma, succ.left), Sequent(gamma, succ.right))), None
    for i, f in enumerate(gamma):
        if isinstance(f, Plus):
            premises = (
                Sequent(_replace(gamma, i, f.left), succ),
                Sequent(_replace(gamma, i, f.right), succ),
            )
            yield RuleInstance(RuleId.PLUS_L, premises, position=i), None
    if isinstance(succ, Product):
        for k in range(n + 1):
            premises = (Sequent(gamma[:k], succ.left), Sequent(gamma[k:], succ.right))
            yield RuleInstance(RuleId.PROD_R, premises, split=k), None
    # Argument contexts are tried from the principal formula outward.
    for i, f in enumerate(gamma):
        if isinstance(f, LDiv):
            for k in range(i, -1, -1):
                premises = (
                    Sequent(gamma[k:i], f.left),
                    Sequent(gamma[:k] + (f.right,) + gamma[i + 1 :], succ),
                )
                yield RuleInstance(RuleId.LDIV_L, premises, position=i, split=k), None
    for i, f in enumerate(gamma):
        if isinstance(f, RDiv):
            for k in range(i + 1, n + 1):
                premises = (
                    Sequent(gamma[i + 1 : k], f.right),
                    Sequent(gamma[:i] + (f.left,) + gamma[k:], succ),
                )
                yield RuleInstance(RuleId.RDIV_L, premises, position=i, split=k), None


def _candidates(goal: Sequent, sig: Signature, mode: Mode):
    """Every cut-free instance paired with its violated side condition, if any."""
    gamma, succ = goal.antecedent, goal.succedent
    if len(gamma) == 1 and gamma[0] == succ:
        yield RuleInstance(RuleId.AX, ()), None
    if not gamma and isinstance(succ, Unit) and mode == Mode.L1:
        yield RuleInstance(RuleId.UNIT_R, ()), None
    yield from _right_rules(goal, sig, mode)
    yield from _left_rules(goal, mode)
    yield from _modal_rules(goal, sig)
    yield from _binary_rules(goal)


def _empty_in_mode_l(instance: RuleInstance, mode: Mode) -> bool:
    return mode == Mode.L and any(not p.antecedent for p in instance.premises)


def applicable_rules(goal: Sequent, sig: Signature, mode: Mode) -> List[RuleInstance]:
    """
    All cut-free backward rule instances for ``goal`` in the fixed search order.

    Args:
        goal (Sequent): The sequent to reduce.
        sig (Signature): Signature licensing the modal rules.
        mode (Mode): Calculus variant.

    Returns:
        List[RuleInstance]: Instances whose side conditions hold; empty if none apply.
    """
    if mode == Mode.L and not goal.antecedent:
        return []
    return [
        instance
        for instance, violation in _candidates(goal, sig, mode)
        if violation is None and not _empty_in_mode_l(instance, mode)
    ]


# --------------------------------------------------------------------------- #
# Checking
# --------------------------------------------------------------------------- #


def _cut_matches(node: Derivation) -> bool:
    if len(node.premises) != 2:
        return False
    left, right = (p.conclusion for p in node.premises)
    if right.succedent != node.conclusion.succedent:
        return False
    for i, formula in enumerate(right.antecedent):
        if formula != left.succedent:
            continue
        combined = right.antecedent[:i] + left.antecedent + right.antecedent[i + 1 :]
        if combined == node.conclusion.antecedent:
            return True
    return False


def _check_node(node: Derivation, sig: Signature, mode: Mode) -> Optional[str]:
    conclusion = node.conclusion
    unknown = unknown_indices(sig, sequent_formulas(conclusion))
    if unknown:
        return f"unknown subexponential index {unknown[0]}"
    if mode == Mode.L and not conclusion.antecedent:
        return "empty antecedent in mode L"
    if node.rule in (RuleId.UNIT_L, RuleId.UNIT_R) and mode != Mode.L1:
        return "unit rules require mode L1"
    if node.rule == RuleId.CUT:
        return None if _cut_matches(node) else "premises do not match the cut figure"
    if node.rule in INDEXED_RULES and node.index is None:
        return f"rule {node.rule.value} needs an [index] annotation"
    if node.rule not in INDEXED_RULES and node.index is not None:
        return f"rule {node.rule.value} takes no index"

    premises = tuple(p.conclusion for p in node.premises)
    violations = []
    for instance, violation in _candidates(conclusion, sig, mode):
        if instance.rule != node.rule or instance.premises != premises:
            continue
        if instance.index != node.index:
            continue
        if violation is None:
            return None
        violations.append(violation)
    if violations:
        return violations[0]
    return f"premises do not instantiate {node.rule.value}"


def check_derivation(d: Derivation, sig: Signature, mode: Mode) -> List[str]:
    """
    Check every node of a derivation against the rule table.

    Args:
        d (Derivation): Derivation to check; may contain cuts.
        sig (Signature): Signature for the modal side conditions.
        mode (Mode): Calculus variant.

    Returns:
        List[str]: One ``at <path> (<rule>): <problem>`` line per bad node; empty when valid.
    """
    problems = []
    stack = [(d, "root")]
    while stack:
        node, path = stack.pop()
        problem = _check_node(node, sig, mode)
        if problem is not None:
            problems.append(f"at {path} ({node.rule.value}): {problem}")
        for k in range(len(node.premises) - 1, -1, -1):
            stack.append((node.premises[k], f"{path}.{k}"))
    return problems


def validate_derivation(d: Derivation, sig: Signature, mode: Mode) -> Derivation:
    problems = check_derivation(d, sig, mode)
    if problems:
        raise DerivationError("invalid derivation", problems)
    return d


# --------------------------------------------------------------------------- #
# Search
# --------------------------------------------------------------------------- #

_DEPTH_CUT = 1
_CONTR_CUT = 2
_NO_LOOP = 1 << 30

# Failure bound meaning "fails under every budget".
_ALWAYS = (1 << 30, 1 << 30)


class _NodeLimit(Exception):
    pass


class ProofSearch:
    """
    Iterative-deepening backward search over the cut-free rules.

    Each round raises the height limit by one and runs a depth-first search
    with a branch-local loop check and a per-branch contraction allowance.
    Proved subgoals are cached across rounds; failures are cached with the
    budget they failed under, unless a loop cut below them pointed at a
    strict ancestor.
    """

    def __init__(self, sig: Signature, mode: Mode, budget: SearchBudget):
        self.sig = sig
        self.mode = mode
        self.budget = budget
        self.stats = SearchStats()
        self._proved: Dict[Sequent, Derivation] = {}
        self._failed: Dict[Sequent, List[Tuple[int, int, int]]] = {}
        self._rules: Dict[Sequent, List[RuleInstance]] = {}
        self._round_nodes = 0

    def run(self, goal: Sequent) -> ProofResult:
        if unknown_indices(self.sig, sequent_formulas(goal)):
            return ProofResult(ProofStatus.EXHAUSTED, stats=self.stats)
        for depth in range(1, self.budget.max_depth + 1):
            self.stats.rounds += 1
            self.stats.depth_reached = depth
            self._round_nodes = 0
            try:
                derivation, flags, _ = self._search(goal, depth, self.budget.max_contractions_per_branch, {})
            except _NodeLimit:
                self.stats.node_cutoffs += 1
                logger.debug("node budget exhausted in round %d", depth)
                return ProofResult(ProofStatus.BUDGET, stats=self.stats)
            if derivation is not None:
                logger.debug("proved in round %d after %d nodes", depth, self.stats.nodes)
                return ProofResult(ProofStatus.PROVED, derivation, self.stats)
            if not flags & _DEPTH_CUT:
                status = ProofStatus.BUDGET if flags & _CONTR_CUT else ProofStatus.EXHAUSTED
                return ProofResult(status, stats=self.stats)
        return ProofResult(ProofStatus.BUDGET, stats=self.stats)

    def _instances(self, goal: Sequent) -> List[RuleInstance]:
        cached = self._rules.get(goal)
        if cached is None:
            cached = applicable_rules(goal, self.sig, self.mode)
            self._rules[goal] = cached
        return cached

    def _known_failure(self, goal: Sequent, depth: int, contractions: int) -> Optional[int]:
        """Flags of a recorded failure covering this budget, or None."""
        for d, c, flags in self._failed.get(goal, ()):
            if depth <= d and contractions <= c:
                return flags
        return None

    def _search(
        self, goal: Sequent, depth: int, contractions: int, path: Dict[Sequent, int]
    ) -> Tuple[Optional[Derivation], int, int]:
        """
        Returns the derivation (or None), the cutoff flags met below this goal,
        and the shallowest path level a loop cut below it pointed at.
        """
        proof = self._proved.get(goal)
        if proof is not None:
            self.stats.cache_hits += 1
            return proof, 0, _NO_LOOP
        known = self._known_failure(goal, depth, contractions)
        if known is not None:
            self.stats.cache_hits += 1
            return None, known, _NO_LOOP
        if goal in path:
            self.stats.loop_cutoffs += 1
            return None, 0, path[goal]
        if depth == 0:
            self.stats.depth_cutoffs += 1
            return None, _DEPTH_CUT, _NO_LOOP

        self._round_nodes += 1
        self.stats.nodes += 1
        if self._round_nodes > self.budget.max_nodes:
            raise _NodeLimit()

        level = len(path)
        path[goal] = level
        flags, loop = 0, _NO_LOOP
        try:
            for instance in self._instances(goal):
                remaining = contractions
                if instance.rule in CONTRACTION_RULES:
                    if contractions == 0:
                        self.stats.contraction_cutoffs += 1
                        flags |= _CONTR_CUT
                        continue
                    remaining -= 1
                children = []
                for premise in instance.premises:
                    child, child_flags, child_loop = self._search(premise, depth - 1, remaining, path)
                    flags |= child_flags
                    loop = min(loop, child_loop)
                    if child is None:
                        break
                    children.append(child)
                else:
                    proof = Derivation(goal, instance.rule, tuple(children), instance.index)
                    self._proved[goal] = proof
                    return proof, flags, _NO_LOOP
        finally:
            del path[goal]

        # Loops back to this goal only are redundant; loops to ancestors make the failure path-dependent.
        if loop >= level:
            bound = _ALWAYS if flags == 0 else (depth, contractions)
            self._failed.setdefault(goal, []).append(bound + (flags,))
            loop = _NO_LOOP
        return None, flags, loop


def prove(goal: Sequent, sig: Signature, mode: Mode, budget: Optional[SearchBudget] = None) -> ProofResult:
    """
    Search for a cut-free derivation of ``goal``.

    Args:
        goal (Sequent): Sequent to prove.
        sig (Signature): Subexponential signature.
        mode (Mode): Calculus variant.
        budget (Optional[SearchBudget]): Search limits; defaults apply when omitted.

    Returns:
        ProofResult: ``Proved`` with a checked derivation, ``NotProvedExhausted`` when
        the bounded space was fully explored, otherwise ``NotProvedBudget``.
    """
    budget = budget or SearchBudget()
    if mode == Mode.L and not goal.antecedent:
        return ProofResult(ProofStatus.EXHAUSTED)
    result = ProofSearch(sig, mode, budget).run(goal)
    logger.debug("prove %s: %s %s", format_sequent(goal), result.status.value, result.stats.as_dict())
    return result


def replay_without_cut(
    d: Derivation, sig: Signature, mode: Mode, budget: Optional[SearchBudget] = None
) -> ProofResult:
    """
    Re-prove the conclusion of a (possibly cut-using) derivation by cut-free search.

    Raises:
        DerivationError: If ``d`` does not check.
    """
    validate_derivation(d, sig, mode)
    return prove(d.conclusion, sig, mode, budget)


# --------------------------------------------------------------------------- #
# Text format
# --------------------------------------------------------------------------- #


def format_derivation(d: Derivation) -> str:
    """One node per line, two spaces of indent per level: ``Rule [index] :: sequent``."""
    lines = []
    stack = [(d, 0)]
    while stack:
        node, level = stack.pop()
        label = node.rule.value if node.index is None else f"{node.rule.value} [{node.index}]"
        lines.append(f"{'  ' * level}{label} :: {format_sequent(node.conclusion)}")
        for premise in reversed(node.premises):
            stack.append((premise, level + 1))
    return "\n".join(lines) + "\n"


def _parse_line(line: str, number: int) -> Tuple[int, RuleId, Optional[str], Sequent]:
    stripped = line.lstrip(" ")
    indent = len(line) - len(stripped)
    if indent % 2:
        raise DerivationError(f"line {number}: indentation must be a multiple of two spaces")
    head, sep, body = stripped.partition("::")
    if not sep:
        raise DerivationError(f"line {number}: expected 'Rule [index] :: sequent'")
    parts = head.split()
    try:
        rule = RuleId(parts[0])
    except (ValueError, IndexError):
        raise DerivationError(f"line {number}: unknown rule {head.strip()!r}") from None
    index = None
    if len(parts) == 2 and parts[1].startswith("[") and parts[1].endswith("]"):
        index = parts[1][1:-1]
    elif len(parts) != 1:
        raise DerivationError(f"line {number}: cannot read rule label {head.strip()!r}")
    try:
        sequent = parse_sequent(body.strip())
    except FormulaSyntaxError as e:
        raise DerivationError(f"line {number}: {e}") from None
    return indent // 2, rule, index, sequent


def parse_derivation(text: str) -> Derivation:
    """
    Read the format written by :func:`format_derivation`.

    Blank lines and ``#`` comments are skipped.

    Raises:
        DerivationError: On malformed lines or inconsistent indentation.
    """
    rows = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        rows.append((number,) + _parse_line(line.rstrip(), number))
    if not rows:
        raise DerivationError("empty derivation")

    def build(k: int) -> Tuple[Derivation, int]:
        number, level, rule, index, sequent = rows[k]
        premises = []
        k += 1
        while k < len(rows) and rows[k][1] > level:
            if rows[k][1] != level + 1:
                raise DerivationError(f"line {rows[k][0]}: indentation skips a level")
            child, k = build(k)
            premises.append(child)
        return Derivation(sequent, rule, tuple(premises), index), k

    if rows[0][1] != 0:
        raise DerivationError(f"line {rows[0][0]}: the root must not be indented")
    root, end = build(0)
    if end != len(rows):
        raise DerivationError(f"line {rows[end][0]}: more than one root")
    return root
