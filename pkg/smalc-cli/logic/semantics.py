"""
Quantale semantics: interpretation of formulas, subexponential
interpretations, model enumeration, countermodel search and soundness sweeps.
"""

import logging
from dataclasses import dataclass, field
from itertools import islice, permutations, product
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from logic.calculus import Derivation, Mode, check_derivation
from logic.core import DerivationError, InterpretationError, QuantaleError, ShardRunner
from logic.quantale import (
    ConucleusFilter,
    ConucleusMap,
    FiniteQuantale,
    Subquantale,
    lattice_tables,
    all_subquantales,
    carrier,
    classify_conucleus,
    conucleus_from_subquantale,
    conucleus_leq,
    find_unit,
    format_quantale,
    open_elements,
    parse_quantale_lines,
    residual_left,
    residual_right,
    validate_conucleus,
    validate_quantale,
)
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
    atoms,
    bang_indices,
    contains_unit,
    format_sequent,
    parse_sequent,
    sequent_formulas,
)

logger = logging.getLogger(__name__)

Valuation = Dict[str, int]


@dataclass(frozen=True)
class SubexpInterpretation:
    """
    Conuclei assigned to subexponential indices over one quantale.

    ``provenance`` records the subquantale each conucleus was built from; it is
    the open-element set when the interpretation was read back from a file.
    """

    quantale: FiniteQuantale
    assignment: Mapping[str, ConucleusMap]
    provenance: Mapping[str, Subquantale] = field(default_factory=dict)
    signature: Optional[Signature] = None

    def __call__(self, index: str) -> ConucleusMap:
        try:
            return self.assignment[index]
        except KeyError:
            raise InterpretationError(f"unknown subexponential index {index}") from None


def sigma_filter(sig: Signature, index: str) -> ConucleusFilter:
    flt = ConucleusFilter.NONE
    if index in sig.weakening:
        flt |= ConucleusFilter.UNITAL
    if index in sig.exchange:
        flt |= ConucleusFilter.CENTRAL
    if index in sig.contraction:
        flt |= ConucleusFilter.SSI
    return flt


def _interpretation_problems(sigma: SubexpInterpretation, sig: Signature) -> List[str]:
    Q = sigma.quantale
    problems = []
    for s in sig.indices:
        for t in sig.indices:
            if sig.leq(s, t) and not conucleus_leq(sigma(t), sigma(s)):
                problems.append(f"σ({t}) is not below σ({s}) although {s} ⪯ {t}")
    for s in sig.indices:
        try:
            flags = classify_conucleus(Q, sigma(s))
        except QuantaleError as e:
            problems.append(f"σ({s}): {e}")
            continue
        if s in sig.weakening and not flags.is_unital:
            problems.append(f"σ({s}) is not unital")
        if s in sig.exchange and not flags.is_central:
            problems.append(f"σ({s}) is not central")
        if s in sig.contraction and not flags.is_ssi:
            problems.append(f"σ({s}) is not strongly square increasing")
        if s in sig.weakening and s in sig.contraction and not flags.is_central:
            problems.append(f"σ({s}) is in W∩C but not central")
        if not flags.respects_unit:
            problems.append(f"σ({s}) does not fix the unit")
    return problems


def build_sigma(Q: FiniteQuantale, sig: Signature, S: Mapping[str, Subquantale]) -> SubexpInterpretation:
    """
    Build the subexponential interpretation of a contravariant family of subquantales.

    Each ``σ(s)`` is the conucleus of ``S(s)`` filtered to unital elements when
    ``s ∈ W``, central ones when ``s ∈ E`` and strongly square increasing ones
    when ``s ∈ C``. Every ``S(s)`` must contain the unit so that ``σ(s)`` fixes
    it; promotion from an empty context is unsound otherwise.

    Raises:
        InterpretationError: For a non-unital quantale, a missing or foreign
            subquantale, a non-contravariant family, or a failed post-check.
    """
    if not Q.is_unital:
        raise InterpretationError("subexponential interpretations need a unital quantale")
    problems = []
    for s in sig.indices:
        if s not in S:
            problems.append(f"no subquantale for index {s}")
        elif S[s].parent != Q:
            problems.append(f"S({s}) belongs to another quantale")
        elif Q.unit not in S[s].members:
            problems.append(f"S({s}) does not contain the unit")
    for s in S:
        if s not in sig.indices:
            problems.append(f"S assigns unknown index {s}")
    if problems:
        raise InterpretationError("invalid subquantale family", problems)
    for s in sig.indices:
        for t in sig.indices:
            if sig.leq(s, t) and not S[t].members <= S[s].members:
                problems.append(f"not contravariant: {s} ⪯ {t} but S({t}) ⊄ S({s})")
    if problems:
        raise InterpretationError("invalid subquantale family", problems)

    assignment = {s: conucleus_from_subquantale(Q, S[s], sigma_filter(sig, s)) for s in sig.indices}
    sigma = SubexpInterpretation(Q, assignment, dict(S), sig)
    problems = _interpretation_problems(sigma, sig)
    if problems:
        raise InterpretationError("subexponential interpretation fails its invariants", problems)
    return sigma


def interpret(
    Q: FiniteQuantale, sigma: Optional[SubexpInterpretation], f: Mapping[str, int], A: Formula
) -> int:
    """
    Value of a formula under a valuation.

    Raises:
        InterpretationError: On a missing atom, an unknown index, or ``1`` in a
            non-unital quantale.
    """
    if isinstance(A, Atom):
        if A.name not in f:
            raise InterpretationError(f"valuation misses atom {A.name}")
        value = f[A.name]
        if not 0 <= value < Q.n:
            raise InterpretationError(f"atom {A.name} is mapped outside the carrier")
        return value
    if isinstance(A, Unit):
        if not Q.is_unital:
            raise InterpretationError("the unit needs a unital quantale")
        return Q.unit
    if isinstance(A, Bang):
        if sigma is None:
            raise InterpretationError(f"unknown subexponential index {A.index}")
        return sigma(A.index)(interpret(Q, sigma, f, A.body))
    left = interpret(Q, sigma, f, A.left)
    right = interpret(Q, sigma, f, A.right)
    if isinstance(A, Product):
        return Q.mul(left, right)
    if isinstance(A, LDiv):
        return residual_left(Q, left, right)
    if isinstance(A, RDiv):
        return residual_right(Q, left, right)
    if isinstance(A, With):
        return Q.meet(left, right)
    if isinstance(A, Plus):
        return Q.join(left, right)
    raise TypeError(f"not a formula: {A!r}")


def holds(Q: FiniteQuantale, sigma: Optional[SubexpInterpretation], f: Mapping[str, int], seq: Sequent) -> bool:
    """True iff the product of the antecedent values is below the succedent value."""
    if not seq.antecedent and not Q.is_unital:
        raise InterpretationError("an empty antecedent needs a unital quantale")
    values = [interpret(Q, sigma, f, A) for A in seq.antecedent]
    return Q.le(Q.product(values), interpret(Q, sigma, f, seq.succedent))


def valuations(Q: FiniteQuantale, names: Sequence[str]) -> Iterator[Valuation]:
    for values in product(Q.elements, repeat=len(names)):
        yield dict(zip(names, values))


def entails(
    seq: Sequent, models: Iterable[Tuple[FiniteQuantale, Optional[SubexpInterpretation]]]
) -> Optional[Tuple[FiniteQuantale, Optional[SubexpInterpretation], Valuation]]:
    """First model and valuation refuting ``seq``, or None when it holds in all of them."""
    names = atoms(*sequent_formulas(seq))
    for Q, sigma in models:
        for f in valuations(Q, names):
            if not holds(Q, sigma, f, seq):
                return Q, sigma, f
    return None


# --------------------------------------------------------------------------- #
# Enumeration
# --------------------------------------------------------------------------- #


def _relabel(leq: Tuple[Tuple[bool, ...], ...], perm: Sequence[int]) -> Tuple[Tuple[bool, ...], ...]:
    n = len(leq)
    out = [[False] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            out[perm[a]][perm[b]] = leq[a][b]
    return tuple(tuple(row) for row in out)


def _upper_triangular(leq) -> bool:
    n = len(leq)
    return all(not leq[a][b] or a <= b for a in range(n) for b in range(n))


def enumerate_lattices(size: int) -> List[Tuple[Tuple[bool, ...], ...]]:
    """
    All lattices with ``size`` elements up to isomorphism.

    Labels form a linear extension of the order with ⊥ = 0 and ⊤ = size-1; each
    lattice is given by its lexicographically least such labelling.
    """
    if size < 1:
        return []
    if size == 1:
        return [((True,),)]
    middle = list(range(1, size - 1))
    pairs = [(a, b) for a in middle for b in middle if a < b]
    found = set()
    for mask in range(1 << len(pairs)):
        chosen = {p for i, p in enumerate(pairs) if mask >> i & 1}
        if any((a, b) in chosen and (b, c) in chosen and (a, c) not in chosen for a, b in chosen for c in middle):
            continue
        leq = tuple(
            tuple(a == b or a == 0 or b == size - 1 or (a, b) in chosen for b in range(size))
            for a in range(size)
        )
        if lattice_tables(np.array(leq, dtype=bool))[2]:
            continue
        labellings = []
        for order in permutations(middle):
            perm = [0] + list(order) + [size - 1]
            relabelled = _relabel(leq, perm)
            if _upper_triangular(relabelled):
                labellings.append(relabelled)
        found.add(min(labellings))
    return sorted(found)


def _automorphisms(leq) -> List[Tuple[int, ...]]:
    n = len(leq)
    autos = []
    for order in permutations(range(1, n - 1)):
        perm = (0,) + order + (n - 1,) if n > 1 else (0,)
        if _relabel(leq, perm) == leq:
            autos.append(perm)
    return autos or [(0,)]


def _is_quantale_table(mult, join, n: int) -> bool:
    for a in range(n):
        row = mult[a]
        for b in range(n):
            ab = row[b]
            for c in range(n):
                if mult[ab][c] != row[mult[b][c]]:
                    return False
                if row[join[b][c]] != join[ab][row[c]]:
                    return False
                if mult[join[b][c]][a] != join[mult[b][a]][mult[c][a]]:
                    return False
    return True


def enumerate_quantales_on(leq, unital_only: bool = False) -> Iterator[FiniteQuantale]:
    """
    Every quantale structure on one lattice, up to lattice automorphism.

    Products of join-irreducible pairs are chosen by backtracking in a
    monotone way, extended to the whole carrier by joins and then checked.
    Candidates come out in the order of their join-irreducible products, so
    the constant-⊥ multiplication is always first.
    """
    leq = tuple(tuple(bool(x) for x in row) for row in leq)
    n = len(leq)
    join_np, _, _ = lattice_tables(np.array(leq, dtype=bool))
    join = tuple(tuple(int(x) for x in row) for row in join_np)

    def join_all(elements):
        value = 0
        for e in elements:
            value = join[value][e]
        return value

    irreducible = [
        a for a in range(1, n) if join_all(b for b in range(n) if b != a and leq[b][a]) != a
    ]
    below = [[x for x in irreducible if leq[x][a]] for a in range(n)]
    pairs = [(x, y) for x in irreducible for y in irreducible]
    lower = [
        [k for k, (x2, y2) in enumerate(pairs[:i]) if leq[x2][x] and leq[y2][y]]
        for i, (x, y) in enumerate(pairs)
    ]
    autos = [p for p in _automorphisms(leq) if list(p) != list(range(n))]
    values = [0] * len(pairs)
    position = {p: k for k, p in enumerate(pairs)}

    def extend():
        return tuple(
            tuple(join_all(values[position[(x, y)]] for x in below[a] for y in below[b]) for b in range(n))
            for a in range(n)
        )

    def canonical(table) -> bool:
        for perm in autos:
            relabelled = [[0] * n for _ in range(n)]
            for a in range(n):
                for b in range(n):
                    relabelled[perm[a]][perm[b]] = perm[table[a][b]]
            if tuple(map(tuple, relabelled)) < table:
                return False
        return True

    def backtrack(i: int) -> Iterator[FiniteQuantale]:
        if i == len(pairs):
            table = extend()
            if not _is_quantale_table(table, join, n) or not canonical(table):
                return
            unit = find_unit(leq, table)
            if unital_only and unit is None:
                return
            yield validate_quantale(leq, table, unit)
            return
        for v in range(n):
            if all(leq[values[k]][v] for k in lower[i]):
                values[i] = v
                yield from backtrack(i + 1)

    yield from backtrack(0)


def enumerate_quantales(max_size: int, unital_only: bool = False) -> Iterator[FiniteQuantale]:
    """
    Every quantale with at most ``max_size`` elements, up to isomorphism.

    Order: by size, then by lattice, then by the products of join-irreducibles.
    """
    for size in range(1, max_size + 1):
        count = 0
        for leq in enumerate_lattices(size):
            for Q in enumerate_quantales_on(leq, unital_only):
                count += 1
                yield Q
        logger.debug("size %d: %d quantales", size, count)


# --------------------------------------------------------------------------- #
# Subexponential assignments and countermodels
# --------------------------------------------------------------------------- #


def subexp_assignments(
    Q: FiniteQuantale, sig: Signature, indices: Optional[Sequence[str]] = None
) -> Iterator[SubexpInterpretation]:
    """
    Every interpretation generated by contravariant families over ``indices``.

    Indices outside ``indices`` get the intersection of the subquantales of the
    listed indices below them, or the whole carrier.
    """
    if not Q.is_unital:
        return
    indices = list(sig.indices if indices is None else indices)
    candidates = [S for S in all_subquantales(Q) if Q.unit in S.members]
    whole = carrier(Q)
    for choice in product(candidates, repeat=len(indices)):
        chosen = dict(zip(indices, choice))
        if any(
            sig.leq(s, t) and not chosen[t].members <= chosen[s].members
            for s in indices
            for t in indices
        ):
            continue
        family = {}
        for t in sig.indices:
            if t in chosen:
                family[t] = chosen[t]
                continue
            members = whole.members
            for s in indices:
                if sig.leq(s, t):
                    members = members & chosen[s].members
            family[t] = Subquantale(Q, members)
        yield build_sigma(Q, sig, family)


@dataclass(frozen=True)
class Countermodel:
    sequent: Sequent
    quantale: FiniteQuantale
    sigma: Optional[SubexpInterpretation]
    valuation: Mapping[str, int]

    def refutes(self) -> bool:
        return not holds(self.quantale, self.sigma, self.valuation, self.sequent)


def _lattice_only(seq: Sequent) -> bool:
    if len(seq.antecedent) != 1:
        return False

    def plain(A: Formula) -> bool:
        if isinstance(A, Atom):
            return True
        return isinstance(A, (With, Plus)) and plain(A.left) and plain(A.right)

    return plain(seq.antecedent[0]) and plain(seq.succedent)


def _refute_in(seq: Sequent, sig: Signature, names: List[str], indices: List[str], Q: FiniteQuantale) -> Optional[Countermodel]:
    sigmas: Iterable[Optional[SubexpInterpretation]] = [None]
    if indices:
        sigmas = subexp_assignments(Q, sig, indices)
    for sigma in sigmas:
        for f in valuations(Q, names):
            if not holds(Q, sigma, f, seq):
                return Countermodel(seq, Q, sigma, f)
    return None


def find_countermodel(
    seq: Sequent,
    sig: Signature,
    max_size: int = 6,
    budget: Optional[int] = None,
    jobs: int = 1,
) -> Optional[Countermodel]:
    """
    First refuting (quantale, interpretation, valuation) in the declared order.

    Args:
        seq (Sequent): Sequent to refute.
        sig (Signature): Signature for the subexponentials in ``seq``.
        max_size (int): Largest carrier to try.
        budget (Optional[int]): Maximum number of quantales to examine.
        jobs (int): Worker count; the answer does not depend on it.

    Returns:
        Optional[Countermodel]: The witness, or None when none was found.

    Raises:
        InterpretationError: If ``seq`` uses an index missing from ``sig``.
    """
    formulas = sequent_formulas(seq)
    indices = bang_indices(*formulas)
    unknown = [s for s in indices if s not in sig]
    if unknown:
        raise InterpretationError(f"unknown subexponential index {unknown[0]}")
    names = atoms(*formulas)
    unital_only = bool(indices) or contains_unit(*formulas) or not seq.antecedent

    if _lattice_only(seq):
        # Only meets and joins occur, so the first quantale of each lattice decides it.
        def shards():
            for size in range(1, max_size + 1):
                for leq in enumerate_lattices(size):
                    yield next(enumerate_quantales_on(leq))
    else:
        def shards():
            return enumerate_quantales(max_size, unital_only)

    stream = shards()
    if budget is not None:
        stream = islice(stream, budget)
    _, witness = ShardRunner(jobs).first(lambda Q: _refute_in(seq, sig, names, indices, Q), stream)
    if witness is not None:
        logger.debug("countermodel of size %d for %s", witness.quantale.n, format_sequent(seq))
    return witness


def models_up_to(sig: Signature, max_size: int) -> List[Tuple[FiniteQuantale, Optional[SubexpInterpretation]]]:
    """All unital quantales up to ``max_size`` with every interpretation of ``sig``."""
    models = []
    for Q in enumerate_quantales(max_size, unital_only=True):
        if sig.indices:
            models.extend((Q, sigma) for sigma in subexp_assignments(Q, sig))
        else:
            models.append((Q, None))
    return models


@dataclass
class SoundnessReport:
    derivations: int = 0
    models: int = 0
    evaluations: int = 0
    violations: List[Countermodel] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def soundness_sweep(
    corpus: Sequence[Derivation],
    models: Sequence[Tuple[FiniteQuantale, Optional[SubexpInterpretation]]],
    sig: Signature,
    mode: Mode = Mode.L1,
    jobs: int = 1,
) -> SoundnessReport:
    """
    Evaluate every derivation's conclusion in every model under every valuation.

    Raises:
        DerivationError: If a corpus entry does not check; nothing is evaluated then.
    """
    for position, d in enumerate(corpus):
        problems = check_derivation(d, sig, mode)
        if problems:
            raise DerivationError(f"corpus entry {position} is not a derivation", problems)

    def sweep(model) -> Tuple[int, List[Countermodel]]:
        Q, sigma = model
        evaluations, bad = 0, []
        for d in corpus:
            seq = d.conclusion
            for f in valuations(Q, atoms(*sequent_formulas(seq))):
                evaluations += 1
                if not holds(Q, sigma, f, seq):
                    bad.append(Countermodel(seq, Q, sigma, f))
        return evaluations, bad

    report = SoundnessReport(derivations=len(corpus), models=len(models))
    for evaluations, bad in ShardRunner(jobs).map(sweep, models):
        report.evaluations += evaluations
        report.violations.extend(bad)
    return report


# --------------------------------------------------------------------------- #
# Countermodel reports
# --------------------------------------------------------------------------- #


def format_countermodel(witness: Countermodel) -> str:
    lines = [f"sequent {format_sequent(witness.sequent)}", format_quantale(witness.quantale).rstrip("\n")]
    for name, value in witness.valuation.items():
        lines.append(f"valuation {name}={value}")
    if witness.sigma is not None:
        for index, I in witness.sigma.assignment.items():
            lines.append(f"sigma {index}={' '.join(str(x) for x in I.table)}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ModelReport:
    """A quantale with an optional interpretation and valuation, as read from a file."""

    quantale: FiniteQuantale
    sigma: Optional[SubexpInterpretation]
    valuation: Dict[str, int]
    sequent: Optional[Sequent] = None


def interpretation_from_tables(Q: FiniteQuantale, tables: Mapping[str, Sequence[int]]) -> Optional[SubexpInterpretation]:
    if not tables:
        return None
    assignment = {s: validate_conucleus(Q, table) for s, table in tables.items()}
    provenance = {s: open_elements(Q, I) for s, I in assignment.items()}
    return SubexpInterpretation(Q, assignment, provenance)


def parse_countermodel(text: str, source: str = "<countermodel>") -> ModelReport:
    """
    Read a countermodel report: optional ``sequent`` line, a quantale block,
    then ``valuation atom=elem`` and ``sigma index=<n elements>`` lines.

    Raises:
        QuantaleError: On a malformed report.
    """
    lines = [line.split("#", 1)[0].strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    sequent = None
    if lines and lines[0].startswith("sequent "):
        sequent = parse_sequent(lines[0][len("sequent ") :])
        lines = lines[1:]
    Q, rest = parse_quantale_lines(lines, source)
    valuation: Dict[str, int] = {}
    tables: Dict[str, List[int]] = {}
    for line in rest:
        keyword, _, body = line.partition(" ")
        name, sep, value = body.partition("=")
        try:
            if keyword == "valuation" and sep:
                valuation[name.strip()] = int(value)
            elif keyword == "sigma" and sep:
                tables[name.strip()] = [int(x) for x in value.split()]
            else:
                raise ValueError(line)
        except ValueError:
            raise QuantaleError(f"{source}: cannot read {line!r}") from None
    return ModelReport(Q, interpretation_from_tables(Q, tables), valuation, sequent)


def load_countermodel(path: Union[str, Path]) -> ModelReport:
    path = Path(path)
    return parse_countermodel(path.read_text(encoding="utf-8"), str(path))


def parse_sigma_text(Q: FiniteQuantale, text: str, source: str = "<sigma>") -> Optional[SubexpInterpretation]:
    """
    Read ``sigma index=<n elements>`` lines into an interpretation over Q.

    Raises:
        QuantaleError: On malformed lines or a table that is not a conucleus.
    """
    tables: Dict[str, List[int]] = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, body = line.partition(" ")
        name, sep, value = body.partition("=")
        try:
            if keyword != "sigma" or not sep:
                raise ValueError(line)
            tables[name.strip()] = [int(x) for x in value.split()]
        except ValueError:
            raise QuantaleError(f"{source}: cannot read {line!r}") from None
    return interpretation_from_tables(Q, tables)


def load_sigma(Q: FiniteQuantale, path: Union[str, Path]) -> Optional[SubexpInterpretation]:
    path = Path(path)
    return parse_sigma_text(Q, path.read_text(encoding="utf-8"), str(path))
