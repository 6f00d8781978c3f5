"""
Finite quantales and quantic conuclei.

Elements of a quantale of size n are the integers 0..n-1. The order and the
multiplication are read-only numpy tables; binary joins, meets and the bottom
element are derived once at validation time, which is enough for all joins
because the carrier is finite.
"""

import logging
from dataclasses import dataclass
from enum import Flag
from functools import lru_cache, reduce
from itertools import product
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from logic.core import QuantaleError

logger = logging.getLogger(__name__)


def _read_only(table, dtype) -> np.ndarray:
    array = np.array(table, dtype=dtype)
    array.flags.writeable = False
    return array


def lattice_tables(leq: np.ndarray) -> Tuple[Optional[np.ndarray], Optional[np.ndarray], List[str]]:
    """Binary join and meet tables of a partial order, or the pairs lacking them."""
    n = leq.shape[0]
    join = np.zeros((n, n), dtype=int)
    meet = np.zeros((n, n), dtype=int)
    problems = []
    for a in range(n):
        for b in range(n):
            upper = np.flatnonzero(leq[a] & leq[b])
            least = [u for u in upper if leq[u, upper].all()]
            lower = np.flatnonzero(leq[:, a] & leq[:, b])
            greatest = [v for v in lower if leq[lower, v].all()]
            if not least:
                problems.append(f"no join for ({a},{b})")
            else:
                join[a, b] = least[0]
            if not greatest:
                problems.append(f"no meet for ({a},{b})")
            else:
                meet[a, b] = greatest[0]
    if problems:
        return None, None, problems
    return join, meet, []


class FiniteQuantale:
    """
    A validated finite quantale. Build instances with :func:`validate_quantale`.

    Attributes:
        n (int): Carrier size.
        leq (np.ndarray): ``leq[a, b]`` iff ``a <= b``.
        mult (np.ndarray): Multiplication table.
        unit (Optional[int]): Multiplicative unit, when declared.
        bottom (int): Least element.
        top (int): Greatest element.
    """

    def __init__(self, leq: np.ndarray, mult: np.ndarray, unit: Optional[int], join: np.ndarray, meet: np.ndarray):
        self.n: int = leq.shape[0]
        self.leq = _read_only(leq, bool)
        self.mult = _read_only(mult, int)
        self.unit: Optional[int] = unit
        self.join_table = _read_only(join, int)
        self.meet_table = _read_only(meet, int)
        self.bottom: int = int(np.flatnonzero(self.leq.all(axis=1))[0])
        self.top: int = int(np.flatnonzero(self.leq.all(axis=0))[0])
        # Plain tuples for the hot evaluation paths.
        self._leq = tuple(tuple(bool(x) for x in row) for row in self.leq)
        self._mult = tuple(tuple(int(x) for x in row) for row in self.mult)
        self._join = tuple(tuple(int(x) for x in row) for row in self.join_table)
        self._meet = tuple(tuple(int(x) for x in row) for row in self.meet_table)
        self._key = (self.n, self.leq.tobytes(), self.mult.tobytes(), unit)

    @property
    def elements(self) -> range:
        return range(self.n)

    @property
    def is_unital(self) -> bool:
        return self.unit is not None

    def le(self, a: int, b: int) -> bool:
        return self._leq[a][b]

    def mul(self, a: int, b: int) -> int:
        return self._mult[a][b]

    def join(self, a: int, b: int) -> int:
        return self._join[a][b]

    def meet(self, a: int, b: int) -> int:
        return self._meet[a][b]

    def join_all(self, elements: Iterable[int]) -> int:
        return reduce(self.join, elements, self.bottom)

    def meet_all(self, elements: Iterable[int]) -> int:
        return reduce(self.meet, elements, self.top)

    def product(self, elements: Sequence[int]) -> int:
        """Ordered product; the empty product is the unit."""
        if not elements:
            if self.unit is None:
                raise QuantaleError("empty product in a non-unital quantale")
            return self.unit
        return reduce(self.mul, elements)

    def is_commutative(self) -> bool:
        return bool((self.mult == self.mult.T).all())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteQuantale) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"FiniteQuantale(n={self.n}, unit={self.unit})"


def quantale_problems(leq, mult, unit: Optional[int] = None) -> List[str]:
    """Every violated quantale axiom, with witnesses; empty when the tables are valid."""
    leq = np.asarray(leq, dtype=bool)
    mult = np.asarray(mult)
    if leq.ndim != 2 or leq.shape[0] != leq.shape[1] or leq.shape[0] == 0:
        return ["leq must be a nonempty square table"]
    n = leq.shape[0]
    if mult.shape != (n, n):
        return [f"mult must be {n}x{n}, got {mult.shape}"]
    if ((mult < 0) | (mult >= n)).any():
        return ["mult contains values outside the carrier"]
    if unit is not None and not 0 <= unit < n:
        return [f"unit {unit} is outside the carrier"]

    problems = []
    for a in range(n):
        if not leq[a, a]:
            problems.append(f"order not reflexive at {a}")
        for b in range(n):
            if a != b and leq[a, b] and leq[b, a]:
                problems.append(f"order not antisymmetric at ({a},{b})")
            for c in range(n):
                if leq[a, b] and leq[b, c] and not leq[a, c]:
                    problems.append(f"order not transitive at ({a},{b},{c})")
    if problems:
        return problems
    join, _, lattice = lattice_tables(leq)
    if lattice:
        return lattice
    bottom = int(np.flatnonzero(leq.all(axis=1))[0])

    for a, b, c in product(range(n), repeat=3):
        if mult[mult[a, b], c] != mult[a, mult[b, c]]:
            problems.append(f"associativity fails at ({a},{b},{c})")
        if mult[a, join[b, c]] != join[mult[a, b], mult[a, c]]:
            problems.append(f"distributivity fails at ({a};{b},{c})")
        if mult[join[b, c], a] != join[mult[b, a], mult[c, a]]:
            problems.append(f"right distributivity fails at ({b},{c};{a})")
    for a in range(n):
        if mult[a, bottom] != bottom or mult[bottom, a] != bottom:
            problems.append(f"empty-join distributivity fails at {a}: {a}·⊥ or ⊥·{a} is not ⊥")
    if unit is not None:
        for a in range(n):
            if mult[unit, a] != a or mult[a, unit] != a:
                problems.append(f"unit {unit} fails at {a}")
    return problems


def validate_quantale(leq, mult, unit: Optional[int] = None) -> FiniteQuantale:
    """
    Check raw tables exhaustively and build a quantale.

    Args:
        leq: n×n boolean order table, ``leq[a][b]`` meaning ``a <= b``.
        mult: n×n multiplication table.
        unit (Optional[int]): Declared unit element.

    Returns:
        FiniteQuantale: The validated quantale.

    Raises:
        QuantaleError: With one problem per violated axiom.
    """
    problems = quantale_problems(leq, mult, unit)
    if problems:
        raise QuantaleError("invalid quantale", problems)
    leq = np.asarray(leq, dtype=bool)
    join, meet, _ = lattice_tables(leq)
    return FiniteQuantale(leq, np.asarray(mult, dtype=int), unit, join, meet)


def find_unit(leq, mult) -> Optional[int]:
    mult = np.asarray(mult)
    n = mult.shape[0]
    for e in range(n):
        if all(mult[e, a] == a and mult[a, e] == a for a in range(n)):
            return e
    return None


def locale_quantale(leq) -> FiniteQuantale:
    """A finite distributive lattice as a quantale with meet as product and top as unit."""
    leq = np.asarray(leq, dtype=bool)
    _, meet, problems = lattice_tables(leq)
    if problems:
        raise QuantaleError("not a lattice", problems)
    top = int(np.flatnonzero(leq.all(axis=0))[0])
    return validate_quantale(leq, meet, top)


def powerset_quantale(table: Sequence[Sequence[int]], unit: Optional[int] = None) -> FiniteQuantale:
    """
    The quantale of subsets of a finite semigroup, ordered by inclusion.

    Subsets are encoded as bitmasks, so element ``k`` of the result is the set
    of generators whose bit is set in ``k``.

    Args:
        table: Semigroup multiplication on ``0..m-1``.
        unit (Optional[int]): Monoid unit; the singleton ``{unit}`` becomes the quantale unit.
    """
    m = len(table)
    size = 1 << m
    leq = [[(x & ~y) == 0 for y in range(size)] for x in range(size)]
    mult = [[0] * size for _ in range(size)]
    for x in range(size):
        for y in range(size):
            result = 0
            for i in range(m):
                if x >> i & 1:
                    for j in range(m):
                        if y >> j & 1:
                            result |= 1 << table[i][j]
            mult[x][y] = result
    return validate_quantale(leq, mult, None if unit is None else 1 << unit)


def residual_left(Q: FiniteQuantale, a: int, b: int) -> int:
    """``a \\ b``: the join of all c with ``a·c <= b``."""
    return Q.join_all(c for c in Q.elements if Q.le(Q.mul(a, c), b))


def residual_right(Q: FiniteQuantale, b: int, a: int) -> int:
    """``b / a``: the join of all c with ``c·a <= b``."""
    return Q.join_all(c for c in Q.elements if Q.le(Q.mul(c, a), b))


# --------------------------------------------------------------------------- #
# Subquantales
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class Subquantale:
    parent: FiniteQuantale
    members: FrozenSet[int]

    def __contains__(self, a: int) -> bool:
        return a in self.members

    def sorted_members(self) -> List[int]:
        return sorted(self.members)


def subquantale_problems(Q: FiniteQuantale, members: Iterable[int]) -> List[str]:
    members = frozenset(members)
    problems = []
    if Q.bottom not in members:
        problems.append("missing ⊥ (join of the empty family)")
    for a in sorted(members):
        if not 0 <= a < Q.n:
            problems.append(f"{a} is not an element")
            continue
        for b in sorted(members):
            if Q.mul(a, b) not in members:
                problems.append(f"not closed under ·: {a}·{b} = {Q.mul(a, b)}")
            if Q.join(a, b) not in members:
                problems.append(f"not closed under ∨: {a}∨{b} = {Q.join(a, b)}")
    return problems


def make_subquantale(Q: FiniteQuantale, members: Iterable[int]) -> Subquantale:
    members = frozenset(members)
    problems = subquantale_problems(Q, members)
    if problems:
        raise QuantaleError("not a subquantale", problems)
    return Subquantale(Q, members)


def carrier(Q: FiniteQuantale) -> Subquantale:
    return Subquantale(Q, frozenset(Q.elements))


def centre(Q: FiniteQuantale) -> Subquantale:
    members = [a for a in Q.elements if all(Q.mul(a, b) == Q.mul(b, a) for b in Q.elements)]
    return make_subquantale(Q, members)


def is_ssi(Q: FiniteQuantale, a: int) -> bool:
    for b in Q.elements:
        aba = Q.mul(Q.mul(a, b), a)
        if not (Q.le(Q.mul(a, b), aba) and Q.le(Q.mul(b, a), aba)):
            return False
    return True


def ssi_elements(Q: FiniteQuantale) -> Subquantale:
    """Strongly square increasing elements; closure is checked, not assumed."""
    return make_subquantale(Q, [a for a in Q.elements if is_ssi(Q, a)])


def unital_elements(Q: FiniteQuantale) -> Subquantale:
    """Elements below the unit."""
    if not Q.is_unital:
        raise QuantaleError("unital elements need a unital quantale")
    return make_subquantale(Q, [a for a in Q.elements if Q.le(a, Q.unit)])


def square_increasing_elements(Q: FiniteQuantale) -> FrozenSet[int]:
    return frozenset(a for a in Q.elements if Q.le(a, Q.mul(a, a)))


@lru_cache(maxsize=256)
def all_subquantales(Q: FiniteQuantale) -> Tuple[Subquantale, ...]:
    """Every subquantale, ordered by the bitmask of its members."""
    found = []
    others = [a for a in Q.elements if a != Q.bottom]
    for mask in range(1 << len(others)):
        members = frozenset([Q.bottom] + [a for i, a in enumerate(others) if mask >> i & 1])
        if not subquantale_problems(Q, members):
            found.append(Subquantale(Q, members))
    found.sort(key=lambda s: sum(1 << a for a in s.members))
    return tuple(found)


# --------------------------------------------------------------------------- #
# Conuclei
# --------------------------------------------------------------------------- #


class ConucleusFilter(Flag):
    NONE = 0
    UNITAL = 1
    CENTRAL = 2
    SSI = 4


@dataclass(frozen=True)
class ConucleusMap:
    parent: FiniteQuantale
    table: Tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.table[a]

    @property
    def respects_unit(self) -> bool:
        Q = self.parent
        return Q.is_unital and self.table[Q.unit] == Q.unit


@dataclass(frozen=True)
class ConucleusClass:
    is_unital: bool
    is_central: bool
    is_ssi: bool
    respects_unit: bool


def conucleus_problems(Q: FiniteQuantale, table: Sequence[int]) -> List[str]:
    if len(table) != Q.n or any(not 0 <= x < Q.n for x in table):
        return [f"table must map each of the {Q.n} elements into the carrier"]
    problems = []
    for a in Q.elements:
        if not Q.le(table[a], a):
            problems.append(f"not deflationary at {a}")
        if table[table[a]] != table[a]:
            problems.append(f"not idempotent at {a}")
        for b in Q.elements:
            if Q.le(a, b) and not Q.le(table[a], table[b]):
                problems.append(f"not monotone at ({a},{b})")
            p = Q.mul(table[a], table[b])
            if table[p] != p:
                problems.append(f"product of opens not open at ({a},{b})")
    return problems


def validate_conucleus(Q: FiniteQuantale, table: Sequence[int]) -> ConucleusMap:
    """
    Check the four conucleus axioms. Whether ``I ε = ε`` is exposed as
    ``respects_unit`` rather than required.

    Raises:
        QuantaleError: With one problem per violation.
    """
    problems = conucleus_problems(Q, table)
    if problems:
        raise QuantaleError("invalid conucleus", problems)
    return ConucleusMap(Q, tuple(int(x) for x in table))


def identity_conucleus(Q: FiniteQuantale) -> ConucleusMap:
    return ConucleusMap(Q, tuple(Q.elements))


def _filter_predicate(Q: FiniteQuantale, flt: ConucleusFilter):
    central = centre(Q).members if flt & ConucleusFilter.CENTRAL else None
    ssi = ssi_elements(Q).members if flt & ConucleusFilter.SSI else None

    def accept(q: int) -> bool:
        if flt & ConucleusFilter.UNITAL and not Q.le(q, Q.unit):
            return False
        if central is not None and q not in central:
            return False
        return ssi is None or q in ssi

    return accept


def conucleus_from_subquantale(
    Q: FiniteQuantale, S: Subquantale, flt: ConucleusFilter = ConucleusFilter.NONE
) -> ConucleusMap:
    """
    ``I a = ⋁{q ∈ S | q <= a and q passes the filter}``.

    Raises:
        QuantaleError: For the unital filter on a non-unital quantale, or if the
            result fails the conucleus axioms.
    """
    if S.parent != Q:
        raise QuantaleError("subquantale belongs to another quantale")
    if flt & ConucleusFilter.UNITAL and not Q.is_unital:
        raise QuantaleError("the unital filter needs a unital quantale")
    accept = _filter_predicate(Q, flt)
    candidates = [q for q in sorted(S.members) if accept(q)]
    table = [Q.join_all(q for q in candidates if Q.le(q, a)) for a in Q.elements]
    return validate_conucleus(Q, table)


def open_elements(Q: FiniteQuantale, I: ConucleusMap) -> Subquantale:
    """Fixpoints of I, with ``I a = ⋁{q open | q <= a}`` verified pointwise."""
    opens = [a for a in Q.elements if I(a) == a]
    sub = make_subquantale(Q, opens)
    for a in Q.elements:
        unfolded = Q.join_all(q for q in opens if Q.le(q, a))
        if unfolded != I(a):
            raise QuantaleError(f"open unfolding fails at {a}: {unfolded} != {I(a)}")
    return sub


def conucleus_leq(I1: ConucleusMap, I2: ConucleusMap) -> bool:
    if I1.parent != I2.parent:
        raise QuantaleError("conuclei live on different quantales")
    Q = I1.parent
    return all(Q.le(I1(a), I2(a)) for a in Q.elements)


def _is_unital(Q: FiniteQuantale, I: ConucleusMap) -> bool:
    return Q.is_unital and all(Q.le(I(a), Q.unit) for a in Q.elements)


def _is_central(Q: FiniteQuantale, I: ConucleusMap) -> bool:
    return all(Q.mul(I(a), b) == Q.mul(b, I(a)) for a in Q.elements for b in Q.elements)


def _is_ssi(Q: FiniteQuantale, I: ConucleusMap) -> bool:
    return all(is_ssi(Q, I(a)) for a in Q.elements)


def classify_conucleus(
    Q: FiniteQuantale, I: ConucleusMap, above: Sequence[ConucleusMap] = ()
) -> ConucleusClass:
    """
    Flag a conucleus as unital, central and strongly square increasing.

    Args:
        Q (FiniteQuantale): The quantale.
        I (ConucleusMap): Conucleus on Q.
        above (Sequence[ConucleusMap]): Conuclei whose flags must transfer down to I
            whenever ``I <= J``.

    Raises:
        QuantaleError: If unital and ssi do not imply central, or a flag of a
            larger conucleus fails to transfer.
    """
    flags = ConucleusClass(_is_unital(Q, I), _is_central(Q, I), _is_ssi(Q, I), I.respects_unit)
    if flags.is_unital and flags.is_ssi and not flags.is_central:
        raise QuantaleError("unital and ssi conucleus that is not central")
    for J in above:
        if not conucleus_leq(I, J):
            continue
        upper = classify_conucleus(Q, J)
        for name in ("is_unital", "is_central", "is_ssi"):
            if getattr(upper, name) and not getattr(flags, name):
                raise QuantaleError(f"{name} does not transfer to a smaller conucleus")
    return flags


@lru_cache(maxsize=256)
def all_conuclei(Q: FiniteQuantale) -> Tuple[ConucleusMap, ...]:
    """Every conucleus, one per subquantale of open elements."""
    return tuple(conucleus_from_subquantale(Q, S) for S in all_subquantales(Q))


def brute_force_conuclei(Q: FiniteQuantale) -> List[ConucleusMap]:
    return [
        ConucleusMap(Q, table)
        for table in product(range(Q.n), repeat=Q.n)
        if not conucleus_problems(Q, table)
    ]


# --------------------------------------------------------------------------- #
# Homomorphisms
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class QuantaleMorphism:
    source: FiniteQuantale
    target: FiniteQuantale
    mapping: Tuple[int, ...]
    source_conucleus: Optional[ConucleusMap] = None
    target_conucleus: Optional[ConucleusMap] = None

    def __call__(self, a: int) -> int:
        return self.mapping[a]


def homomorphism_problems(f: QuantaleMorphism) -> List[str]:
    Q1, Q2 = f.source, f.target
    if len(f.mapping) != Q1.n or any(not 0 <= x < Q2.n for x in f.mapping):
        return ["mapping must send every source element into the target"]
    problems = []
    if f(Q1.bottom) != Q2.bottom:
        problems.append("⊥ is not preserved")
    for a in Q1.elements:
        for b in Q1.elements:
            if f(Q1.mul(a, b)) != Q2.mul(f(a), f(b)):
                problems.append(f"· not preserved at ({a},{b})")
            if f(Q1.join(a, b)) != Q2.join(f(a), f(b)):
                problems.append(f"∨ not preserved at ({a},{b})")
    if Q1.is_unital and Q2.is_unital and f(Q1.unit) != Q2.unit:
        problems.append("unit is not preserved")
    I1, I2 = f.source_conucleus, f.target_conucleus
    if (I1 is None) != (I2 is None):
        problems.append("conuclei must be given on both sides or neither")
    elif I1 is not None:
        for a in Q1.elements:
            if f(I1(a)) != I2(f(a)):
                problems.append(f"conucleus not preserved at {a}")
    return problems


def validate_homomorphism(f: QuantaleMorphism) -> QuantaleMorphism:
    problems = homomorphism_problems(f)
    if problems:
        raise QuantaleError("invalid homomorphism", problems)
    return f


def is_homomorphism(
    mapping: Sequence[int],
    Q1: FiniteQuantale,
    Q2: FiniteQuantale,
    I1: Optional[ConucleusMap] = None,
    I2: Optional[ConucleusMap] = None,
) -> bool:
    return not homomorphism_problems(QuantaleMorphism(Q1, Q2, tuple(mapping), I1, I2))


def compose_morphisms(f: QuantaleMorphism, g: QuantaleMorphism) -> QuantaleMorphism:
    """``g ∘ f``."""
    if f.target != g.source:
        raise QuantaleError("morphisms are not composable")
    return QuantaleMorphism(
        f.source,
        g.target,
        tuple(g(f(a)) for a in f.source.elements),
        f.source_conucleus,
        g.target_conucleus,
    )


def identity_morphism(Q: FiniteQuantale, I: Optional[ConucleusMap] = None) -> QuantaleMorphism:
    return QuantaleMorphism(Q, Q, tuple(Q.elements), I, I)


def subquantale_image(f: QuantaleMorphism, S: Subquantale) -> Subquantale:
    """The image of a subquantale; validated as a subquantale of the target."""
    validate_homomorphism(f)
    return make_subquantale(f.target, {f(a) for a in S.members})


def enumerate_homomorphisms(
    Q1: FiniteQuantale,
    Q2: FiniteQuantale,
    I1: Optional[ConucleusMap] = None,
    I2: Optional[ConucleusMap] = None,
) -> List[QuantaleMorphism]:
    found = []
    for mapping in product(range(Q2.n), repeat=Q1.n):
        f = QuantaleMorphism(Q1, Q2, mapping, I1, I2)
        if not homomorphism_problems(f):
            found.append(f)
    return found


# --------------------------------------------------------------------------- #
# Lemma suite
# --------------------------------------------------------------------------- #


def verify_lemmas(Q: FiniteQuantale) -> List[str]:
    """
    Check the structural facts about subquantales and conuclei on one quantale.

    Returns:
        List[str]: Counterexample descriptions; empty when every fact holds.
    """
    failures = []

    def attempt(label: str, check) -> None:
        try:
            result = check()
        except QuantaleError as e:
            failures.append(f"{label}: {e}")
            return
        if result:
            failures.extend(f"{label}: {line}" for line in result)

    attempt("centre", lambda: centre(Q) and [])
    attempt("ssi subquantale", lambda: ssi_elements(Q) and [])
    attempt(
        "ssi implies square increasing",
        lambda: [f"{a}" for a in ssi_elements(Q).members if a not in square_increasing_elements(Q)],
    )

    if Q.is_unital:
        attempt("elements below unit", lambda: unital_elements(Q) and [])

        def unital_ssi_commute():
            return [
                f"{a}·{b} != {b}·{a}"
                for a in ssi_elements(Q).members
                if Q.le(a, Q.unit)
                for b in Q.elements
                if Q.mul(a, b) != Q.mul(b, a)
            ]

        attempt("unital ssi elements are central", unital_ssi_commute)

    subs = all_subquantales(Q)
    conuclei = all_conuclei(Q)
    filters = [ConucleusFilter(k) for k in range(8) if Q.is_unital or not k & 1]

    for S, I in zip(subs, conuclei):
        attempt(f"open unfolding of {S.sorted_members()}", lambda I=I: open_elements(Q, I) and [])

        def opens_match(S=S, I=I):
            opens = frozenset(a for a in Q.elements if I(a) == a)
            return [] if opens == S.members else [f"open set {sorted(opens)}"]

        attempt(f"subquantale {S.sorted_members()} is the open set", opens_match)

        def open_adjunction(I=I):
            return [
                f"open {a} vs {b}"
                for a in Q.elements
                if I(a) == a
                for b in Q.elements
                if Q.le(a, b) != Q.le(a, I(b))
            ]

        attempt("open elements below b are below I b", open_adjunction)

        for flt in filters:

            def filtered(S=S, flt=flt):
                J = conucleus_from_subquantale(Q, S, flt)
                flags = classify_conucleus(Q, J)
                missing = []
                if flt & ConucleusFilter.UNITAL and not flags.is_unital:
                    missing.append("unital")
                if flt & ConucleusFilter.CENTRAL and not flags.is_central:
                    missing.append("central")
                if flt & ConucleusFilter.SSI and not flags.is_ssi:
                    missing.append("ssi")
                return [f"filter {flt} lacks {m}" for m in missing]

            attempt(f"filtered conucleus on {S.sorted_members()}", filtered)

    for S1, I1 in zip(subs, conuclei):
        for S2, I2 in zip(subs, conuclei):
            if S1.members <= S2.members and not conucleus_leq(I1, I2):
                failures.append(f"inclusion {S1.sorted_members()} ⊆ {S2.sorted_members()} not monotone")
        attempt("downward transfer", lambda I1=I1: classify_conucleus(Q, I1, conuclei) and [])

    for I in conuclei:
        below = [J for J in conuclei if conucleus_leq(J, I)]
        for I1 in below:
            for I2 in below:
                for a1 in Q.elements:
                    for a2 in Q.elements:
                        p = Q.mul(I1(a1), I2(a2))
                        if not Q.le(p, I(p)):
                            failures.append(f"products of smaller opens escape I at ({a1},{a2})")
    return failures


# --------------------------------------------------------------------------- #
# Files
# --------------------------------------------------------------------------- #


def format_quantale(Q: FiniteQuantale) -> str:
    unit = "none" if Q.unit is None else str(Q.unit)
    lines = [f"quantale n={Q.n} unital={unit}", "leq"]
    lines += ["".join("1" if Q.le(a, b) else "0" for b in Q.elements) for a in Q.elements]
    lines.append("mult")
    lines += [" ".join(str(Q.mul(a, b)) for b in Q.elements) for a in Q.elements]
    return "\n".join(lines) + "\n"


def _content_lines(text: str) -> List[str]:
    return [line.split("#", 1)[0].strip() for line in text.splitlines() if line.split("#", 1)[0].strip()]


def parse_quantale_lines(lines: List[str], source: str = "<quantale>") -> Tuple[FiniteQuantale, List[str]]:
    """Read one quantale block from the front of ``lines``; returns the rest."""
    try:
        header = lines[0].split()
        if header[0] != "quantale":
            raise ValueError("missing 'quantale' header")
        fields = dict(part.split("=", 1) for part in header[1:])
        n = int(fields["n"])
        unit = None if fields.get("unital", "none") == "none" else int(fields["unital"])
        if lines[1] != "leq" or lines[2 + n] != "mult":
            raise ValueError("expected 'leq' and 'mult' sections")
        leq = [[c == "1" for c in row] for row in lines[2 : 2 + n]]
        if any(len(row) != n for row in leq):
            raise ValueError(f"leq rows must have {n} bits")
        mult = [[int(x) for x in row.split()] for row in lines[3 + n : 3 + 2 * n]]
        if len(mult) != n or any(len(row) != n for row in mult):
            raise ValueError(f"mult must have {n} rows of {n} entries")
    except (IndexError, KeyError, ValueError) as e:
        raise QuantaleError(f"{source}: malformed quantale file ({e})") from None
    return validate_quantale(leq, mult, unit), lines[3 + 2 * n :]


def parse_quantale_text(text: str, source: str = "<quantale>") -> FiniteQuantale:
    Q, rest = parse_quantale_lines(_content_lines(text), source)
    if rest:
        raise QuantaleError(f"{source}: unexpected trailing lines")
    return Q


def load_quantale(path: Union[str, Path]) -> FiniteQuantale:
    path = Path(path)
    return parse_quantale_text(path.read_text(encoding="utf-8"), str(path))


def format_conucleus(I: ConucleusMap) -> str:
    return "conucleus\n" + " ".join(str(x) for x in I.table) + "\n"


def parse_conucleus_text(Q: FiniteQuantale, text: str, source: str = "<conucleus>") -> ConucleusMap:
    lines = _content_lines(text)
    try:
        if lines[0] != "conucleus" or len(lines) != 2:
            raise ValueError("expected 'conucleus' and one line of elements")
        table = [int(x) for x in lines[1].split()]
    except (IndexError, ValueError) as e:
        raise QuantaleError(f"{source}: malformed conucleus file ({e})") from None
    return validate_conucleus(Q, table)


def load_conucleus(Q: FiniteQuantale, path: Union[str, Path]) -> ConucleusMap:
    path = Path(path)
    return parse_conucleus_text(Q, path.read_text(encoding="utf-8"), str(path))
