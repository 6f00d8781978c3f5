"""
Relational representation of finite unital quantales.

Each element ``a`` becomes the relation ``â = {(b, c) | b <= a·c}`` on the
carrier, stored as a boolean matrix. Composition is the boolean matrix
product and the unit maps to the order relation itself.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from logic.core import RepresentationError
from logic.quantale import (
    ConucleusMap,
    FiniteQuantale,
    QuantaleMorphism,
    classify_conucleus,
    compose_morphisms,
    identity_morphism,
    open_elements,
    validate_homomorphism,
)

logger = logging.getLogger(__name__)

Relation = np.ndarray


def hat(Q: FiniteQuantale, a: int) -> Relation:
    """
    The relation ``{(b, c) | b <= a·c}`` as an n×n boolean matrix.

    Raises:
        RepresentationError: If Q has no unit.
    """
    if not Q.is_unital:
        raise RepresentationError("the relational representation needs a unital quantale")
    relation = np.array([[Q.le(b, Q.mul(a, c)) for c in Q.elements] for b in Q.elements], dtype=bool)
    relation.flags.writeable = False
    return relation


def compose(R: Relation, S: Relation) -> Relation:
    """Relational composition ``R ∘ S = {(x, z) | ∃y. (x, y) ∈ R, (y, z) ∈ S}``."""
    return (R.astype(int) @ S.astype(int)) > 0


def contained(R: Relation, S: Relation) -> bool:
    return bool((R <= S).all())


def is_transitive(R: Relation) -> bool:
    return contained(compose(R, R), R)


def relation_pairs(R: Relation) -> List[Tuple[int, int]]:
    return [(int(b), int(c)) for b, c in zip(*np.nonzero(R))]


def format_relation(R: Relation) -> str:
    return "/".join("".join("1" if x else "0" for x in row) for row in R)


@dataclass
class RelationalQuantale:
    source: FiniteQuantale
    relations: Tuple[Relation, ...]
    identity: Relation
    carrier_relation: Relation
    _index: Dict[bytes, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for a, R in enumerate(self.relations):
            self._index.setdefault(R.tobytes(), a)

    def element_of(self, R: Relation) -> Optional[int]:
        """Source element whose hat is R, or None for relations outside the family."""
        return self._index.get(np.asarray(R, dtype=bool).tobytes())

    def join(self, members: Sequence[Relation]) -> Relation:
        return relational_join(self, members)


def relational_join(family: RelationalQuantale, members: Sequence[Relation]) -> Relation:
    """
    Join in the family's inclusion order: the least member containing the union.

    Raises:
        RepresentationError: If no member contains the union, or several minimal ones do.
    """
    n = family.source.n
    union = np.zeros((n, n), dtype=bool)
    for R in members:
        union |= R
    uppers = [R for R in family.relations if contained(union, R)]
    least = [R for R in uppers if all(contained(R, U) for U in uppers)]
    if not least:
        raise RepresentationError("the family has no least upper bound for this union")
    return least[0]


@dataclass
class RepresentationReport:
    size: int
    rows: List[Tuple[int, str]] = field(default_factory=list)
    checks: Dict[str, bool] = field(default_factory=dict)
    union_closed: bool = True
    witnesses: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def summary_line(self) -> str:
        return f"REPRESENTATION size={self.size} status={'pass' if self.passed else 'fail'}"


def build_relational(Q: FiniteQuantale, strict: bool = True) -> Tuple[RelationalQuantale, RepresentationReport]:
    """
    Represent Q by relations on its own carrier and verify the isomorphism.

    Checks composition against multiplication, joins of every subset against the
    family join, the order embedding, injectivity, and that ``⊤̂`` is a
    transitive relation containing every member.

    Args:
        Q (FiniteQuantale): A unital quantale.
        strict (bool): Raise on the first failed check instead of reporting it.

    Raises:
        RepresentationError: For non-unital input, or a failed check when ``strict``.
    """
    relations = tuple(hat(Q, a) for a in Q.elements)
    family = RelationalQuantale(Q, relations, relations[Q.unit], relations[Q.top])
    report = RepresentationReport(Q.n, rows=[(a, format_relation(R)) for a, R in enumerate(relations)])
    witnesses = report.witnesses

    for a in Q.elements:
        for b in Q.elements:
            if not np.array_equal(compose(relations[a], relations[b]), relations[Q.mul(a, b)]):
                witnesses.append(f"mult: hat({a})∘hat({b}) != hat({Q.mul(a, b)})")
    report.checks["mult"] = not witnesses

    before = len(witnesses)
    for size in range(Q.n + 1):
        for subset in combinations(Q.elements, size):
            members = [relations[a] for a in subset]
            expected = relations[Q.join_all(subset)]
            try:
                joined = relational_join(family, members)
            except RepresentationError as e:
                witnesses.append(f"joins: {list(subset)}: {e}")
                continue
            if not np.array_equal(joined, expected):
                witnesses.append(f"joins: join of {list(subset)} is not hat({Q.join_all(subset)})")
            union = np.zeros((Q.n, Q.n), dtype=bool)
            for R in members:
                union |= R
            if size and family.element_of(union) is None:
                report.union_closed = False
    report.checks["joins"] = len(witnesses) == before

    before = len(witnesses)
    for a in Q.elements:
        for b in Q.elements:
            if contained(relations[a], relations[b]) != Q.le(a, b):
                witnesses.append(f"order: hat({a}) ⊆ hat({b}) disagrees with {a} <= {b}")
    report.checks["order"] = len(witnesses) == before

    before = len(witnesses)
    if len({R.tobytes() for R in relations}) != Q.n:
        witnesses.append("injective: two elements share a relation")
    report.checks["injective"] = len(witnesses) == before

    before = len(witnesses)
    if not is_transitive(family.carrier_relation):
        witnesses.append("carrier: hat(⊤) is not transitive")
    if not np.array_equal(family.identity, Q.leq):
        witnesses.append("carrier: hat(ε) is not the order relation")
    for a, R in enumerate(relations):
        if not contained(R, family.carrier_relation):
            witnesses.append(f"carrier: hat({a}) escapes hat(⊤)")
    report.checks["carrier"] = len(witnesses) == before

    if strict and not report.passed:
        raise RepresentationError("representation check failed", witnesses)
    logger.debug("representation of size %d: %s", Q.n, report.checks)
    return family, report


@dataclass
class TransportedConucleus:
    """A conucleus moved to the relation family; ``table[a]`` is the element of ``Î(â)``."""

    family: RelationalQuantale
    conucleus: ConucleusMap
    table: Tuple[int, ...]

    def apply(self, R: Relation) -> Relation:
        a = self.family.element_of(R)
        if a is None:
            raise RepresentationError("relation is outside the family")
        return self.family.relations[self.table[a]]


def transport_conucleus(
    Q: FiniteQuantale, I: ConucleusMap, family: Optional[RelationalQuantale] = None
) -> TransportedConucleus:
    """
    Move I to the relations: ``Î(â)`` is the family join of the hats of the open
    elements contained in ``â``.

    Raises:
        RepresentationError: If ``Î(â) != hat(I a)`` for some a, or Î breaks a
            conucleus axiom on the family.
    """
    if family is None:
        family, _ = build_relational(Q)
    opens = sorted(open_elements(Q, I).members)
    relations = family.relations
    table = []
    for a in Q.elements:
        inside = [relations[s] for s in opens if contained(relations[s], relations[a])]
        image = relational_join(family, inside)
        if not np.array_equal(image, relations[I(a)]):
            raise RepresentationError(f"transport fails at {a}: Î(hat({a})) != hat({I(a)})")
        table.append(family.element_of(image))
    transported = TransportedConucleus(family, I, tuple(table))

    problems = []
    for a, R in enumerate(relations):
        inner = transported.apply(R)
        if not contained(inner, R):
            problems.append(f"Î(hat({a})) is not inside hat({a})")
        if not np.array_equal(transported.apply(inner), inner):
            problems.append(f"Î is not idempotent at hat({a})")
        for b, S in enumerate(relations):
            if contained(R, S) and not contained(inner, transported.apply(S)):
                problems.append(f"Î is not monotone at ({a},{b})")
            product = compose(inner, transported.apply(S))
            if family.element_of(product) is None or not np.array_equal(transported.apply(product), product):
                problems.append(f"Î(hat({a}))∘Î(hat({b})) is not open")
    if problems:
        raise RepresentationError("transported conucleus is not a conucleus", problems)
    return transported


def classify_transported(transported: TransportedConucleus) -> Dict[str, bool]:
    """Unital, central and ssi flags computed on the relations alone."""
    family = transported.family
    relations = family.relations
    images = [transported.apply(R) for R in relations]
    unital = all(contained(R, family.identity) for R in images)
    central = all(np.array_equal(compose(R, S), compose(S, R)) for R in images for S in relations)
    ssi = all(
        contained(compose(R, S), compose(compose(R, S), R)) and contained(compose(S, R), compose(compose(R, S), R))
        for R in images
        for S in relations
    )
    return {"is_unital": unital, "is_central": central, "is_ssi": ssi}


def transport_preserves_flags(Q: FiniteQuantale, transported: TransportedConucleus) -> bool:
    flags = classify_conucleus(Q, transported.conucleus)
    relational = classify_transported(transported)
    return all(getattr(flags, name) == value for name, value in relational.items())


@dataclass
class RelationalMorphism:
    source: RelationalQuantale
    target: RelationalQuantale
    table: Tuple[int, ...]

    def apply(self, R: Relation) -> Relation:
        a = self.source.element_of(R)
        if a is None:
            raise RepresentationError("relation is outside the source family")
        return self.target.relations[self.table[a]]


@dataclass
class FunctorReport:
    well_defined: bool
    commutes_with_conuclei: bool
    preserves_identity: bool
    witnesses: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.well_defined and self.commutes_with_conuclei and self.preserves_identity


def _lift(
    f: QuantaleMorphism, source: RelationalQuantale, target: RelationalQuantale
) -> Tuple[RelationalMorphism, List[str]]:
    """Read each source relation back to its element, map it, and re-encode with ``hat``."""
    witnesses = []
    table = []
    seen: Dict[bytes, int] = {}
    for R in source.relations:
        a = source.element_of(R)
        if a is None:
            raise RepresentationError("relation is outside the source family")
        image = target.element_of(hat(f.target, f(a)))
        if image is None:
            raise RepresentationError(f"hat({f(a)}) is outside the target family")
        key = R.tobytes()
        if key in seen and seen[key] != image:
            witnesses.append(f"f̂ is not well defined at hat({a})")
        seen.setdefault(key, image)
        table.append(image)
    return RelationalMorphism(source, target, tuple(table)), witnesses


def transport_homomorphism(f: QuantaleMorphism) -> Tuple[RelationalMorphism, FunctorReport]:
    """
    Lift a validated homomorphism to the relation families: ``f̂(â) = hat(f a)``.

    The identity check lifts ``id`` through the same decode and re-encode path
    and compares the result with the identity on relations.

    Raises:
        QuantaleError: If f fails validation.
    """
    validate_homomorphism(f)
    source, _ = build_relational(f.source)
    target, _ = build_relational(f.target)

    lifted, witnesses = _lift(f, source, target)
    well_defined = not witnesses

    commutes = True
    if f.source_conucleus is not None and f.target_conucleus is not None:
        I1 = transport_conucleus(f.source, f.source_conucleus, source)
        I2 = transport_conucleus(f.target, f.target_conucleus, target)
        for a, R in enumerate(source.relations):
            if not np.array_equal(lifted.apply(I1.apply(R)), I2.apply(lifted.apply(R))):
                commutes = False
                witnesses.append(f"f̂ does not commute with the conuclei at hat({a})")

    lifted_identity, identity_witnesses = _lift(identity_morphism(f.source, f.source_conucleus), source, source)
    preserves_identity = not identity_witnesses and all(
        np.array_equal(lifted_identity.apply(R), R) for R in source.relations
    )
    if not preserves_identity:
        witnesses.append("the identity does not lift to the identity")
    return lifted, FunctorReport(well_defined, commutes, preserves_identity, witnesses)


def check_functor_composition(f: QuantaleMorphism, g: QuantaleMorphism) -> List[str]:
    """Witnesses where the lift of ``g ∘ f`` differs from ``ĝ ∘ f̂``; empty when they agree."""
    f_hat, _ = transport_homomorphism(f)
    g_hat, _ = transport_homomorphism(g)
    gf_hat, _ = transport_homomorphism(compose_morphisms(f, g))
    return [
        f"composition differs at hat({a})"
        for a, R in enumerate(f_hat.source.relations)
        if not np.array_equal(gf_hat.apply(R), g_hat.apply(f_hat.apply(R)))
    ]
