"""
Tests for the logic.representation module.
"""

import numpy as np
import pytest

from logic.core import QuantaleError, RepresentationError
from logic.quantale import (
    QuantaleMorphism,
    all_conuclei,
    classify_conucleus,
    compose_morphisms,
    enumerate_homomorphisms,
    identity_morphism,
)
from logic.representation import (
    build_relational,
    classify_transported,
    compose,
    check_functor_composition,
    format_relation,
    hat,
    is_transitive,
    relation_pairs,
    transport_conucleus,
    transport_homomorphism,
    transport_preserves_flags,
)
from logic.semantics import enumerate_quantales


def test_hats_of_two_chain(chain2):
    assert format_relation(hat(chain2, 0)) == "11/00"
    assert np.array_equal(hat(chain2, 1), chain2.leq)
    assert relation_pairs(hat(chain2, 0)) == [(0, 0), (0, 1)]


def test_hat_needs_unit(zero_chain2):
    with pytest.raises(RepresentationError):
        hat(zero_chain2, 0)
    with pytest.raises(RepresentationError):
        build_relational(zero_chain2, strict=False)


def test_composition_matches_product(z2_powerset):
    Q = z2_powerset
    assert np.array_equal(compose(hat(Q, 2), hat(Q, 2)), hat(Q, Q.mul(2, 2)))
    assert is_transitive(hat(Q, Q.top))


def test_two_chain_summary(chain2):
    _, report = build_relational(chain2)
    assert report.summary_line() == "REPRESENTATION size=2 status=pass"
    assert report.rows == [(0, "11/00"), (1, "11/01")]
    assert set(report.checks) == {"mult", "joins", "order", "injective", "carrier"}


def test_union_closure_is_informational(diamond, chain3):
    _, report = build_relational(diamond)
    assert report.passed
    assert not report.union_closed
    _, report = build_relational(chain3)
    assert report.union_closed


def test_every_small_unital_quantale_is_represented():
    for Q in enumerate_quantales(4, unital_only=True):
        family, report = build_relational(Q)
        assert report.passed, report.witnesses
        assert all(family.element_of(R) == a for a, R in enumerate(family.relations))


def test_element_of_unknown_relation(chain3):
    family, _ = build_relational(chain3)
    assert family.element_of(np.ones((3, 3), dtype=bool) & ~np.eye(3, dtype=bool)) is None


def test_transport_every_conucleus_up_to_three():
    for Q in enumerate_quantales(3, unital_only=True):
        family, _ = build_relational(Q)
        for I in all_conuclei(Q):
            transported = transport_conucleus(Q, I, family)
            assert transported.table == I.table
            assert transport_preserves_flags(Q, transported)


def test_transported_flags(z2_powerset):
    Q = z2_powerset
    for I in all_conuclei(Q):
        flags = classify_conucleus(Q, I)
        relational = classify_transported(transport_conucleus(Q, I))
        assert relational == {"is_unital": flags.is_unital, "is_central": flags.is_central, "is_ssi": flags.is_ssi}


def test_transported_apply_rejects_foreign_relation(chain3):
    transported = transport_conucleus(chain3, all_conuclei(chain3)[2])
    with pytest.raises(RepresentationError):
        transported.apply(np.zeros((3, 3), dtype=bool))


def _small_unital():
    return list(enumerate_quantales(3, unital_only=True))


def test_functor_preserves_identity_and_composition():
    quantales = _small_unital()
    for Q1 in quantales:
        for Q2 in quantales:
            for f in enumerate_homomorphisms(Q1, Q2):
                _, report = transport_homomorphism(f)
                assert report.passed, report.witnesses
                for Q3 in quantales:
                    for g in enumerate_homomorphisms(Q2, Q3):
                        assert check_functor_composition(f, g) == []


def test_functor_with_conuclei(chain3):
    for I in all_conuclei(chain3):
        _, report = transport_homomorphism(identity_morphism(chain3, I))
        assert report.passed
        assert report.commutes_with_conuclei


def _non_identity_endomorphism():
    for Q in _small_unital():
        for f in enumerate_homomorphisms(Q, Q):
            if f.mapping != tuple(Q.elements):
                return f
    raise AssertionError("no non-identity endomorphism up to size 3")


def test_identity_check_uses_the_lifted_identity(mocker):
    f = _non_identity_endomorphism()
    _, report = transport_homomorphism(f)
    assert report.preserves_identity

    mocker.patch("logic.representation.identity_morphism", return_value=f)
    _, report = transport_homomorphism(f)
    assert not report.preserves_identity
    assert not report.passed
    assert "the identity does not lift to the identity" in report.witnesses


def test_lift_of_composite(chain2, chain3):
    f = enumerate_homomorphisms(chain2, chain3)[0]
    g = identity_morphism(chain3)
    lifted, _ = transport_homomorphism(compose_morphisms(f, g))
    assert lifted.table == (0, 2)
    assert np.array_equal(lifted.apply(hat(chain2, 1)), hat(chain3, 2))


def test_transport_rejects_invalid_homomorphism(chain2, chain3):
    with pytest.raises(QuantaleError):
        transport_homomorphism(QuantaleMorphism(chain2, chain3, (1, 1)))
