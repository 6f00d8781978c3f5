"""
Tests for the logic.quantale module.
"""

import itertools

import pytest

from logic.core import QuantaleError
from logic.quantale import (
    ConucleusFilter,
    QuantaleMorphism,
    all_conuclei,
    all_subquantales,
    brute_force_conuclei,
    carrier,
    centre,
    classify_conucleus,
    compose_morphisms,
    conucleus_from_subquantale,
    conucleus_leq,
    enumerate_homomorphisms,
    find_unit,
    format_conucleus,
    format_quantale,
    identity_conucleus,
    identity_morphism,
    is_homomorphism,
    is_ssi,
    load_quantale,
    make_subquantale,
    open_elements,
    parse_conucleus_text,
    parse_quantale_text,
    powerset_quantale,
    residual_left,
    residual_right,
    ssi_elements,
    subquantale_image,
    unital_elements,
    validate_conucleus,
    validate_homomorphism,
    validate_quantale,
    verify_lemmas,
)
from logic.semantics import enumerate_quantales

CHAIN2_LEQ = [[True, True], [False, True]]


@pytest.fixture
def left_zero():
    """Subsets of the left-zero semigroup on {0, 1}: non-commutative, no unit."""
    return powerset_quantale([[0, 0], [1, 1]])


def test_chain_basics(chain2, chain3):
    assert (chain2.bottom, chain2.top, chain2.unit) == (0, 1, 1)
    assert chain3.join(0, 2) == 2
    assert chain3.meet(1, 2) == 1
    assert chain3.product([]) == 2
    assert chain3.product([2, 1, 2]) == 1
    assert chain3.is_commutative()


def test_tables_are_read_only(chain2):
    with pytest.raises(ValueError):
        chain2.mult[0, 0] = 1


def test_empty_product_needs_unit(zero_chain2):
    with pytest.raises(QuantaleError):
        zero_chain2.product([])


def test_validate_rejects_non_lattice():
    # Two incomparable maximal elements above ⊥.
    leq = [[True, True, True], [False, True, False], [False, False, True]]
    with pytest.raises(QuantaleError) as error:
        validate_quantale(leq, [[0, 0, 0]] * 3)
    assert "no join for (1,2)" in error.value.problems


def test_validate_rejects_bad_unit_and_bottom():
    with pytest.raises(QuantaleError) as error:
        validate_quantale(CHAIN2_LEQ, [[0, 0], [0, 0]], unit=1)
    assert "unit 1 fails at 1" in error.value.problems
    with pytest.raises(QuantaleError) as error:
        validate_quantale(CHAIN2_LEQ, [[1, 1], [1, 1]])
    assert any("empty-join distributivity" in p for p in error.value.problems)


def test_validate_rejects_shapes():
    with pytest.raises(QuantaleError) as error:
        validate_quantale(CHAIN2_LEQ, [[0, 0, 0]])
    assert "mult must be 2x2" in str(error.value)


def test_find_unit(chain3, zero_chain2):
    assert find_unit(chain3.leq, chain3.mult) == 2
    assert find_unit(zero_chain2.leq, zero_chain2.mult) is None


def test_residuals_in_a_chain(chain3):
    assert residual_left(chain3, 2, 0) == 0
    assert residual_left(chain3, 1, 0) == 0
    assert residual_left(chain3, 0, 1) == 2
    assert residual_left(chain3, 2, 1) == 1
    assert residual_right(chain3, 1, 1) == 2


def assert_adjoint(Q):
    for a in Q.elements:
        for b in Q.elements:
            for c in Q.elements:
                assert Q.le(Q.mul(a, c), b) == Q.le(c, residual_left(Q, a, b)), (Q, a, b, c)
                assert Q.le(Q.mul(c, a), b) == Q.le(c, residual_right(Q, b, a)), (Q, a, b, c)


def test_residuals_are_adjoint(left_zero):
    assert_adjoint(left_zero)


@pytest.mark.parametrize("size", [1, 2, 3])
def test_residuals_are_adjoint_in_every_small_quantale(size):
    for Q in enumerate_quantales(size):
        if Q.n == size:
            assert_adjoint(Q)


def test_centre_and_ssi_of_left_zero(left_zero):
    assert not left_zero.is_commutative()
    assert centre(left_zero).members == frozenset({0})
    assert ssi_elements(left_zero).members == frozenset({0, 3})
    assert not is_ssi(left_zero, 1)


def test_locale_elements_are_ssi(diamond):
    assert ssi_elements(diamond).members == frozenset(diamond.elements)
    assert centre(diamond).members == frozenset(diamond.elements)


def test_unital_elements(z2_powerset, zero_chain2):
    assert unital_elements(z2_powerset).members == frozenset({0, 1})
    with pytest.raises(QuantaleError):
        unital_elements(zero_chain2)


def test_make_subquantale_reports_problems(z2_powerset):
    with pytest.raises(QuantaleError) as error:
        make_subquantale(z2_powerset, [0, 1, 2])
    assert "not closed under ∨: 1∨2 = 3" in error.value.problems
    with pytest.raises(QuantaleError) as error:
        make_subquantale(z2_powerset, [1])
    assert "missing ⊥ (join of the empty family)" in error.value.problems


def test_subquantales_of_chain(chain2, chain3):
    assert [s.sorted_members() for s in all_subquantales(chain2)] == [[0], [0, 1]]
    assert len(all_subquantales(chain3)) == 4


def test_conuclei_from_subquantales(chain2):
    tables = [I.table for I in all_conuclei(chain2)]
    assert tables == [(0, 0), (0, 1)]


def test_unital_filter(z2_powerset):
    I = conucleus_from_subquantale(z2_powerset, carrier(z2_powerset), ConucleusFilter.UNITAL)
    assert I.table == (0, 1, 0, 1)
    flags = classify_conucleus(z2_powerset, I)
    assert flags.is_unital and flags.respects_unit


def test_unital_filter_needs_unit(zero_chain2):
    with pytest.raises(QuantaleError):
        conucleus_from_subquantale(zero_chain2, carrier(zero_chain2), ConucleusFilter.UNITAL)


def test_filters_restrict_opens(left_zero):
    central = conucleus_from_subquantale(left_zero, carrier(left_zero), ConucleusFilter.CENTRAL)
    assert central.table == (0, 0, 0, 0)
    ssi = conucleus_from_subquantale(left_zero, carrier(left_zero), ConucleusFilter.SSI)
    assert ssi.table == (0, 0, 0, 3)
    assert classify_conucleus(left_zero, ssi).is_ssi


def test_identity_conucleus_classification(left_zero):
    flags = classify_conucleus(left_zero, identity_conucleus(left_zero))
    assert not flags.is_central
    assert not flags.is_ssi
    assert not flags.is_unital


def test_validate_conucleus_problems(chain2):
    with pytest.raises(QuantaleError) as error:
        validate_conucleus(chain2, [1, 1])
    assert "not deflationary at 0" in error.value.problems
    with pytest.raises(QuantaleError):
        validate_conucleus(chain2, [0])


def test_open_elements_and_order(chain3):
    bottom, whole = all_conuclei(chain3)[0], identity_conucleus(chain3)
    assert open_elements(chain3, whole).members == frozenset(chain3.elements)
    assert conucleus_leq(bottom, whole)
    assert not conucleus_leq(whole, bottom)


@pytest.mark.parametrize("name", ["chain2", "chain3", "zero_chain2", "diamond", "z2_powerset", "left_zero"])
def test_conuclei_match_brute_force(name, request):
    Q = request.getfixturevalue(name)
    assert {I.table for I in all_conuclei(Q)} == {I.table for I in brute_force_conuclei(Q)}


def test_conuclei_match_brute_force_up_to_three():
    for Q in enumerate_quantales(3):
        assert {I.table for I in all_conuclei(Q)} == {I.table for I in brute_force_conuclei(Q)}


@pytest.mark.parametrize("name", ["chain2", "chain3", "zero_chain2", "diamond", "z2_powerset", "left_zero"])
def test_lemmas_on_fixtures(name, request):
    assert verify_lemmas(request.getfixturevalue(name)) == []


def test_lemmas_up_to_three():
    for Q in enumerate_quantales(3):
        assert verify_lemmas(Q) == [], Q


def test_lemmas_on_quantales_of_size_four():
    checked = unital = 0
    for Q in enumerate_quantales(4):
        if Q.n == 4:
            assert verify_lemmas(Q) == [], Q
            checked += 1
            unital += Q.is_unital
    assert 0 < unital < checked


def test_homomorphisms_between_chains(chain2, chain3):
    found = enumerate_homomorphisms(chain2, chain3)
    assert [f.mapping for f in found] == [(0, 2)]
    f = found[0]
    image = subquantale_image(f, carrier(chain2))
    assert image.members == frozenset({0, 2})


def test_images_of_subquantales_up_to_three():
    small = list(enumerate_quantales(3))
    found = 0
    for Q1, Q2 in itertools.product(small, repeat=2):
        for f in enumerate_homomorphisms(Q1, Q2):
            found += 1
            for S in all_subquantales(Q1):
                image = subquantale_image(f, S)
                assert image.members == frozenset(f(a) for a in S.members)
                assert image.parent == Q2
    assert found > len(small)


def test_homomorphism_problems(chain2, chain3):
    with pytest.raises(QuantaleError) as error:
        validate_homomorphism(QuantaleMorphism(chain2, chain3, (1, 2)))
    assert "⊥ is not preserved" in error.value.problems


def test_is_homomorphism(chain2, chain3):
    assert is_homomorphism((0, 2), chain2, chain3)
    assert not is_homomorphism((0, 1), chain2, chain3)
    assert not is_homomorphism((1, 2), chain2, chain3)


def test_homomorphism_with_conuclei(chain3):
    I = all_conuclei(chain3)[1]
    validate_homomorphism(identity_morphism(chain3, I))
    with pytest.raises(QuantaleError) as error:
        validate_homomorphism(QuantaleMorphism(chain3, chain3, (0, 1, 2), I, None))
    assert "conuclei must be given on both sides or neither" in error.value.problems


def test_composition(chain2, chain3):
    f = enumerate_homomorphisms(chain2, chain3)[0]
    g = identity_morphism(chain3)
    assert compose_morphisms(f, g).mapping == f.mapping
    with pytest.raises(QuantaleError):
        compose_morphisms(g, f)


def test_quantale_text_round_trip(left_zero):
    assert parse_quantale_text(format_quantale(left_zero)) == left_zero


def test_shipped_quantales(data_dir, chain2, chain3):
    assert load_quantale(data_dir / "quantales" / "q2.qnt") == chain2
    assert load_quantale(data_dir / "quantales" / "q3.qnt") == chain3


@pytest.mark.parametrize(
    "text",
    [
        "",
        "lattice n=2\nleq\n11\n01\nmult\n0 0\n0 1\n",
        "quantale n=2 unital=1\nleq\n111\n01\nmult\n0 0\n0 1\n",
        "quantale n=2 unital=1\nleq\n11\n01\nmult\n0 0\n",
    ],
)
def test_malformed_quantale_files(text):
    with pytest.raises(QuantaleError) as error:
        parse_quantale_text(text)
    assert "malformed quantale file" in str(error.value)


def test_trailing_lines_rejected(chain2):
    with pytest.raises(QuantaleError):
        parse_quantale_text(format_quantale(chain2) + "extra\n")


def test_conucleus_text(chain3):
    I = all_conuclei(chain3)[2]
    assert parse_conucleus_text(chain3, format_conucleus(I)) == I
    with pytest.raises(QuantaleError):
        parse_conucleus_text(chain3, "conucleus\n0 x 2\n")
