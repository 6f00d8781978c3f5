"""
Tests for the logic.syntax module.
"""

import random

import pytest

from logic.core import FormulaSyntaxError, SignatureError
from logic.syntax import (
    Atom,
    Bang,
    LDiv,
    Plus,
    Product,
    RDiv,
    RawSignature,
    Sequent,
    Unit,
    With,
    atoms,
    bang_indices,
    contains_unit,
    format_formula,
    format_sequent,
    format_signature,
    load_signature,
    parse_formula,
    parse_sequent,
    parse_signature_text,
    signature_problems,
    unknown_indices,
    validate_signature,
)

a, b, c = Atom("a"), Atom("b"), Atom("c")


def test_parse_left_division_sequent():
    assert parse_sequent("a, a\\b -> b") == Sequent((a, LDiv(a, b)), b)


def test_parse_right_division_keeps_numerator_left():
    assert parse_formula("b/a") == RDiv(b, a)


def test_parse_precedence():
    assert parse_formula("a * b \\ c & a | b") == Plus(With(LDiv(Product(a, b), c), a), b)


def test_parse_bang_binds_tightest():
    assert parse_formula("!{s}a * b") == Product(Bang("s", a), b)
    assert parse_formula("!{s}(a * b)") == Bang("s", Product(a, b))


def test_parse_unit_and_empty_antecedent():
    assert parse_sequent("-> 1") == Sequent((), Unit())


def test_product_is_left_associative():
    assert parse_formula("a * b * c") == Product(Product(a, b), c)


def test_nested_division_needs_parentheses():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("a/b/c")
    assert parse_formula("(a/b)/c") == RDiv(RDiv(a, b), c)


def test_unknown_token_position():
    with pytest.raises(FormulaSyntaxError) as error:
        parse_formula("a ? b")
    assert error.value.position == 2


def test_unbalanced_parenthesis():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("(a * b")


def test_empty_succedent():
    with pytest.raises(FormulaSyntaxError) as error:
        parse_sequent("a ->")
    assert "empty succedent" in str(error.value)


@pytest.mark.parametrize(
    "text",
    [
        "a * b",
        "a \\ b",
        "b / a",
        "(a | b) & (a | c)",
        "a | b & c",
        "!{s}(a \\ b)",
        "(np / n) / np",
        "np \\ (np / ad)",
        "(n \\ n) / (s / !{e}np)",
        "a & b / c",
        "1 * a",
    ],
)
def test_printer_is_canonical(text):
    formula = parse_formula(text)
    assert format_formula(formula) == text
    assert parse_formula(format_formula(formula)) == formula


def _random_formula(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice([Atom("p"), Atom("q"), Unit()])
    kind = rng.randrange(7)
    if kind == 6:
        return Bang(rng.choice(["s", "t"]), _random_formula(rng, depth - 1))
    left, right = _random_formula(rng, depth - 1), _random_formula(rng, depth - 1)
    return [Product, LDiv, RDiv, With, Plus, Product][kind](left, right)


def test_print_parse_round_trip_on_random_terms():
    rng = random.Random(20240611)
    for _ in range(300):
        formula = _random_formula(rng, 5)
        assert parse_formula(format_formula(formula)) == formula


def test_format_sequent_empty_antecedent():
    assert format_sequent(Sequent((), b)) == "-> b"
    assert str(Sequent((a, LDiv(a, b)), b)) == "a, a \\ b -> b"


def test_traversals():
    formula = parse_formula("!{t}(b * a) & !{s}b | c")
    assert atoms(formula) == ["b", "a", "c"]
    assert bang_indices(formula) == ["t", "s"]
    assert contains_unit(parse_formula("a * 1")) is True
    assert contains_unit(formula) is False


def test_signature_closure_and_queries():
    sig = validate_signature(RawSignature(("s", "t", "u"), (("s", "t"), ("t", "u"))))
    assert sig.leq("s", "u")
    assert sig.leq("t", "t")
    assert not sig.leq("u", "s")
    assert "t" in sig
    assert "v" not in sig


def test_signature_upward_closure_is_reported():
    raw = RawSignature(("s", "t"), (("s", "t"),), contraction=frozenset({"s"}))
    assert signature_problems(raw) == ["not upward-closed: C misses t above s"]


def test_signature_weakening_contraction_needs_exchange():
    raw = RawSignature(("s",), weakening=frozenset({"s"}), contraction=frozenset({"s"}))
    with pytest.raises(SignatureError) as error:
        validate_signature(raw)
    assert error.value.problems == ["W∩C ⊄ E: index s"]


def test_signature_unknown_and_duplicate_indices():
    raw = RawSignature(("s", "s"), (("s", "x"),))
    problems = signature_problems(raw)
    assert "duplicate index s" in problems
    assert "order pair s <= x uses unknown index x" in problems


def test_signature_text_round_trip():
    text = "index u\nindex v\norder u <= v\nset W = v\nset C = v\nset E = u,v\n"
    sig = parse_signature_text(text)
    assert parse_signature_text(format_signature(sig)) == sig


def test_signature_text_errors():
    with pytest.raises(SignatureError) as error:
        parse_signature_text("index s\nset X = s\nfrobnicate\n")
    assert len(error.value.problems) == 2


def test_shipped_signatures_load(data_dir):
    parasitic = load_signature(data_dir / "signatures" / "parasitic.sig")
    assert parasitic.contraction == frozenset({"c"})
    assert parasitic.exchange == frozenset({"c"})
    wc = load_signature(data_dir / "signatures" / "wc.sig")
    assert wc.leq("u", "v")


def test_unknown_indices():
    sig = validate_signature(RawSignature(("s",)))
    assert unknown_indices(sig, [parse_formula("!{s}a * !{zzz}b")]) == ["zzz"]
    assert unknown_indices(None, [parse_formula("!{s}a")]) == ["s"]
