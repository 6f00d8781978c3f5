"""
Tests for the logic.grammar module.
"""

import pytest

from logic.calculus import Mode, ProofStatus, SearchBudget, check_derivation
from logic.core import LexiconError
from logic.grammar import assignments, load_lexicon, parse_lexicon_text, parse_sentence
from logic.syntax import parse_formula

WILDE = "The Thames nocturne of blue and gold Changed to Harmony in grey".split()
MEDIAL = "the young lady whom Childe Harold met before his pilgrimage".split()
PARASITIC = "the letter that Werther sent to Charlotte without reading".split()

AMBIGUOUS = """
target s
word John : np
word John : s/(np\\s)
word runs : np\\s
word runs : s
"""


@pytest.fixture
def lexicons(data_dir):
    return data_dir / "lexicons"


def with_signature(path, signature):
    """Lexicon text of ``path`` with its signature line pointing at another file."""
    lines = path.read_text(encoding="utf-8").splitlines()
    lines = [f"signature ../signatures/{signature}" if line.startswith("signature ") else line for line in lines]
    return parse_lexicon_text("\n".join(lines), path.parent, str(path))


def test_wilde_sentence_parses(lexicons):
    lex = load_lexicon(lexicons / "wilde.lex")
    outcome = parse_sentence(WILDE, lex, Mode.L)
    assert outcome.proved
    assert outcome.tried == 1
    assert check_derivation(outcome.result.derivation, lex.signature, Mode.L) == []


def test_wilde_with_moved_verb_fails(lexicons):
    lex = load_lexicon(lexicons / "wilde.lex")
    words = ["Changed"] + [w for w in WILDE if w != "Changed"]
    outcome = parse_sentence(words, lex, Mode.L)
    assert outcome.result.status == ProofStatus.EXHAUSTED
    assert outcome.assignment is None


def test_medial_extraction_needs_exchange(lexicons):
    lex = load_lexicon(lexicons / "medial.lex")
    assert lex.target == parse_formula("np")
    outcome = parse_sentence(MEDIAL, lex)
    assert outcome.proved
    rules = {node.rule.value for node in outcome.result.derivation.nodes()}
    assert rules & {"Ex1", "Ex2"}

    rigid = with_signature(lexicons / "medial.lex", "medial_noexchange.sig")
    assert parse_sentence(MEDIAL, rigid).result.status == ProofStatus.EXHAUSTED


def test_parasitic_gap_needs_contraction(lexicons):
    lex = load_lexicon(lexicons / "parasitic.lex")
    outcome = parse_sentence(PARASITIC, lex)
    assert outcome.proved
    rules = {node.rule.value for node in outcome.result.derivation.nodes()}
    assert rules & {"NContr1", "NContr2"}

    linear = with_signature(lexicons / "parasitic.lex", "parasitic_nocontraction.sig")
    assert not parse_sentence(PARASITIC, linear).proved


def test_ambiguous_words_are_tried_in_order():
    lex = parse_lexicon_text(AMBIGUOUS)
    assert len(lex.types_of("John")) == 2
    assert len(list(assignments(["John", "runs"], lex))) == 4

    outcome = parse_sentence(["John", "runs"], lex)
    assert outcome.assignment == (parse_formula("np"), parse_formula("np\\s"))
    assert outcome.tried == 1

    outcome = parse_sentence(["runs"], lex)
    assert outcome.assignment == (parse_formula("s"),)
    assert outcome.tried == 2


def test_parse_does_not_depend_on_jobs():
    lex = parse_lexicon_text(AMBIGUOUS)
    one = parse_sentence(["runs", "John"], lex, jobs=1)
    many = parse_sentence(["runs", "John"], lex, jobs=3)
    assert (one.assignment, one.tried, one.result.status) == (many.assignment, many.tried, many.result.status)


def test_failed_parse_counts_every_assignment():
    lex = parse_lexicon_text(AMBIGUOUS)
    outcome = parse_sentence(["runs", "runs"], lex, Mode.L)
    assert not outcome.proved
    assert outcome.tried == 4


def test_budget_status(lexicons):
    lex = load_lexicon(lexicons / "wilde.lex")
    outcome = parse_sentence(WILDE, lex, Mode.L, SearchBudget(max_depth=2))
    assert outcome.result.status == ProofStatus.BUDGET


def test_unknown_word():
    lex = parse_lexicon_text(AMBIGUOUS)
    with pytest.raises(LexiconError) as error:
        parse_sentence(["John", "sleeps"], lex)
    assert "unknown word 'sleeps'" in str(error.value)


def test_empty_sentence():
    with pytest.raises(LexiconError):
        parse_sentence([], parse_lexicon_text(AMBIGUOUS))


def test_unknown_index_in_lexicon():
    with pytest.raises(LexiconError) as error:
        parse_lexicon_text("word Harold : !{zzz}np\n")
    assert error.value.message == "invalid lexicon"
    assert "word 'Harold': unknown index zzz in !{zzz}np" in error.value.problems


@pytest.mark.parametrize(
    "text, problem",
    [
        ("frobnicate\n", "<lexicon>:1: cannot read 'frobnicate'"),
        ("target s\nword a b : np\n", "<lexicon>:2: bad word 'a b'"),
        ("signature missing.sig\n", "<lexicon>:1: cannot open signature"),
        ("word x : np /\n", "<lexicon>:1:"),
    ],
)
def test_malformed_lexicon(text, problem, tmp_path):
    with pytest.raises(LexiconError) as error:
        parse_lexicon_text(text, tmp_path)
    assert error.value.message == "malformed lexicon"
    assert any(p.startswith(problem) for p in error.value.problems)


def test_comments_and_default_target():
    lex = parse_lexicon_text("# nothing but a comment\nword a : s  # trailing\n")
    assert lex.target == parse_formula("s")
    assert lex.types_of("a") == (parse_formula("s"),)
