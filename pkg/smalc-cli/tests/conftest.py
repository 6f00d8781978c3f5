"""Shared fixtures for the smalc test suite."""

import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from logic.quantale import locale_quantale, validate_quantale  # noqa: E402
from logic.syntax import RawSignature, empty_signature, validate_signature  # noqa: E402

DATA_DIR = Path(__file__).resolve().parent.parent.parent / "data"


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def empty_sig():
    return empty_signature()


@pytest.fixture
def full_sig():
    """One index with weakening, contraction and exchange."""
    return validate_signature(RawSignature(("s",), (), frozenset("s"), frozenset("s"), frozenset("s")))


@pytest.fixture
def two_index_sig():
    """s ⪯ t, both admitting every structural rule; the golden derivations all check here."""
    raw = RawSignature(("s", "t"), (("s", "t"),), frozenset("st"), frozenset("st"), frozenset("st"))
    return validate_signature(raw)


@pytest.fixture
def golden_corpus():
    """The shipped derivations under data/derivations, by file stem."""
    from logic.calculus import parse_derivation

    return {
        path.stem: parse_derivation(path.read_text(encoding="utf-8"))
        for path in sorted((DATA_DIR / "derivations").glob("*.drv"))
    }


@pytest.fixture
def chain2():
    """The two-element chain 0 < 1 with meet as product."""
    return locale_quantale([[True, True], [False, True]])


@pytest.fixture
def chain3():
    return locale_quantale([[True, True, True], [False, True, True], [False, False, True]])


@pytest.fixture
def diamond():
    """The Boolean algebra on {⊥, a, b, ⊤} as a locale."""
    leq = [
        [True, True, True, True],
        [False, True, False, True],
        [False, False, True, True],
        [False, False, False, True],
    ]
    return locale_quantale(leq)


@pytest.fixture
def z2_powerset():
    """Subsets of the two-element group: a non-idempotent commutative quantale."""
    from logic.quantale import powerset_quantale

    return powerset_quantale([[0, 1], [1, 0]], unit=0)


@pytest.fixture
def zero_chain2():
    """The two-element chain with constant-⊥ product; no unit."""
    return validate_quantale([[True, True], [False, True]], [[0, 0], [0, 0]])


@pytest.fixture(autouse=True)
def restore_colors():
    """``--no-color`` blanks the module-level colors; put them back after each test."""
    yield
    from utils import colors

    colors.enable()
