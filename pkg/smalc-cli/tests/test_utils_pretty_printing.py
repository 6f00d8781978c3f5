"""
Tests for the utils.pretty_printing module.
"""

import pytest

from commands.proof import ProveCommand
from logic.calculus import Mode, ProofResult, ProofStatus, prove
from logic.syntax import empty_signature, parse_sequent
from utils import colors
from utils.pretty_printing import (
    info_text,
    pretty_print_error,
    pretty_print_proof_result,
    quantale_table,
)


@pytest.fixture(autouse=True)
def plain_output():
    colors.disable()
    yield
    colors.enable()


def test_proof_result_report(capsys):
    goal = parse_sequent("a, a \\ b -> b")
    pretty_print_proof_result(goal, prove(goal, empty_signature(), Mode.L1))
    out = capsys.readouterr().out
    assert "Proof Search" in out
    assert "Status:   Proved" in out
    assert "LDivL :: a, a \\ b -> b\n  Ax :: a -> a\n  Ax :: b -> b\n" in out
    assert "Search Statistics" in out


def test_failed_result_without_stats(capsys):
    pretty_print_proof_result(parse_sequent("a -> b"), ProofResult(ProofStatus.EXHAUSTED), show_stats=False)
    out = capsys.readouterr().out
    assert "NotProvedExhausted" in out
    assert "Derivation" not in out
    assert "Search Statistics" not in out


def test_quantale_table(chain2):
    lines = quantale_table(chain2).splitlines()
    assert lines[0].split() == ["·", "0", "1", "above"]
    assert lines[2].split() == ["0", "0", "0", "1"]
    assert lines[3].split() == ["1", "0", "1", "-"]


def test_info_text():
    text = info_text({"prove": ProveCommand()})
    assert text.startswith("  prove  Searches for a cut-free derivation")


def test_error(capsys):
    pretty_print_error("bad input")
    assert capsys.readouterr().out == "bad input\n"
