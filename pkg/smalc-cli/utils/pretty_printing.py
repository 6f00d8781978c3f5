"""
Pretty printing utilities for prover, model and grammar reports.
"""

from functools import wraps
from typing import Dict, List, Optional, Sequence

from tabulate import tabulate

from commands.core import Command
from logic.calculus import Derivation, ProofResult, ProofStatus, format_derivation
from logic.grammar import ParseOutcome
from logic.quantale import ConucleusClass, FiniteQuantale
from logic.representation import RepresentationReport
from logic.semantics import Countermodel, ModelReport
from logic.syntax import Sequent, format_formula, format_sequent
from utils import colors
from utils.terminal import WRAPPER, block, centered, rule

STATUS_COLORS = {
    ProofStatus.PROVED: "SUCCESS",
    ProofStatus.EXHAUSTED: "ERROR",
    ProofStatus.BUDGET: "WARNING",
}


def header(text: str):
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            print(f"{colors.HEADERS}{rule()}")
            print(f"{colors.HEADERS}{centered(text)}")
            print(f"{colors.HEADERS}{rule()}{colors.RESET}")
            return func(*args, **kwargs)

        return wrapper

    return decorator


def footer():
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            result = func(*args, **kwargs)
            print(f"{colors.HEADERS}{rule()}{colors.RESET}")
            return result

        return wrapper

    return decorator


def _subheaders(text: str) -> None:
    """
    Print a subheader framed by dashes.

    Args:
        text (str): The subheader text.
    """
    print(f"{colors.SUBHEADERS}{rule('-')}")
    print(f"{colors.SUBHEADERS}{centered(text)}")
    print(f"{colors.SUBHEADERS}{rule('-')}{colors.RESET}")


def _status(text: str, color_name: str) -> str:
    return f"{getattr(colors, color_name)}{text}{colors.RESET}"


def info_text(commands: Dict[str, Command]) -> str:
    """Command overview used as the epilog of ``--help``."""
    width = max(len(name) for name in commands)
    lines = []
    for name, cmd in sorted(commands.items()):
        wrapped = WRAPPER.fill(cmd.description()).split("\n")
        lines.append(f"  {name:<{width}}  {wrapped[0]}")
        lines.extend(f"  {' ' * width}  {line}" for line in wrapped[1:])
    return "\n".join(lines)


@header("Proof Search")
@footer()
def pretty_print_proof_result(goal: Sequent, result: ProofResult, show_stats: bool = True) -> None:
    """
    Print the outcome of a proof search and the derivation when one was found.

    Args:
        goal (Sequent): The searched sequent.
        result (ProofResult): Search outcome.
        show_stats (bool): Whether to print the search statistics table.
    """
    print(f"{colors.HIGHLIGHT}{'Goal:':<10}{colors.RESET}{format_sequent(goal)}")
    print(f"{colors.HIGHLIGHT}{'Status:':<10}{colors.RESET}{_status(result.status.value, STATUS_COLORS[result.status])}")
    if result.derivation is not None:
        _subheaders("Derivation")
        print(format_derivation(result.derivation), end="")
    if show_stats:
        _subheaders("Search Statistics")
        print(tabulate(sorted(result.stats.as_dict().items()), headers=["Counter", "Value"], tablefmt="simple"))


@header("Derivation Check")
@footer()
def pretty_print_check(derivation: Derivation, problems: List[str]) -> None:
    print(f"{colors.HIGHLIGHT}{'Conclusion:':<12}{colors.RESET}{format_sequent(derivation.conclusion)}")
    print(f"{colors.HIGHLIGHT}{'Size:':<12}{colors.RESET}{derivation.size()} nodes, height {derivation.height()}")
    if derivation.uses_cut():
        print(f"{colors.HIGHLIGHT}{'Cut:':<12}{colors.RESET}used")
    if not problems:
        print(_status("valid", "SUCCESS"))
        return
    print(_status("invalid", "ERROR"))
    for problem in problems:
        print(f"  - {problem}")


def quantale_table(Q: FiniteQuantale) -> str:
    """Multiplication table with the order shown as an up-set column."""
    rows = []
    for a in Q.elements:
        above = ",".join(str(b) for b in Q.elements if b != a and Q.le(a, b))
        rows.append([a] + [Q.mul(a, b) for b in Q.elements] + [above or "-"])
    headers = ["·"] + [str(b) for b in Q.elements] + ["above"]
    return tabulate(rows, headers=headers, tablefmt="simple")


@header("Model Check")
@footer()
def pretty_print_model(report: ModelReport, sequent: Sequent, holds: bool) -> None:
    """
    Print a model, the valuation and whether the sequent holds in it.

    Args:
        report (ModelReport): Quantale, optional interpretation and valuation.
        sequent (Sequent): The evaluated sequent.
        holds (bool): Evaluation result.
    """
    Q = report.quantale
    unit = "none" if Q.unit is None else Q.unit
    print(f"{colors.HIGHLIGHT}{'Sequent:':<12}{colors.RESET}{format_sequent(sequent)}")
    print(f"{colors.HIGHLIGHT}{'Quantale:':<12}{colors.RESET}size {Q.n}, unit {unit}")
    print(block(quantale_table(Q)))
    if report.valuation:
        values = ", ".join(f"{name}={value}" for name, value in report.valuation.items())
        print(f"{colors.HIGHLIGHT}{'Valuation:':<12}{colors.RESET}{values}")
    if report.sigma is not None:
        for index, I in report.sigma.assignment.items():
            print(f"{colors.HIGHLIGHT}{'sigma ' + index + ':':<12}{colors.RESET}{' '.join(str(x) for x in I.table)}")
    print(_status("holds", "SUCCESS") if holds else _status("refuted", "ERROR"))


@header("Countermodel Search")
@footer()
def pretty_print_countermodel(
    sequent: Sequent, witness: Optional[Countermodel], max_size: int, saved_to: Optional[str] = None
) -> None:
    print(f"{colors.HIGHLIGHT}{'Sequent:':<12}{colors.RESET}{format_sequent(sequent)}")
    if witness is None:
        print(_status(f"no countermodel up to size {max_size}", "WARNING"))
        return
    Q = witness.quantale
    print(_status(f"countermodel of size {Q.n}", "ERROR"))
    print(block(quantale_table(Q)))
    values = ", ".join(f"{name}={value}" for name, value in witness.valuation.items())
    print(f"{colors.HIGHLIGHT}{'Valuation:':<12}{colors.RESET}{values or '-'}")
    if witness.sigma is not None:
        for index, I in witness.sigma.assignment.items():
            print(f"{colors.HIGHLIGHT}{'sigma ' + index + ':':<12}{colors.RESET}{' '.join(str(x) for x in I.table)}")
    if saved_to is not None:
        print(f"{colors.HIGHLIGHT}{'Saved to:':<12}{colors.RESET}{saved_to}")


@header("Relational Representation")
@footer()
def pretty_print_representation(
    report: RepresentationReport, conuclei: Sequence[ConucleusClass] = (), transported: Sequence[bool] = ()
) -> None:
    """
    Print the hat relations, the check table and transported conucleus flags.

    Args:
        report (RepresentationReport): Result of the representation checks.
        conuclei (Sequence[ConucleusClass]): Flags of each transported conucleus.
        transported (Sequence[bool]): Whether each transport preserved the flags.
    """
    print(tabulate(report.rows, headers=["a", "hat(a)"], tablefmt="simple"))
    _subheaders("Checks")
    rows = [[name, "pass" if ok else "fail"] for name, ok in report.checks.items()]
    rows.append(["union-closed (info)", "yes" if report.union_closed else "no"])
    print(tabulate(rows, headers=["Check", "Result"], tablefmt="simple"))
    for witness in report.witnesses:
        print(f"  - {witness}")
    if conuclei:
        _subheaders("Transported Conuclei")
        rows = [
            [k, flags.is_unital, flags.is_central, flags.is_ssi, "yes" if ok else "no"]
            for k, (flags, ok) in enumerate(zip(conuclei, transported))
        ]
        print(tabulate(rows, headers=["#", "unital", "central", "ssi", "flags kept"], tablefmt="simple"))
    color = "SUCCESS" if report.passed else "ERROR"
    print(_status(report.summary_line(), color))


@header("Sentence Parse")
@footer()
def pretty_print_parse(words: Sequence[str], target_text: str, outcome: ParseOutcome) -> None:
    print(f"{colors.HIGHLIGHT}{'Sentence:':<12}{colors.RESET}{' '.join(words)}")
    print(f"{colors.HIGHLIGHT}{'Target:':<12}{colors.RESET}{target_text}")
    status = outcome.result.status
    print(f"{colors.HIGHLIGHT}{'Status:':<12}{colors.RESET}{_status(status.value, STATUS_COLORS[status])}")
    print(f"{colors.HIGHLIGHT}{'Tried:':<12}{colors.RESET}{outcome.tried} assignment(s)")
    if outcome.assignment is not None:
        _subheaders("Type Assignment")
        rows = [[word, format_formula(f)] for word, f in zip(words, outcome.assignment)]
        print(tabulate(rows, headers=["Word", "Type"], tablefmt="simple"))
    if outcome.result.derivation is not None:
        _subheaders("Derivation")
        print(format_derivation(outcome.result.derivation), end="")


def pretty_print_enumerated(size: int, count: int, unital: int) -> None:
    print(f"{colors.HIGHLIGHT}size {size}:{colors.RESET} {count} quantale(s), {unital} unital")


def pretty_print_error(message: str) -> None:
    print(f"{colors.ERROR}{message}{colors.RESET}")
