"""
Fixed terminal geometry; reports do not adapt to the real window so output bytes stay stable.
"""

from textwrap import TextWrapper, indent

TERMINAL_WIDTH: int = 80
WRAPPER: TextWrapper = TextWrapper(width=TERMINAL_WIDTH - 4)  # -4 for margin


def rule(char: str = "=") -> str:
    return char * TERMINAL_WIDTH


def centered(text: str) -> str:
    return text.center(TERMINAL_WIDTH).rstrip()


def block(text: str, margin: int = 2) -> str:
    """Indent every non-empty line of a multi-line block."""
    return indent(text.rstrip("\n"), " " * margin)
