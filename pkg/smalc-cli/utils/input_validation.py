"""
User input validation functions.
"""

import argparse
import os
import re
from typing import Callable, Dict, List


IDENTIFIER_PATTERN = re.compile(r"^[a-zA-Z][a-zA-Z0-9_]*$")


def is_valid_identifier(value: str) -> bool:
    """
    Check if the input is a valid atom or subexponential index name.

    Args:
        value (str): The input string to be checked.

    Returns:
        bool: True if the input matches ``[a-zA-Z][a-zA-Z0-9_]*``, False otherwise.
    """
    return isinstance(value, str) and IDENTIFIER_PATTERN.match(value) is not None


def is_valid_mode(value: str, valid_modes: List[str]) -> bool:
    """
    Check if the input names a calculus mode.

    Args:
        value (str): The input string to be checked.
        valid_modes (List[str]): Accepted mode names.

    Returns:
        bool: True if the input is one of the accepted modes, False otherwise.
    """
    return value in valid_modes


def is_positive_int(value: str) -> bool:
    """
    Check if the input is a strictly positive integer.

    Args:
        value (str): The input string to be checked.

    Returns:
        bool: True if the input is a positive integer, False otherwise.
    """
    return isinstance(value, str) and value.isdigit() and int(value) > 0


def is_existing_file(value: str) -> bool:
    """
    Check if the input is the path of a readable file.

    Args:
        value (str): The input string to be checked.

    Returns:
        bool: True if the path exists and is a file, False otherwise.
    """
    return os.path.isfile(value)


def is_valid_valuation(value: str) -> bool:
    """
    Check if the input is an inline valuation such as ``a=0,b=1``.

    Args:
        value (str): The input string to be checked.

    Returns:
        bool: True if every comma-separated item is ``identifier=element``.
    """
    items = [item.strip() for item in value.split(",") if item.strip()]
    for item in items:
        name, sep, element = item.partition("=")
        if not sep or not is_valid_identifier(name.strip()) or not element.strip().isdigit():
            return False
    return bool(items)


def parse_valuation(value: str) -> Dict[str, int]:
    """
    Turn ``a=0,b=1`` into ``{"a": 0, "b": 1}``.

    Raises:
        ValueError: If the text is not a valid inline valuation.
    """
    if not is_valid_valuation(value):
        raise ValueError(f"invalid valuation {value!r}")
    pairs = (item.split("=") for item in value.split(",") if item.strip())
    return {name.strip(): int(element) for name, element in pairs}


def argument_type(
    predicate: Callable[[str], bool], message: str, convert: Callable[[str], object] = str
) -> Callable[[str], object]:
    """
    Wrap a predicate as an argparse ``type=`` callable.

    Args:
        predicate (Callable[[str], bool]): Validation function.
        message (str): Error text shown when validation fails.
        convert (Callable[[str], object]): Conversion applied to valid input.

    Returns:
        Callable[[str], object]: Function raising ``argparse.ArgumentTypeError`` on bad input.
    """

    def check(value: str) -> object:
        if not predicate(value):
            raise argparse.ArgumentTypeError(f"{message}: {value!r}")
        return convert(value)

    return check
