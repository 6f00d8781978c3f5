"Core command classes for the command-line front end."

import argparse
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import wraps
from typing import Any, Callable, Optional

from logic.core import SmalcError

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_BUDGET = 2
EXIT_INPUT = 3


@dataclass
class CommandResult:
    success: bool
    message: Optional[str] = None
    data: Any = None
    exit_code: int = EXIT_OK


class Command(ABC):
    """
    Abstract base class for subcommands.

    Commands declare their flags in `configure` and implement `execute`, which
    receives the command manager (parsed arguments, settings, budgets).
    """

    name: str = ""

    @abstractmethod
    def execute(self, context) -> CommandResult:
        """
        Execute the command with the given context.
        """
        pass

    @abstractmethod
    def description(self) -> str:
        """
        Return a brief description of the command.
        """
        pass

    def configure(self, parser: argparse.ArgumentParser) -> None:
        """
        Add the command's own arguments to its subparser.
        """
        pass


def input_errors(func: Callable[..., CommandResult]) -> Callable[..., CommandResult]:
    """
    Decorator turning malformed input into an exit-code-3 result.

    Args:
        func (Callable[..., CommandResult]): An `execute` method.

    Returns:
        Callable[..., CommandResult]: The wrapped method.
    """

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> CommandResult:
        try:
            return func(*args, **kwargs)
        except SmalcError as e:
            return CommandResult(success=False, message=str(e), exit_code=EXIT_INPUT)
        except OSError as e:
            return CommandResult(success=False, message=f"cannot access file: {e}", exit_code=EXIT_INPUT)

    return wrapper


class UsageError(SmalcError):
    """Raised for malformed command lines instead of argparse's own exit."""
