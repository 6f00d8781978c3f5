"""
Command manager: argument parsing, settings and dispatch.
"""

import argparse
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

from logic.calculus import Mode, SearchBudget
from logic.syntax import Signature, empty_signature, load_signature
from utils import colors
from utils.helpers import load_settings
from utils.input_validation import argument_type, is_existing_file, is_positive_int, is_valid_mode
from utils.pretty_printing import info_text
from .core import EXIT_INPUT, Command, CommandResult, UsageError
from .models import CountermodelCommand, EnumerateCommand, ModelCommand
from .parsing import ParseCommand
from .proof import CheckCommand, ProveCommand
from .represent import RepresentCommand

positive_int = argument_type(is_positive_int, "expected a positive integer", int)
existing_file = argument_type(is_existing_file, "no such file", Path)
mode_name = argument_type(lambda value: is_valid_mode(value, [m.value for m in Mode]), "unknown mode", Mode)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


class CommandManager:
    def __init__(self, version: str = "1.0"):
        """
        Initialize the CommandManager.

        Args:
            version (str): The version of the application.
        """
        self.version: str = version

        # Paths setup
        self.base_path: Path = Path(os.path.dirname(__file__)).parent.parent
        self.config_folder: Path = self.base_path / "configs"
        self.settings_file: Path = self.config_folder / "settings.json"

        self.settings: Dict[str, Any] = load_settings(self.settings_file)
        self.commands: Optional[Dict[str, Command]] = None
        self.args: Optional[argparse.Namespace] = None

    def _init_commands(self) -> Dict[str, Command]:
        """
        Initialize the commands.

        Returns:
            Dict[str, Command]: A dictionary of command names and their corresponding Command objects.
        """
        commands: List[Command] = [
            ProveCommand(),
            CheckCommand(),
            ModelCommand(),
            CountermodelCommand(),
            RepresentCommand(),
            ParseCommand(),
            EnumerateCommand(),
        ]
        return {command.name: command for command in commands}

    def _common_options(self) -> argparse.ArgumentParser:
        """Flags shared by every subcommand; defaults come from the settings file."""
        common = _ArgumentParser(add_help=False)
        common.add_argument("--sig", type=existing_file, help="signature file")
        common.add_argument("--mode", type=mode_name, default=Mode(self.settings["mode"]), help="L, Lstar or L1")
        common.add_argument("--budget-depth", type=positive_int, default=self.settings["budget_depth"])
        common.add_argument("--budget-contr", type=positive_int, default=self.settings["budget_contr"])
        common.add_argument("--budget-nodes", type=positive_int, default=self.settings["budget_nodes"])
        common.add_argument("--max-size", type=positive_int, default=self.settings["max_size"])
        common.add_argument("--jobs", type=positive_int, default=self.settings["jobs"])
        common.add_argument("--out", type=Path, help="directory for emitted files")
        common.add_argument("--no-color", action="store_true", help="plain output")
        common.add_argument("--verbose", action="store_true", help="debug logging")
        return common

    def build_parser(self) -> argparse.ArgumentParser:
        """
        Build the argument parser with one subparser per command.

        Returns:
            argparse.ArgumentParser: The configured parser.
        """
        if self.commands is None:
            self.commands = self._init_commands()
        parser = _ArgumentParser(
            prog="smalc",
            description="Prover and quantale toolkit for Lambek calculus with subexponentials.",
            epilog="commands:\n" + info_text(self.commands),
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {self.version}")
        subparsers = parser.add_subparsers(dest="command", metavar="command")
        subparsers.required = True
        common = self._common_options()
        for name, command in self.commands.items():
            subparser = subparsers.add_parser(name, parents=[common], help=command.description())
            command.configure(subparser)
        return parser

    def signature(self) -> Signature:
        """The signature named by ``--sig``, or the empty signature."""
        if self.args is None or self.args.sig is None:
            return empty_signature()
        return load_signature(self.args.sig)

    def budget(self) -> SearchBudget:
        return SearchBudget(self.args.budget_depth, self.args.budget_contr, self.args.budget_nodes)

    def execute_command(self, argv: List[str]) -> CommandResult:
        """
        Parse a command line and run the selected command.

        Args:
            argv (List[str]): Arguments without the program name.

        Returns:
            CommandResult: The result of the command execution.
        """
        parser = self.build_parser()
        try:
            self.args = parser.parse_args(argv)
        except UsageError as e:
            return CommandResult(success=False, message=f"{e}\n{parser.format_usage()}", exit_code=EXIT_INPUT)
        except SystemExit as e:
            # --help and --version
            return CommandResult(success=True, exit_code=int(e.code or 0))

        if self.args.no_color:
            colors.disable()
        if self.args.verbose:
            logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s")
        return self.commands[self.args.command].execute(self)
