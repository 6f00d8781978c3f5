"""
Main entry point.
"""

import sys
from typing import List, Optional

from commands.core import CommandResult
from commands.manager import CommandManager
from utils.pretty_printing import pretty_print_error


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main function that parses the command line and runs one subcommand.

    Args:
        argv (Optional[List[str]]): Arguments without the program name; defaults to ``sys.argv[1:]``.

    Returns:
        int: Exit code (0 proved/holds/pass, 1 refuted, 2 budget, 3 input error)
    """
    try:
        manager: CommandManager = CommandManager()
        result: CommandResult = manager.execute_command(sys.argv[1:] if argv is None else argv)
        if not result.success and result.message:
            pretty_print_error(result.message)
        return result.exit_code

    except KeyboardInterrupt:
        print("\n\nKeyboardInterrupt. Exiting...")
        return 130
    except Exception as e:
        print(f"\nAn unexpected error occurred: {e}")
        return 1


if __name__ == "__main__":
    exit_code: int = main()
    exit(exit_code)
