"""Tests for the main module of the smalc command line."""

from commands.core import CommandResult
from main import main


def test_main_success(mocker):
    mock_manager = mocker.patch("main.CommandManager")
    mock_manager.return_value.execute_command.return_value = CommandResult(success=True)

    assert main(["prove", "a -> a"]) == 0
    mock_manager.return_value.execute_command.assert_called_once_with(["prove", "a -> a"])


def test_main_reads_sys_argv(mocker):
    mock_manager = mocker.patch("main.CommandManager")
    mock_manager.return_value.execute_command.return_value = CommandResult(success=True, exit_code=1)
    mocker.patch("sys.argv", ["smalc", "prove", "a -> b"])

    assert main() == 1
    mock_manager.return_value.execute_command.assert_called_once_with(["prove", "a -> b"])


def test_main_prints_errors(mocker):
    mock_manager = mocker.patch("main.CommandManager")
    mock_manager.return_value.execute_command.return_value = CommandResult(
        success=False, message="unknown subexponential index zzz", exit_code=3
    )
    mock_print = mocker.patch("main.pretty_print_error")

    assert main(["prove", "!{zzz}a -> a"]) == 3
    mock_print.assert_called_once_with("unknown subexponential index zzz")


def test_main_keyboard_interrupt(mocker):
    mock_manager = mocker.patch("main.CommandManager")
    mock_manager.return_value.execute_command.side_effect = KeyboardInterrupt

    assert main([]) == 130


def test_main_unexpected_error(mocker, capsys):
    mock_manager = mocker.patch("main.CommandManager")
    mock_manager.return_value.execute_command.side_effect = Exception("Unexpected error")

    assert main([]) == 1
    assert "An unexpected error occurred: Unexpected error" in capsys.readouterr().out


def test_main_end_to_end(capsys):
    assert main(["--version"]) == 0
    assert main(["prove", "--no-color", "a, a \\ b -> b"]) == 0
    assert "Proved" in capsys.readouterr().out
