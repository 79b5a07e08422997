"""
CLI sanity checks for deterministic, quiet test behavior.
"""

from __future__ import annotations

import unittest

from helpers_cli import run_sd_toolkit_cli


class CliSanityTests(unittest.TestCase):
    def test_help_is_clean_and_deterministic(self) -> None:
        exit_code, stdout_text, stderr_text = run_sd_toolkit_cli(["--help"])
        self.assertEqual(exit_code, 0)
        self.assertIn("usage:", f"{stdout_text}{stderr_text}".lower())
        self.assertNotIn("not allowed with argument", stderr_text)

    def test_every_subcommand_has_help(self) -> None:
        for command in (
            "group",
            "sweep",
            "power",
            "check-map",
            "f5",
            "recurrence",
            "verify-identities",
            "hensel",
            "padic-unit-check",
            "oracle",
            "roots",
            "cube",
        ):
            with self.subTest(command=command):
                exit_code, stdout_text, _ = run_sd_toolkit_cli([command, "--help"])
                self.assertEqual(exit_code, 0)
                self.assertIn("Examples:", stdout_text)

    def test_version(self) -> None:
        exit_code, stdout_text, _ = run_sd_toolkit_cli(["--version"])
        self.assertEqual(exit_code, 0)
        self.assertEqual(stdout_text.strip(), "0.1.0")

    def test_missing_command_is_usage_error(self) -> None:
        exit_code, _, stderr_text = run_sd_toolkit_cli([])
        self.assertEqual(exit_code, 2)
        self.assertIn("command is required", stderr_text)

    def test_quiet_and_verbose_conflict(self) -> None:
        exit_code, _, stderr_text = run_sd_toolkit_cli(["--quiet", "--verbose", "group", "--q", "5"])
        self.assertEqual(exit_code, 2)
        self.assertIn("not allowed with argument", stderr_text)


if __name__ == "__main__":
    unittest.main()
