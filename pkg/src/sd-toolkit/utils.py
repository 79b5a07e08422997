"""
Shared utility helpers.

This module keeps the "sharp edges" (errors, validation and parsing of user
input) in one place so the math modules can stay focused on the algebra.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import List


class UserError(Exception):
    """Raised for user-facing problems that should show a clear message."""


class ContractError(UserError):
    """An operation was called outside its documented preconditions."""


class FieldMismatchError(ContractError):
    """Operands belong to different fields."""


class FieldZeroDivisionError(ContractError, ZeroDivisionError):
    """Inverse of zero, or division by zero, inside a field."""


class CompositeModulusError(UserError):
    """A field was requested over a composite 'prime'."""

    def __init__(self, n: int, factor: int) -> None:
        super().__init__(f"{n} is not prime (divisible by {factor}).")
        self.n = n
        self.factor = factor


class BudgetExceededError(UserError):
    """An exhaustive enumeration would exceed its configured bound."""


class PrecisionError(UserError):
    """A p-adic result would carry no known digit."""


class NotSimpleRootError(ContractError):
    """Hensel lifting was asked to lift something that is not a simple root mod p."""


class OracleRequiredError(ContractError):
    """An infinite field descriptor needs a root-of-unity oracle to decide a case."""


class UnsupportedCaseError(ContractError):
    """The requested case is deliberately not handled (e.g. p | n for n-th roots)."""


class MathCheckFailure(Exception):
    """A mathematical verification did not hold. The CLI maps this to exit code 1."""


def normalize_path(value: str) -> Path:
    """
    Convert user input to a Path.

    We do not resolve() here because we want to preserve relative paths in
    records and error messages.
    """

    return Path(value).expanduser()


def ensure_file_exists(path: Path, label: str) -> Path:
    """Validate that a path exists and is a file."""

    if not path.exists():
        raise UserError(f"{label} not found: {path}")
    if not path.is_file():
        raise UserError(f"{label} is not a file: {path}")
    return path


def ensure_dir(path: Path) -> None:
    """Create a directory (and parents) if needed."""

    path.mkdir(parents=True, exist_ok=True)


def validate_positive_int(value: int, label: str) -> int:
    """Common validation for options like --jobs or --count."""

    if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
        raise UserError(f"{label} must be a positive integer (got {value!r}).")
    return value


def validate_int_range(value: int, label: str, low: int, high: int | None = None) -> int:
    """Require low <= value (<= high when given) and report the valid range."""

    if isinstance(value, bool) or not isinstance(value, int):
        raise UserError(f"{label} must be an integer (got {value!r}).")
    if value < low or (high is not None and value > high):
        valid = f">= {low}" if high is None else f"in [{low}, {high}]"
        raise UserError(f"{label} must be {valid} (got {value}).")
    return value


def parse_int_list(spec: str, label: str) -> List[int]:
    """
    Parse a comma-separated integer list such as "-2,0,1".

    Used for polynomial coefficients (low-to-high) on the command line.
    """

    raw = spec.strip()
    if not raw:
        raise UserError(f"{label} is empty.")

    tokens = raw.replace(" ", "").split(",")
    if any(token == "" for token in tokens):
        raise UserError(f"{label} contains an empty token (check commas).")

    values: List[int] = []
    for token in tokens:
        try:
            values.append(int(token))
        except ValueError as exc:
            raise UserError(
                f"Invalid integer '{token}' in {label}. Use formats like -2,0,1."
            ) from exc
    return values


def parse_rational(spec: str, label: str) -> Fraction:
    """
    Parse "m", "-m" or "m/n" into an exact Fraction.

    We keep this strict: decimals like "0.5" are rejected so inputs stay exact.
    """

    raw = spec.strip().replace(" ", "")
    if not raw:
        raise UserError(f"{label} is empty.")

    parts = raw.split("/")
    if len(parts) > 2 or any(part == "" for part in parts):
        raise UserError(f"Invalid rational '{spec}' for {label}. Use m or m/n.")
    try:
        numerator = int(parts[0])
        denominator = int(parts[1]) if len(parts) == 2 else 1
    except ValueError as exc:
        raise UserError(
            f"Invalid rational '{spec}' for {label}. Use integers like 3 or 1/5."
        ) from exc
    if denominator == 0:
        raise UserError(f"{label} has a zero denominator.")
    return Fraction(numerator, denominator)
