"""
Truncated p-adic numbers, Hensel lifting and n-th roots.

A nonzero PadicNumber is p^v * unit with unit known modulo p^N: N digits
a_v, ..., a_{v+N-1} are known, a_v != 0. Exact zero is a separate marker
(valuation None) so it never takes part in digit arithmetic.

The valuation is the integer exponent v, and |x|_p = p^(-v).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .finite_field import is_prime
from .utils import (
    ContractError,
    FieldZeroDivisionError,
    NotSimpleRootError,
    PrecisionError,
    UnsupportedCaseError,
    UserError,
)


logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 32

Rational = Union[int, Fraction]


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicNumber:
    p: int
    valuation: Optional[int]
    unit: int
    precision: int

    def __post_init__(self) -> None:
        if self.valuation is None:
            if self.unit != 0 or self.precision != 0:
                raise ContractError("The zero marker carries no digits.")
            return
        if self.precision < 1:
            raise PrecisionError("A p-adic number needs at least one known digit.")
        if not 0 < self.unit < self.p**self.precision or self.unit % self.p == 0:
            raise ContractError(
                f"Unit part {self.unit} is not a unit modulo {self.p}^{self.precision}."
            )

    @classmethod
    def zero(cls, p: int) -> "PadicNumber":
        return cls(p, None, 0, 0)

    @property
    def is_zero(self) -> bool:
        return self.valuation is None

    @property
    def is_unit(self) -> bool:
        return self.valuation == 0

    @property
    def absolute_precision(self) -> float:
        """Digits are known below p^(v + N); exact zero is known everywhere."""

        if self.valuation is None:
            return math.inf
        return self.valuation + self.precision

    @property
    def digits(self) -> Tuple[int, ...]:
        """a_v, ..., a_{v+N-1}, little-endian."""

        out = []
        value = self.unit
        for _ in range(self.precision):
            value, digit = divmod(value, self.p)
            out.append(digit)
        return tuple(out)

    def to_fraction(self) -> Fraction:
        """The rational p^v * unit (exact for the known digits)."""

        if self.valuation is None:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.valuation

    def agrees_with(self, value: Rational) -> bool:
        """value matches every known digit."""

        diff = Fraction(value) - self.to_fraction()
        if diff == 0:
            return True
        return rational_valuation(diff, self.p) >= self.absolute_precision

    def _check(self, other: "PadicNumber") -> None:
        if not isinstance(other, PadicNumber):
            raise ContractError(f"Expected a p-adic number, got {type(other).__name__}.")
        if other.p != self.p:
            raise ContractError(f"Cannot combine Q_{self.p} and Q_{other.p} numbers.")

    def __add__(self, other: "PadicNumber") -> "PadicNumber":
        return add(self, other)

    def __sub__(self, other: "PadicNumber") -> "PadicNumber":
        return sub(self, other)

    def __neg__(self) -> "PadicNumber":
        return neg(self)

    def __mul__(self, other: "PadicNumber") -> "PadicNumber":
        return mul(self, other)

    def __truediv__(self, other: "PadicNumber") -> "PadicNumber":
        return div(self, other)

    def __pow__(self, exponent: int) -> "PadicNumber":
        return power(self, exponent)

    def to_dict(self) -> Dict[str, object]:
        return {
            "p": self.p,
            "valuation": self.valuation,
            "digits": list(self.digits),
            "precision": self.precision,
        }

    def __str__(self) -> str:
        return format_digits(self)


def rational_valuation(value: Rational, p: int) -> int:
    value = Fraction(value)
    if value == 0:
        raise ContractError("The valuation of 0 is infinite.")
    return _int_valuation(value.numerator, p) - _int_valuation(value.denominator, p)


def from_residue(value: int, p: int, absolute_precision: int) -> PadicNumber:
    """The p-adic integer known modulo p^absolute_precision; 0 there gives the zero marker."""

    modulus = p**absolute_precision
    value %= modulus
    if value == 0:
        return PadicNumber.zero(p)
    v = _int_valuation(value, p)
    return PadicNumber(p, v, (value // p**v) % p ** (absolute_precision - v), absolute_precision - v)


def from_rational(value: Rational, p: int, precision: int = DEFAULT_PRECISION) -> PadicNumber:
    """Canonical expansion of m/n with `precision` known digits."""

    if not is_prime(p):
        raise UserError(f"{p} is not prime.")
    if isinstance(precision, bool) or not isinstance(precision, int) or precision < 1:
        raise UserError(f"Precision must be a positive integer (got {precision!r}).")
    value = Fraction(value)
    if value == 0:
        return PadicNumber.zero(p)
    num_v = _int_valuation(value.numerator, p)
    den_v = _int_valuation(value.denominator, p)
    modulus = p**precision
    unit_num = value.numerator // p**num_v
    unit_den = value.denominator // p**den_v
    unit = (unit_num * pow(unit_den, -1, modulus)) % modulus
    return PadicNumber(p, num_v - den_v, unit, precision)


def valuation(x: PadicNumber) -> float:
    """Integer valuation, math.inf for zero."""

    return math.inf if x.valuation is None else x.valuation


def padic_norm(x: PadicNumber) -> Fraction:
    """|x|_p = p^(-v) as an exact rational; |0|_p = 0."""

    if x.valuation is None:
        return Fraction(0)
    return Fraction(x.p) ** (-x.valuation)


# ---------------------------------------------------------------------------
# Arithmetic with tracked precision
# ---------------------------------------------------------------------------


def neg(x: PadicNumber) -> PadicNumber:
    if x.valuation is None:
        return x
    return PadicNumber(x.p, x.valuation, (-x.unit) % x.p**x.precision, x.precision)


def add(x: PadicNumber, y: PadicNumber) -> PadicNumber:
    """Sum known below the smaller absolute precision of the operands."""

    x._check(y)
    if x.valuation is None:
        return y
    if y.valuation is None:
        return x
    p = x.p
    base = min(x.valuation, y.valuation)
    limit = min(x.valuation + x.precision, y.valuation + y.precision)
    modulus = p ** (limit - base)
    total = (
        x.unit * p ** (x.valuation - base) + y.unit * p ** (y.valuation - base)
    ) % modulus
    if total == 0:
        raise PrecisionError(
            f"Sum cancels every known digit (below p^{limit}); raise the precision."
        )
    shift = _int_valuation(total, p)
    precision = limit - base - shift
    return PadicNumber(p, base + shift, (total // p**shift) % p**precision, precision)


def sub(x: PadicNumber, y: PadicNumber) -> PadicNumber:
    return add(x, neg(y))


def mul(x: PadicNumber, y: PadicNumber) -> PadicNumber:
    """Relative precision is the smaller of the two."""

    x._check(y)
    if x.valuation is None or y.valuation is None:
        return PadicNumber.zero(x.p)
    precision = min(x.precision, y.precision)
    modulus = x.p**precision
    return PadicNumber(x.p, x.valuation + y.valuation, (x.unit * y.unit) % modulus, precision)


def inv(x: PadicNumber) -> PadicNumber:
    if x.valuation is None:
        raise FieldZeroDivisionError("0 has no inverse in Q_p.")
    modulus = x.p**x.precision
    return PadicNumber(x.p, -x.valuation, pow(x.unit, -1, modulus), x.precision)


def div(x: PadicNumber, y: PadicNumber) -> PadicNumber:
    return mul(x, inv(y))


def power(x: PadicNumber, exponent: int) -> PadicNumber:
    if exponent < 0:
        return power(inv(x), -exponent)
    if exponent == 0:
        return from_rational(1, x.p, x.precision if x.precision else DEFAULT_PRECISION)
    if x.valuation is None:
        return x
    modulus = x.p**x.precision
    return PadicNumber(x.p, x.valuation * exponent, pow(x.unit, exponent, modulus), x.precision)


def format_digits(x: PadicNumber) -> str:
    """'valuation=v digits=a_v,a_{v+1},...' with digits little-endian in p."""

    if x.valuation is None:
        return "valuation=inf digits="
    return f"valuation={x.valuation} digits={','.join(str(d) for d in x.digits)}"


# ---------------------------------------------------------------------------
# Polynomials over Z_p and Hensel lifting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZpPoly:
    """Polynomial with p-adic integer coefficients, low degree first."""

    p: int
    coeffs: Tuple[PadicNumber, ...]

    def __post_init__(self) -> None:
        for i, c in enumerate(self.coeffs):
            if c.p != self.p:
                raise ContractError(f"Coefficient {i} lives in Q_{c.p}, not Q_{self.p}.")
            if c.valuation is not None and c.valuation < 0:
                raise ContractError(f"Coefficient {i} is not a p-adic integer.")

    @classmethod
    def from_ints(cls, coeffs: Sequence[int], p: int, precision: int = DEFAULT_PRECISION) -> "ZpPoly":
        return cls(p, tuple(from_rational(c, p, precision) for c in coeffs))

    @property
    def known_precision(self) -> float:
        """Coefficients are all known modulo p^this."""

        return min((c.absolute_precision for c in self.coeffs), default=math.inf)

    def integer_coeffs(self) -> List[int]:
        return [int(c.to_fraction()) for c in self.coeffs]


def _eval_int(coeffs: Sequence[int], x: int, modulus: Optional[int] = None) -> int:
    value = 0
    for c in reversed(coeffs):
        value = value * x + c
        if modulus is not None:
            value %= modulus
    return value


def _derivative(coeffs: Sequence[int]) -> List[int]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def _check_simple_root(f: ZpPoly, x0: int, target: int) -> Tuple[List[int], List[int]]:
    p = f.p
    if target > f.known_precision:
        raise PrecisionError(
            f"Coefficients are known modulo p^{f.known_precision}, below the requested {target}."
        )
    coeffs = f.integer_coeffs()
    derivative = _derivative(coeffs)
    if _eval_int(coeffs, x0, p) != 0:
        raise NotSimpleRootError(f"f({x0}) is not 0 mod {p}.")
    if _eval_int(derivative, x0, p) == 0:
        raise NotSimpleRootError(f"f'({x0}) is 0 mod {p}, so {x0} is not a simple root.")
    return coeffs, derivative


def hensel_lift(f: ZpPoly, x0: int, precision: int = DEFAULT_PRECISION) -> PadicNumber:
    """
    The unique root congruent to x0 mod p, known to `precision` digits.

    Newton steps x <- x - f(x)/f'(x), doubling the precision each step.
    """

    if precision < 1:
        raise UserError(f"Precision must be a positive integer (got {precision}).")
    p = f.p
    coeffs, derivative = _check_simple_root(f, x0, precision)
    x = x0 % p
    known = 1
    while known < precision:
        known = min(2 * known, precision)
        modulus = p**known
        step = _eval_int(coeffs, x, modulus) * pow(_eval_int(derivative, x, modulus), -1, modulus)
        x = (x - step) % modulus
        logger.debug("hensel step: %d digits, x = %d", known, x)
    return from_residue(x, p, precision)


def hensel_lift_digitwise(f: ZpPoly, x0: int, precision: int = DEFAULT_PRECISION) -> PadicNumber:
    """One digit per step: x_{k+1} = x_k + t p^k with f(x_k)/p^k + t f'(x0) = 0 mod p."""

    if precision < 1:
        raise UserError(f"Precision must be a positive integer (got {precision}).")
    p = f.p
    coeffs, derivative = _check_simple_root(f, x0, precision)
    x = x0 % p
    slope_inverse = pow(_eval_int(derivative, x, p), -1, p)
    for k in range(1, precision):
        value = _eval_int(coeffs, x, p ** (k + 1))
        t = (-(value // p**k) * slope_inverse) % p
        x += t * p**k
    return from_residue(x, p, precision)


def residual_valuation(f: ZpPoly, root: PadicNumber) -> float:
    """Valuation of f(root) computed exactly on the rational representatives."""

    value = Fraction(0)
    point = root.to_fraction()
    for c in reversed(f.coeffs):
        value = value * point + c.to_fraction()
    if value == 0:
        return math.inf
    return rational_valuation(value, f.p)


# ---------------------------------------------------------------------------
# n-th roots and the unit characterization
# ---------------------------------------------------------------------------


def nth_root(u: PadicNumber, n: int, precision: Optional[int] = None) -> Optional[PadicNumber]:
    """
    An n-th root of u with p not dividing n, or None when there is none.

    Needs n | v(u) and an n-th root of the leading digit mod p (found by
    exhaustive search over [1, p)); that root is then lifted by Hensel.
    """

    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ContractError(f"n must be a positive integer (got {n!r}).")
    p = u.p
    if n % p == 0:
        raise UnsupportedCaseError(f"n-th roots with p | n (p={p}, n={n}) are not handled.")
    if u.valuation is None:
        return u
    if precision is None:
        precision = u.precision
    if precision > u.precision:
        raise PrecisionError(
            f"u is known to {u.precision} digits; cannot produce {precision}."
        )
    if u.valuation % n != 0:
        return None

    leading = u.unit % p
    start = next((r for r in range(1, p) if pow(r, n, p) == leading), None)
    if start is None:
        return None

    target = [-(u.unit % p**precision)] + [0] * (n - 1) + [1]
    f = ZpPoly(p, tuple(from_residue(c, p, precision) if c else PadicNumber.zero(p) for c in target))
    root = hensel_lift(f, start, precision)
    return PadicNumber(p, root.valuation + u.valuation // n, root.unit, root.precision)  # type: ignore[operator]


@dataclass(frozen=True)
class UnitCheckReport:
    value: PadicNumber
    is_unit: bool
    exponents: Tuple[int, ...]
    roots_found: Tuple[bool, ...]
    ok: bool

    def to_dict(self) -> Dict[str, object]:
        return {
            "p": self.value.p,
            "valuation": self.value.valuation,
            "is_unit": self.is_unit,
            "exponents": list(self.exponents),
            "roots_found": list(self.roots_found),
            "ok": self.ok,
        }


def unit_exponents(p: int, count: int) -> List[int]:
    """n_k = 1 + k p (p-1) for k = 1..count; all are 1 mod p."""

    return [1 + k * p * (p - 1) for k in range(1, count + 1)]


def unit_characterization_check(u: PadicNumber, count: int) -> UnitCheckReport:
    """
    Units have n_k-th roots for every k; non-units have none once n_k > |v(u)|.

    Exponents with n_k <= |v(u)| are computed but not judged for non-units.
    """

    if u.valuation is None:
        raise ContractError("The unit characterization needs u != 0.")
    if count < 1:
        raise UserError(f"count must be a positive integer (got {count}).")
    exponents = unit_exponents(u.p, count)
    found = tuple(nth_root(u, n) is not None for n in exponents)
    if u.is_unit:
        ok = all(found)
    else:
        ok = all(not has_root for n, has_root in zip(exponents, found) if n > abs(u.valuation))
    return UnitCheckReport(u, u.is_unit, tuple(exponents), found, ok)
