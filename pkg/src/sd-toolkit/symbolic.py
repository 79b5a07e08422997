"""
Exact univariate polynomials and rational functions.

Poly coefficients are either exact rationals (modulus None) or residues mod a
prime p. Coefficients are stored low degree first with no trailing zeros, so
the zero polynomial is the empty tuple and equality is tuple equality.

Rational functions over Q are reduced with a heuristic integer gcd
(evaluate, integer gcd, interpolate, verify by exact division) and fall back
to Euclid when the heuristic gives up. Denominators are kept monic.

Naming: p_k_poly is the closed-form family in u = f(2); eratio_defect_poly is
the unrelated defect polynomial in w used by the power-map case analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from threading import Lock
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .finite_field import FieldSpec, get_tables, is_prime, prime_power_parts
from .utils import ContractError, FieldZeroDivisionError, MathCheckFailure


Scalar = Union[int, Fraction]

HEU_GCD_MAX = 6


# ---------------------------------------------------------------------------
# Integer polynomial helpers (low degree first)
# ---------------------------------------------------------------------------


def _int_content(coeffs: Sequence[int]) -> int:
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    return g


def _int_primitive(coeffs: Sequence[int]) -> List[int]:
    """Divide by the content and make the leading coefficient positive."""

    content = _int_content(coeffs)
    if content == 0:
        return []
    if coeffs[-1] < 0:
        content = -content
    return [c // content for c in coeffs]


def _int_eval(coeffs: Sequence[int], x: int) -> int:
    value = 0
    for c in reversed(coeffs):
        value = value * x + c
    return value


def _int_exact_div(f: Sequence[int], h: Sequence[int]) -> Optional[List[int]]:
    """f / h over Z when h divides f exactly, else None."""

    if len(h) > len(f):
        return None if any(f) else []
    remainder = list(f)
    lead = h[-1]
    shift_max = len(f) - len(h)
    quotient = [0] * (shift_max + 1)
    for shift in range(shift_max, -1, -1):
        c = remainder[shift + len(h) - 1]
        if c == 0:
            continue
        if c % lead:
            return None
        factor = c // lead
        quotient[shift] = factor
        for i, hc in enumerate(h):
            remainder[shift + i] -= factor * hc
    if any(remainder):
        return None
    return quotient


def _int_interpolate(h: int, x: int) -> List[int]:
    """Recover coefficients from an integer image using symmetric base-x digits."""

    coeffs: List[int] = []
    while h:
        digit = h % x
        if digit > x // 2:
            digit -= x
        coeffs.append(digit)
        h = (h - digit) // x
    return coeffs


def _int_heu_gcd(f: List[int], g: List[int]) -> Optional[List[int]]:
    """
    Heuristic gcd of primitive integer polynomials.

    Returns the primitive gcd, or None when no evaluation point worked.
    """

    if len(f) == 1 or len(g) == 1:
        return [1]
    f_norm = max(abs(c) for c in f)
    g_norm = max(abs(c) for c in g)
    bound = 2 * min(f_norm, g_norm) + 29
    x = max(
        min(bound, 99 * isqrt(bound)),
        2 * min(f_norm // abs(f[-1]), g_norm // abs(g[-1])) + 4,
    )
    for _ in range(HEU_GCD_MAX):
        ff = _int_eval(f, x)
        gg = _int_eval(g, x)
        if ff and gg:
            candidate = _int_primitive(_int_interpolate(gcd(ff, gg), x))
            if candidate and _int_exact_div(f, candidate) is not None:
                if _int_exact_div(g, candidate) is not None:
                    return candidate
        x = 73794 * x * isqrt(isqrt(x)) // 27011
    return None


def _split_rational(coeffs: Sequence[Fraction]) -> Tuple[Fraction, List[int]]:
    """coeffs == scale * primitive, with primitive an integer polynomial, positive leading coefficient."""

    denominator = 1
    for c in coeffs:
        denominator = denominator * c.denominator // gcd(denominator, c.denominator)
    ints = [int(c * denominator) for c in coeffs]
    primitive = _int_primitive(ints)
    scale = Fraction(ints[-1], denominator * primitive[-1])
    return scale, primitive


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Poly:
    """A univariate polynomial over Q (modulus None) or F_p (modulus p)."""

    coeffs: Tuple[Scalar, ...]
    modulus: Optional[int] = None

    def __post_init__(self) -> None:
        if self.modulus is None:
            normalized = [Fraction(c) for c in self.coeffs]
        else:
            p = self.modulus
            normalized = [int(c) % p for c in self.coeffs]
        while normalized and normalized[-1] == 0:
            normalized.pop()
        object.__setattr__(self, "coeffs", tuple(normalized))

    # Constructors -------------------------------------------------------

    @classmethod
    def over_q(cls, coeffs: Sequence[Scalar]) -> "Poly":
        return cls(tuple(coeffs), None)

    @classmethod
    def over_fp(cls, coeffs: Sequence[int], p: int) -> "Poly":
        if not is_prime(p):
            raise ContractError(f"Coefficient modulus {p} is not prime.")
        return cls(tuple(coeffs), p)

    @classmethod
    def x(cls, modulus: Optional[int] = None) -> "Poly":
        return cls((0, 1), modulus)

    @classmethod
    def const(cls, value: Scalar, modulus: Optional[int] = None) -> "Poly":
        return cls((value,), modulus)

    # Basic properties ---------------------------------------------------

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""

        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else self._zero()

    def _zero(self) -> Scalar:
        return Fraction(0) if self.modulus is None else 0

    def _inv(self, c: Scalar) -> Scalar:
        if c == 0:
            raise FieldZeroDivisionError("Division by a zero coefficient.")
        if self.modulus is None:
            return 1 / Fraction(c)
        return pow(int(c), -1, self.modulus)

    def _same(self, other: "Poly") -> None:
        if self.modulus != other.modulus:
            raise ContractError(
                f"Polynomials over {_domain_name(self.modulus)} and "
                f"{_domain_name(other.modulus)} cannot be combined."
            )

    def _lift(self, other: Union["Poly", Scalar]) -> "Poly":
        if isinstance(other, Poly):
            self._same(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly((other,), self.modulus)
        return NotImplemented  # type: ignore[return-value]

    # Arithmetic ---------------------------------------------------------

    def __add__(self, other: Union["Poly", Scalar]) -> "Poly":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        size = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (size - len(self.coeffs))
        b = list(other.coeffs) + [0] * (size - len(other.coeffs))
        return Poly(tuple(x + y for x, y in zip(a, b)), self.modulus)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs), self.modulus)

    def __sub__(self, other: Union["Poly", Scalar]) -> "Poly":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Poly":
        return (-self) + other

    def __mul__(self, other: Union["Poly", Scalar]) -> "Poly":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Poly((), self.modulus)
        if self.modulus is None:
            return _mul_rational(self, other)
        p = self.modulus
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(c % p for c in out), p)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise ContractError("Polynomials only have nonnegative powers.")
        result = Poly.const(1, self.modulus)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __divmod__(self, divisor: "Poly") -> Tuple["Poly", "Poly"]:
        return poly_divmod(self, divisor)

    def __floordiv__(self, divisor: "Poly") -> "Poly":
        return poly_divmod(self, divisor)[0]

    def __mod__(self, divisor: "Poly") -> "Poly":
        return poly_divmod(self, divisor)[1]

    def __call__(self, point: Union["Poly", Scalar]) -> Union["Poly", Scalar]:
        return poly_eval(self, point)

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        inverse = self._inv(self.leading)
        return Poly(tuple(c * inverse for c in self.coeffs), self.modulus)

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0), self.modulus)

    def scalar_multiple_of(self, other: "Poly") -> bool:
        """self == c * other for a nonzero scalar c."""

        self._same(other)
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        return self.monic() == other.monic()

    def reduce_mod(self, p: int) -> "Poly":
        """Map a rational polynomial to F_p; denominators must be prime to p."""

        if self.modulus is not None:
            raise ContractError("Only rational polynomials can be reduced mod p.")
        out = []
        for c in self.coeffs:
            if c.denominator % p == 0:
                raise ContractError(f"Coefficient {c} has a denominator divisible by {p}.")
            out.append(c.numerator * pow(c.denominator, -1, p))
        return Poly(tuple(out), p)

    def __str__(self) -> str:
        return format_poly(self)


def _domain_name(modulus: Optional[int]) -> str:
    return "Q" if modulus is None else f"F_{modulus}"


def _mul_rational(a: Poly, b: Poly) -> Poly:
    """Schoolbook product on integer numerators over a common denominator."""

    da = 1
    for c in a.coeffs:
        da = da * c.denominator // gcd(da, c.denominator)
    db = 1
    for c in b.coeffs:
        db = db * c.denominator // gcd(db, c.denominator)
    ia = [int(c * da) for c in a.coeffs]
    ib = [int(c * db) for c in b.coeffs]
    out = [0] * (len(ia) + len(ib) - 1)
    for i, x in enumerate(ia):
        if x == 0:
            continue
        for j, y in enumerate(ib):
            out[i + j] += x * y
    denominator = da * db
    return Poly(tuple(Fraction(c, denominator) for c in out), None)


def poly_divmod(dividend: Poly, divisor: Poly) -> Tuple[Poly, Poly]:
    dividend._same(divisor)
    if divisor.is_zero:
        raise FieldZeroDivisionError("Polynomial division by zero.")
    modulus = dividend.modulus
    remainder = list(dividend.coeffs)
    dd = divisor.degree
    if dividend.degree < dd:
        return Poly((), modulus), dividend
    inverse = divisor._inv(divisor.leading)
    quotient = [divisor._zero()] * (dividend.degree - dd + 1)
    for shift in range(dividend.degree - dd, -1, -1):
        c = remainder[shift + dd] * inverse
        if modulus is not None:
            c %= modulus
        if c == 0:
            continue
        quotient[shift] = c
        for i, dc in enumerate(divisor.coeffs):
            remainder[shift + i] -= c * dc
        if modulus is not None:
            for i in range(shift, shift + dd + 1):
                remainder[i] %= modulus
    return Poly(tuple(quotient), modulus), Poly(tuple(remainder[:dd]), modulus)


def _euclid_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero:
        a, b = b, poly_divmod(a, b)[1].monic()
    return a.monic()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero only when both inputs are zero)."""

    a._same(b)
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    if a.modulus is None:
        _, fa = _split_rational(a.coeffs)  # type: ignore[arg-type]
        _, fb = _split_rational(b.coeffs)  # type: ignore[arg-type]
        candidate = _int_heu_gcd(fa, fb)
        if candidate is not None:
            return Poly(tuple(candidate), None).monic()
    return _euclid_gcd(a, b)


def poly_eval(poly: Poly, point: Union[Poly, Scalar]) -> Union[Poly, Scalar]:
    """Horner evaluation at a scalar, or composition when point is a Poly."""

    if isinstance(point, Poly):
        poly._same(point)
        result: Union[Poly, Scalar] = Poly((), poly.modulus)
        for c in reversed(poly.coeffs):
            result = result * point + c  # type: ignore[operator]
        return result
    if poly.modulus is None:
        value: Scalar = Fraction(0)
        x = Fraction(point)
        for c in reversed(poly.coeffs):
            value = value * x + c
        return value
    p = poly.modulus
    value = 0
    x_mod = int(point) % p
    for c in reversed(poly.coeffs):
        value = (value * x_mod + int(c)) % p
    return value


def _format_scalar(c: Scalar) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def format_poly(poly: Poly, var: str = "x") -> str:
    """Human form, highest degree first, e.g. '6*x^5 - 6*x'."""

    if poly.is_zero:
        return "0"
    parts: List[str] = []
    for degree in range(poly.degree, -1, -1):
        c = poly.coeffs[degree]
        if c == 0:
            continue
        negative = poly.modulus is None and c < 0
        magnitude = -c if negative else c
        if degree == 0:
            term = _format_scalar(magnitude)
        else:
            monomial = var if degree == 1 else f"{var}^{degree}"
            term = monomial if magnitude == 1 else f"{_format_scalar(magnitude)}*{monomial}"
        if not parts:
            parts.append(f"-{term}" if negative else term)
        else:
            parts.append(f"- {term}" if negative else f"+ {term}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


def _reduce_pair(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    modulus = num.modulus
    if num.is_zero:
        return num, Poly.const(1, modulus)
    if modulus is not None:
        g = _euclid_gcd(num, den)
        num, den = num // g, den // g
        inverse = den._inv(den.leading)
        return num * inverse, den * inverse

    num_scale, num_int = _split_rational(num.coeffs)  # type: ignore[arg-type]
    den_scale, den_int = _split_rational(den.coeffs)  # type: ignore[arg-type]
    g = _int_heu_gcd(num_int, den_int)
    if g is None:
        g_poly = _euclid_gcd(Poly(tuple(num_int)), Poly(tuple(den_int)))
        _, g = _split_rational(g_poly.coeffs)  # type: ignore[arg-type]
    num_q = _int_exact_div(num_int, g)
    den_q = _int_exact_div(den_int, g)
    if num_q is None or den_q is None:
        raise RuntimeError("gcd does not divide its inputs.")
    scale = num_scale / (den_scale * den_q[-1])
    reduced_num = Poly(tuple(Fraction(c) * scale for c in num_q))
    reduced_den = Poly(tuple(Fraction(c, den_q[-1]) for c in den_q))
    return reduced_num, reduced_den


@dataclass(frozen=True)
class RationalFunction:
    """num/den in lowest terms with a monic denominator."""

    num: Poly
    den: Poly

    def __post_init__(self) -> None:
        self.num._same(self.den)
        if self.den.is_zero:
            raise FieldZeroDivisionError("Rational function with zero denominator.")
        num, den = _reduce_pair(self.num, self.den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def from_poly(cls, poly: Poly) -> "RationalFunction":
        return cls(poly, Poly.const(1, poly.modulus))

    @property
    def modulus(self) -> Optional[int]:
        return self.num.modulus

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def _lift(self, other: Union["RationalFunction", Poly, Scalar]) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction.from_poly(other)
        return RationalFunction.from_poly(Poly.const(other, self.modulus))

    def __add__(self, other: Union["RationalFunction", Poly, Scalar]) -> "RationalFunction":
        o = self._lift(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: Union["RationalFunction", Poly, Scalar]) -> "RationalFunction":
        return self + (-self._lift(other))

    def __mul__(self, other: Union["RationalFunction", Poly, Scalar]) -> "RationalFunction":
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: Union["RationalFunction", Poly, Scalar]) -> "RationalFunction":
        o = self._lift(other)
        if o.num.is_zero:
            raise FieldZeroDivisionError("Division by the zero rational function.")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def eval(self, point: Scalar) -> Scalar:
        den_value = poly_eval(self.den, point)
        if den_value == 0:
            raise ContractError(f"Pole at {point}.")
        num_value = poly_eval(self.num, point)
        if self.modulus is None:
            return Fraction(num_value) / Fraction(den_value)  # type: ignore[arg-type]
        return (int(num_value) * pow(int(den_value), -1, self.modulus)) % self.modulus  # type: ignore[arg-type]

    def eval_mod(self, point: int, p: int) -> int:
        """Reduce a rational function over Q mod p and evaluate at point."""

        num = self.num.reduce_mod(p)
        den = self.den.reduce_mod(p)
        den_value = int(poly_eval(den, point))  # type: ignore[arg-type]
        if den_value == 0:
            raise ContractError(f"Pole at {point} mod {p}.")
        return (int(poly_eval(num, point)) * pow(den_value, -1, p)) % p  # type: ignore[arg-type]

    def format(self, var: str = "x") -> str:
        if self.is_polynomial:
            return format_poly(self.num, var)
        return f"({format_poly(self.num, var)})/({format_poly(self.den, var)})"

    def __str__(self) -> str:
        return self.format()


# ---------------------------------------------------------------------------
# The recurrence for f(n) in terms of u = f(2)
# ---------------------------------------------------------------------------


_U = Poly.x()
_SD_VALUES: List[RationalFunction] = [
    RationalFunction.from_poly(Poly.const(0)),
    RationalFunction.from_poly(Poly.const(1)),
    RationalFunction.from_poly(_U),
]
_SD_LOCK = Lock()


def sd_value(n: int) -> RationalFunction:
    """
    f(n) as a rational function of u = f(2), from f(0)=0, f(1)=1, f(2)=u and
    f(n+1) = f(n-1) * (f(n)+1) / (f(n)-1). Memoized.
    """

    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ContractError(f"n must be a nonnegative integer (got {n!r}).")
    with _SD_LOCK:
        while len(_SD_VALUES) <= n:
            prev, current = _SD_VALUES[-2], _SD_VALUES[-1]
            _SD_VALUES.append(prev * (current + 1) / (current - 1))
        return _SD_VALUES[n]


_P_K: List[Poly] = [Poly.const(1)]
_P_K_LOCK = Lock()


def p_k_poly(k: int) -> Poly:
    """p_0 = 1, p_{k+1} = 2 + (u-1) p_k."""

    if k < 0:
        raise ContractError(f"k must be >= 0 (got {k}).")
    with _P_K_LOCK:
        while len(_P_K) <= k:
            _P_K.append(2 + (_U - 1) * _P_K[-1])
        return _P_K[k]


def p_k_closed_form(k: int) -> Poly:
    """2 + 2(u-1) + ... + 2(u-1)^(k-1) + (u-1)^k."""

    shifted = _U - 1
    total = Poly.const(0)
    term = Poly.const(1)
    for _ in range(k):
        total = total + 2 * term
        term = term * shifted
    return total + term


@dataclass(frozen=True)
class ClosedFormReport:
    ok: bool
    k_max: int
    first_failure: Optional[int] = None
    failed_check: Optional[str] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "ok": self.ok,
            "k_max": self.k_max,
            "first_failure": self.first_failure,
            "failed_check": self.failed_check,
        }


def verify_closed_forms(k_max: int) -> ClosedFormReport:
    """For k <= k_max: p_k's closed form, f(2k+1) = p_k/(u-1)^k and f(2k+2) = 1 + (u-1)p_k."""

    if k_max < 1:
        raise ContractError(f"k_max must be >= 1 (got {k_max}).")
    shifted = _U - 1
    for k in range(k_max + 1):
        p_k = p_k_poly(k)
        if p_k != p_k_closed_form(k):
            return ClosedFormReport(False, k_max, k, "closed_form")
        if sd_value(2 * k + 1) != RationalFunction(p_k, shifted**k):
            return ClosedFormReport(False, k_max, k, "odd_value")
        if sd_value(2 * k + 2) != RationalFunction.from_poly(1 + shifted * p_k):
            return ClosedFormReport(False, k_max, k, "even_value")
    return ClosedFormReport(True, k_max)


# ---------------------------------------------------------------------------
# Identities
# ---------------------------------------------------------------------------


def _poly_from_roots(roots: Sequence[int]) -> Poly:
    result = Poly.const(1)
    for root in roots:
        result = result * (_U - root)
    return result


def tchar_constraint() -> Poly:
    """Numerator of f(2)f(3) - f(6), monic: u(u-2)(u^2+1)."""

    difference = sd_value(2) * sd_value(3) - sd_value(6)
    numerator = difference.num.monic()
    expected = _poly_from_roots([0, 2]) * (_U**2 + 1)
    if not numerator.scalar_multiple_of(expected):
        raise MathCheckFailure(f"f(2)f(3) - f(6) has numerator {numerator}, expected {expected}.")
    return numerator


def alt_char_constraint() -> Poly:
    """Numerator of f(8) - f(2)f(4), monic: u^2(u-1)(u-2)."""

    difference = sd_value(8) - sd_value(2) * sd_value(4)
    numerator = difference.num.monic()
    expected = _poly_from_roots([0, 0, 1, 2])
    if not numerator.scalar_multiple_of(expected):
        raise MathCheckFailure(f"f(8) - f(2)f(4) has numerator {numerator}, expected {expected}.")
    return numerator


def tiff5_identity() -> Poly:
    """(x+1)^3 (x^3-1) - (x-1)^3 (x^3+1), which must be 6x^5 - 6x."""

    x = Poly.x()
    result = (x + 1) ** 3 * (x**3 - 1) - (x - 1) ** 3 * (x**3 + 1)
    expected = Poly.over_q([0, -6, 0, 0, 0, 6])
    if result != expected:
        raise MathCheckFailure(f"Expected 6*x^5 - 6*x, got {result}.")
    return result


def eratio_defect_poly(k: int, p: int) -> Poly:
    """(w^k((1+w)^k + (1-w)^k) - ((1+w)^k - (1-w)^k)) / 2 over F_p."""

    if p == 2 or not is_prime(p):
        raise ContractError(f"eratio_defect_poly needs an odd prime (got {p}).")
    if k < 1:
        raise ContractError(f"Exponent must be >= 1 (got {k}).")
    w = Poly.x(p)
    plus = (1 + w) ** k
    minus = (1 - w) ** k
    defect = w**k * (plus + minus) - (plus - minus)
    return defect * pow(2, -1, p)


def q_k_defect_poly(k: int, q: int) -> Poly:
    """
    w^l((1+w)^l - (1-w)^l) + (1+w)^l + (1-w)^l over F_p, with l = q-1-k.

    Valid for (q+1)/2 < k < q-1 with l odd; the result has degree 2l and
    leading coefficient 2.
    """

    p, _ = prime_power_parts(q)
    if p == 2:
        raise ContractError("q_k_defect_poly needs odd q.")
    if not (q + 1) // 2 < k < q - 1:
        raise ContractError(f"k must satisfy {(q + 1) // 2} < k < {q - 1} (got {k}).")
    l = q - 1 - k
    if l % 2 == 0:
        raise ContractError(f"l = q-1-k must be odd (got {l}).")
    w = Poly.x(p)
    plus = (1 + w) ** l
    minus = (1 - w) ** l
    result = w**l * (plus - minus) + plus + minus
    if result.degree != 2 * l or result.leading != 2 % p:
        raise MathCheckFailure(
            f"q_k for k={k}, q={q} has degree {result.degree} and leading coefficient {result.leading}."
        )
    return result


def count_roots(poly: Poly, field_spec: FieldSpec) -> int:
    """Distinct roots in F_q of a polynomial over its prime field."""

    if poly.modulus != field_spec.p:
        raise ContractError(
            f"Polynomial over {_domain_name(poly.modulus)} evaluated in {field_spec.name}."
        )
    if poly.is_zero:
        return field_spec.q
    tables = get_tables(field_spec)
    embedded = [tables.spec.index(field_spec.element(int(c))) for c in poly.coeffs]
    count = 0
    for w in range(field_spec.q):
        value = 0
        for c in reversed(embedded):
            value = tables.add(tables.mul(value, w), c)
        if value == 0:
            count += 1
    return count


def check_small_values() -> bool:
    """f(0)..f(6) against their closed forms: 0, 1, u, (u+1)/(u-1), u^2, (u^2+1)/(u-1)^2, u(u^2-u+1)."""

    u = _U
    expected = [
        RationalFunction.from_poly(Poly.const(0)),
        RationalFunction.from_poly(Poly.const(1)),
        RationalFunction.from_poly(u),
        RationalFunction(u + 1, u - 1),
        RationalFunction.from_poly(u**2),
        RationalFunction(u**2 + 1, (u - 1) ** 2),
        RationalFunction.from_poly(u * (u**2 - u + 1)),
    ]
    return all(sd_value(n) == value for n, value in enumerate(expected))


def coefficient_strings(poly: Poly) -> List[str]:
    """Low-to-high coefficients as exact strings ('3', '-1/2')."""

    return [str(c) for c in poly.coeffs]
