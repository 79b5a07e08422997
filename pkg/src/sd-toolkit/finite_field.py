"""
Exact arithmetic in finite fields F_{p^ell}.

Elements are coefficient vectors over F_p (low degree first), reduced modulo a
canonical monic irreducible polynomial: the lexicographically smallest one,
comparing coefficients low-degree-first. For ell = 1 the modulus is x, so the
prime field is plain arithmetic mod p.

Canonical element ordering compares coefficient vectors lexicographically
with a0 most significant. That ordering defines "smallest" for primitive
elements and the index used by map tables and FieldTables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .utils import (
    CompositeModulusError,
    ContractError,
    FieldMismatchError,
    FieldZeroDivisionError,
    UserError,
)


MAX_PRIME = 2**31

# Full q*q addition tables above this size cost more memory than they save.
ADD_TABLE_LIMIT = 1024

Coeffs = Tuple[int, ...]


# ---------------------------------------------------------------------------
# Integer helpers
# ---------------------------------------------------------------------------


def smallest_factor(n: int) -> Optional[int]:
    """Return the smallest prime factor of a composite n >= 2, or None if n is prime."""

    if n < 2:
        raise ValueError(f"smallest_factor expects n >= 2 (got {n}).")
    if n % 2 == 0:
        return 2 if n > 2 else None
    d = 3
    while d * d <= n:
        if n % d == 0:
            return d
        d += 2
    return None


def is_prime(n: int) -> bool:
    """Trial-division primality, exact for the sizes this toolkit handles."""

    return n >= 2 and smallest_factor(n) is None


def factorize(n: int) -> Dict[int, int]:
    """Prime factorization {prime: exponent} by trial division; factorize(1) == {}."""

    if n < 1:
        raise ValueError(f"factorize expects n >= 1 (got {n}).")
    factors: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def prime_power_parts(q: int) -> Tuple[int, int]:
    """Split q = p^ell, or raise a UserError naming q."""

    if isinstance(q, bool) or not isinstance(q, int) or q < 2:
        raise UserError(f"{q} is not a prime power.")
    factors = factorize(q)
    if len(factors) != 1:
        raise UserError(f"{q} is not a prime power.")
    ((p, ell),) = factors.items()
    return p, ell


def multiplicative_order_mod(a: int, m: int) -> int:
    """Order of a in (Z/mZ)^x; requires gcd(a, m) == 1 and m >= 2."""

    if m < 2 or gcd(a, m) != 1:
        raise ContractError(f"{a} is not a unit modulo {m}.")
    order = 1
    value = a % m
    while value != 1:
        value = (value * a) % m
        order += 1
    return order


# ---------------------------------------------------------------------------
# Polynomials over F_p (tuples, low degree first, no trailing zeros)
# ---------------------------------------------------------------------------


def _trim(coeffs: Sequence[int]) -> Coeffs:
    end = len(coeffs)
    while end > 0 and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


def _poly_sub(a: Coeffs, b: Coeffs, p: int) -> Coeffs:
    size = max(len(a), len(b))
    out = [0] * size
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def _poly_mul(a: Coeffs, b: Coeffs, p: int) -> Coeffs:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_mod(a: Coeffs, m: Coeffs, p: int) -> Coeffs:
    """Remainder of a modulo m (any nonzero m)."""

    out = list(a)
    deg_m = len(m) - 1
    lead_inv = pow(m[-1], -1, p)
    for d in range(len(out) - 1, deg_m - 1, -1):
        c = out[d] % p
        if c == 0:
            continue
        factor = (c * lead_inv) % p
        shift = d - deg_m
        for i, mc in enumerate(m):
            out[shift + i] = (out[shift + i] - factor * mc) % p
    return _trim([c % p for c in out[:deg_m]])


def _poly_gcd(a: Coeffs, b: Coeffs, p: int) -> Coeffs:
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_powmod(base: Coeffs, exponent: int, m: Coeffs, p: int) -> Coeffs:
    result: Coeffs = (1,)
    base = _poly_mod(base, m, p)
    while exponent:
        if exponent & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        exponent >>= 1
    return result


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """
    Irreducibility over F_p for a monic polynomial (low degree first).

    f of degree n is irreducible iff gcd(f, x^(p^i) - x) = 1 for i <= n/2.
    """

    f = _trim([c % p for c in modulus])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x: Coeffs = (0, 1)
    h = x
    for _ in range(n // 2):
        h = _poly_powmod(h, p, f, p)
        g = _poly_gcd(f, _poly_sub(h, x, p), p)
        if len(g) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Fields and elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """A finite field F_{p^ell} given by its canonical modulus."""

    p: int
    ell: int
    modulus: Coeffs

    @property
    def q(self) -> int:
        return self.p**self.ell

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        return f"F_{self.q}"

    def __str__(self) -> str:
        return self.name

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.ell)

    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.ell - 1))

    def element(self, value: int | Sequence[int]) -> "FieldElement":
        """Build an element from an integer (embedded constant) or a coefficient list."""

        if isinstance(value, int):
            coeffs = [value % self.p] + [0] * (self.ell - 1)
        else:
            if len(value) > self.ell:
                raise ContractError(
                    f"{self.name} elements have {self.ell} coefficient(s), got {len(value)}."
                )
            coeffs = [int(c) % self.p for c in value] + [0] * (self.ell - len(value))
        return FieldElement(self, tuple(coeffs))

    def index(self, element: "FieldElement") -> int:
        """Position of an element in the canonical ordering."""

        if element.spec != self:
            raise FieldMismatchError(f"Element of {element.spec.name} used with {self.name}.")
        value = 0
        for c in element.coeffs:
            value = value * self.p + c
        return value

    def element_at(self, index: int) -> "FieldElement":
        """Inverse of index()."""

        if not 0 <= index < self.q:
            raise ContractError(f"Index {index} is outside {self.name} (size {self.q}).")
        coeffs = [0] * self.ell
        for position in range(self.ell - 1, -1, -1):
            index, coeffs[position] = divmod(index, self.p)
        return FieldElement(self, tuple(coeffs))

    def elements(self) -> Iterator["FieldElement"]:
        """All elements in canonical order."""

        for coeffs in itertools.product(range(self.p), repeat=self.ell):
            yield FieldElement(self, coeffs)

    def subfield_elements(self, degree: int) -> List["FieldElement"]:
        """Roots of w^(p^degree) - w, i.e. the subfield of order p^degree (if degree | ell)."""

        size = self.p**degree
        return [a for a in self.elements() if power(a, size) == a]

    def to_dict(self) -> Dict[str, object]:
        return {"p": self.p, "ell": self.ell, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "FieldSpec":
        """Rebuild a FieldSpec; the modulus must be the canonical one for (p, ell)."""

        try:
            p = int(data["p"])  # type: ignore[arg-type]
            ell = int(data["ell"])  # type: ignore[arg-type]
            modulus = tuple(int(c) for c in data["modulus"])  # type: ignore[union-attr]
        except (KeyError, TypeError, ValueError) as exc:
            raise UserError(f"Invalid field description {data!r}: {exc}") from exc
        spec = make_field(p, ell)
        if modulus != spec.modulus:
            raise ContractError(
                f"Modulus {list(modulus)} is not the canonical modulus "
                f"{list(spec.modulus)} of {spec.name}."
            )
        return spec


@dataclass(frozen=True)
class FieldElement:
    """An element of a FieldSpec as a reduced coefficient vector."""

    spec: FieldSpec
    coeffs: Coeffs

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def index(self) -> int:
        return self.spec.index(self)

    @property
    def value(self) -> int:
        """Integer value for prime-field elements."""

        if self.spec.ell != 1:
            raise ContractError(f"{self.spec.name} elements are not plain integers.")
        return self.coeffs[0]

    def to_list(self) -> List[int]:
        return list(self.coeffs)

    def __str__(self) -> str:
        if self.spec.ell == 1:
            return str(self.coeffs[0])
        terms = []
        for degree, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if degree == 0:
                terms.append(str(c))
            else:
                monomial = "x" if degree == 1 else f"x^{degree}"
                terms.append(monomial if c == 1 else f"{c}{monomial}")
        return "+".join(terms) if terms else "0"

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return add(self, other)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return sub(self, other)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return mul(self, other)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return div(self, other)

    def __neg__(self) -> "FieldElement":
        return neg(self)

    def __pow__(self, exponent: int) -> "FieldElement":
        return power(self, exponent)

    def inverse(self) -> "FieldElement":
        return inv(self)


@lru_cache(maxsize=None)
def make_field(p: int, ell: int) -> FieldSpec:
    """Construct F_{p^ell} with its canonical (lexicographically smallest) modulus."""

    if isinstance(p, bool) or not isinstance(p, int) or p < 2:
        raise UserError(f"Characteristic must be a prime >= 2 (got {p!r}).")
    if p >= MAX_PRIME:
        raise UserError(f"Characteristic must be below 2^31 (got {p}).")
    factor = smallest_factor(p)
    if factor is not None:
        raise CompositeModulusError(p, factor)
    if isinstance(ell, bool) or not isinstance(ell, int) or ell < 1:
        raise UserError(f"Extension degree must be >= 1 (got {ell!r}).")

    if ell == 1:
        return FieldSpec(p, 1, (0, 1))

    for tail in itertools.product(range(p), repeat=ell):
        if tail[0] == 0:
            continue  # divisible by x
        candidate = tail + (1,)
        if is_irreducible(candidate, p):
            return FieldSpec(p, ell, candidate)
    raise RuntimeError(f"No irreducible polynomial of degree {ell} found over F_{p}.")


def field_of_order(q: int) -> FieldSpec:
    """make_field for a prime power q."""

    p, ell = prime_power_parts(q)
    return make_field(p, ell)


# ---------------------------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------------------------


def _check_same(a: FieldElement, b: FieldElement) -> FieldSpec:
    if a.spec != b.spec:
        raise FieldMismatchError(f"Operands from {a.spec.name} and {b.spec.name}.")
    return a.spec


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    spec = _check_same(a, b)
    p = spec.p
    return FieldElement(spec, tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)))


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    spec = _check_same(a, b)
    p = spec.p
    return FieldElement(spec, tuple((x - y) % p for x, y in zip(a.coeffs, b.coeffs)))


def neg(a: FieldElement) -> FieldElement:
    p = a.spec.p
    return FieldElement(a.spec, tuple((-x) % p for x in a.coeffs))


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    spec = _check_same(a, b)
    p, ell = spec.p, spec.ell
    if ell == 1:
        return FieldElement(spec, ((a.coeffs[0] * b.coeffs[0]) % p,))

    product = [0] * (2 * ell - 1)
    for i, x in enumerate(a.coeffs):
        if x == 0:
            continue
        for j, y in enumerate(b.coeffs):
            product[i + j] += x * y
    # The modulus is monic: fold x^d (d >= ell) back down.
    modulus = spec.modulus
    for d in range(2 * ell - 2, ell - 1, -1):
        c = product[d] % p
        if c == 0:
            continue
        shift = d - ell
        for i in range(ell):
            product[shift + i] -= c * modulus[i]
        product[d] = 0
    return FieldElement(spec, tuple(c % p for c in product[:ell]))


def power(a: FieldElement, exponent: int) -> FieldElement:
    """Square-and-multiply; negative exponents go through the inverse."""

    if exponent < 0:
        return power(inv(a), -exponent)
    result = a.spec.one()
    base = a
    while exponent:
        if exponent & 1:
            result = mul(result, base)
        base = mul(base, base)
        exponent >>= 1
    return result


def inv(a: FieldElement) -> FieldElement:
    if a.is_zero:
        raise FieldZeroDivisionError(f"Zero has no inverse in {a.spec.name}.")
    return power(a, a.spec.q - 2)


def div(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    if b.is_zero:
        raise FieldZeroDivisionError(f"Division by zero in {b.spec.name}.")
    return mul(a, inv(b))


def frobenius(a: FieldElement) -> FieldElement:
    """The automorphism a -> a^p."""

    return power(a, a.spec.p)


def element_order(a: FieldElement) -> int:
    """Least n >= 1 with a^n = 1."""

    if a.is_zero:
        raise ContractError("Zero has no multiplicative order.")
    one = a.spec.one()
    order = a.spec.q - 1
    for prime in factorize(order) if order > 1 else {}:
        while order % prime == 0 and power(a, order // prime) == one:
            order //= prime
    return order


def primitive_element(spec: FieldSpec) -> FieldElement:
    """Smallest element (canonical order) generating the multiplicative group."""

    return _primitive_element(spec)


@lru_cache(maxsize=None)
def _primitive_element(spec: FieldSpec) -> FieldElement:
    group_order = spec.q - 1
    primes = list(factorize(group_order)) if group_order > 1 else []
    one = spec.one()
    for candidate in spec.elements():
        if candidate.is_zero:
            continue
        if all(power(candidate, group_order // r) != one for r in primes):
            return candidate
    raise RuntimeError(f"No primitive element found in {spec.name}.")


# ---------------------------------------------------------------------------
# Lookup tables for q and q^2 scans
# ---------------------------------------------------------------------------


class FieldTables:
    """
    Integer-indexed arithmetic for one field.

    Elements are canonical indices. Multiplication, inverses and powers use
    log/antilog tables of the primitive element; addition uses a full table
    for q <= ADD_TABLE_LIMIT and digit arithmetic otherwise.
    """

    def __init__(self, spec: FieldSpec) -> None:
        self.spec = spec
        self.q = spec.q
        self.p = spec.p
        self.order = self.q - 1
        self.zero = 0
        self.one = spec.index(spec.one())

        self.exp: List[int] = []
        self.log: List[int] = [-1] * self.q
        generator = primitive_element(spec)
        current = spec.one()
        for k in range(self.order):
            index = spec.index(current)
            self.exp.append(index)
            self.log[index] = k
            current = mul(current, generator)

        self._weights = [self.p ** (spec.ell - 1 - i) for i in range(spec.ell)]
        self.neg: List[int] = [spec.index(neg(spec.element_at(i))) for i in range(self.q)]
        self._add_table: Optional[List[List[int]]] = None
        if spec.ell > 1 and self.q <= ADD_TABLE_LIMIT:
            self._add_table = [
                [self._add_digits(i, j) for j in range(self.q)] for i in range(self.q)
            ]

    def _add_digits(self, i: int, j: int) -> int:
        p = self.p
        total = 0
        for weight in self._weights:
            di, i = divmod(i, weight)
            dj, j = divmod(j, weight)
            total += ((di + dj) % p) * weight
        return total

    def add(self, i: int, j: int) -> int:
        if self.spec.ell == 1:
            return (i + j) % self.p
        if self._add_table is not None:
            return self._add_table[i][j]
        return self._add_digits(i, j)

    def sub(self, i: int, j: int) -> int:
        return self.add(i, self.neg[j])

    def mul(self, i: int, j: int) -> int:
        if i == 0 or j == 0:
            return 0
        return self.exp[(self.log[i] + self.log[j]) % self.order]

    def inv(self, i: int) -> int:
        if i == 0:
            raise FieldZeroDivisionError(f"Zero has no inverse in {self.spec.name}.")
        return self.exp[(-self.log[i]) % self.order]

    def div(self, i: int, j: int) -> int:
        return self.mul(i, self.inv(j))

    def power(self, i: int, exponent: int) -> int:
        if exponent == 0:
            return self.one
        if i == 0:
            if exponent < 0:
                raise FieldZeroDivisionError(f"Zero has no inverse in {self.spec.name}.")
            return 0
        return self.exp[(self.log[i] * exponent) % self.order]

    def is_square(self, i: int) -> bool:
        """Squares in odd characteristic are exactly the even powers of the generator."""

        return i == 0 or self.log[i] % 2 == 0 or self.p == 2

    def element(self, i: int) -> FieldElement:
        return self.spec.element_at(i)


@lru_cache(maxsize=64)
def get_tables(spec: FieldSpec) -> FieldTables:
    """Shared FieldTables per field (per process)."""

    return FieldTables(spec)
