"""
Classification of SD power maps and SD-groups of finite fields.

Why this module exists:
- compute_sd_group is the fast path: every SD self-map of F_q (q odd) is
  w -> w^k for some k coprime to q-1, and w^k is SD exactly when the
  Eratio identity holds at every point.
- classify_power names which of the six power-map cases applies, for finite
  fields and for descriptor-level infinite fields.
- The F_5 characterizations and the root-of-unity equivalences are computed
  independently so their agreement is a real check, not a tautology.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb, factorial, gcd
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .finite_field import (
    FieldSpec,
    element_order,
    factorize,
    field_of_order,
    get_tables,
    is_prime,
    multiplicative_order_mod,
    prime_power_parts,
)
from .sd_maps import (
    DEFAULT_ORACLE_BUDGET,
    MapTable,
    brute_force_sd_maps,
    is_sd_map,
    squares_sign_map,
)
from .utils import ContractError, OracleRequiredError, UserError


# ---------------------------------------------------------------------------
# SD-groups of finite fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SdClassification:
    """
    SD(F_q) as computed by the exponent scan.

    In characteristic 2 SD(F_q) is not a set of power maps: it is every
    bijection fixing 1. `exponents` is then empty, `power_map_regime` is
    False and `census` holds (q-1)!. `is_exceptional` always means
    SD(F_q) != Aut(F_q).
    """

    q: int
    p: int
    ell: int
    exponents: Tuple[int, ...]
    aut_exponents: Tuple[int, ...]
    is_exceptional: bool
    power_map_regime: bool = True
    census: Optional[int] = None

    @property
    def size(self) -> int:
        return self.census if self.census is not None else len(self.exponents)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "p": self.p,
            "ell": self.ell,
            "exponents": list(self.exponents),
            "aut_exponents": list(self.aut_exponents),
            "is_exceptional": self.is_exceptional,
            "power_map_regime": self.power_map_regime,
            "census": self.census,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SdClassification":
        return cls(
            q=int(data["q"]),
            p=int(data["p"]),
            ell=int(data["ell"]),
            exponents=tuple(int(k) for k in data["exponents"]),
            aut_exponents=tuple(int(k) for k in data["aut_exponents"]),
            is_exceptional=bool(data["is_exceptional"]),
            power_map_regime=bool(data["power_map_regime"]),
            census=None if data.get("census") is None else int(data["census"]),
        )


def eratio_holds(k: int, field_spec: FieldSpec) -> bool:
    """
    w^k((1+w)^k + (1-w)^k) == (1+w)^k - (1-w)^k at every w of the field.

    Exponents at or beyond q-1 are accepted; only k >= 1 is required.
    """

    if field_spec.p == 2:
        raise ContractError("The Eratio reduction needs odd characteristic.")
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise ContractError(f"Exponent must be >= 1 (got {k!r}).")

    tables = get_tables(field_spec)
    one = tables.one
    for w in range(field_spec.q):
        plus = tables.power(tables.add(one, w), k)
        minus = tables.power(tables.sub(one, w), k)
        lhs = tables.mul(tables.power(w, k), tables.add(plus, minus))
        if lhs != tables.sub(plus, minus):
            return False
    return True


def aut_exponents(field_spec: FieldSpec) -> Tuple[int, ...]:
    """Frobenius powers p^0, ..., p^(ell-1)."""

    return tuple(field_spec.p**j for j in range(field_spec.ell))


def compute_sd_group(field_spec: FieldSpec) -> SdClassification:
    """Exponent scan over k in [1, q-1) coprime to q-1 (odd q), census in characteristic 2."""

    q, p, ell = field_spec.q, field_spec.p, field_spec.ell
    aut = aut_exponents(field_spec)
    if p == 2:
        census = factorial(q - 1)
        return SdClassification(
            q=q,
            p=p,
            ell=ell,
            exponents=(),
            aut_exponents=aut,
            is_exceptional=census != ell,
            power_map_regime=False,
            census=census,
        )

    group_order = q - 1
    exponents = tuple(
        k
        for k in range(1, group_order)
        if gcd(k, group_order) == 1 and eratio_holds(k, field_spec)
    )
    return SdClassification(
        q=q,
        p=p,
        ell=ell,
        exponents=exponents,
        aut_exponents=aut,
        is_exceptional=set(exponents) != set(aut),
    )


def odd_prime_powers(max_q: int) -> List[int]:
    """Odd prime powers 3 <= q <= max_q, ascending."""

    return [q for q in range(3, max_q + 1, 2) if len(factorize(q)) == 1]


def _classify_order(q: int) -> SdClassification:
    return compute_sd_group(field_of_order(q))


def classify_fields(orders: Sequence[int], jobs: int = 1) -> List[SdClassification]:
    """
    compute_sd_group for many field orders, optionally across processes.

    Results come back sorted by q whatever the worker count.
    """

    orders = sorted(set(orders))
    if jobs <= 1 or len(orders) <= 1:
        results = [_classify_order(q) for q in orders]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(_classify_order, orders, chunksize=4))
    return sorted(results, key=lambda item: item.q)


def sweep_summary(classifications: Iterable[SdClassification]) -> Dict[str, Any]:
    """Summary row set; `ok` iff the exceptional fields are exactly {F_5} (when present)."""

    rows = sorted(classifications, key=lambda item: item.q)
    exceptional = [row.q for row in rows if row.is_exceptional]
    expected = [5] if any(row.q == 5 for row in rows) else []
    return {
        "count": len(rows),
        "max_q": rows[-1].q if rows else None,
        "exceptional_qs": exceptional,
        "ok": exceptional == expected,
    }


def same_characteristic_sd_maps(
    domain: FieldSpec,
    codomain: FieldSpec,
    budget: int = DEFAULT_ORACLE_BUDGET,
) -> List[MapTable]:
    """
    Oracle enumeration of SD-maps between fields of one characteristic.

    In odd characteristic every such map lands on the subfield of order
    |domain| of the codomain.
    """

    if domain.p != codomain.p:
        raise ContractError(
            f"{domain.name} and {codomain.name} have different characteristics."
        )
    return brute_force_sd_maps(domain, codomain, mode="oracle", budget=budget)


# ---------------------------------------------------------------------------
# Lucas's theorem
# ---------------------------------------------------------------------------


def lucas_binomial(n: int, k: int, p: int) -> int:
    """C(n, k) mod p as the product of binomials of base-p digits."""

    if n < 0 or k < 0:
        raise ContractError("lucas_binomial expects nonnegative n and k.")
    if not is_prime(p):
        raise ContractError(f"{p} is not prime.")
    result = 1
    while n or k:
        n, n_digit = divmod(n, p)
        k, k_digit = divmod(k, p)
        if k_digit > n_digit:
            return 0
        result = (result * comb(n_digit, k_digit)) % p
    return result


def is_p_power_by_binomials(k: int, p: int) -> bool:
    """True iff p divides C(k, j) for every 0 < j < k, i.e. k is a power of p."""

    if k < 1:
        raise ContractError(f"Exponent must be >= 1 (got {k}).")
    return all(lucas_binomial(k, j, p) == 0 for j in range(1, k))


# ---------------------------------------------------------------------------
# Field descriptors and the power-map classifier
# ---------------------------------------------------------------------------


RootOracle = Callable[[int], bool]


def _prime_to_part(n: int, p: int) -> int:
    if p < 2:
        return n
    while n % p == 0:
        n //= p
    return n


@dataclass(frozen=True)
class FieldDescriptor:
    """
    What classify_power needs to know about a field.

    `root_of_unity_oracle(n)` answers whether the field holds a nontrivial
    n-th root of unity. Finite descriptors derive it from q-1.
    """

    characteristic: int
    order: Optional[int]
    kind: str
    root_of_unity_oracle: Optional[RootOracle] = field(default=None, compare=False)
    details: Tuple[Tuple[str, Any], ...] = ()

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    @property
    def name(self) -> str:
        if self.order is not None:
            return f"F_{self.order}"
        return {
            "algebraic_closure": f"algebraic closure of F_{self.characteristic}",
            "rational_function_field": f"F_{self.characteristic}(t)",
            "rationals": "Q",
        }.get(self.kind, f"{self.kind} field of characteristic {self.characteristic}")

    def has_nontrivial_root(self, n: int) -> bool:
        if self.root_of_unity_oracle is None:
            raise OracleRequiredError(
                f"Deciding this case for {self.name} needs a root-of-unity oracle."
            )
        return self.root_of_unity_oracle(n)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind}
        if self.order is not None:
            data["q"] = self.order
        elif self.kind != "rationals":
            data["p"] = self.characteristic
        for key, value in self.details:
            data[key] = list(value) if isinstance(value, tuple) else value
        return data


def finite(q: int) -> FieldDescriptor:
    p, _ = prime_power_parts(q)
    return FieldDescriptor(p, q, "finite", lambda n: gcd(n, q - 1) > 1)


def algebraic_closure(p: int) -> FieldDescriptor:
    """Every root of unity of order prime to p is present."""

    _require_prime(p)
    return FieldDescriptor(p, None, "algebraic_closure", lambda n: _prime_to_part(n, p) > 1)


def rational_function_field(p: int) -> FieldDescriptor:
    """F_p(t): the only roots of unity are those of F_p."""

    _require_prime(p)
    return FieldDescriptor(p, None, "rational_function_field", lambda n: gcd(n, p - 1) > 1)


def rationals() -> FieldDescriptor:
    return FieldDescriptor(0, None, "rationals", lambda n: n % 2 == 0)


def custom(p: int, root_orders: Iterable[int]) -> FieldDescriptor:
    """
    An infinite field whose roots of unity have orders dividing some entry of root_orders.

    An empty list means no nontrivial roots of unity at all.
    """

    if p != 0:
        _require_prime(p)
    orders = tuple(sorted(set(int(r) for r in root_orders)))
    if any(r < 1 for r in orders):
        raise UserError("root_orders entries must be positive integers.")
    return FieldDescriptor(
        p,
        None,
        "custom",
        lambda n: any(gcd(n, r) > 1 for r in orders),
        details=(("root_orders", orders),),
    )


def opaque(p: int) -> FieldDescriptor:
    """An infinite field of characteristic p with no root-of-unity information."""

    if p != 0:
        _require_prime(p)
    return FieldDescriptor(p, None, "opaque", None)


def _require_prime(p: int) -> None:
    if isinstance(p, bool) or not isinstance(p, int) or not is_prime(p):
        raise UserError(f"Characteristic must be prime (got {p!r}).")


def descriptor_from_dict(data: Dict[str, Any]) -> FieldDescriptor:
    """Parse the JSON descriptor accepted by `power --descriptor`."""

    if not isinstance(data, dict) or "kind" not in data:
        raise UserError("A field descriptor must be a JSON object with a 'kind'.")
    kind = data["kind"]

    def need(key: str) -> int:
        value = data.get(key)
        if isinstance(value, bool) or not isinstance(value, int):
            raise UserError(f"Descriptor kind '{kind}' needs an integer '{key}'.")
        return value

    if kind == "finite":
        return finite(need("q"))
    if kind == "algebraic_closure":
        return algebraic_closure(need("p"))
    if kind == "rational_function_field":
        return rational_function_field(need("p"))
    if kind == "rationals":
        return rationals()
    if kind == "custom":
        orders = data.get("root_orders")
        if not isinstance(orders, list):
            raise UserError("Descriptor kind 'custom' needs a 'root_orders' list.")
        return custom(need("p"), orders)
    if kind == "opaque":
        return opaque(need("p"))
    raise UserError(
        f"Unknown descriptor kind '{kind}'. Use finite, algebraic_closure, "
        "rational_function_field, rationals, custom or opaque."
    )


@dataclass(frozen=True)
class PowerClassification:
    m: int
    field_name: str
    is_sd: bool
    case_label: Optional[int]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "field": self.field_name,
            "is_sd": self.is_sd,
            "case_label": self.case_label,
        }


def _is_power_of(m: int, p: int) -> bool:
    if p < 2 or m < p:
        return False
    while m % p == 0:
        m //= p
    return m == 1


def classify_power(m: int, descriptor: FieldDescriptor) -> PowerClassification:
    """
    Which case makes w -> w^m an SD-map of the described field, if any.

    1: m = 1. 2: finite odd q, m = p^k mod (q-1). 3: finite characteristic 2,
    gcd(m, q-1) = 1. 4: infinite characteristic 2, m = 2^a m' with odd
    m' >= 3 and no nontrivial m'-th root of unity. 5: infinite, m = p^k,
    k >= 1. 6: F_5 with m = 3 mod 4 (w^m agrees with w^3 there).
    """

    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise ContractError(f"Exponent must be >= 1 (got {m!r}).")

    def result(label: Optional[int]) -> PowerClassification:
        return PowerClassification(m, descriptor.name, label is not None, label)

    if m == 1:
        return result(1)

    p = descriptor.characteristic
    if descriptor.order is not None:
        q = descriptor.order
        group_order = q - 1
        if p == 2:
            return result(3 if gcd(m, group_order) == 1 else None)
        ell = prime_power_parts(q)[1]
        if any((m - p**k) % group_order == 0 for k in range(ell)):
            return result(2)
        if q == 5 and m % 4 == 3:
            return result(6)
        return result(None)

    if p == 0:
        return result(None)
    if _is_power_of(m, p):
        return result(5)
    if p == 2:
        odd_part = _prime_to_part(m, 2)
        if odd_part >= 3 and not descriptor.has_nontrivial_root(odd_part):
            return result(4)
    return result(None)


def cube_map_char2(field_spec: FieldSpec) -> bool:
    """w^3 is SD on F_{2^ell} iff F_4 is not a subfield, i.e. ell is odd."""

    if field_spec.p != 2:
        raise ContractError(f"{field_spec.name} does not have characteristic 2.")
    return field_spec.ell % 2 == 1


def cube_map_is_sd(descriptor: FieldDescriptor) -> bool:
    """
    Whether w^3 is an SD-map of the described field.

    Holds for F_5, in characteristic 3, and in characteristic 2 when the field
    has no primitive cube root of unity (no copy of F_4).
    """

    return classify_power(3, descriptor).is_sd


def cube_map_outside_aut(field_spec: FieldSpec) -> bool:
    """w^3 lies in SD(F_q) but is not a field automorphism."""

    q, p = field_spec.q, field_spec.p
    if not classify_power(3, finite(q)).is_sd:
        return False
    return not any((3 - p**k) % (q - 1) == 0 for k in range(field_spec.ell))


# ---------------------------------------------------------------------------
# Characterizations of F_5 and the root-of-unity equivalences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class F5Characterization:
    q: int
    aut_strictly_smaller: bool
    squares_map_is_sd: bool
    sqrt_minus1_generates: bool

    @property
    def agrees(self) -> bool:
        """All three statements match q == 5."""

        expected = self.q == 5
        return (
            self.aut_strictly_smaller == expected
            and self.squares_map_is_sd == expected
            and self.sqrt_minus1_generates == expected
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "aut_strictly_smaller": self.aut_strictly_smaller,
            "squares_map_is_sd": self.squares_map_is_sd,
            "sqrt_minus1_generates": self.sqrt_minus1_generates,
            "agrees": self.agrees,
        }


def f5_characterizations(field_spec: FieldSpec) -> F5Characterization:
    """Three independent computations, each true exactly for F_5."""

    if field_spec.p == 2:
        raise ContractError("The F_5 characterizations need odd characteristic.")
    aut_smaller = compute_sd_group(field_spec).is_exceptional
    squares_sd = is_sd_map(squares_sign_map(field_spec)).holds
    minus_one = -field_spec.one()
    generates = any(
        theta * theta == minus_one and element_order(theta) == field_spec.q - 1
        for theta in field_spec.elements()
        if not theta.is_zero
    )
    return F5Characterization(field_spec.q, aut_smaller, squares_sd, generates)


@dataclass(frozen=True)
class RootOfUnityRecord:
    """
    Four statements about w -> w^m on F_q, with m = p^a * m' and p not dividing m'.

    For prime m' all four agree; for composite m' only the first three do.
    `subfield_degree` is the order of p modulo m' (None when m' = 1).
    """

    m: int
    q: int
    p: int
    a: int
    m_prime: int
    non_injective: bool
    has_mth_root: bool
    has_m_prime_th_root: bool
    contains_subfield: bool
    subfield_degree: Optional[int]

    @property
    def m_prime_is_prime(self) -> bool:
        return is_prime(self.m_prime)

    @property
    def equivalent(self) -> bool:
        core = {self.non_injective, self.has_mth_root, self.has_m_prime_th_root}
        if len(core) != 1:
            return False
        if self.m_prime_is_prime:
            return self.contains_subfield == self.non_injective
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "q": self.q,
            "p": self.p,
            "a": self.a,
            "m_prime": self.m_prime,
            "non_injective": self.non_injective,
            "has_mth_root": self.has_mth_root,
            "has_m_prime_th_root": self.has_m_prime_th_root,
            "contains_subfield": self.contains_subfield,
            "subfield_degree": self.subfield_degree,
            "equivalent": self.equivalent,
        }


def root_of_unity_equivalences(m: int, field_spec: FieldSpec) -> RootOfUnityRecord:
    """Compute each statement on its own: collisions, gcd tests and subfield degree."""

    if isinstance(m, bool) or not isinstance(m, int) or m < 2:
        raise ContractError(f"m must be >= 2 (got {m!r}).")
    p, q, ell = field_spec.p, field_spec.q, field_spec.ell
    a = 0
    m_prime = m
    while m_prime % p == 0:
        m_prime //= p
        a += 1

    tables = get_tables(field_spec)
    images = {tables.power(w, m) for w in range(q)}
    non_injective = len(images) != q

    if m_prime == 1:
        return RootOfUnityRecord(m, q, p, a, 1, non_injective, False, False, False, None)

    degree = multiplicative_order_mod(p, m_prime)
    return RootOfUnityRecord(
        m=m,
        q=q,
        p=p,
        a=a,
        m_prime=m_prime,
        non_injective=non_injective,
        has_mth_root=gcd(m, q - 1) > 1,
        has_m_prime_th_root=gcd(m_prime, q - 1) > 1,
        contains_subfield=ell % degree == 0,
        subfield_degree=degree,
    )
