"""
Explicit maps between finite fields and the SD functional equation.

Why this module exists:
- A MapTable is the concrete object every SD check runs on.
- is_sd_map and structural_report are the direct, exhaustive verifications.
- brute_force_sd_maps is the oracle the faster classifiers are tested against.

A map f: F -> F' is an SD-map when f((x+y)/(x-y)) = (f(x)+f(y))/(f(x)-f(y))
for all x != y. We check the cleared form
f((x+y)/(x-y)) * (f(x)-f(y)) = f(x)+f(y) together with f(x) != f(y), so no
codomain division ever happens.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .finite_field import (
    FieldElement,
    FieldSpec,
    get_tables,
    make_field,
)
from .utils import BudgetExceededError, ContractError, FieldMismatchError, UserError


DEFAULT_ORACLE_BUDGET = 10**8

ORACLE_MODES = ("oracle", "pruned")


@dataclass(frozen=True)
class MapTable:
    """
    A total function between two finite fields.

    images[i] is the canonical index (in the codomain) of the image of the
    domain element with canonical index i.
    """

    domain: FieldSpec
    codomain: FieldSpec
    images: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.domain.q:
            raise ContractError(
                f"A map on {self.domain.name} needs {self.domain.q} images, "
                f"got {len(self.images)}."
            )
        size = self.codomain.q
        for index, value in enumerate(self.images):
            if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value < size:
                raise ContractError(
                    f"Image #{index} ({value!r}) is not an element of {self.codomain.name}."
                )

    def __call__(self, x: FieldElement) -> FieldElement:
        return self.image(x)

    def image(self, x: FieldElement) -> FieldElement:
        if x.spec != self.domain:
            raise FieldMismatchError(
                f"Map on {self.domain.name} applied to an element of {x.spec.name}."
            )
        return self.codomain.element_at(self.images[self.domain.index(x)])

    def image_elements(self) -> List[FieldElement]:
        return [self.codomain.element_at(i) for i in self.images]

    def to_dict(self) -> Dict[str, object]:
        return {
            "domain": self.domain.to_dict(),
            "codomain": self.codomain.to_dict(),
            "images": [element.to_list() for element in self.image_elements()],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "MapTable":
        """Parse the JSON map format used by `check-map`."""

        if not isinstance(data, dict):
            raise UserError("A map description must be a JSON object.")
        missing = [key for key in ("domain", "codomain", "images") if key not in data]
        if missing:
            raise UserError(f"Map description is missing: {', '.join(missing)}.")
        domain = FieldSpec.from_dict(data["domain"])  # type: ignore[arg-type]
        codomain = FieldSpec.from_dict(data["codomain"])  # type: ignore[arg-type]
        raw_images = data["images"]
        if not isinstance(raw_images, list):
            raise UserError("Map images must be a list of coefficient arrays.")
        images = []
        for position, raw in enumerate(raw_images):
            if isinstance(raw, int) and not isinstance(raw, bool):
                raw = [raw]
            if not isinstance(raw, list) or len(raw) != codomain.ell:
                raise UserError(
                    f"Image #{position} must be a list of {codomain.ell} coefficient(s)."
                )
            if any(not isinstance(c, int) or isinstance(c, bool) or not 0 <= c < codomain.p for c in raw):
                raise UserError(
                    f"Image #{position} has coefficients outside [0, {codomain.p})."
                )
            images.append(codomain.index(codomain.element(raw)))
        return cls(domain, codomain, tuple(images))


@dataclass(frozen=True)
class SdVerdict:
    """Outcome of is_sd_map: the first violating ordered pair, if any."""

    holds: bool
    witness: Optional[Tuple[FieldElement, FieldElement]] = None
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> Dict[str, object]:
        witness = None
        if self.witness is not None:
            witness = [self.witness[0].to_list(), self.witness[1].to_list()]
        return {"holds": self.holds, "witness": witness, "reason": self.reason}


@dataclass(frozen=True)
class StructuralReport:
    """
    Pointwise properties every SD-map into odd characteristic must have.

    `additive` is informational: SD-maps need not be additive (w^3 on F_5).
    `all_hold` covers the structural flags only.
    """

    injective: bool
    fixes_zero: bool
    fixes_one: bool
    odd: bool
    multiplicative: bool
    additive: bool
    first_violation: Optional[Tuple[str, Tuple[FieldElement, FieldElement]]] = None

    @property
    def all_hold(self) -> bool:
        return (
            self.injective
            and self.fixes_zero
            and self.fixes_one
            and self.odd
            and self.multiplicative
        )

    def to_dict(self) -> Dict[str, object]:
        violation = None
        if self.first_violation is not None:
            flag, (a, b) = self.first_violation
            violation = {"flag": flag, "witness": [a.to_list(), b.to_list()]}
        return {
            "injective": self.injective,
            "fixes_zero": self.fixes_zero,
            "fixes_one": self.fixes_one,
            "odd": self.odd,
            "multiplicative": self.multiplicative,
            "additive": self.additive,
            "first_violation": violation,
        }


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def from_images(
    domain: FieldSpec, codomain: FieldSpec, images: Sequence[FieldElement]
) -> MapTable:
    """Build a MapTable from images listed in canonical domain order."""

    return MapTable(domain, codomain, tuple(codomain.index(value) for value in images))


def from_function(
    domain: FieldSpec,
    codomain: FieldSpec,
    fn: Callable[[FieldElement], FieldElement],
) -> MapTable:
    return from_images(domain, codomain, [fn(x) for x in domain.elements()])


def power_map(field: FieldSpec, exponent: int) -> MapTable:
    """w -> w^m on one field (0 -> 0 for m >= 1)."""

    if isinstance(exponent, bool) or not isinstance(exponent, int) or exponent < 1:
        raise ContractError(f"Power-map exponent must be >= 1 (got {exponent!r}).")
    tables = get_tables(field)
    return MapTable(field, field, tuple(tables.power(i, exponent) for i in range(field.q)))


def identity_map(field: FieldSpec) -> MapTable:
    return MapTable(field, field, tuple(range(field.q)))


def squares_sign_map(field: FieldSpec) -> MapTable:
    """Fix squares and send non-squares to their additive inverses."""

    if field.p == 2:
        raise ContractError("The squares/non-squares map needs odd characteristic.")
    tables = get_tables(field)
    return MapTable(
        field,
        field,
        tuple(i if tables.is_square(i) else tables.neg[i] for i in range(field.q)),
    )


def fourth_root_embedding(codomain: FieldSpec, zeta: FieldElement) -> MapTable:
    """F_5 -> codomain with 0 -> 0, +-1 -> +-1, +-2 -> +-zeta, for zeta^2 = -1."""

    if zeta.spec != codomain:
        raise FieldMismatchError(f"zeta lives in {zeta.spec.name}, not {codomain.name}.")
    if zeta * zeta != -codomain.one():
        raise ContractError(f"{zeta} is not a square root of -1 in {codomain.name}.")
    domain = make_field(5, 1)
    one = codomain.one()
    images = [codomain.zero(), one, zeta, -zeta, -one]
    return from_images(domain, codomain, images)


def prime_field_inclusion(codomain: FieldSpec) -> MapTable:
    """F_3 -> codomain sending 0, 1, -1 to 0, 1, -1."""

    domain = make_field(3, 1)
    one = codomain.one()
    return from_images(domain, codomain, [codomain.zero(), one, -one])


def compose(outer: MapTable, inner: MapTable) -> MapTable:
    """outer after inner."""

    if inner.codomain != outer.domain:
        raise FieldMismatchError(
            f"Cannot compose a map on {outer.domain.name} after a map into {inner.codomain.name}."
        )
    return MapTable(
        inner.domain,
        outer.codomain,
        tuple(outer.images[value] for value in inner.images),
    )


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def _first_collision(f: MapTable) -> Optional[Tuple[int, int]]:
    """First ordered pair x != y (canonical order) with f(x) == f(y)."""

    preimages: Dict[int, List[int]] = {}
    for x, value in enumerate(f.images):
        preimages.setdefault(value, []).append(x)
    for x, value in enumerate(f.images):
        group = preimages[value]
        if len(group) > 1:
            y = group[0] if group[0] != x else group[1]
            return x, y
    return None


def is_sd_map(f: MapTable) -> SdVerdict:
    """
    Check the SD equation over every ordered pair x != y of the domain.

    Injectivity is scanned first, so a map that is both non-injective and
    fails the equation reports its collision pair with reason "not injective".
    Within each scan the first violating pair in canonical order is the witness.
    """

    domain, codomain = f.domain, f.codomain
    collision = _first_collision(f)
    if collision is not None:
        x, y = collision
        return SdVerdict(
            False,
            (domain.element_at(x), domain.element_at(y)),
            "not injective",
        )

    dom = get_tables(domain)
    cod = get_tables(codomain)
    images = f.images
    q = domain.q
    for x in range(q):
        fx = images[x]
        for y in range(q):
            if y == x:
                continue
            ratio = dom.div(dom.add(x, y), dom.sub(x, y))
            fy = images[y]
            if cod.mul(images[ratio], cod.sub(fx, fy)) != cod.add(fx, fy):
                return SdVerdict(
                    False,
                    (domain.element_at(x), domain.element_at(y)),
                    "equation fails",
                )
    return SdVerdict(True)


def structural_report(f: MapTable) -> StructuralReport:
    """Exhaustive pointwise checks of the structural flags."""

    domain, codomain = f.domain, f.codomain
    dom = get_tables(domain)
    cod = get_tables(codomain)
    images = f.images
    q = domain.q
    violation: Optional[Tuple[str, Tuple[FieldElement, FieldElement]]] = None

    def note(flag: str, a: int, b_element: FieldElement) -> None:
        nonlocal violation
        if violation is None:
            violation = (flag, (domain.element_at(a), b_element))

    collision = _first_collision(f)
    injective = collision is None
    if collision is not None:
        note("injective", collision[0], domain.element_at(collision[1]))

    fixes_zero = images[dom.zero] == cod.zero
    if not fixes_zero:
        note("fixes_zero", dom.zero, codomain.element_at(images[dom.zero]))

    fixes_one = images[dom.one] == cod.one
    if not fixes_one:
        note("fixes_one", dom.one, codomain.element_at(images[dom.one]))

    odd = True
    for a in range(q):
        if images[dom.neg[a]] != cod.neg[images[a]]:
            odd = False
            note("odd", a, codomain.element_at(images[a]))
            break

    multiplicative = True
    for a in range(q):
        for b in range(q):
            if images[dom.mul(a, b)] != cod.mul(images[a], images[b]):
                multiplicative = False
                note("multiplicative", a, domain.element_at(b))
                break
        if not multiplicative:
            break

    additive = all(
        images[dom.add(a, b)] == cod.add(images[a], images[b])
        for a in range(q)
        for b in range(q)
    )

    return StructuralReport(
        injective=injective,
        fixes_zero=fixes_zero,
        fixes_one=fixes_one,
        odd=odd,
        multiplicative=multiplicative,
        additive=additive,
        first_violation=violation,
    )


def is_automorphism(f: MapTable) -> bool:
    """Bijective self-map that is additive and multiplicative."""

    if f.domain != f.codomain:
        return False
    report = structural_report(f)
    return report.injective and report.additive and report.multiplicative and report.fixes_one


def image_is_subfield(f: MapTable, require_sd: bool = True) -> bool:
    """
    Whether f(F_q) is the subfield of order q of the codomain.

    The image must be closed under + and * and equal the roots of w^q - w.
    With require_sd (the default) a non-SD map is a contract violation.
    """

    if f.domain.p != f.codomain.p:
        raise ContractError(
            f"{f.domain.name} and {f.codomain.name} have different characteristics."
        )
    if require_sd and not is_sd_map(f).holds:
        raise ContractError("image_is_subfield expects an SD-map.")

    cod = get_tables(f.codomain)
    image = set(f.images)
    for a in image:
        for b in image:
            if cod.add(a, b) not in image or cod.mul(a, b) not in image:
                return False
    size = f.domain.q
    subfield = {c for c in range(f.codomain.q) if cod.power(c, size) == c}
    return image == subfield


# ---------------------------------------------------------------------------
# Brute-force oracles
# ---------------------------------------------------------------------------


def _constraint_triples(domain: FieldSpec) -> List[Tuple[int, int, int]]:
    """(x, y, (x+y)/(x-y)) for every ordered pair x != y."""

    dom = get_tables(domain)
    q = domain.q
    return [
        (x, y, dom.div(dom.add(x, y), dom.sub(x, y)))
        for x in range(q)
        for y in range(q)
        if x != y
    ]


def _assignment_order(q: int, triples: List[Tuple[int, int, int]]) -> List[int]:
    """
    Order domain elements so that constraints close as early as possible.

    Greedy: next is the unassigned element completing the most triples, ties
    broken by canonical index. Starts from 0.
    """

    missing: List[set] = [set(triple) for triple in triples]
    touching: List[List[int]] = [[] for _ in range(q)]
    for t, members in enumerate(missing):
        for member in members:
            touching[member].append(t)

    score = [0] * q
    assigned = [False] * q
    order: List[int] = []
    current = 0
    while True:
        order.append(current)
        assigned[current] = True
        for t in touching[current]:
            members = missing[t]
            members.discard(current)
            if len(members) == 1:
                (last,) = members
                score[last] += 1
        if len(order) == q:
            return order
        current = max(
            (c for c in range(q) if not assigned[c]),
            key=lambda c: (score[c], -c),
        )


def _oracle_search(domain: FieldSpec, codomain: FieldSpec, budget: int) -> List[MapTable]:
    """Depth-first enumeration of injections with prefix pruning on the SD equation."""

    q = domain.q
    if q > codomain.q:
        return []
    cod = get_tables(codomain)
    triples = _constraint_triples(domain)
    order = _assignment_order(q, triples)
    position = [0] * q
    for pos, element in enumerate(order):
        position[element] = pos
    checks_at: List[List[Tuple[int, int, int]]] = [[] for _ in range(q)]
    for triple in triples:
        checks_at[max(position[e] for e in triple)].append(triple)

    images = [-1] * q
    used = [False] * codomain.q
    results: List[MapTable] = []
    explored = 0

    def consistent(pos: int) -> bool:
        for x, y, ratio in checks_at[pos]:
            fx, fy = images[x], images[y]
            if cod.mul(images[ratio], cod.sub(fx, fy)) != cod.add(fx, fy):
                return False
        return True

    def descend(pos: int) -> None:
        nonlocal explored
        if pos == q:
            results.append(MapTable(domain, codomain, tuple(images)))
            return
        element = order[pos]
        for candidate in range(codomain.q):
            if used[candidate]:
                continue
            explored += 1
            if explored > budget:
                raise BudgetExceededError(
                    f"Oracle search {domain.name} -> {codomain.name} exceeded the "
                    f"budget of {budget} explored nodes."
                )
            images[element] = candidate
            if consistent(pos):
                used[candidate] = True
                descend(pos + 1)
                used[candidate] = False
            images[element] = -1

    descend(0)
    return results


def _pruned_search(domain: FieldSpec, codomain: FieldSpec) -> List[MapTable]:
    """Multiplicative candidates: f(0) = 0 and f(theta^k) = u^k for u of order q-1."""

    if codomain.p == 2:
        raise ContractError("Pruned enumeration assumes odd codomain characteristic.")
    dom = get_tables(domain)
    cod = get_tables(codomain)
    group_order = domain.q - 1
    if cod.order % group_order != 0:
        return []

    results: List[MapTable] = []
    for u in range(codomain.q):
        if u == 0 or cod.power(u, group_order) != cod.one:
            continue
        # Exact order q-1 is needed for injectivity.
        log_u = cod.log[u]
        if cod.order // gcd(log_u, cod.order) != group_order:
            continue
        images = [0] * domain.q
        for k in range(group_order):
            images[dom.exp[k]] = cod.power(u, k)
        candidate = MapTable(domain, codomain, tuple(images))
        if is_sd_map(candidate).holds:
            results.append(candidate)
    return results


def brute_force_sd_maps(
    domain: FieldSpec,
    codomain: FieldSpec,
    mode: str = "oracle",
    budget: int = DEFAULT_ORACLE_BUDGET,
) -> List[MapTable]:
    """
    All SD-maps domain -> codomain, sorted by image tuple.

    oracle: every injection, pruned on partial tables (SD-maps are injective,
    so nothing is lost). pruned: only multiplicative candidates fixed by the
    image of the primitive element; odd codomain characteristic only.
    """

    if mode not in ORACLE_MODES:
        raise UserError(f"Unknown oracle mode '{mode}'. Use one of: {', '.join(ORACLE_MODES)}.")
    if mode == "oracle":
        found = _oracle_search(domain, codomain, budget)
    else:
        found = _pruned_search(domain, codomain)
    return sorted(found, key=lambda table: table.images)


def find_fourth_root_embeddings(codomain: FieldSpec) -> List[MapTable]:
    """SD-maps F_5 -> codomain built from primitive fourth roots of unity."""

    if codomain.p == 2:
        return []
    minus_one = -codomain.one()
    maps = [
        fourth_root_embedding(codomain, zeta)
        for zeta in codomain.elements()
        if zeta * zeta == minus_one
    ]
    return sorted((f for f in maps if is_sd_map(f).holds), key=lambda table: table.images)


def power_exponent_of(f: MapTable) -> Optional[int]:
    """Smallest k in [1, q-1] with f == w^k, or None if f is not a power map."""

    if f.domain != f.codomain:
        return None
    upper = max(f.domain.q - 1, 1)
    for k in range(1, upper + 1):
        if power_map(f.domain, k).images == f.images:
            return k
    return None
