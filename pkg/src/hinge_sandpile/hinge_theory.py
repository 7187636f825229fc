"""Closed-form predictions for hinge graphs and the number theory behind them.

Cycle sizes are vertex counts ``k_i`` (shared pair included) unless a function
says otherwise. Most formulas are in terms of the path lengths ``k_i - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd, lcm, prod
from typing import Sequence

from .critical_group import AbelianGroupStructure, critical_group, embeds_in, normalize_factors


def _check_sizes(ks: Sequence[int]) -> list[int]:
    ks = [int(k) for k in ks]
    if not ks:
        raise ValueError("need at least one cycle")
    if any(k < 3 for k in ks):
        raise ValueError(f"cycle sizes must be >= 3, got {ks}")
    return ks


def _check_positive(values: Sequence[int]) -> list[int]:
    values = [int(a) for a in values]
    if not values:
        raise ValueError("need at least one value")
    if any(a < 1 for a in values):
        raise ValueError(f"values must be positive, got {values}")
    return values


# -- same base shape ---------------------------------------------------------

def order_same(k: int, n: int) -> int:
    if k < 3 or n < 1:
        raise ValueError(f"need k >= 3 and n >= 1, got k={k}, n={n}")
    return (k - 1) ** (n - 1) * (k + n - 1)


def structure_same(k: int, n: int) -> AbelianGroupStructure:
    if k < 3 or n < 2:
        raise ValueError(f"need k >= 3 and n >= 2, got k={k}, n={n}")
    return normalize_factors([k - 1] * (n - 2) + [(k - 1) * (k + n - 1)])


def divisor_orders_same(k: int, n: int) -> tuple[int, int, int]:
    """``(|eta|, |delta|, |epsilon|)`` on the hinge of ``n`` cycles with ``k`` vertices each."""
    if k < 3 or n < 2:
        raise ValueError(f"need k >= 3 and n >= 2, got k={k}, n={n}")
    return k - 1, k + n - 1, (k - 1) * (k + n - 1)


# -- mixed base shapes -----------------------------------------------------------

def order_general(ks: Sequence[int]) -> int:
    ks = _check_sizes(ks)
    a = prod(k - 1 for k in ks)
    return a + sum(a // (k - 1) for k in ks)


def delta_order_general(ks: Sequence[int]) -> int:
    ks = _check_sizes(ks)
    b = lcm(*(k - 1 for k in ks))
    return b + sum(b // (k - 1) for k in ks)


def epsilon_condition(ks: Sequence[int], i: int) -> bool:
    """Some other cycle has path length a multiple of cycle ``i``'s (1-based)."""
    ks = _check_sizes(ks)
    if not 1 <= i <= len(ks):
        raise IndexError(f"cycle index {i} out of range 1..{len(ks)}")
    base = ks[i - 1] - 1
    return any((k - 1) % base == 0 for j, k in enumerate(ks, start=1) if j != i)


def epsilon_order_general(ks: Sequence[int], i: int) -> int | None:
    """``(k_i - 1) |delta|`` when the multiple condition holds, else ``None``."""
    if not epsilon_condition(ks, i):
        return None
    return (ks[i - 1] - 1) * delta_order_general(ks)


def generating_set_orders(ks: Sequence[int]) -> list[int]:
    """The ``n - 2`` largest gcds over all 3-element sub-multisets of the path lengths."""
    ks = _check_sizes(ks)
    if len(ks) < 3:
        raise ValueError("generating-set orders need at least three cycles")
    paths = [k - 1 for k in ks]
    triple = sorted((gcd(a, b, c) for a, b, c in combinations(paths, 3)), reverse=True)
    return triple[: len(ks) - 2]


def build_prediction(ks: Sequence[int]) -> "HingePrediction":
    ks = tuple(_check_sizes(ks))
    n = len(ks)
    same = len(set(ks)) == 1
    return HingePrediction(
        cycle_sizes=ks,
        predicted_order=order_general(ks),
        predicted_structure=structure_same(ks[0], n) if same and n >= 2 else None,
        predicted_delta_order=delta_order_general(ks),
        predicted_eta_order=ks[0] - 1 if same and n >= 2 else None,
        predicted_epsilon_orders=tuple(epsilon_order_general(ks, i) for i in range(1, n + 1)),
        predicted_generator_orders=tuple(generating_set_orders(ks)) if n >= 3 else (),
    )


@dataclass(frozen=True)
class HingePrediction:
    cycle_sizes: tuple[int, ...]
    predicted_order: int
    predicted_structure: AbelianGroupStructure | None
    predicted_delta_order: int
    predicted_eta_order: int | None
    predicted_epsilon_orders: tuple[int | None, ...]
    predicted_generator_orders: tuple[int, ...]

    def __post_init__(self):
        if self.predicted_order <= 0:
            raise ValueError("predicted order must be positive")
        if self.predicted_structure is not None and self.predicted_structure.order != self.predicted_order:
            raise ValueError("predicted structure disagrees with predicted order")


# -- number theory ---------------------------------------------------------------

def lcm_via_tuple_gcd(values: Sequence[int]) -> int:
    """``prod(values) / gcd`` of all products of ``n - 1`` of them."""
    values = _check_positive(values)
    if len(values) == 1:
        return values[0]
    total = prod(values)
    g = 0
    for skip in range(len(values)):
        g = gcd(g, total // values[skip])
    return total // g


def quotient_gcd(values: Sequence[int]) -> int:
    """``gcd_i(b / a_i)`` with ``b = lcm(values)``; always 1."""
    values = _check_positive(values)
    b = lcm(*values)
    return gcd(*(b // a for a in values))


def quotient_gcd_excluding(values: Sequence[int], i: int) -> int:
    """Same gcd with index ``i`` (0-based) left out but ``b`` still the lcm of all values.

    Equals 1 exactly when ``values[i]`` divides the lcm of the others; e.g.
    ``[2, 3]`` without the 2 gives ``6 / 3 = 2``.
    """
    values = _check_positive(values)
    if len(values) < 2:
        raise ValueError("need at least two values")
    b = lcm(*values)
    return gcd(*(b // a for j, a in enumerate(values) if j != i))


def consecutive_multiple_witness(n: int, m: int) -> tuple[int, int]:
    """``x`` in ``{n, 2n, ..., mn}`` and ``y`` in ``{m, 2m, ..., nm}`` with ``|x - y| = 1``.

    Needs ``gcd(n, m) == 1``; ``n == m == 1`` has no witness (both sets are ``{1}``).
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    if gcd(n, m) != 1:
        raise ValueError(f"{n} and {m} are not coprime")
    if n == 1 and m == 1:
        raise ValueError("no witness for n = m = 1: both sets are {1}")
    if m == 1:
        return n, n - 1
    if n == 1:
        return m - 1, m
    i = pow(n, -1, m)  # i n = 1 (mod m), 1 <= i < m
    x = i * n
    return x, x - 1


# -- factorisation checker -----------------------------------------------------

CONVENTIONS = ("vertices", "minus-one")


@dataclass
class Claim45Report:
    cycle_sizes: tuple[int, ...]
    convention: str
    input_values: tuple[int, ...]
    quotient: int  # a / b = |K| / |delta|
    bullet1: int
    bullet1_indices: list[int]
    bullet2: int
    bullet2_candidates: list[dict]
    bullet2_maximal: list[int]
    bullet3: int
    generator_orders: list[int]
    product: int
    product_matches_quotient: bool
    predicted_structure: AbelianGroupStructure
    snf_structure: AbelianGroupStructure
    structure_matches: bool
    consistent: bool
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "cycle_sizes": list(self.cycle_sizes),
            "convention": self.convention,
            "input_values": list(self.input_values),
            "quotient": self.quotient,
            "predicted_components": {
                "bullet1": {"value": self.bullet1, "epsilon_cycles": self.bullet1_indices},
                "bullet2": {
                    "value": self.bullet2,
                    "candidates": self.bullet2_candidates,
                    "maximal": self.bullet2_maximal,
                },
                "bullet3": {"value": self.bullet3, "generator_orders": self.generator_orders},
            },
            "product": self.product,
            "product_matches_quotient": self.product_matches_quotient,
            "predicted_structure": self.predicted_structure.to_dict(),
            "snf_structure": self.snf_structure.to_dict(),
            "structure_matches": self.structure_matches,
            "consistent": self.consistent,
            "notes": list(self.notes),
        }


def claim45_check(values: Sequence[int], convention: str = "vertices") -> Claim45Report:
    """Test the conjectured factorisation of ``|K| / |delta|`` on one hinge.

    ``convention`` says whether ``values`` are vertex counts ``k_i`` or path
    lengths ``k_i - 1``. The report never asserts the conjecture; it records
    the three factors, their product, the structure they would force
    (generator orders plus one large factor ``|delta| * bullet1 * bullet2``)
    and the Smith-form structure, and whether they agree.
    """
    from .graph_core import build_hinge

    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    raw = tuple(int(v) for v in values)
    ks = tuple(v + 1 for v in raw) if convention == "minus-one" else raw
    ks = tuple(_check_sizes(ks))
    n = len(ks)
    if n < 2:
        raise ValueError("the claim concerns at least two cycles")
    paths = [k - 1 for k in ks]
    a, b = prod(paths), lcm(*paths)
    quotient = a // b
    delta = delta_order_general(ks)
    notes = [
        f"values read as {'path lengths k_i - 1' if convention == 'minus-one' else 'vertex counts k_i'}",
        "bullet 1 uses the closed-form epsilon order, defined only when another path length is a multiple",
    ]

    eps_indices = [i for i in range(1, n + 1) if epsilon_condition(ks, i)]
    bullet1 = lcm(1, *(epsilon_order_general(ks, i) // delta for i in eps_indices))

    gens = generating_set_orders(ks) if n >= 3 else []
    bullet3 = prod(gens)
    if n < 3:
        notes.append("fewer than three cycles: no generating-set orders, bullet 3 is 1")

    # bullet 2: pair gcds that are neither 1 nor a path length, minus those a third cycle shares
    candidates = []
    for i, j in combinations(range(n), 2):
        g = gcd(paths[i], paths[j])
        entry = {"pair": [i + 1, j + 1], "gcd": g}
        if g == 1:
            entry["discarded"] = "gcd is 1"
        elif g in paths:
            entry["discarded"] = "gcd equals a path length"
        elif any(paths[l] % g == 0 for l in range(n) if l not in (i, j)):
            entry["discarded"] = "shared with a third cycle (counted by bullet 3)"
        candidates.append(entry)
    kept = sorted({c["gcd"] for c in candidates if "discarded" not in c})
    maximal = [g for g in kept if not any(h != g and h % g == 0 for h in kept)]
    bullet2 = prod(maximal)
    notes.append("bullet 2 multiplies the distinct divisibility-maximal surviving pair gcds")
    if len(maximal) > 1:
        notes.append(f"several maximal pair gcds {maximal}; all were multiplied in")

    product = bullet1 * bullet2 * bullet3
    predicted = normalize_factors(list(gens) + [delta * bullet1 * bullet2])
    g, _ = build_hinge(ks)
    snf = critical_group(g)
    structure_ok = predicted.invariant_factors == snf.invariant_factors
    if not structure_ok and embeds_in(predicted, snf):
        notes.append("predicted structure embeds in the Smith-form structure but differs")
    return Claim45Report(
        cycle_sizes=ks,
        convention=convention,
        input_values=raw,
        quotient=quotient,
        bullet1=bullet1,
        bullet1_indices=eps_indices,
        bullet2=bullet2,
        bullet2_candidates=candidates,
        bullet2_maximal=maximal,
        bullet3=bullet3,
        generator_orders=list(gens),
        product=product,
        product_matches_quotient=product == quotient,
        predicted_structure=predicted,
        snf_structure=snf,
        structure_matches=structure_ok,
        consistent=product == quotient and structure_ok,
        notes=notes,
    )
