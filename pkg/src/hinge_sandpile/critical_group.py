"""Critical groups as invariant-factor chains, and divisor classes as coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm, prod
from typing import Sequence

from .exact_linalg import SmithDecomposition, delete_row_col, determinant, smith_normal_form
from .graph_core import Multigraph, is_connected, laplacian


class DisconnectedGraphError(ValueError):
    pass


class DegreeError(ValueError):
    """Divisor of nonzero degree where a degree-0 class is required."""


@dataclass(frozen=True)
class AbelianGroupStructure:
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        fs = tuple(int(f) for f in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        if any(f < 2 for f in fs):
            raise ValueError(f"invariant factors must be >= 2, got {fs}")
        if any(b % a for a, b in zip(fs, fs[1:])):
            raise ValueError(f"not a divisibility chain: {fs}")

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def is_cyclic(self) -> bool:
        return self.rank <= 1

    def to_dict(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors), "order": self.order}

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " + ".join(f"Z/{f}" for f in self.invariant_factors)


@dataclass(frozen=True)
class GroupElementCoords:
    coords: tuple[int, ...]


def _require_connected(g: Multigraph) -> None:
    if not is_connected(g):
        raise DisconnectedGraphError("graph is not connected")


@lru_cache(maxsize=256)
def reduced_smith(g: Multigraph) -> SmithDecomposition:
    """Smith decomposition of the Laplacian with vertex 0 deleted (cached per graph)."""
    _require_connected(g)
    if g.n_vertices == 0:
        raise ValueError("empty graph has no reduced Laplacian")
    return smith_normal_form(delete_row_col(laplacian(g), 0))


def critical_group(g: Multigraph) -> AbelianGroupStructure:
    diag = reduced_smith(g).diagonal
    return AbelianGroupStructure(tuple(d for d in diag if d > 1))


def group_order(g: Multigraph) -> int:
    _require_connected(g)
    if g.n_vertices <= 1:
        return 1
    return determinant(delete_row_col(laplacian(g), 0))


def _check_degree_zero(g: Multigraph, d: Sequence[int]) -> None:
    if len(d) != g.n_vertices:
        raise ValueError(f"divisor has length {len(d)}, graph has {g.n_vertices} vertices")
    if sum(d) != 0:
        raise DegreeError(f"divisor has degree {sum(d)}, expected 0")


def divisor_to_coords(g: Multigraph, d: Sequence[int]) -> GroupElementCoords:
    """Class of a degree-0 divisor in ``Z/d_1 + ... + Z/d_m``.

    A degree-0 divisor is determined by its entries off vertex 0, and it is
    principal exactly when those entries lie in the column lattice of the
    reduced Laplacian; ``U`` from the Smith form maps that quotient onto the
    diagonal one.
    """
    _check_degree_zero(g, d)
    D = reduced_smith(g)
    y = D.U @ list(d)[1:]
    return GroupElementCoords(tuple(c % s for c, s in zip(y, D.diagonal) if s > 1))


def element_order(s: AbelianGroupStructure, c: GroupElementCoords) -> int:
    if len(c.coords) != len(s.invariant_factors):
        raise ValueError("coordinate length does not match the structure")
    return lcm(1, *(f // gcd(f, x) for f, x in zip(s.invariant_factors, c.coords)))


def coords_order(g: Multigraph, d: Sequence[int]) -> int:
    return element_order(critical_group(g), divisor_to_coords(g, d))


def groups_isomorphic(a: AbelianGroupStructure, b: AbelianGroupStructure) -> bool:
    return a.invariant_factors == b.invariant_factors


def _prime_powers(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def normalize_factors(raw: Sequence[int]) -> AbelianGroupStructure:
    """Invariant-factor chain of ``Z/raw_1 + Z/raw_2 + ...``."""
    raw = [int(x) for x in raw]
    if any(x < 1 for x in raw):
        raise ValueError(f"cyclic factor orders must be positive, got {raw}")
    # elementary divisors per prime, largest first
    per_prime: dict[int, list[int]] = {}
    for x in raw:
        for p, e in _prime_powers(x).items():
            per_prime.setdefault(p, []).append(p**e)
    width = max((len(v) for v in per_prime.values()), default=0)
    chain = [1] * width
    for p, powers in per_prime.items():
        powers.sort(reverse=True)
        for i, q in enumerate(powers):
            chain[width - 1 - i] *= q
    return AbelianGroupStructure(tuple(chain))


def embeds_in(sub: AbelianGroupStructure, big: AbelianGroupStructure) -> bool:
    """Whether ``big`` has a subgroup isomorphic to ``sub`` (top-aligned chain divisibility)."""
    a, b = sub.invariant_factors, big.invariant_factors
    if len(a) > len(b):
        return False
    return all(y % x == 0 for x, y in zip(reversed(a), reversed(b)))
