"""Divisors on multigraphs: chip-firing, equivalence, orders and q-reduction.

Divisors are plain integer tuples indexed by vertex. Cycle indices for the
hinge divisors are 1-based.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import asdict, dataclass
from math import gcd, lcm
from pathlib import Path
from typing import Sequence

from .critical_group import (
    DegreeError,
    DisconnectedGraphError,
    coords_order,
    group_order,
    reduced_smith,
)
from .exact_linalg import delete_row_col, solve_integral, solve_rational_affine
from .graph_core import GraphFormatError, HingeLayout, Multigraph, is_connected, laplacian, toggle_edge

Divisor = tuple[int, ...]


def _check_length(g: Multigraph, d: Sequence[int]) -> None:
    if len(d) != g.n_vertices:
        raise ValueError(f"divisor has length {len(d)}, graph has {g.n_vertices} vertices")


def _check_vertex(g: Multigraph, v: int) -> None:
    if not 0 <= v < g.n_vertices:
        raise IndexError(f"vertex {v} out of range for {g.n_vertices} vertices")


def _require_connected(g: Multigraph) -> None:
    if not is_connected(g):
        raise DisconnectedGraphError("graph is not connected")


def degree(d: Sequence[int]) -> int:
    return sum(d)


def add(a: Sequence[int], b: Sequence[int]) -> Divisor:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def sub(a: Sequence[int], b: Sequence[int]) -> Divisor:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def scale(z: int, d: Sequence[int]) -> Divisor:
    return tuple(z * x for x in d)


def fire(g: Multigraph, d: Sequence[int], v: int) -> Divisor:
    _check_length(g, d)
    _check_vertex(g, v)
    out = list(d)
    out[v] -= g.valences[v]
    for w, m in g.adjacency[v]:
        out[w] += m
    return tuple(out)


def fire_script(g: Multigraph, d: Sequence[int], r: Sequence[int]) -> Divisor:
    """Fire vertex ``i`` exactly ``r[i]`` times (negative means borrowing): ``d - L r``."""
    _check_length(g, d)
    if len(r) != g.n_vertices:
        raise ValueError(f"firing script has length {len(r)}, graph has {g.n_vertices} vertices")
    return sub(d, laplacian(g) @ r)


def is_linearly_equivalent(g: Multigraph, a: Sequence[int], b: Sequence[int]) -> bool:
    _check_length(g, a)
    _check_length(g, b)
    _require_connected(g)
    diff = sub(a, b)
    if sum(diff):
        return False
    # fix the firing count of vertex 0 at zero; the kernel of L is spanned by 1
    return solve_integral(delete_row_col(laplacian(g), 0), diff[1:], smith=reduced_smith(g)) is not None


def divisor_order(g: Multigraph, d: Sequence[int]) -> int:
    _check_length(g, d)
    _require_connected(g)
    if sum(d):
        raise DegreeError(f"divisor has degree {sum(d)}; its order is not finite")
    return coords_order(g, d)


def _diff_gcd(r: Sequence[int]) -> int:
    """gcd over all integer shifts ``t`` of ``gcd(r + t*1)``, which is ``gcd(r_i - r_0)``."""
    return gcd(*(x - r[0] for x in r))


def firing_certificate(g: Multigraph, d: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Least ``z`` with an integral firing script ``r`` for ``z d``, together with ``r``.

    Solve ``L p = d`` over the rationals. Scripts differ only by multiples of
    the all-ones vector, so ``z d`` has an integral script exactly when every
    ``z (p_i - p_0)`` is an integer; the least such ``z`` is the lcm of their
    denominators. The returned script has ``r_0 = 0``.
    """
    _check_length(g, d)
    _require_connected(g)
    if sum(d):
        raise DegreeError(f"divisor has degree {sum(d)}; its order is not finite")
    base = solve_rational_affine(laplacian(g), d)
    if base is None:  # pragma: no cover - degree 0 divisors are always in the rational image
        raise ArithmeticError("degree-0 divisor outside the rational image of L")
    p, _ = base
    diffs = [x - p[0] for x in p]
    z = lcm(1, *(x.denominator for x in diffs))
    return z, tuple(int(z * x) for x in diffs)


def divisor_order_gcd(g: Multigraph, d: Sequence[int]) -> int:
    """Order from the rational firing script, certified by its gcd.

    With ``z`` and ``r`` from ``firing_certificate``, a prime dividing both
    ``z`` and every ``r + t*1`` would give an integral script for a smaller
    multiple. The shift condition is checked exactly: a prime divides
    ``r + t*1`` for some ``t`` precisely when it divides every difference
    ``r_i - r_0``. For a divisor whose entries have no common factor (such as
    ``delta``) that gcd is 1 outright.
    """
    z, r = firing_certificate(g, d)
    if gcd(z, _diff_gcd(r)) != 1:  # pragma: no cover - excluded by minimality of z
        raise ArithmeticError(f"firing script for {z} d is not primitive")
    return z


# -- q-reduction ---------------------------------------------------------------

def _fire_set(g: Multigraph, d: list[int], members: set[int], times: int) -> None:
    for u in members:
        for w, m in g.adjacency[u]:
            if w not in members:
                d[u] -= times * m
                d[w] += times * m


def _burn(g: Multigraph, d: Sequence[int], q: int) -> set[int]:
    """Dhar's burning from ``q``; returns the set of vertices that never burn."""
    burnt = {q}
    heat = [0] * g.n_vertices
    queue = deque([q])
    while queue:
        v = queue.popleft()
        for w, m in g.adjacency[v]:
            if w in burnt:
                continue
            heat[w] += m
            if heat[w] > d[w]:
                burnt.add(w)
                queue.append(w)
    return set(range(g.n_vertices)) - burnt


def is_q_reduced(g: Multigraph, d: Sequence[int], q: int) -> bool:
    _check_length(g, d)
    _check_vertex(g, q)
    _require_connected(g)
    if any(x < 0 for v, x in enumerate(d) if v != q):
        return False
    return not _burn(g, d, q)


def q_reduce(g: Multigraph, d: Sequence[int], q: int = 0) -> Divisor:
    """The unique q-reduced divisor equivalent to ``d``.

    First make every vertex other than ``q`` nonnegative: for the BFS levels
    from ``q``, deepest first, fire the ball of radius ``t`` enough times to
    pay off the largest debt on level ``t + 1`` (each such vertex has an edge
    into the ball, and deeper levels are untouched). Then repeatedly fire the
    set left unburnt by Dhar's algorithm, as many times in one go as stays
    legal, until everything burns.
    """
    _check_length(g, d)
    _check_vertex(g, q)
    _require_connected(g)
    out = list(d)
    dist = {q: 0}
    order = [q]
    for v in order:
        for w, _ in g.adjacency[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                order.append(w)
    depth = max(dist.values())
    levels: list[list[int]] = [[] for _ in range(depth + 1)]
    for v, t in dist.items():
        levels[t].append(v)
    for t in range(depth - 1, -1, -1):
        need = max((-out[v] for v in levels[t + 1]), default=0)
        if need > 0:
            ball = {v for v, s in dist.items() if s <= t}
            _fire_set(g, out, ball, need)

    while True:
        unburnt = _burn(g, out, q)
        if not unburnt:
            return tuple(out)
        times = None
        for v in unburnt:
            leak = sum(m for w, m in g.adjacency[v] if w not in unburnt)
            if leak:
                k = out[v] // leak
                times = k if times is None else min(times, k)
        _fire_set(g, out, unburnt, times)


# -- hinge divisors --------------------------------------------------------------

def _blank(layout: HingeLayout) -> list[int]:
    return [0] * (2 + sum(k - 2 for k in layout.spec.cycle_sizes))


def make_delta(layout: HingeLayout) -> Divisor:
    d = _blank(layout)
    s0, s1 = layout.shared
    d[s0], d[s1] = 1, -1
    return tuple(d)


def make_epsilon(layout: HingeLayout, i: int) -> Divisor:
    d = _blank(layout)
    d[layout.path(i)[0]] = 1
    d[layout.shared[0]] = -1
    return tuple(d)


def make_eta(layout: HingeLayout, i: int, j: int) -> Divisor:
    if i == j:
        raise ValueError("eta needs two different cycles")
    d = _blank(layout)
    d[layout.path(i)[0]] = 1
    d[layout.path(j)[0]] = -1
    return tuple(d)


@dataclass(frozen=True)
class SubgroupIndexReport:
    order_G: int
    order_Gprime: int
    delta_order: int
    index: int
    divides_gcd: bool
    gcd_divides_index_sq: bool
    is_generator: bool
    generator_iff_coprime: bool

    def to_dict(self) -> dict:
        return asdict(self)


def subgroup_index_report(g: Multigraph, x: int, y: int) -> SubgroupIndexReport:
    """Index of the subgroup generated by ``delta_xy`` against the edge-toggled graph."""
    _require_connected(g)
    _check_vertex(g, x)
    _check_vertex(g, y)
    h = toggle_edge(g, x, y)
    if not is_connected(h):
        raise DisconnectedGraphError(f"toggling ({x}, {y}) disconnects the graph")
    delta = [0] * g.n_vertices
    delta[x], delta[y] = 1, -1
    kg, kh = group_order(g), group_order(h)
    od = divisor_order(g, delta)
    index = kg // od
    common = gcd(kg, kh)
    is_gen = od == kg
    return SubgroupIndexReport(
        order_G=kg,
        order_Gprime=kh,
        delta_order=od,
        index=index,
        divides_gcd=common % index == 0,
        gcd_divides_index_sq=(index * index) % common == 0,
        is_generator=is_gen,
        generator_iff_coprime=is_gen == (common == 1),
    )


def eta_independence_check(layout: HingeLayout, g: Multigraph | None = None) -> bool:
    """No nonzero combination ``sum a_i eta_{i,i+1}`` with ``0 <= a_i <= k-2`` is principal."""
    sizes = layout.spec.cycle_sizes
    if len(set(sizes)) != 1:
        raise ValueError(f"eta independence needs equal cycle sizes, got {sizes}")
    n, k = len(sizes), sizes[0]
    if n < 2:
        raise ValueError("eta independence needs at least two cycles")
    if g is None:
        from .graph_core import build_hinge

        g, _ = build_hinge(layout.spec)
    etas = [make_eta(layout, i, i + 1) for i in range(1, n)]
    zero = (0,) * g.n_vertices
    for coeffs in itertools.product(range(k - 1), repeat=n - 1):
        if not any(coeffs):
            continue
        combo = zero
        for a, e in zip(coeffs, etas):
            if a:
                combo = add(combo, scale(a, e))
        if is_linearly_equivalent(g, combo, zero):
            return False
    return True


# -- divisor files --------------------------------------------------------------

def dumps_divisor(d: Sequence[int]) -> str:
    return json.dumps([int(x) for x in d]) + "\n"


def loads_divisor(text: str, g: Multigraph | None = None) -> Divisor:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"not a JSON document: {exc}") from None
    if not isinstance(doc, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in doc):
        raise GraphFormatError("divisor document must be a list of integers")
    if g is not None and len(doc) != g.n_vertices:
        raise GraphFormatError(f"divisor has length {len(doc)}, graph has {g.n_vertices} vertices")
    return tuple(doc)


def read_divisor(path: str | Path, g: Multigraph | None = None) -> Divisor:
    return loads_divisor(Path(path).read_text(), g)
