"""Slow, independent reference computations for the test suite.

None of these touch the Smith form. Budgets are passed in explicitly and an
exceeded budget raises ``BudgetExceeded``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from math import prod
from typing import Sequence

from .critical_group import AbelianGroupStructure, DegreeError
from .divisor_algebra import add, q_reduce, scale
from .exact_linalg import delete_row_col, determinant
from .graph_core import Multigraph, laplacian


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_edges: int = 16
    max_group_order: int = 2000
    max_multiple: int = 10_000

    def __post_init__(self):
        if min(self.max_edges, self.max_group_order, self.max_multiple) < 1:
            raise ValueError("budgets must be positive")


DEFAULT_BUDGET = OracleBudget()


def spanning_trees_bruteforce(g: Multigraph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Count spanning trees by trying every (|V|-1)-subset of edges; parallel edges are distinct."""
    if g.edge_count > budget.max_edges:
        raise BudgetExceeded(f"{g.edge_count} edges > budget {budget.max_edges}")
    n = g.n_vertices
    if n <= 1:
        return 1
    flat = [(u, v) for u, v, m in g.edges for _ in range(m)]
    count = 0
    for chosen in itertools.combinations(flat, n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in chosen:
            ru, rv = find(u), find(v)
            if ru == rv:
                break
            parent[ru] = rv
        else:
            count += 1
    return count


def _check_order_budget(g: Multigraph, budget: OracleBudget) -> None:
    order = determinant(delete_row_col(laplacian(g), 0)) if g.n_vertices > 1 else 1
    if order > budget.max_group_order:
        raise BudgetExceeded(f"group order {order} > budget {budget.max_group_order}")


def divisor_order_bruteforce(
    g: Multigraph, d: Sequence[int], q: int = 0, budget: OracleBudget = DEFAULT_BUDGET
) -> int:
    """Least ``z`` with ``q_reduce(z d) == q_reduce(0)``.

    Multiples are built incrementally as ``q_reduce(prev + q_reduce(d))`` so
    chip counts stay small; this relies only on q-reduction respecting sums.
    """
    if sum(d):
        raise DegreeError("order is only finite for degree-0 divisors")
    _check_order_budget(g, budget)
    zero = q_reduce(g, (0,) * g.n_vertices, q)
    step = q_reduce(g, d, q)
    acc = step
    for z in range(1, budget.max_multiple + 1):
        if acc == zero:
            return z
        acc = q_reduce(g, add(acc, step), q)
    raise BudgetExceeded(f"no multiple up to {budget.max_multiple} reduces to zero")


def _mul(g: Multigraph, z: int, x: tuple[int, ...], q: int) -> tuple[int, ...]:
    """``z * x`` reduced, by double-and-add on reduced representatives."""
    result = (0,) * g.n_vertices
    base = x
    while z:
        if z & 1:
            result = q_reduce(g, add(result, base), q)
        z >>= 1
        if z:
            base = q_reduce(g, scale(2, base), q)
    return q_reduce(g, result, q)


def _factorize(n: int) -> dict[int, int]:
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


def coset_enumeration(
    g: Multigraph, budget: OracleBudget = DEFAULT_BUDGET, q: int = 0
) -> AbelianGroupStructure:
    """Critical group by listing every class as a q-reduced divisor.

    Breadth-first closure from zero under adding ``e_v - e_q`` for each
    ``v != q``. The invariant factors then follow from the sizes of the
    ``p^j``-torsion subgroups: the number of cyclic p-parts of exponent at
    least ``j`` is ``log_p(|G[p^j]| / |G[p^(j-1)]|)``.
    """
    n = g.n_vertices
    zero = q_reduce(g, (0,) * n, q)
    seen = {zero}
    queue = deque([zero])
    gens = []
    for v in range(n):
        if v != q:
            e = [0] * n
            e[v], e[q] = 1, -1
            gens.append(tuple(e))
    while queue:
        x = queue.popleft()
        for e in gens:
            y = q_reduce(g, add(x, e), q)
            if y not in seen:
                seen.add(y)
                if len(seen) > budget.max_group_order:
                    raise BudgetExceeded(f"more than {budget.max_group_order} classes")
                queue.append(y)
    size = len(seen)
    elements = list(seen)
    per_prime: dict[int, list[int]] = {}
    for p, e in _factorize(size).items():
        # torsion[j] = |G[p^j]|
        current = elements
        torsion = [1]
        for _ in range(e):
            current = [_mul(g, p, x, q) for x in current]
            torsion.append(sum(1 for x in current if x == zero))
            if torsion[-1] == size:
                break
        # number of cyclic factors with exponent >= j
        at_least = []
        for j in range(1, len(torsion)):
            ratio = torsion[j] // torsion[j - 1]
            c = 0
            while ratio > 1:
                ratio //= p
                c += 1
            at_least.append(c)
        exps = []
        for j, c in enumerate(at_least, start=1):
            nxt = at_least[j] if j < len(at_least) else 0
            exps.extend([j] * (c - nxt))
        per_prime[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in per_prime.values()), default=0)
    chain = [1] * width
    for p, exps in per_prime.items():
        for i, e in enumerate(exps):
            chain[width - 1 - i] *= p**e
    structure = AbelianGroupStructure(tuple(chain))
    assert structure.order == size == prod(chain)
    return structure


def q_reduced_predicate_bruteforce(g: Multigraph, d: Sequence[int], q: int, max_vertices: int = 8) -> bool:
    """Both defining conditions checked literally over every nonempty subset avoiding ``q``."""
    if g.n_vertices > max_vertices:
        raise BudgetExceeded(f"{g.n_vertices} vertices > {max_vertices}")
    others = [v for v in range(g.n_vertices) if v != q]
    if any(d[v] < 0 for v in others):
        return False
    for size in range(1, len(others) + 1):
        for subset in itertools.combinations(others, size):
            members = set(subset)
            survives = True
            for v in subset:
                leak = sum(m for w, m in g.adjacency[v] if w not in members)
                if d[v] - leak < 0:
                    survives = False
                    break
            if survives:
                return False
    return True
