"""Grid sweeps that compare closed-form predictions with exact computation.

Each target maps one grid point to a list of case records. Grid points are
independent, so they may be farmed out to worker processes; results are
reassembled in grid order, which keeps reports identical for any job count.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import gcd, lcm
from typing import Callable, Iterable

from .critical_group import critical_group, embeds_in, group_order, normalize_factors
from .divisor_algebra import (
    divisor_order,
    divisor_order_gcd,
    eta_independence_check,
    make_delta,
    make_epsilon,
    make_eta,
    subgroup_index_report,
)
from .exact_linalg import delete_row_col, determinant
from .graph_core import build_hinge, hinge_dual, laplacian
from .hinge_theory import (
    claim45_check,
    consecutive_multiple_witness,
    delta_order_general,
    divisor_orders_same,
    epsilon_condition,
    generating_set_orders,
    lcm_via_tuple_gcd,
    order_general,
    order_same,
    quotient_gcd,
    structure_same,
)
from .oracles import (
    BudgetExceeded,
    OracleBudget,
    divisor_order_bruteforce,
    spanning_trees_bruteforce,
)

SCHEMA = 1


class GridError(ValueError):
    pass


# -- grid parsing -------------------------------------------------------------------

def parse_int_set(text: str) -> list[int]:
    """``"3..7"``, ``"3,5,7"`` or a mix like ``"3..5,9"``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                lo_i, hi_i = int(lo), int(hi)
                if lo_i > hi_i:
                    raise GridError(f"empty range {part!r}")
                out.extend(range(lo_i, hi_i + 1))
            elif part:
                out.append(int(part))
    except ValueError as exc:
        if isinstance(exc, GridError):
            raise
        raise GridError(f"cannot parse integer set {text!r}") from None
    if not out:
        raise GridError(f"empty integer set {text!r}")
    return sorted(set(out))


def exhaustive_specs(max_cycles: int, min_k: int = 3, max_k: int = 7, min_cycles: int = 1) -> list[tuple[int, ...]]:
    """Every multiset of cycle sizes (hinges do not depend on cycle order), sorted."""
    specs = []
    for n in range(min_cycles, max_cycles + 1):
        specs.extend(combinations_with_replacement(range(min_k, max_k + 1), n))
    return specs


def random_specs(
    count: int, seed: int, max_cycles: int, min_k: int, max_k: int, min_cycles: int = 1,
    exclude: Iterable[tuple[int, ...]] = (),
) -> list[tuple[int, ...]]:
    rng = random.Random(seed)
    banned = set(exclude)
    out: set[tuple[int, ...]] = set()
    for _ in range(count * 200):
        if len(out) == count:
            break
        n = rng.randint(min_cycles, max_cycles)
        spec = tuple(sorted(rng.randint(min_k, max_k) for _ in range(n)))
        if spec not in banned:
            out.add(spec)
    if len(out) < count:
        raise GridError(f"could only draw {len(out)} distinct specs, wanted {count}")
    return sorted(out, key=lambda s: (len(s), s))


def parse_specs(
    text: str, *, seed: int = 0, max_cycles: int | None = None, min_k: int = 3,
    max_k: int | None = None, min_cycles: int = 1,
) -> list[tuple[int, ...]]:
    if text in ("exhaustive", "all"):
        return exhaustive_specs(max_cycles or 4, min_k, max_k or 7, min_cycles)
    if text.startswith("random:"):
        try:
            count = int(text.split(":", 1)[1])
        except ValueError:
            raise GridError(f"bad random spec count in {text!r}") from None
        return random_specs(count, seed, max_cycles or 6, min_k, max_k or 9, min_cycles)
    specs = []
    for chunk in text.replace(";", "/").split("/"):
        try:
            spec = tuple(int(x) for x in chunk.split(",") if x.strip())
        except ValueError:
            raise GridError(f"bad spec {chunk!r}") from None
        if not spec or any(k < 3 for k in spec):
            raise GridError(f"bad spec {chunk!r}: need cycle sizes >= 3")
        if len(spec) >= min_cycles:
            specs.append(spec)
    return specs


# -- case helpers -------------------------------------------------------------------

def _case(params, predicted, computed, match: bool, **extra) -> dict:
    rec = {"params": params, "predicted": predicted, "computed": computed, "match": bool(match)}
    rec["status"] = "pass" if match else "fail"
    rec.update(extra)
    return rec


def _skip(params, reason: str, **extra) -> dict:
    rec = {"params": params, "predicted": None, "computed": None, "match": True, "status": "skipped", "reason": reason}
    rec.update(extra)
    return rec


def _budget(params, reason: str) -> dict:
    return {"params": params, "predicted": None, "computed": None, "match": False, "status": "budget", "reason": reason}


def _reduced_det(g) -> int:
    return determinant(delete_row_col(laplacian(g), 0))


# -- targets --------------------------------------------------------------------------

def check_thm31(point, budget: OracleBudget) -> list[dict]:
    k, n = point
    g, _ = build_hinge([k] * n)
    pred, det = order_same(k, n), _reduced_det(g)
    brute = None
    if g.edge_count <= budget.max_edges:
        brute = spanning_trees_bruteforce(g, budget)
    ok = pred == det and (brute is None or brute == det)
    return [_case({"k": k, "n": n}, pred, det, ok, bruteforce_trees=brute)]


def check_prop32(point, budget: OracleBudget) -> list[dict]:
    k, n = point
    g, lay = build_hinge([k] * n)
    eta, delta, eps = divisor_orders_same(k, n)
    divisors = {"eta": make_eta(lay, 1, 2), "delta": make_delta(lay), "epsilon": make_epsilon(lay, 1)}
    predicted = {"eta": eta, "delta": delta, "epsilon": eps}
    computed = {name: divisor_order(g, d) for name, d in divisors.items()}
    brute = None
    if order_same(k, n) <= budget.max_group_order:
        brute = {name: divisor_order_bruteforce(g, d, 0, budget) for name, d in divisors.items()}
    ok = computed == predicted and (brute is None or brute == predicted)
    return [_case({"k": k, "n": n}, predicted, computed, ok, bruteforce=brute)]


def check_lemma33(point, budget: OracleBudget) -> list[dict]:
    k, n = point
    g, lay = build_hinge([k] * n)
    independent = eta_independence_check(lay, g)
    structure = critical_group(g)
    non_cyclic = not structure.is_cyclic()
    ok = independent and (n < 3 or non_cyclic)
    return [
        _case(
            {"k": k, "n": n},
            {"independent": True, "non_cyclic": n >= 3 or None},
            {"independent": independent, "non_cyclic": non_cyclic},
            ok,
            combinations=(k - 1) ** (n - 1) - 1,
        )
    ]


def check_thm38(point, budget: OracleBudget) -> list[dict]:
    k, n = point
    g, _ = build_hinge([k] * n)
    pred, got = structure_same(k, n), critical_group(g)
    return [_case({"k": k, "n": n}, list(pred.invariant_factors), list(got.invariant_factors), pred == got)]


def check_thm211(point, budget: OracleBudget) -> list[dict]:
    k, n = point
    g, lay = build_hinge([k] * n)
    rep = subgroup_index_report(g, *lay.shared)
    ok = rep.divides_gcd and rep.gcd_divides_index_sq and rep.generator_iff_coprime
    return [_case({"k": k, "n": n}, {"divides_gcd": True, "gcd_divides_index_sq": True}, rep.to_dict(), ok)]


def check_thm41(spec, budget: OracleBudget) -> list[dict]:
    g, _ = build_hinge(spec)
    pred, det = order_general(spec), _reduced_det(g)
    return [_case({"spec": list(spec)}, pred, det, pred == det)]


def check_prop42(spec, budget: OracleBudget) -> list[dict]:
    g, lay = build_hinge(spec)
    pred, got = delta_order_general(spec), divisor_order(g, make_delta(lay))
    return [_case({"spec": list(spec)}, pred, got, pred == got)]


def check_thm43(spec, budget: OracleBudget) -> list[dict]:
    g, lay = build_hinge(spec)
    delta = divisor_order(g, make_delta(lay))
    cases = []
    for i in range(1, len(spec) + 1):
        params = {"spec": list(spec), "cycle": i}
        got = divisor_order(g, make_epsilon(lay, i))
        if not epsilon_condition(spec, i):
            cases.append(_skip(params, "no other path length is a multiple of this one", computed_order=got))
            continue
        pred = (spec[i - 1] - 1) * delta
        cases.append(_case(params, pred, got, pred == got))
    return cases


def check_thm44(spec, budget: OracleBudget) -> list[dict]:
    params = {"spec": list(spec)}
    if len(spec) < 3:
        return [_skip(params, "needs at least three cycles")]
    g, _ = build_hinge(spec)
    pred = generating_set_orders(spec)
    structure = critical_group(g)
    order = structure.order
    divides = all(order % v == 0 for v in pred)
    if len(set(spec)) == 1:
        smallest = sorted(structure.invariant_factors)[: len(spec) - 2]
        return [_case(params, sorted(pred), smallest, sorted(pred) == smallest and divides, mode="same-shape")]
    sub = normalize_factors(pred)
    embeds = embeds_in(sub, structure)
    return [
        _case(
            params,
            sorted(pred),
            list(structure.invariant_factors),
            embeds and divides,
            mode="mixed: predicted orders generate a subgroup of the critical group",
        )
    ]


def check_duality(spec, budget: OracleBudget) -> list[dict]:
    g, _ = build_hinge(spec)
    a, b = critical_group(g), critical_group(hinge_dual(spec))
    return [_case({"spec": list(spec)}, list(a.invariant_factors), list(b.invariant_factors), a == b)]


def check_lemma214(values, budget: OracleBudget) -> list[dict]:
    got = quotient_gcd(values)
    return [_case({"values": list(values)}, 1, got, got == 1)]


def check_lemma215(pair, budget: OracleBudget) -> list[dict]:
    n, m = pair
    x, y = consecutive_multiple_witness(n, m)
    ok = abs(x - y) == 1 and x % n == 0 and 1 <= x // n <= m and y % m == 0 and 1 <= y // m <= n
    return [_case({"n": n, "m": m}, "|x - y| = 1", [x, y], ok)]


def check_lemma216(values, budget: OracleBudget) -> list[dict]:
    got, want = lcm_via_tuple_gcd(values), lcm(*values)
    return [_case({"values": list(values)}, want, got, got == want)]


@dataclass(frozen=True)
class Target:
    name: str
    kind: str  # "kn", "specs" or "samples"
    check: Callable
    defaults: dict = field(default_factory=dict)


TARGETS: dict[str, Target] = {
    "thm3.1": Target("thm3.1", "kn", check_thm31, {"k": "3..8", "n": "1..6"}),
    "prop3.2": Target("prop3.2", "kn", check_prop32, {"k": "3..8", "n": "2..6"}),
    "lemma3.3": Target("lemma3.3", "kn", check_lemma33, {"k": "3..5", "n": "2..4"}),
    "thm3.8": Target("thm3.8", "kn", check_thm38, {"k": "3..8", "n": "2..6"}),
    "thm2.11": Target("thm2.11", "kn", check_thm211, {"k": "3..8", "n": "1..6"}),
    "thm4.1": Target("thm4.1", "specs", check_thm41),
    "prop4.2": Target("prop4.2", "specs", check_prop42),
    "thm4.3": Target("thm4.3", "specs", check_thm43),
    "thm4.4": Target("thm4.4", "specs", check_thm44),
    "duality": Target("duality", "specs", check_duality),
    "lemma2.14": Target("lemma2.14", "samples", check_lemma214),
    "lemma2.15": Target("lemma2.15", "samples", check_lemma215),
    "lemma2.16": Target("lemma2.16", "samples", check_lemma216),
}


def sample_points(target: str, samples: int, seed: int, max_value: int = 10**6) -> list:
    rng = random.Random(seed)
    points = []
    if target == "lemma2.15":
        while len(points) < samples:
            n, m = rng.randint(1, max_value), rng.randint(1, max_value)
            if gcd(n, m) == 1 and (n, m) != (1, 1):
                points.append((n, m))
        return points
    for _ in range(samples):
        size = rng.randint(1, 6)
        points.append(tuple(rng.randint(1, max_value) for _ in range(size)))
    return points


def _run_point(args):
    target, point, budget = args
    try:
        return TARGETS[target].check(point, budget)
    except BudgetExceeded as exc:
        return [_budget(_point_params(point), str(exc))]


def _point_params(point):
    return {"point": list(point)}


@dataclass
class VerifyReport:
    target: str
    grid: dict
    cases: list[dict]
    runtime: float | None = None

    @property
    def summary(self) -> dict:
        tally = {"total": len(self.cases), "pass": 0, "fail": 0, "skipped": 0, "budget": 0}
        for c in self.cases:
            tally[c["status"]] += 1
        return tally

    @property
    def all_match(self) -> bool:
        return all(c["match"] for c in self.cases)

    def to_dict(self) -> dict:
        doc = {"schema": SCHEMA, "target": self.target, "grid": self.grid, "summary": self.summary, "cases": self.cases}
        if self.runtime is not None:
            doc["runtime_seconds"] = round(self.runtime, 3)
        return doc


def run_points(target: str, points: list, budget: OracleBudget, jobs: int = 1) -> list[dict]:
    work = [(target, p, budget) for p in points]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_point, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        chunks = [_run_point(w) for w in work]
    return [case for chunk in chunks for case in chunk]


def run_verify(
    target: str,
    *,
    k: str | None = None,
    n: str | None = None,
    specs: str = "exhaustive",
    max_cycles: int | None = None,
    min_k: int = 3,
    max_k: int | None = None,
    samples: int = 1000,
    seed: int = 0,
    max_value: int = 10**6,
    budget: OracleBudget | None = None,
    jobs: int = 1,
    timing: bool = False,
) -> VerifyReport:
    if target not in TARGETS:
        raise GridError(f"unknown target {target!r}; choose from {sorted(TARGETS)}")
    spec = TARGETS[target]
    budget = budget or OracleBudget()
    start = time.perf_counter()
    if spec.kind == "kn":
        ks = parse_int_set(k or spec.defaults["k"])
        ns = parse_int_set(n or spec.defaults["n"])
        if min(ks) < 3 or min(ns) < 1:
            raise GridError("need k >= 3 and n >= 1")
        lowest_n = int(spec.defaults["n"].split("..")[0])
        ns = [x for x in ns if x >= lowest_n]
        points = [(a, b) for a in ks for b in ns]
        grid = {"k": ks, "n": ns}
    elif spec.kind == "specs":
        points = parse_specs(specs, seed=seed, max_cycles=max_cycles, min_k=min_k, max_k=max_k)
        grid = {"specs": specs, "max_cycles": max_cycles, "min_k": min_k, "max_k": max_k, "seed": seed, "count": len(points)}
    else:
        points = sample_points(target, samples, seed, max_value)
        grid = {"samples": samples, "seed": seed, "max_value": max_value}
    grid["budget"] = {
        "max_edges": budget.max_edges,
        "max_group_order": budget.max_group_order,
        "max_multiple": budget.max_multiple,
    }
    cases = run_points(target, points, budget, jobs)
    runtime = time.perf_counter() - start
    return VerifyReport(target, grid, cases, runtime if timing else None)


# -- factorisation checker sweep -----------------------------------------------

def _claim_point(args):
    spec, convention = args
    return claim45_check(spec, convention).to_dict()


def run_claim45(specs: list[tuple[int, ...]], convention: str = "vertices", jobs: int = 1) -> dict:
    specs = [s for s in specs if len(s) >= 2]
    work = [(s, convention) for s in specs]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_claim_point, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        records = [_claim_point(w) for w in work]
    same = [r for r in records if len(set(r["cycle_sizes"])) == 1]
    inconsistent = [r for r in records if not r["consistent"]]
    return {
        "schema": SCHEMA,
        "target": "claim45",
        "convention": convention,
        "summary": {
            "total": len(records),
            "consistent": len(records) - len(inconsistent),
            "inconsistent": len(inconsistent),
            "same_shape": len(same),
            "same_shape_consistent": sum(1 for r in same if r["consistent"]),
        },
        "counterexample_candidates": [r["cycle_sizes"] for r in inconsistent],
        "records": records,
    }
