"""One test per acceptance criterion; each records a PASS/FAIL line before asserting."""

import random
import time
from math import gcd, lcm

import pytest

from conftest import record_criterion
from hinge_sandpile.critical_group import critical_group, embeds_in, normalize_factors
from hinge_sandpile.divisor_algebra import (
    divisor_order,
    divisor_order_gcd,
    eta_independence_check,
    fire_script,
    is_q_reduced,
    make_delta,
    make_epsilon,
    make_eta,
    q_reduce,
    subgroup_index_report,
)
from hinge_sandpile.exact_linalg import delete_row_col, determinant
from hinge_sandpile.graph_core import Multigraph, build_hinge, hinge_dual, is_connected, laplacian, toggle_edge
from hinge_sandpile.hinge_theory import (
    claim45_check,
    consecutive_multiple_witness,
    delta_order_general,
    divisor_orders_same,
    epsilon_condition,
    epsilon_order_general,
    generating_set_orders,
    lcm_via_tuple_gcd,
    order_general,
    order_same,
    quotient_gcd,
    structure_same,
)
from hinge_sandpile.oracles import (
    BudgetExceeded,
    OracleBudget,
    coset_enumeration,
    divisor_order_bruteforce,
    q_reduced_predicate_bruteforce,
    spanning_trees_bruteforce,
)
from hinge_sandpile.verify import exhaustive_specs, random_specs

pytestmark = pytest.mark.acceptance

SAME_GRID = [(k, n) for k in range(3, 9) for n in range(2, 7)]
EXHAUSTIVE = exhaustive_specs(4, 3, 7)
RANDOM_200 = random_specs(200, seed=2024, max_cycles=6, min_k=3, max_k=9)
SPEC_SET = sorted(set(EXHAUSTIVE) | set(RANDOM_200), key=lambda s: (len(s), s))


def reduced_det(g):
    return determinant(delete_row_col(laplacian(g), 0))


def verdict(number, title, failures, checked, extra=""):
    passed = not failures
    detail = f"{checked} checked, {len(failures)} failed{extra}"
    if failures:
        detail += f"; first failure: {failures[0]}"
    record_criterion(number, title, passed, detail)
    assert passed, detail


def random_connected_multigraph(rng, min_vertices=2, max_vertices=10, max_mult=3):
    n = rng.randint(min_vertices, max_vertices)
    edges = [(rng.randrange(v), v, rng.randint(1, max_mult)) for v in range(1, n)]
    for _ in range(rng.randint(0, n)):
        u, w = rng.sample(range(n), 2)
        edges.append((u, w, rng.randint(1, max_mult)))
    return Multigraph.from_edges(n, edges)


def test_criterion_01_same_shape_order():
    start = time.perf_counter()
    failures, brute_count = [], 0
    for k in range(3, 9):
        for n in range(1, 7):
            g, _ = build_hinge([k] * n)
            det = reduced_det(g)
            if order_same(k, n) != det:
                failures.append((k, n, order_same(k, n), det))
            if g.edge_count <= 16:
                brute_count += 1
                if spanning_trees_bruteforce(g) != det:
                    failures.append((k, n, "trees", det))
    runtime = time.perf_counter() - start
    if runtime >= 10:
        failures.append(f"runtime {runtime:.1f}s")
    verdict(1, "same-shape order formula", failures, 36, f", {brute_count} also by tree count, {runtime:.2f}s")


def test_criterion_02_same_shape_structure():
    failures = []
    for k, n in SAME_GRID:
        got = critical_group(build_hinge([k] * n)[0])
        if got != structure_same(k, n):
            failures.append((k, n, got.invariant_factors))
    spot = critical_group(build_hinge((5, 5, 5))[0])
    if spot.invariant_factors != (4, 28) or spot.order != 112:
        failures.append(("spot", spot.invariant_factors))
    verdict(2, "same-shape group structure", failures, len(SAME_GRID) + 1)


def test_criterion_03_same_shape_divisor_orders():
    failures, brute_count = [], 0
    for k, n in SAME_GRID:
        g, lay = build_hinge([k] * n)
        divisors = (make_eta(lay, 1, 2), make_delta(lay), make_epsilon(lay, 1))
        expected = divisor_orders_same(k, n)
        got = tuple(divisor_order(g, d) for d in divisors)
        if got != expected:
            failures.append((k, n, "coords", got, expected))
        if order_same(k, n) <= 2000:
            brute_count += 1
            brute = tuple(divisor_order_bruteforce(g, d) for d in divisors)
            if brute != expected:
                failures.append((k, n, "brute", brute, expected))
    verdict(3, "eta/delta/epsilon orders, same shapes", failures, len(SAME_GRID), f", {brute_count} also by brute force")


def test_criterion_04_delta_345():
    g, lay = build_hinge((3, 4, 5))
    d = make_delta(lay)
    got = (divisor_order(g, d), divisor_order_gcd(g, d), divisor_order_bruteforce(g, d))
    verdict(4, "delta order 25 on cycle sizes (3,4,5)", [got] if got != (25, 25, 25) else [], 3)


def test_criterion_05_general_order():
    failures = [(ks, order_general(ks)) for ks in SPEC_SET if order_general(ks) != reduced_det(build_hinge(ks)[0])]
    verdict(5, "general order formula", failures, len(SPEC_SET))


def test_criterion_06_general_delta_order():
    failures = []
    for ks in SPEC_SET:
        g, lay = build_hinge(ks)
        got = divisor_order(g, make_delta(lay))
        if got != delta_order_general(ks):
            failures.append((ks, got, delta_order_general(ks)))
    verdict(6, "general delta order", failures, len(SPEC_SET))


def test_criterion_07_conditional_epsilon_order():
    failures, checked, unmet = [], 0, 0
    for ks in SPEC_SET:
        g, lay = build_hinge(ks)
        for i in range(1, len(ks) + 1):
            if not epsilon_condition(ks, i):
                unmet += 1
                continue
            checked += 1
            got = divisor_order(g, make_epsilon(lay, i))
            if got != epsilon_order_general(ks, i):
                failures.append((ks, i, got, epsilon_order_general(ks, i)))
    verdict(7, "conditional epsilon order", failures, checked, f", {unmet} (spec, cycle) pairs without the condition logged")


def test_criterion_08_generating_set_orders():
    failures, checked = [], 0
    for k, n in SAME_GRID:
        if n < 3:
            continue
        checked += 1
        smallest = list(critical_group(build_hinge([k] * n)[0]).invariant_factors[: n - 2])
        if sorted(generating_set_orders([k] * n)) != smallest:
            failures.append((k, n, generating_set_orders([k] * n), smallest))
    spec = (5, 5, 7)
    snf = critical_group(build_hinge(spec)[0])
    pred = generating_set_orders(spec)
    checked += 1
    if pred != [2] or snf.invariant_factors[0] % pred[0]:
        failures.append((spec, pred, snf.invariant_factors))
    verdict(8, "generating-set orders", failures, checked, f"; (5,5,7): predicted {pred}, SNF {list(snf.invariant_factors)}")


def test_criterion_09_eta_independence():
    failures, checked = [], 0
    for k in range(3, 6):
        for n in range(2, 5):
            g, lay = build_hinge([k] * n)
            checked += 1
            if not eta_independence_check(lay, g):
                failures.append((k, n, "dependent"))
            if n >= 3 and critical_group(g).rank < 2:
                failures.append((k, n, "cyclic"))
    verdict(9, "eta independence and non-cyclicity", failures, checked)


def test_criterion_10_duality():
    larger = random_specs(50, seed=7, max_cycles=6, min_k=3, max_k=9, exclude=EXHAUSTIVE)
    specs = EXHAUSTIVE + larger
    failures = [ks for ks in specs if critical_group(build_hinge(ks)[0]) != critical_group(hinge_dual(ks))]
    verdict(10, "hinge and thick-cycle dual groups agree", failures, len(specs))


def test_criterion_11_subgroup_index():
    failures, checked = [], 0
    for k in range(3, 9):
        for n in range(1, 7):
            g, lay = build_hinge([k] * n)
            x, y = lay.shared
            if not is_connected(toggle_edge(g, x, y)):
                continue
            checked += 1
            r = subgroup_index_report(g, x, y)
            if not (r.divides_gcd and r.gcd_divides_index_sq and r.generator_iff_coprime):
                failures.append((k, n, r.to_dict()))
    verdict(11, "subgroup-index divisibility on the shared edge", failures, checked)


def test_criterion_12_number_theory():
    rng = random.Random(12)
    failures = []
    for _ in range(1000):
        values = [rng.randint(1, 10**6) for _ in range(rng.randint(1, 6))]
        if lcm_via_tuple_gcd(values) != lcm(*values) or quotient_gcd(values) != 1:
            failures.append(values)
    pairs = 0
    while pairs < 1000:
        n, m = rng.randint(1, 10**6), rng.randint(1, 10**6)
        if gcd(n, m) != 1 or (n, m) == (1, 1):
            continue
        pairs += 1
        x, y = consecutive_multiple_witness(n, m)
        if not (x % n == 0 and 1 <= x // n <= m and y % m == 0 and 1 <= y // m <= n and abs(x - y) == 1):
            failures.append((n, m, x, y))
    verdict(12, "lcm identity, quotient gcd, consecutive multiples", failures, 2000)


def test_criterion_13_q_reduction():
    rng = random.Random(13)
    failures, brute_checked = [], 0
    for _ in range(500):
        g = random_connected_multigraph(rng)
        d = tuple(rng.randint(-10, 10) for _ in range(g.n_vertices))
        q = rng.randrange(g.n_vertices)
        r = q_reduce(g, d, q)
        script = [rng.randint(-5, 5) for _ in range(g.n_vertices)]
        if q_reduce(g, r, q) != r or not is_q_reduced(g, r, q):
            failures.append(("idempotence", g, d, q))
        if q_reduce(g, fire_script(g, d, script), q) != r:
            failures.append(("class invariance", g, d, q, script))
        if g.n_vertices <= 8:
            brute_checked += 1
            if not q_reduced_predicate_bruteforce(g, r, q):
                failures.append(("subset predicate", g, d, q))
    verdict(13, "q-reduction", failures, 500, f", {brute_checked} against the subset predicate")


def test_criterion_14_claim45_checker():
    records = [claim45_check(ks).to_dict() for ks in EXHAUSTIVE if len(ks) >= 2]
    failures = []
    keys = {"quotient", "predicted_components", "product", "predicted_structure", "snf_structure", "notes"}
    for r in records:
        if len(set(r["cycle_sizes"])) == 1 and not r["consistent"]:
            failures.append(("same shape", r["cycle_sizes"]))
        if not r["consistent"] and not keys <= r.keys():
            failures.append(("missing diagnostics", r["cycle_sizes"]))
    mixed_inconsistent = sum(1 for r in records if not r["consistent"])
    verdict(14, "claim checker completes", failures, len(records),
            f", {mixed_inconsistent} mixed-shape inconsistencies reported")


def test_criterion_15_oracle_coherence():
    rng = random.Random(15)
    budget = OracleBudget(max_edges=16, max_group_order=2000)
    graphs = [build_hinge(ks)[0] for ks in exhaustive_specs(3, 3, 6)]
    graphs += [random_connected_multigraph(rng, max_vertices=7, max_mult=2) for _ in range(100)]
    failures, counts = [], {"trees": 0, "cosets": 0, "orders": 0}
    for g in graphs:
        snf = critical_group(g)
        det = reduced_det(g)
        if g.edge_count <= budget.max_edges:
            counts["trees"] += 1
            if spanning_trees_bruteforce(g, budget) != det:
                failures.append(("trees", g))
        try:
            cosets = coset_enumeration(g, budget)
        except BudgetExceeded:
            continue
        counts["cosets"] += 1
        if cosets != snf:
            failures.append(("cosets", g))
        d = [rng.randint(-3, 3) for _ in range(g.n_vertices)]
        d[0] -= sum(d)
        counts["orders"] += 1
        if divisor_order_bruteforce(g, d, 0, budget) != divisor_order(g, d):
            failures.append(("orders", g, d))
    extra = ", " + ", ".join(f"{v} {k}" for k, v in counts.items())
    verdict(15, "oracle coherence", failures, len(graphs), extra)


def test_generator_orders_embed_for_mixed_shapes_up_to_four_cycles():
    """Mixed shapes: predicted generator orders embed in the computed group."""
    failures = []
    for ks in EXHAUSTIVE:
        if len(ks) < 3:
            continue
        pred = normalize_factors(generating_set_orders(ks))
        if not embeds_in(pred, critical_group(build_hinge(ks)[0])):
            failures.append(ks)
    assert not failures
