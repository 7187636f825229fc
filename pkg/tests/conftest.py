import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hinge_sandpile.graph_core import Multigraph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", parent=settings.get_profile("default"), max_examples=1000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def int_matrices(max_rows=5, max_cols=5, bound=20, square=False):
    """Small dense integer matrices as lists of rows."""

    @st.composite
    def build(draw):
        rows = draw(st.integers(1, max_rows))
        cols = rows if square else draw(st.integers(1, max_cols))
        entry = st.integers(-bound, bound)
        return [[draw(entry) for _ in range(cols)] for _ in range(rows)]

    return build()


@st.composite
def connected_multigraphs(draw, min_vertices=1, max_vertices=8, max_mult=3, max_extra=6):
    """A random spanning tree plus extra edges, all with small multiplicities."""
    n = draw(st.integers(min_vertices, max_vertices))
    edges = []
    for v in range(1, n):
        parent = draw(st.integers(0, v - 1))
        edges.append((parent, v, draw(st.integers(1, max_mult))))
    if n >= 2:
        for _ in range(draw(st.integers(0, max_extra))):
            u = draw(st.integers(0, n - 2))
            w = draw(st.integers(u + 1, n - 1))
            edges.append((u, w, draw(st.integers(1, max_mult))))
    return Multigraph.from_edges(n, edges)


@st.composite
def graph_and_divisor(draw, max_vertices=8, bound=10, degree_zero=False, **kw):
    g = draw(connected_multigraphs(max_vertices=max_vertices, **kw))
    d = [draw(st.integers(-bound, bound)) for _ in range(g.n_vertices)]
    if degree_zero:
        d[0] -= sum(d)
    return g, tuple(d)


hinge_specs = st.lists(st.integers(3, 8), min_size=1, max_size=4).map(lambda ks: tuple(sorted(ks)))


# -- acceptance reporting ----------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, passed: bool, detail: str, tolerance: str = "exact") -> None:
    line = f"criterion {number:2d} [{'PASS' if passed else 'FAIL'}] {title} (tolerance: {tolerance}) {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
