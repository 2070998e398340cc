import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dtwlab.digraph import build_digraph

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def graph_from_bits(n, code):
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    edges = [(str(u), str(v)) for i, (u, v) in enumerate(pairs) if code >> i & 1]
    return build_digraph([str(i) for i in range(n)], edges)


@st.composite
def digraphs(draw, min_n=1, max_n=5):
    n = draw(st.integers(min_n, max_n))
    code = draw(st.integers(0, 2 ** (n * (n - 1)) - 1))
    return graph_from_bits(n, code)


@pytest.fixture
def cycle3():
    return build_digraph(["1", "2", "3"], [("1", "2"), ("2", "3"), ("3", "1")])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, elapsed, name = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n} ({name}): {'PASS' if ok else 'FAIL'} in {elapsed:.1f}s")
