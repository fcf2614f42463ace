import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from sparsepath import EdgeList, build_csr


def make_csr(n, edges):
    return build_csr(EdgeList(n=n, edges=[(u, v, float(w)) for u, v, w in edges]))


@pytest.fixture
def three_node():
    """Edges (0->1, 1), (1->2, 1), (0->2, 3); shortest dist = [0, 1, 2]."""
    return make_csr(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)])


@pytest.fixture
def neg_cycle_graph():
    """Cycle 1->2->1 of weight -4, reachable from node 0."""
    return make_csr(3, [(0, 1, 1.0), (1, 2, -5.0), (2, 1, 1.0)])


@pytest.fixture
def hand_trace_graph():
    """Node 1 is discovered at 1.9 and re-updated to 0.2 via node 2."""
    return make_csr(3, [(0, 1, 1.9), (0, 2, 0.1), (2, 1, 0.1)])
