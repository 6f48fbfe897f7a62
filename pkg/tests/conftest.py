import random

import pytest
from hypothesis import strategies as st

from planarloops.diagrams import enumerate_diagrams


@pytest.fixture
def rng():
    return random.Random(20261019)


@st.composite
def diagrams(draw, m=None, n=None, max_nodes=8):
    """A random TL(m, n) diagram; free sizes are drawn with m + n even."""
    if m is None:
        m = draw(st.integers(0, max_nodes))
    if n is None:
        n = draw(st.integers(0, max_nodes).filter(lambda k: (k + m) % 2 == 0))
    pool = enumerate_diagrams(m, n)
    return pool[draw(st.integers(0, len(pool) - 1))]


@st.composite
def composable_triples(draw, max_nodes=8):
    sizes = [draw(st.integers(0, max_nodes))]
    for _ in range(3):
        sizes.append(draw(st.integers(0, max_nodes).filter(lambda k: (k + sizes[-1]) % 2 == 0)))
    return tuple(draw(diagrams(sizes[j], sizes[j + 1])) for j in range(3))
