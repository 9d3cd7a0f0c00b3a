from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from twoblock.digraph import Digraph, build_digraph

FIGURE1_ARCS = [
    (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
    (3, 1), (0, 2), (0, 3), (1, 4), (2, 4),
]


@pytest.fixture(scope="session")
def fig1() -> Digraph:
    return build_digraph(5, FIGURE1_ARCS)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return Path(__file__).parent.parent / "fixtures"


@st.composite
def digraphs(draw, min_n: int = 1, max_n: int = 6) -> Digraph:
    n = draw(st.integers(min_n, max_n))
    possible = [(i, j) for i in range(n) for j in range(n) if i != j]
    arcs = draw(st.sets(st.sampled_from(possible)) if possible else st.just(set()))
    return Digraph(n, frozenset(arcs))
