"""Instance builders shared across test modules."""

from hypothesis import strategies as st

from dqcpart.hypergraph import Hypergraph


def random_hypergraph(rng, n, m, max_size=4):
    edges = []
    for _ in range(m):
        s = int(rng.integers(2, min(max_size, n) + 1))
        edges.append(rng.choice(n, size=s, replace=False).tolist())
    return Hypergraph.from_multiedges(n, edges)


@st.composite
def hypergraphs(draw, min_n=2, max_n=12, max_edges=20, max_size=4):
    n = draw(st.integers(min_n, max_n))
    pin_sets = st.sets(st.integers(0, n - 1), min_size=2, max_size=min(max_size, n))
    multi = draw(st.lists(pin_sets, max_size=max_edges))
    return Hypergraph.from_multiedges(n, multi)
