import os

from hypothesis import HealthCheck, settings, strategies as st

from homred.graph import Graph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def graphs(draw, min_n=0, max_n=7, loops=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u if loops else u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@st.composite
def list_instances(draw, target, max_n=5):
    from homred.solver import ListHomInstance
    g = draw(graphs(max_n=max_n))
    lists = tuple(frozenset(draw(st.sets(st.integers(0, target.n - 1)))) for _ in range(g.n))
    return ListHomInstance(g, target, lists)
