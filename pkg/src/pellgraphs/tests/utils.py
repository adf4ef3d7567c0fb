from hypothesis import strategies as st

from pellgraphs.graphs import Graph


@st.composite
def pell_strings(draw, max_tokens: int = 10) -> str:
    """Pell strings built from the tokens 0, 1 and 22."""
    tokens = draw(st.lists(st.sampled_from(["0", "1", "22"]), max_size=max_tokens))
    return "".join(tokens)


@st.composite
def trees(draw, max_vertices: int = 12) -> Graph:
    """Random trees: every vertex after the first hangs off an earlier one."""
    n = draw(st.integers(1, max_vertices))
    parents = [draw(st.integers(0, v - 1)) for v in range(1, n)]
    return Graph.from_edges(n, [(p, v + 1) for v, p in enumerate(parents)])
