import numpy as np
from hypothesis import strategies as st

from alphaspectra.digraph import Digraph


@st.composite
def digraphs(draw, max_n=6, min_n=1):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
    adj = np.array(bits, dtype=bool).reshape(n, n)
    np.fill_diagonal(adj, False)
    return Digraph(adj)
