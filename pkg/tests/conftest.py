import json
from fractions import Fraction
from random import Random

import pytest

from totref import (
    Graph,
    PrimeField,
    RationalField,
    artinian_reduction,
    build_special_ring,
    reduction_chain,
    ten_vertex_graph,
)

EXAMPLE_RING_RELATIONS = [
    {(2, 0): 1, (0, 2): -1},  # X^2 - Y^2
    {(2, 0): 1, (1, 1): -1},  # X^2 - XY
    {(3, 0): 1},              # X^3
]


@pytest.fixture(scope="session")
def gf():
    return PrimeField()


@pytest.fixture(scope="session")
def qq():
    return RationalField()


@pytest.fixture(scope="session")
def ten_vertex_g():
    return ten_vertex_graph()


@pytest.fixture(scope="session")
def special_ring():
    return build_special_ring()


@pytest.fixture(scope="session")
def c4():
    return Graph(
        ["x1", "x2", "y1", "y2"],
        [("x1", "y1"), ("x1", "y2"), ("x2", "y1"), ("x2", "y2")],
        bipartition=(("x1", "x2"), ("y1", "y2")),
    )


@pytest.fixture(scope="session")
def c4_reduction(c4):
    return artinian_reduction(c4)


@pytest.fixture(scope="session")
def c4_chain5(c4):
    return reduction_chain(c4, cutoff=5)


@pytest.fixture(scope="session")
def path4():
    return Graph(["x1", "y1", "x2", "y2"], [("x1", "y1"), ("y1", "x2"), ("x2", "y2")])


def random_bipartite_connected(rng: Random, n_min=4, n_max=12, edge_count=None):
    """A random connected bipartite graph; optionally with a forced edge count."""
    for _ in range(2000):
        n = rng.randrange(n_min, n_max + 1)
        k = rng.randrange(2, n - 1)
        l = n - k
        if l < 2:
            continue
        xs = [f"x{i}" for i in range(1, k + 1)]
        ys = [f"y{j}" for j in range(1, l + 1)]
        all_edges = [(x, y) for x in xs for y in ys]
        e = edge_count if edge_count is not None else 2 * n - 4
        if e > len(all_edges) or e < n - 1:
            continue
        edges = rng.sample(all_edges, e)
        g = Graph(xs + ys, edges, bipartition=(xs, ys))
        if g.is_connected():
            return g
    raise RuntimeError("could not sample a connected bipartite graph")


def to_networkx(g: Graph):
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from(g.edges)
    return G


def fraction_det(rows):
    """Independent determinant oracle: fraction-free recursive minor expansion
    with bitmask memoization."""
    n = len(rows)
    rows = [[Fraction(x) for x in r] for r in rows]
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def minor(r, colmask):
        if r == n:
            return Fraction(1)
        total = Fraction(0)
        sign = 1
        for c in range(n):
            bit = 1 << c
            if colmask & bit:
                continue
            if rows[r][c]:
                total += sign * rows[r][c] * minor(r + 1, colmask | bit)
            sign = -sign
        return total

    return minor(0, 0)


def dump_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def naive_exactness(w):
    """Independent exactness oracle: image and kernel as explicit subspaces.

    Returns {(index, degree): exact} computed from span comparisons, never
    from rank bookkeeping.
    """
    from totref import Subspace

    R = w.algebra
    f = R.field
    verdicts = {}
    for i in w.interior_indices():
        for t in range(0, R.cutoff):
            if t + 1 > R.cutoff:
                continue
            src = R.dims[t] * w.rank_of(i)
            blk = w.block_matrix(i, t)
            ker = blk.kernel_basis()
            if t == 0:
                img = Subspace.zero(f, src)
            else:
                inc = w.block_matrix(i + 1, t - 1)
                cols = [[inc.entries[r][c] for r in range(inc.rows)] for c in range(inc.cols)]
                img = Subspace.from_vectors(f, src, cols)
            verdicts[(i, w.twist(i) + t)] = img == ker
    return verdicts
