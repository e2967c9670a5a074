from itertools import product
from random import Random

import pytest

from totref import (
    AlgebraElement,
    Graph,
    PrimeField,
    algebra_from_relations,
    artinian_reduction,
    find_ezd,
    ideal_pair_analysis,
    kernel_system,
    reduction_chain,
    socle,
    verify_ezd,
    wlp_check,
    wlp_generic,
    necessary_ring_conditions,
)
from totref.analysis import (
    annihilator_linear,
    principal_ideal_subspace,
    principal_length_linear,
    quadratic_presentation,
    ring_length,
)

from conftest import EXAMPLE_RING_RELATIONS, random_bipartite_connected


@pytest.fixture(scope="module")
def example_ring(gf):
    return algebra_from_relations(["X", "Y"], EXAMPLE_RING_RELATIONS, 3, field=gf)


@pytest.fixture(scope="module")
def ten_vertex_reduction(ten_vertex_g):
    return artinian_reduction(ten_vertex_g)


def test_socle_m2_zero_ring(path4):
    R = artinian_reduction(path4)
    s = socle(R)
    assert s.dim == R.dims[1]  # socle is all of m


def test_socle_ten_vertex(ten_vertex_reduction):
    s = socle(ten_vertex_reduction)
    assert s.dim == 7
    # no linear part: every socle basis vector is supported in degree 2
    for v in s.basis:
        assert all(x == 0 for x in v[: ten_vertex_reduction.dims[1]])


def test_socle_example_ring_linear_element(example_ring, gf):
    R = example_ring
    s = socle(R)
    # one linear socle element plus the one-dimensional top degree
    assert s.dim == 2
    linear = [v[:2] for v in s.basis if any(x != 0 for x in v[:2])]
    assert len(linear) == 1
    # the computed element spans the same line as X - Y (char != 2)
    a, b = linear[0]
    assert a != 0 and (a + b) % gf.p == 0
    xm = R.generator("X")
    ym = R.generator("Y")
    elt = xm - ym
    assert (elt * xm).is_zero() and (elt * ym).is_zero()
    # while X + Y is not socle
    assert not ((xm + ym) * xm).is_zero()


def test_ring_conditions_ten_vertex(ten_vertex_reduction):
    rep = necessary_ring_conditions(ten_vertex_reduction)
    assert rep.verdict == "admits-possible"
    assert rep.type_r == 7 and rep.dims_match and rep.socle_equals_m2
    assert rep.quadratic_presentation and not rep.m2_zero


def test_ring_conditions_example_ring(example_ring):
    rep = necessary_ring_conditions(example_ring)
    assert not rep.socle_equals_m2
    assert rep.verdict == "no-non-free-TR"
    assert rep.linear_socle_labels  # recorded for the report


def test_ring_conditions_tree(path4):
    R = artinian_reduction(path4)
    rep = necessary_ring_conditions(R)
    assert rep.m2_zero and rep.verdict == "no-non-free-TR"


def test_quadratic_presentation_triangle(gf):
    # the 3-cycle forces the cubic x*y*z relation: not quadratically presented
    tri = Graph(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    R = artinian_reduction(tri, mode="generic", seed=3, field=gf)
    assert list(R.dims) == [1, 1, 1, 0]
    assert not quadratic_presentation(R)
    rep = necessary_ring_conditions(R)
    assert rep.verdict == "no-non-free-TR"


def test_wlp_example_ring(example_ring, gf):
    R = example_ring
    assert wlp_check(R, R.linear_form({"X": 1, "Y": 1}))
    assert wlp_check(R, R.linear_form({"X": 3, "Y": 2}))
    assert not wlp_check(R, R.linear_form({"X": 1, "Y": -1}))  # a + b = 0
    has, hits, witness = wlp_generic(R, Random(0), trials=8)
    assert has and hits == 8 and witness is not None


def test_wlp_ten_vertex_always_fails(ten_vertex_reduction):
    rng = Random(12)
    for _ in range(100):
        l = ten_vertex_reduction.random_linear(rng)
        assert not wlp_check(ten_vertex_reduction, l)


def test_kernel_system_koszul_bound(c4, ten_vertex_g, gf):
    rng = Random(8)
    graphs = [c4, ten_vertex_g] + [random_bipartite_connected(rng, 4, 9, rng.randrange(4, 11)) for _ in range(5)]
    for g in graphs:
        l1 = [gf.rand(rng) for _ in g.vertices]
        l2 = [gf.rand(rng) for _ in g.vertices]
        l = [gf.rand(rng) for _ in g.vertices]
        ks = kernel_system(g, l1, l2, l, gf)
        assert ks.koszul_contained
        assert ks.dimension >= 3
        assert ks.matrix.rows == g.e + g.n and ks.matrix.cols == 3 * g.n


def test_kernel_system_c4_dimension_four(c4, gf):
    rng = Random(15)
    xs, ys = c4.bipartition
    l1 = [1 if v in set(xs) else 0 for v in c4.vertices]
    l2 = [1 if v in set(ys) else 0 for v in c4.vertices]
    l = [gf.rand(rng) for _ in c4.vertices]
    ks = kernel_system(c4, l1, l2, l, gf)
    assert ks.dimension == 4
    assert ks.f4 is not None
    # the extra solution's f-part spans the kernel of multiplication by l
    chain = reduction_chain(c4, field=gf)
    R = chain.bottom

    def image(coeffs):
        top_elt = chain.top.linear_form({v: c for v, c in zip(c4.vertices, coeffs)})
        return chain.steps[1].project(chain.steps[0].project(top_elt))

    lbar = image(l)
    fbar = image(ks.f4_linear_coeffs())
    assert not fbar.is_zero()
    assert (lbar * fbar).is_zero()


def test_kernel_system_ten_vertex_dimension_exceeds_four(ten_vertex_g, gf):
    rng = Random(21)
    xs, ys = ten_vertex_g.bipartition
    l1 = [1 if v in set(xs) else 0 for v in ten_vertex_g.vertices]
    l2 = [1 if v in set(ys) else 0 for v in ten_vertex_g.vertices]
    for _ in range(5):
        l = [gf.rand(rng) for _ in ten_vertex_g.vertices]
        ks = kernel_system(ten_vertex_g, l1, l2, l, gf)
        assert ks.dimension > 4


def test_find_ezd_c4(c4_reduction):
    pair = find_ezd(c4_reduction, "bipartite-canonical", trials=64, rng=Random(1), x_labels={"x1", "x2"})
    assert pair is not None and pair.certified
    assert verify_ezd(c4_reduction, pair.a, pair.b)
    # a certified pair gives WLP and a one-dimensional multiplication kernel
    assert wlp_check(c4_reduction, pair.a)
    mm = c4_reduction.mult_map_matrix(pair.a, 1)
    assert mm.cols - mm.rank() == 1


def test_find_ezd_ten_vertex_none(ten_vertex_reduction):
    pair = find_ezd(
        ten_vertex_reduction, "bipartite-canonical", trials=300, rng=Random(2),
        x_labels={f"x{i}" for i in range(1, 5)},
    )
    assert pair is None
    assert find_ezd(ten_vertex_reduction, "random", trials=300, rng=Random(3)) is None


def test_find_ezd_m2_zero_none(path4):
    R = artinian_reduction(path4)
    assert find_ezd(R, "random", trials=32, rng=Random(0)) is None


def test_find_ezd_exhaustive_lines_small_field():
    R = artinian_reduction(
        Graph(
            ["x1", "x2", "y1", "y2"],
            [("x1", "y1"), ("x1", "y2"), ("x2", "y1"), ("x2", "y2")],
        ),
        field=PrimeField(5),
    )
    pair = find_ezd(R, "exhaustive-lines", trials=40)
    assert pair is not None and verify_ezd(R, pair.a, pair.b)


def test_verify_ezd_negative_cases(c4_reduction, example_ring):
    R = c4_reduction
    x, y = R.generators()
    assert not verify_ezd(R, x, y)  # x*y != 0
    assert verify_ezd(R, x + y, x - y)  # (x+y)(x-y) = x^2 - y^2 = 0
    assert not verify_ezd(R, R.zero(1), x)
    # a linear socle element can never be half of a pair
    E = example_ring
    soc_elt = E.generator("X") - E.generator("Y")
    for cand in (E.generator("X"), E.generator("Y"), E.generator("X") + E.generator("Y")):
        assert not verify_ezd(E, soc_elt, cand)


def brute_force_is_ezd(R, a, b):
    """Oracle: Ann(a) = (b) and Ann(b) = (a) as literal subspaces."""
    if a.is_zero() or b.is_zero():
        return False
    return (
        annihilator_linear(R, a) == principal_ideal_subspace(R, b)
        and annihilator_linear(R, b) == principal_ideal_subspace(R, a)
    )


def test_verify_ezd_matches_annihilator_oracle_small_field():
    gf5 = PrimeField(5)
    c4 = Graph(
        ["x1", "x2", "y1", "y2"],
        [("x1", "y1"), ("x1", "y2"), ("x2", "y1"), ("x2", "y2")],
    )
    rings = [
        artinian_reduction(c4, field=gf5),
        algebra_from_relations(["X", "Y"], EXAMPLE_RING_RELATIONS, 3, field=gf5),
    ]
    for R in rings:
        n = R.dims[1]
        vectors = list(product(range(5), repeat=n))
        for av in vectors:
            a = AlgebraElement(R, 1, list(av))
            for bv in vectors:
                b = AlgebraElement(R, 1, list(bv))
                expected = brute_force_is_ezd(R, a, b)
                if a.is_zero() or b.is_zero():
                    got = False
                else:
                    got = verify_ezd(R, a, b)
                assert got == expected, (av, bv)


def test_length_bookkeeping(c4_reduction):
    R = c4_reduction
    x, y = R.generators()
    assert ring_length(R) == 4
    assert principal_length_linear(R, x) == 2
    assert principal_length_linear(R, x + y) == 2


def test_ideal_pair_ten_vertex(ten_vertex_reduction):
    R = ten_vertex_reduction
    gens_a = [R.generator(l) for l in ("x1", "x2", "y1", "y2")]
    gens_b = [R.generator(l) for l in ("x3", "x4", "y3", "y4")]
    rep = ideal_pair_analysis(R, gens_a, gens_b)
    assert rep.sum_is_m and rep.product_zero
    assert rep.intersection_dims == (0, 1)
    assert not rep.direct_sum
    assert rep.verdict == "non-trivial-intersection"


def test_ideal_pair_direct_sum_graph(gf):
    g = Graph(
        ["x1", "x2", "x3", "y1", "y2", "y3"],
        [
            ("x1", "y1"), ("x2", "y2"), ("x3", "y1"), ("x3", "y2"),
            ("x3", "y3"), ("y3", "x1"), ("y3", "x2"),
        ],
    )
    chain = reduction_chain(g, field=gf)
    R = chain.bottom

    def image(v):
        return chain.steps[1].project(chain.steps[0].project(chain.top.generator(v)))

    rep = ideal_pair_analysis(R, [image("x1"), image("y1")], [image("x2"), image("y2")])
    assert rep.direct_sum and rep.nu_m >= 3
    assert rep.verdict == "no-non-free-TR"


def test_ideal_pair_degenerate(ten_vertex_reduction):
    R = ten_vertex_reduction
    gens = R.generators()
    rep = ideal_pair_analysis(R, gens, gens)
    assert rep.verdict is None  # a = b = m is not a decomposition
    assert not rep.direct_sum


def block_hub_graph(sizes):
    """Two complete bipartite blocks joined through a hub pair, so that
    removing the hub disconnects the graph."""
    (k1, l1), (k2, l2) = sizes
    xs = [f"x{i}" for i in range(1, k1 + k2 + 2)]
    ys = [f"y{j}" for j in range(1, l1 + l2 + 2)]
    hub_x, hub_y = xs[-1], ys[-1]
    ax, ay = xs[:k1], ys[:l1]
    bx, by = xs[k1 : k1 + k2], ys[l1 : l1 + l2]
    edges = [(x, y) for x in ax for y in ay] + [(x, y) for x in bx for y in by]
    edges += [(hub_x, y) for y in ay + by] + [(x, hub_y) for x in ax + bx]
    return Graph(xs + ys, edges, (xs, ys))


def test_disconnecting_pair_implies_no_ezd(gf):
    # cross-module property: a disconnecting pair certifies the absence of
    # exact zero divisors in the canonical reduction
    from totref.graphs import disconnecting_pair

    rng = Random(99)
    graphs = [
        block_hub_graph(sizes)
        for sizes in (((2, 2), (2, 2)), ((1, 1), (1, 1)), ((2, 1), (1, 2)), ((2, 2), (1, 1)))
    ]
    for g in graphs:
        assert g.is_connected() and g.is_bipartite()
        pair = disconnecting_pair(g)
        assert pair is not None
        R = artinian_reduction(g, field=gf)
        found = find_ezd(
            R, "bipartite-canonical", trials=128, rng=rng, x_labels=set(g.bipartition[0])
        )
        assert found is None
        found = find_ezd(R, "random", trials=128, rng=rng)
        assert found is None
