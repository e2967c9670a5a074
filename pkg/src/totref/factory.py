"""The explicit no-exact-zero-divisor ring and its 2x2 block recursion.

The special ring is the canonical Artinian reduction of a ten-vertex
bipartite graph whose maximal ideal splits as m = a + b with ab = 0 and a
one-dimensional overlap (delta) in degree two.  Pairs of 2x2 matrices
(A_n with entries in a, B_n with entries in b) whose induced maps on
(a_1)^2 -> (a_2)^2 and (b_1)^2 -> (b_2)^2 are bijective extend both ways:

  * forward, by solving A_n c = (delta, 0), (0, delta) and B_n d = the
    negatives, the new columns spanning ker(A_n + B_n) on (R_1)^2;
  * backward, by running the forward step on the transposes and transposing.

Every step re-verifies the injectivity of all four induced maps and the
vanishing of the composition, so a finished window certifies itself; the
explicit even/odd block pair gives a genuinely periodic window, and random
coefficient choices give fresh ones (distinguished by their entry ideals).
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from .algebra import AlgebraElement, ReductionChain, reduction_chain
from .complexes import (
    FreeComplexWindow,
    Periodicity,
    WindowCertificate,
    fitting_support,
    full_certification,
)
from .graphs import Graph
from .linalg import Matrix, Subspace


class FactoryError(ValueError):
    pass


class ExtensionError(FactoryError):
    pass


class PartialWindowError(FactoryError):
    def __init__(self, step, message):
        super().__init__(f"window construction failed at step {step}: {message}")
        self.step = step


def ten_vertex_graph() -> Graph:
    """Two four-cycles glued through a hub pair; ten vertices, sixteen edges."""
    xs = [f"x{i}" for i in range(1, 6)]
    ys = [f"y{j}" for j in range(1, 6)]
    edges = [
        ("x1", "y1"), ("x1", "y2"), ("x2", "y1"), ("x2", "y2"),
        ("x3", "y3"), ("x3", "y4"), ("x4", "y3"), ("x4", "y4"),
    ]
    edges += [(f"x{i}", "y5") for i in range(1, 5)]
    edges += [("x5", f"y{j}") for j in range(1, 5)]
    return Graph(xs + ys, edges, bipartition=(xs, ys))


TEN_VERTEX_PARTITION = (("x1", "x2", "y1", "y2"), ("x3", "x4", "y3", "y4"))


def _greedy_basis(field, ambient, vectors):
    """First vectors (in order) that enlarge the span; returns their indices."""
    chosen = []
    span = Subspace.zero(field, ambient)
    for k, v in enumerate(vectors):
        bigger = span.sum(Subspace.from_vectors(field, ambient, [v]))
        if bigger.dim > span.dim:
            chosen.append(k)
            span = bigger
    return chosen


class SpecialRing:
    """An Artinian graph reduction with a certified a/b ideal decomposition."""

    def __init__(self, chain: ReductionChain, part_a, part_b):
        self.chain = chain
        self.graph = chain.graph
        self.ring = chain.bottom
        R = self.ring
        f = R.field
        self.part_a = tuple(part_a)
        self.part_b = tuple(part_b)

        def image(vertex):
            q1, q2 = chain.steps
            return q2.project(q1.project(chain.top.generator(vertex)))

        self.a_gens = [image(v) for v in self.part_a]
        self.b_gens = [image(v) for v in self.part_b]
        self.a1 = Subspace.from_vectors(f, R.dims[1], [list(g.coords) for g in self.a_gens])
        self.b1 = Subspace.from_vectors(f, R.dims[1], [list(g.coords) for g in self.b_gens])
        if self.a1.dim != len(self.a_gens) or self.b1.dim != len(self.b_gens):
            raise FactoryError("partition images are not linearly independent")
        if self.a1.dim + self.b1.dim != R.dims[1]:
            raise FactoryError("a_1 + b_1 does not decompose R_1")

        self.a1_basis = list(self.a_gens)
        self.b1_basis = list(self.b_gens)
        self.a2_basis = self._degree2_basis(self.a1_basis)
        self.b2_basis = self._degree2_basis(self.b1_basis)
        self.a2 = Subspace.from_vectors(f, R.dims[2], [list(e.coords) for e in self.a2_basis])
        self.b2 = Subspace.from_vectors(f, R.dims[2], [list(e.coords) for e in self.b2_basis])
        if self.a2.dim != self.a1.dim or self.b2.dim != self.b1.dim:
            raise FactoryError("degree-two pieces do not match the degree-one dimensions")
        if self.a2.sum(self.b2).dim != R.dims[2]:
            raise FactoryError("a_2 + b_2 does not span R_2")
        for ga in self.a_gens:
            for gb in self.b_gens:
                if not (ga * gb).is_zero():
                    raise FactoryError("the ideal product ab is nonzero")

        overlap = self.a2.intersection(self.b2)
        if overlap.dim != 1:
            raise FactoryError(f"a_2 and b_2 overlap in dimension {overlap.dim}, expected 1")
        self.delta = AlgebraElement(R, 2, overlap.basis[0])

        self._a2_cols = Matrix(
            f, [[e.coords[k] for e in self.a2_basis] for k in range(R.dims[2])],
            cols=len(self.a2_basis),
        )
        self._b2_cols = Matrix(
            f, [[e.coords[k] for e in self.b2_basis] for k in range(R.dims[2])],
            cols=len(self.b2_basis),
        )
        self.delta_a = self._a2_cols.solve(list(self.delta.coords))
        self.delta_b = self._b2_cols.solve([f.neg(c) for c in self.delta.coords])
        if self.delta_a is None or self.delta_b is None:
            raise FactoryError("delta is not expressible on both sides")

    def _degree2_basis(self, gens):
        R = self.ring
        prods = []
        for i, g in enumerate(gens):
            for h in gens[i:]:
                prods.append(g * h)
        idx = _greedy_basis(R.field, R.dims[2], [list(e.coords) for e in prods])
        return [prods[k] for k in idx]

    def side(self, which):
        if which == "a":
            return self.a1_basis, self.a2_basis, self._a2_cols
        if which == "b":
            return self.b1_basis, self.b2_basis, self._b2_cols
        raise FactoryError("side must be 'a' or 'b'")

    def side_subspace(self, which):
        return self.a1 if which == "a" else self.b1

    def element_from_side_coords(self, which, coords):
        basis1, _, _ = self.side(which)
        out = self.ring.zero(1)
        for c, g in zip(coords, basis1):
            out = out + g.scale(c)
        return out

    def to_json(self):
        f = self.ring.field
        return {
            "partition": [list(self.part_a), list(self.part_b)],
            "hilbert": list(self.ring.dims),
            "delta": [f.encode(c) for c in self.delta.coords],
            "side_dims": {
                "a": [self.a1.dim, self.a2.dim],
                "b": [self.b1.dim, self.b2.dim],
            },
        }


def build_special_ring(field=None, partition=TEN_VERTEX_PARTITION, graph=None, seed=0) -> SpecialRing:
    """The ring of the ten-vertex construction (or a compatible custom graph)."""
    g = graph if graph is not None else ten_vertex_graph()
    chain = reduction_chain(g, mode="canonical", seed=seed, cutoff=3, field=field)
    return SpecialRing(chain, partition[0], partition[1])


@dataclass
class PairBlock:
    """A pair of 2x2 matrices with entries in a_1 and b_1, plus their flags."""

    index: int
    A: list
    B: list
    inj_a: bool
    inj_at: bool
    inj_b: bool
    inj_bt: bool

    @property
    def all_injective(self) -> bool:
        return self.inj_a and self.inj_at and self.inj_b and self.inj_bt

    def combined(self):
        return [[self.A[r][c] + self.B[r][c] for c in range(2)] for r in range(2)]


def _transpose2(mat):
    return [[mat[c][r] for c in range(2)] for r in range(2)]


def induced_matrix(ring: SpecialRing, mat, side: str, transpose: bool = False) -> Matrix:
    """Matrix of (f, g) -> mat * (f, g)^t on (side_1)^2 -> (side_2)^2.

    Since the two sides annihilate each other, a wrong-side component would
    act as zero and go unnoticed; membership is checked explicitly instead.
    """
    basis1, _, cols2 = ring.side(side)
    m = len(basis1)
    f = ring.ring.field
    sub = ring.side_subspace(side)
    for row in mat:
        for e in row:
            if not sub.contains(list(e.coords)):
                raise FactoryError(f"block entry lies outside side {side!r}")
    if transpose:
        mat = _transpose2(mat)
    columns = []
    for slot in range(2):
        for k in range(m):
            vec = basis1[k]
            outs = []
            for r in range(2):
                prod = mat[r][slot] * vec
                coords = cols2.solve(list(prod.coords))
                if coords is None:
                    raise FactoryError(f"block entry ({r},{slot}) lies outside side {side!r}")
                outs.extend(coords)
            columns.append(outs)
    return Matrix(f, [[columns[j][i] for j in range(2 * m)] for i in range(2 * m)], cols=2 * m)


def injectivity_check(ring: SpecialRing, mat, side: str, transpose: bool = False) -> bool:
    m = induced_matrix(ring, mat, side, transpose)
    return m.rank() == m.cols


def make_block(ring: SpecialRing, index: int, A, B) -> PairBlock:
    return PairBlock(
        index=index,
        A=A,
        B=B,
        inj_a=injectivity_check(ring, A, "a"),
        inj_at=injectivity_check(ring, A, "a", transpose=True),
        inj_b=injectivity_check(ring, B, "b"),
        inj_bt=injectivity_check(ring, B, "b", transpose=True),
    )


_EVEN_A = [
    [{"x1": 1, "x2": 1, "y1": 1, "y2": 1}, {"x1": 1, "x2": -1, "y1": 1, "y2": -1}],
    [{"x1": 1, "x2": -1, "y1": 1, "y2": -1}, {"x1": 1, "x2": 1, "y1": -1, "y2": -1}],
]
_EVEN_B = [
    [{"x3": 1, "x4": 1, "y3": 1, "y4": 1}, {"x3": 1, "x4": -1, "y3": 1, "y4": -1}],
    [{"x3": 1, "x4": -1, "y3": 1, "y4": -1}, {"x3": 1, "x4": 1, "y3": -1, "y4": -1}],
]
_ODD_A = [
    [{"x1": 1, "x2": 1, "y1": 1, "y2": 1}, {"x1": 1, "x2": -1, "y1": -1, "y2": 1}],
    [{"x1": 1, "x2": -1, "y1": -1, "y2": 1}, {"x1": 1, "x2": 1, "y1": -1, "y2": -1}],
]
_ODD_B = [
    [{"x3": 1, "x4": 1, "y3": 1, "y4": 1}, {"x3": 1, "x4": -1, "y3": -1, "y4": 1}],
    [{"x3": 1, "x4": -1, "y3": -1, "y4": 1}, {"x3": 1, "x4": 1, "y3": -1, "y4": -1}],
]


def canonical_blocks(ring: SpecialRing, index: int) -> PairBlock:
    """The explicit block pair of the construction, chosen by index parity."""
    R = ring.ring
    try:
        A_coeffs, B_coeffs = (_EVEN_A, _EVEN_B) if index % 2 == 0 else (_ODD_A, _ODD_B)
        A = [[R.linear_form(d) for d in row] for row in A_coeffs]
        B = [[R.linear_form(d) for d in row] for row in B_coeffs]
    except Exception as exc:
        raise FactoryError(f"canonical blocks need the ten-vertex ring labels: {exc}") from exc
    return make_block(ring, index, A, B)


def random_blocks(ring: SpecialRing, rng: Random, index: int = 0, max_retries: int = 64) -> PairBlock:
    """Uniform coefficients on both sides, resampled until all four maps are
    bijective (a determinant condition, so failures are rare over a big field)."""
    f = ring.ring.field
    m = len(ring.a1_basis)
    for _ in range(max_retries):
        A = [
            [ring.element_from_side_coords("a", [f.rand(rng) for _ in range(m)]) for _ in range(2)]
            for _ in range(2)
        ]
        B = [
            [ring.element_from_side_coords("b", [f.rand(rng) for _ in range(m)]) for _ in range(2)]
            for _ in range(2)
        ]
        block = make_block(ring, index, A, B)
        if block.all_injective:
            return block
    raise FactoryError(f"no injective block pair found in {max_retries} samples")


def _compose_is_zero(ring: SpecialRing, first, second) -> bool:
    R = ring.ring
    for r in range(2):
        for c in range(2):
            acc = R.zero(2)
            for k in range(2):
                acc = acc + first[r][k] * second[k][c]
            if not acc.is_zero():
                return False
    return True


def _solve_columns(ring: SpecialRing, mat, side: str):
    """Columns c1, c2 with (induced mat) c_i = (delta, 0) resp. (0, delta);
    the b-side right-hand sides carry -delta, baked into delta_b."""
    basis1, _, _ = ring.side(side)
    m = len(basis1)
    M = induced_matrix(ring, mat, side)
    target = ring.delta_a if side == "a" else ring.delta_b
    zeros = [ring.ring.field.zero] * m
    rhs1 = list(target) + zeros
    rhs2 = zeros + list(target)
    out = []
    for rhs in (rhs1, rhs2):
        sol = M.solve(rhs)
        if sol is None:
            raise ExtensionError(f"side {side!r} system is singular")
        f_elt = ring.element_from_side_coords(side, sol[:m])
        g_elt = ring.element_from_side_coords(side, sol[m:])
        out.append((f_elt, g_elt))
    return [[out[0][0], out[1][0]], [out[0][1], out[1][1]]]  # columns c1 | c2


def extend_forward(ring: SpecialRing, block: PairBlock) -> PairBlock:
    """The successor pair: columns solving the two delta-column systems."""
    if not block.all_injective:
        raise ExtensionError("all four injectivity flags must hold before extending")
    A_next = _solve_columns(ring, block.A, "a")
    B_next = _solve_columns(ring, block.B, "b")
    new = make_block(ring, block.index + 1, A_next, B_next)
    if not _compose_is_zero(ring, block.combined(), new.combined()):
        raise ExtensionError("extension does not compose to zero")
    return new


def extend_backward(ring: SpecialRing, block: PairBlock) -> PairBlock:
    """Run the forward step on the transposes, then transpose the result."""
    if not block.all_injective:
        raise ExtensionError("all four injectivity flags must hold before extending")
    C = _solve_columns(ring, _transpose2(block.A), "a")
    D = _solve_columns(ring, _transpose2(block.B), "b")
    new = make_block(ring, block.index - 1, _transpose2(C), _transpose2(D))
    if not _compose_is_zero(ring, new.combined(), block.combined()):
        raise ExtensionError("backward extension does not compose to zero")
    return new


@dataclass
class FactoryReport:
    blocks: dict
    certificate: WindowCertificate
    kernel_dims: dict  # differential index -> dim ker on (R_1)^2
    mode: str

    @property
    def certified(self) -> bool:
        return (
            all(b.all_injective for b in self.blocks.values())
            and self.certificate.certified
            and all(v == 2 for v in self.kernel_dims.values())
        )

    def to_json(self):
        return {
            "mode": self.mode,
            "steps": {
                str(n): {
                    "inj_a": b.inj_a,
                    "inj_a_transpose": b.inj_at,
                    "inj_b": b.inj_b,
                    "inj_b_transpose": b.inj_bt,
                }
                for n, b in sorted(self.blocks.items())
            },
            "kernel_dims": {str(k): v for k, v in sorted(self.kernel_dims.items())},
            "certificate": self.certificate.to_json(),
            "certified": self.certified,
        }


def _window_from_blocks(ring: SpecialRing, blocks, periodic=None) -> FreeComplexWindow:
    ns = sorted(blocks)
    lo, hi = ns[0] - 1, ns[-1]
    betti = [2] * (hi - lo + 1)
    diffs = [blocks[n].combined() for n in ns]
    return FreeComplexWindow(ring.ring, lo, hi, betti, diffs, base_twist=lo, periodic=periodic)


def _certify(ring: SpecialRing, blocks, window, mode) -> FactoryReport:
    cert = full_certification(window)
    kernel_dims = {}
    for n in sorted(blocks):
        blk = window.block_matrix(n, 1)
        kernel_dims[n] = blk.cols - blk.rank()
    return FactoryReport(blocks=blocks, certificate=cert, kernel_dims=kernel_dims, mode=mode)


def build_window(ring: SpecialRing, start: PairBlock, forward: int, backward: int):
    """Extend a start block both ways and certify the assembled window."""
    if not start.all_injective:
        raise PartialWindowError(start.index, "start block fails an injectivity check")
    blocks = {start.index: start}
    cur = start
    for _ in range(forward):
        cur = extend_forward(ring, cur)
        if not cur.all_injective:
            raise PartialWindowError(cur.index, "extension lost injectivity")
        blocks[cur.index] = cur
    cur = start
    for _ in range(backward):
        cur = extend_backward(ring, cur)
        if not cur.all_injective:
            raise PartialWindowError(cur.index, "extension lost injectivity")
        blocks[cur.index] = cur
    window = _window_from_blocks(ring, blocks)
    report = _certify(ring, blocks, window, mode="extended")
    return window, report


def canonical_window(ring: SpecialRing, forward: int, backward: int):
    """The strictly periodic window made of the explicit even/odd blocks."""
    blocks = {n: canonical_blocks(ring, n) for n in range(-backward, forward + 1)}
    window = _window_from_blocks(ring, blocks, periodic=Periodicity(2, False))
    window.verify_periodicity()
    report = _certify(ring, blocks, window, mode="canonical")
    return window, report


def distinct_modules(ring: SpecialRing, w1: FreeComplexWindow, w2: FreeComplexWindow) -> bool:
    """Do the index-0 cokernels have different entry-ideal graded pieces?"""
    s1 = fitting_support(ring.ring, w1.diff(0))
    s2 = fitting_support(ring.ring, w2.diff(0))
    return s1 != s2
