"""Ring-structure analyses on Artinian reductions: socle, Lefschetz behaviour,
exact-zero-divisor search and certification, ideal-pair decompositions.

The Weak Lefschetz Property is tested as surjectivity of multiplication
R_1 -> R_2 by a linear form; for graphs with e = 2n - 4 this is equivalent to
the edge/vertex coefficient system having a 4-dimensional solution space,
which is computed independently as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from random import Random
from typing import Optional

from .algebra import AlgebraElement, AlgebraError, GradedAlgebra
from .graphs import Graph
from .linalg import Matrix, Subspace


def _require_artinian(R: GradedAlgebra):
    if not R.is_artinian():
        raise AlgebraError("operation requires an Artinian algebra (top degree must vanish)")


def _stacked_mult_kernel(R: GradedAlgebra, d: int) -> Subspace:
    """Kernel of u -> (u * g for every generator g), from degree d."""
    f = R.field
    src = R.dims[d]
    if src == 0:
        return Subspace.zero(f, 0)
    if d + 1 > R.cutoff or R.dims[d + 1] == 0:
        return Subspace.full(f, src)
    rows = []
    tab = R.table(1, d)
    for i in range(R.dims[1]):
        # rows of multiplication by generator i, i.e. the transposed table slice
        for k in range(R.dims[d + 1]):
            rows.append([tab[i][j][k] for j in range(src)])
    return Matrix(f, rows, cols=src).kernel_basis()


def socle(R: GradedAlgebra) -> Subspace:
    """Canonical basis of (0 : m) inside R_1 + R_2 + ... as one vector space."""
    _require_artinian(R)
    f = R.field
    ambient = sum(R.dims[1:])
    vecs = []
    offset = 0
    for d in range(1, R.cutoff + 1):
        ker = _stacked_mult_kernel(R, d)
        for b in ker.basis:
            v = [f.zero] * ambient
            v[offset : offset + R.dims[d]] = list(b)
            vecs.append(v)
        offset += R.dims[d]
    return Subspace.from_vectors(f, ambient, vecs)


def socle_degree_parts(R: GradedAlgebra):
    """The socle kernel per degree, as a list of Subspaces of R_d."""
    _require_artinian(R)
    return [_stacked_mult_kernel(R, d) for d in range(1, R.cutoff + 1)]


def m_squared_subspace(R: GradedAlgebra) -> Subspace:
    """m^2 inside R_1 + R_2 + ...; degreewise the span of products R_a * R_b."""
    _require_artinian(R)
    f = R.field
    ambient = sum(R.dims[1:])
    vecs = []
    offset = R.dims[1]
    for d in range(2, R.cutoff + 1):
        span = []
        for a in range(1, d):
            tab = R.table(a, d - a)
            for row in tab:
                span.extend(row)
        sub = Subspace.from_vectors(f, R.dims[d], span)
        for b in sub.basis:
            v = [f.zero] * ambient
            v[offset : offset + R.dims[d]] = list(b)
            vecs.append(v)
        offset += R.dims[d]
    return Subspace.from_vectors(f, ambient, vecs)


def quadratic_presentation(R: GradedAlgebra) -> bool:
    """Do quadrics generate the degree-3 relations of the presentation on R_1?

    Relations in degree d are the kernel of Sym^d(R_1) -> R_d; the check is
    span{x_t * (degree-2 kernel)} == degree-3 kernel.
    """
    f = R.field
    m = R.dims[1]
    if m == 0:
        return True
    sym2 = list(combinations_with_replacement(range(m), 2))
    sym3 = list(combinations_with_replacement(range(m), 3))
    s2i = {mm: k for k, mm in enumerate(sym2)}
    s3i = {mm: k for k, mm in enumerate(sym3)}

    tab11 = R.table(1, 1)
    rows2 = [[f.zero] * len(sym2) for _ in range(R.dims[2])]
    for k, (i, j) in enumerate(sym2):
        for t, c in enumerate(tab11[i][j]):
            rows2[t][k] = c
    k2 = Matrix(f, rows2, cols=len(sym2)).kernel_basis()

    if R.cutoff >= 3 and R.dims[3] > 0:
        rows3 = [[f.zero] * len(sym3) for _ in range(R.dims[3])]
        tab12 = R.table(1, 2)
        for k, (i, j, l) in enumerate(sym3):
            prod2 = tab11[j][l]
            acc = [f.zero] * R.dims[3]
            for t, c in enumerate(prod2):
                if f.is_zero(c):
                    continue
                vec = tab12[i][t]
                for s, v in enumerate(vec):
                    if not f.is_zero(v):
                        acc[s] = f.add(acc[s], f.mul(c, v))
            for s in range(R.dims[3]):
                rows3[s][k] = acc[s]
        k3 = Matrix(f, rows3, cols=len(sym3)).kernel_basis()
    else:
        k3 = Subspace.full(f, len(sym3))

    generated = []
    for q in k2.basis:
        for t in range(m):
            v = [f.zero] * len(sym3)
            for k, (i, j) in enumerate(sym2):
                c = q[k]
                if f.is_zero(c):
                    continue
                key = tuple(sorted((t, i, j)))
                v[s3i[key]] = f.add(v[s3i[key]], c)
            generated.append(v)
    return Subspace.from_vectors(f, len(sym3), generated) == k3


@dataclass
class RingConditionReport:
    """Necessary conditions for a non-Gorenstein m^3 = 0 ring to carry
    non-free totally reflexive modules."""

    socle_equals_m2: bool
    dim_r1: int
    dim_r2: int
    type_r: int
    dims_match: bool
    quadratic_presentation: bool
    m2_zero: bool
    linear_socle_labels: tuple
    verdict: str  # "admits-possible" | "no-non-free-TR"

    def to_json(self):
        return {
            "socle_equals_m2": self.socle_equals_m2,
            "dim_r1": self.dim_r1,
            "dim_r2": self.dim_r2,
            "type": self.type_r,
            "dims_match": self.dims_match,
            "quadratic_presentation": self.quadratic_presentation,
            "m2_zero": self.m2_zero,
            "linear_socle": list(self.linear_socle_labels),
            "verdict": self.verdict,
        }


def necessary_ring_conditions(R: GradedAlgebra) -> RingConditionReport:
    _require_artinian(R)
    if R.cutoff >= 4 and any(R.dims[3 : R.cutoff + 1]):
        raise AlgebraError("necessary_ring_conditions requires m^3 = 0")
    soc = socle(R)
    m2 = m_squared_subspace(R)
    socle_ok = soc == m2
    parts = socle_degree_parts(R)
    linear_part = parts[0]
    f = R.field
    linear_labels = []
    for b in linear_part.basis:
        terms = [
            f"{c}*{lab}" for c, lab in zip(b, R.basis[1]) if not f.is_zero(c)
        ]
        linear_labels.append(" + ".join(terms))
    r = soc.dim
    dims_match = R.dims[1] == r + 1 and R.dims[2] == r
    quad = quadratic_presentation(R)
    m2_zero = R.dims[2] == 0
    ok = socle_ok and dims_match and quad and not m2_zero
    return RingConditionReport(
        socle_equals_m2=socle_ok,
        dim_r1=R.dims[1],
        dim_r2=R.dims[2],
        type_r=r,
        dims_match=dims_match,
        quadratic_presentation=quad,
        m2_zero=m2_zero,
        linear_socle_labels=tuple(linear_labels),
        verdict="admits-possible" if ok else "no-non-free-TR",
    )


# -- Weak Lefschetz ------------------------------------------------------------


def wlp_check(R: GradedAlgebra, l: AlgebraElement) -> bool:
    """True iff multiplication by l from R_1 to R_2 is surjective."""
    if l.degree != 1:
        raise AlgebraError("WLP check takes a linear form")
    return R.mult_map_matrix(l, 1).rank() == R.dims[2]


def wlp_generic(R: GradedAlgebra, rng: Random, trials: int = 8):
    """Samples random linear forms; one surjective sample certifies WLP.

    Returns (has_wlp, number of surjective samples, a certifying form or None).
    """
    hits = 0
    witness = None
    for _ in range(trials):
        l = R.random_linear(rng)
        if wlp_check(R, l):
            hits += 1
            if witness is None:
                witness = l
    return hits > 0, hits, witness


# -- the edge/vertex coefficient system -----------------------------------------


@dataclass
class KernelSystem:
    """The (e+n) x 3n system expressing l1*f1 + l2*f2 + l*f = 0 in the graph ring."""

    matrix: Matrix
    solutions: Subspace
    dimension: int
    koszul: Subspace
    koszul_contained: bool
    f4: Optional[tuple]  # canonical extra solution when dimension == 4

    def f4_linear_coeffs(self):
        """The f-part (last n coordinates) of the extra solution."""
        if self.f4 is None:
            return None
        n = self.matrix.cols // 3
        return self.f4[2 * n :]

    def to_json(self):
        return {
            "equations": self.matrix.rows,
            "unknowns": self.matrix.cols,
            "dimension": self.dimension,
            "koszul_contained": self.koszul_contained,
        }


def kernel_system(g: Graph, l1_coeffs, l2_coeffs, l_coeffs, field) -> KernelSystem:
    """Assemble and solve the coefficient system for the three-form relation.

    Unknowns are ordered (u_1..u_n, v_1..v_n, w_1..w_n): the coefficients of
    f1, f2, f in the vertex variables.  One equation per edge and one per
    vertex; the three Koszul solutions (-l2, l1, 0), (-l, 0, l1), (0, -l, l2)
    are verified to lie in the solution space.
    """
    if not g.is_connected():
        raise AlgebraError("graph must be connected")
    n = g.n
    f = field
    alpha = [f.coerce(c) for c in l1_coeffs]
    beta = [f.coerce(c) for c in l2_coeffs]
    a = [f.coerce(c) for c in l_coeffs]
    if not (len(alpha) == len(beta) == len(a) == n):
        raise AlgebraError("coefficient vectors must have one entry per vertex")
    vidx = {v: i for i, v in enumerate(g.vertices)}

    rows = []
    for u, w in g.edges:
        i, j = vidx[u], vidx[w]
        row = [f.zero] * (3 * n)
        row[i] = f.add(row[i], alpha[j])
        row[j] = f.add(row[j], alpha[i])
        row[n + i] = f.add(row[n + i], beta[j])
        row[n + j] = f.add(row[n + j], beta[i])
        row[2 * n + i] = f.add(row[2 * n + i], a[j])
        row[2 * n + j] = f.add(row[2 * n + j], a[i])
        rows.append(row)
    for i in range(n):
        row = [f.zero] * (3 * n)
        row[i] = alpha[i]
        row[n + i] = beta[i]
        row[2 * n + i] = a[i]
        rows.append(row)

    m = Matrix(f, rows, cols=3 * n)
    sol = m.kernel_basis()
    koszul_vecs = [
        [f.neg(c) for c in beta] + list(alpha) + [f.zero] * n,
        [f.neg(c) for c in a] + [f.zero] * n + list(alpha),
        [f.zero] * n + [f.neg(c) for c in a] + list(beta),
    ]
    koszul = Subspace.from_vectors(f, 3 * n, koszul_vecs)
    contained = all(sol.contains(v) for v in koszul_vecs)

    f4 = None
    if sol.dim == 4:
        # reduce the canonical solution basis against the Koszul span and keep
        # the first surviving vector, renormalized to leading coefficient one
        piv = {next(j for j, x in enumerate(row) if not f.is_zero(x)): row for row in koszul.basis}
        for b in sol.basis:
            v = list(b)
            for pc, row in piv.items():
                c = v[pc]
                if not f.is_zero(c):
                    v = [f.sub(x, f.mul(c, y)) for x, y in zip(v, row)]
            if any(not f.is_zero(x) for x in v):
                lead = next(x for x in v if not f.is_zero(x))
                inv = f.inv(lead)
                f4 = tuple(f.mul(inv, x) for x in v)
                break
    return KernelSystem(
        matrix=m,
        solutions=sol,
        dimension=sol.dim,
        koszul=koszul,
        koszul_contained=contained,
        f4=f4,
    )


# -- exact zero divisors ---------------------------------------------------------


@dataclass
class EzdPair:
    a: AlgebraElement
    b: AlgebraElement
    certified: bool

    def to_json(self):
        return {
            "a": [self.a.algebra.field.encode(c) for c in self.a.coords],
            "b": [self.b.algebra.field.encode(c) for c in self.b.coords],
            "certified": self.certified,
        }


def ring_length(R: GradedAlgebra) -> int:
    return sum(R.dims)


def principal_length_linear(R: GradedAlgebra, a: AlgebraElement) -> int:
    """Length of the ideal (a) for a nonzero linear a in an m^3 = 0 ring:
    1 (for a itself) + dim a*R_1."""
    return 1 + R.mult_map_matrix(a, 1).rank()


def verify_ezd(R: GradedAlgebra, a: AlgebraElement, b: AlgebraElement) -> bool:
    """Length certificate: a*b = 0 and l((a)) + l((b)) = l(R)."""
    _require_artinian(R)
    if a.degree != 1 or b.degree != 1:
        raise AlgebraError("exact zero divisors are certified for linear elements")
    if a.is_zero() or b.is_zero():
        return False
    if not (a * b).is_zero():
        return False
    return principal_length_linear(R, a) + principal_length_linear(R, b) == ring_length(R)


def annihilator_linear(R: GradedAlgebra, a: AlgebraElement) -> Subspace:
    """Ann(a) as a subspace of R_1 + R_2 (direct annihilator computation)."""
    _require_artinian(R)
    f = R.field
    ambient = sum(R.dims[1:])
    vecs = []
    offset = 0
    for d in range(1, R.cutoff + 1):
        if R.dims[d] == 0:
            continue
        if d + a.degree > R.cutoff or R.dims[d + a.degree] == 0:
            ker = Subspace.full(f, R.dims[d])
        else:
            ker = R.mult_map_matrix(a, d).kernel_basis()
        for bvec in ker.basis:
            v = [f.zero] * ambient
            v[offset : offset + R.dims[d]] = list(bvec)
            vecs.append(v)
        offset += R.dims[d]
    return Subspace.from_vectors(f, ambient, vecs)


def principal_ideal_subspace(R: GradedAlgebra, b: AlgebraElement) -> Subspace:
    """(b) = span{b} + b*R_1 as a subspace of R_1 + R_2 (for linear b)."""
    f = R.field
    ambient = sum(R.dims[1:])
    vecs = []
    v = [f.zero] * ambient
    v[: R.dims[1]] = list(b.coords)
    vecs.append(v)
    mm = R.mult_map_matrix(b, 1)
    for j in range(R.dims[1]):
        col = [mm.entries[k][j] for k in range(mm.rows)]
        v = [f.zero] * ambient
        v[R.dims[1] : R.dims[1] + R.dims[2]] = col
        vecs.append(v)
    return Subspace.from_vectors(f, ambient, vecs)


def xy_split_flip(R: GradedAlgebra, z: AlgebraElement, x_labels) -> AlgebraElement:
    """Write z = x + y along the bipartite label split and return x - y."""
    f = R.field
    coords = []
    for c, lab in zip(z.coords, R.basis[1]):
        coords.append(c if lab in x_labels else f.neg(c))
    return AlgebraElement(R, 1, coords)


def find_ezd(
    R: GradedAlgebra,
    strategy: str = "random",
    *,
    trials: int = 128,
    rng: Optional[Random] = None,
    x_labels=None,
) -> Optional[EzdPair]:
    """Search for a certified pair of exact zero divisors among linear forms.

    strategies:
      "random"              sample z, take the kernel generator of .z as the
                            partner candidate, certify by the length criterion;
      "bipartite-canonical" sample z but build the partner by the X/Y sign
                            flip (requires x_labels);
      "exhaustive-lines"    walk normalized vectors of R_1 in lexicographic
                            order (sensible only for small fields), up to the
                            trial budget.
    """
    _require_artinian(R)
    if R.dims[1] == 0 or R.dims[2] == 0:
        return None  # m^2 = 0 (or worse): no exact zero divisors among linear forms
    if rng is None:
        rng = Random(0)
    if strategy == "bipartite-canonical" and x_labels is None:
        raise AlgebraError("bipartite-canonical strategy needs the X-side labels")

    def candidates():
        if strategy == "exhaustive-lines":
            yield from _normalized_lines(R, trials)
        else:
            # deterministic generators first, then random samples
            for gidx in range(R.dims[1]):
                yield R.basis_element(1, gidx)
            for _ in range(trials):
                yield R.random_linear(rng)

    for z in candidates():
        if z.is_zero():
            continue
        mm = R.mult_map_matrix(z, 1)
        if mm.cols - mm.rank() != 1:
            continue
        if strategy == "bipartite-canonical":
            partner = xy_split_flip(R, z, set(x_labels))
        else:
            partner = AlgebraElement(R, 1, mm.kernel_basis().basis[0])
        if verify_ezd(R, z, partner):
            return EzdPair(a=z, b=partner, certified=True)
    return None


def _normalized_lines(R: GradedAlgebra, budget):
    """Vectors with leading coefficient 1, lex order over GF(p); budget-capped."""
    f = R.field
    if f.kind != "gf":
        raise AlgebraError("exhaustive line search is only available over GF(p)")
    n = R.dims[1]
    p = f.p
    count = 0
    for lead in range(n):
        tail = n - lead - 1
        total = p**tail
        for idx in range(total):
            coords = [f.zero] * lead + [f.one]
            rem = idx
            for _ in range(tail):
                coords.append(rem % p)
                rem //= p
            yield AlgebraElement(R, 1, coords)
            count += 1
            if count >= budget:
                return


# -- ideal pair analysis -----------------------------------------------------------


@dataclass
class IdealPairReport:
    sum_is_m: bool
    product_zero: bool
    intersection_dims: tuple
    direct_sum: bool
    nu_m: int
    a_dims: tuple
    b_dims: tuple
    verdict: Optional[str]

    def to_json(self):
        return {
            "sum_is_m": self.sum_is_m,
            "product_zero": self.product_zero,
            "intersection_dims": list(self.intersection_dims),
            "direct_sum": self.direct_sum,
            "nu_m": self.nu_m,
            "a_dims": list(self.a_dims),
            "b_dims": list(self.b_dims),
            "verdict": self.verdict,
        }


def ideal_degree_parts(R: GradedAlgebra, gens):
    """Graded pieces of the ideal generated by linear forms, for d = 1, 2."""
    f = R.field
    deg1 = Subspace.from_vectors(f, R.dims[1], [list(g.coords) for g in gens])
    prods = []
    for g in gens:
        for i in range(R.dims[1]):
            prods.append(list((g * R.basis_element(1, i)).coords))
    deg2 = Subspace.from_vectors(f, R.dims[2], prods)
    return deg1, deg2


def ideal_pair_analysis(R: GradedAlgebra, gens_a, gens_b) -> IdealPairReport:
    """Decomposition report for m = a + b generated by two sets of linear forms.

    When the sum is all of m, the product is zero and the intersection
    vanishes (so m = a (+) b) with at least three generators, the ring has no
    non-free totally reflexive modules at all.
    """
    _require_artinian(R)
    a1, a2 = ideal_degree_parts(R, gens_a)
    b1, b2 = ideal_degree_parts(R, gens_b)
    sum1 = a1.sum(b1).dim == R.dims[1]
    sum2 = a2.sum(b2).dim == R.dims[2]
    prod_zero = all((ga * gb).is_zero() for ga in gens_a for gb in gens_b)
    int1 = a1.intersection(b1)
    int2 = a2.intersection(b2)
    direct = sum1 and sum2 and prod_zero and int1.dim == 0 and int2.dim == 0
    nu = R.dims[1]
    verdict = None
    if direct and nu >= 3 and a1.dim > 0 and b1.dim > 0:
        verdict = "no-non-free-TR"
    elif sum1 and sum2 and prod_zero and (int1.dim or int2.dim):
        verdict = "non-trivial-intersection"
    return IdealPairReport(
        sum_is_m=sum1 and sum2,
        product_zero=prod_zero,
        intersection_dims=(int1.dim, int2.dim),
        direct_sum=direct,
        nu_m=nu,
        a_dims=(a1.dim, a2.dim),
        b_dims=(b1.dim, b2.dim),
        verdict=verdict,
    )
