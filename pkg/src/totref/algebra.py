"""Degreewise presentations of standard graded algebras.

An algebra is stored as its graded components up to a cutoff D: basis labels
and dimensions per degree plus multiplication tables between degrees.  Three
construction routes are provided: Stanley-Reisner rings of graphs (monomial
arithmetic, no elimination needed), quotients of a polynomial ring by
homogeneous relations (degreewise normal forms), and quotients by a linear
form (used twice to produce Artinian reductions).

Quotient complements are chosen by echelon pivoting on the *trailing*
coordinate, so quotienting by x1+...+xk eliminates xk and keeps the earlier
variables, matching the usual hand presentation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from random import Random

import numpy as np

from .fields import PrimeField, field_from_json, field_to_json
from .graphs import Graph
from .linalg import Matrix, Subspace, rref_trailing


class AlgebraError(ValueError):
    pass


class AlgebraElement:
    """A homogeneous element: a coordinate vector in one graded component."""

    __slots__ = ("algebra", "degree", "coords")

    def __init__(self, algebra, degree, coords):
        self.algebra = algebra
        self.degree = degree
        self.coords = tuple(coords)
        if len(self.coords) != algebra.dims[degree]:
            raise AlgebraError(
                f"coordinate length {len(self.coords)} != dim_{degree} = {algebra.dims[degree]}"
            )

    def _peer(self, other):
        if not isinstance(other, AlgebraElement) or other.algebra is not self.algebra:
            raise AlgebraError("elements belong to different algebras")

    def __add__(self, other):
        self._peer(other)
        if other.degree != self.degree:
            raise AlgebraError("degree mismatch in addition")
        f = self.algebra.field
        return AlgebraElement(
            self.algebra, self.degree, [f.add(a, b) for a, b in zip(self.coords, other.coords)]
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        f = self.algebra.field
        return AlgebraElement(self.algebra, self.degree, [f.neg(a) for a in self.coords])

    def scale(self, c):
        f = self.algebra.field
        c = f.coerce(c)
        return AlgebraElement(self.algebra, self.degree, [f.mul(c, a) for a in self.coords])

    def __mul__(self, other):
        self._peer(other)
        return self.algebra.multiply(self, other)

    def is_zero(self) -> bool:
        f = self.algebra.field
        return all(f.is_zero(c) for c in self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and other.algebra is self.algebra
            and other.degree == self.degree
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash((id(self.algebra), self.degree, self.coords))

    def __repr__(self):
        labels = self.algebra.basis[self.degree]
        f = self.algebra.field
        terms = [
            f"{c}*{m}" for c, m in zip(self.coords, labels) if not f.is_zero(c)
        ]
        return " + ".join(terms) if terms else "0"


class GradedAlgebra:
    """A standard graded algebra presented degreewise up to a cutoff.

    Multiplication tables are built lazily per degree pair; over GF(p) a
    packed int64 tensor is cached as well for fast block assembly.
    """

    def __init__(self, field, cutoff, basis, mult_basis_fn, descriptor=None):
        self.field = field
        self.cutoff = cutoff
        self.basis = [list(labels) for labels in basis]
        if len(self.basis) != cutoff + 1:
            raise AlgebraError("basis list must cover degrees 0..cutoff")
        if len(self.basis[0]) != 1:
            raise AlgebraError("degree-0 component must be one dimensional")
        self.dims = [len(labels) for labels in self.basis]
        self._mult_basis_fn = mult_basis_fn
        self.descriptor = descriptor
        self._tables = {}
        self._np_tables = {}
        self._gen_index = {lab: i for i, lab in enumerate(self.basis[1])} if cutoff >= 1 else {}

    # -- element constructors ------------------------------------------------

    def element(self, degree, coords) -> AlgebraElement:
        f = self.field
        return AlgebraElement(self, degree, [f.coerce(c) for c in coords])

    def zero(self, degree) -> AlgebraElement:
        return AlgebraElement(self, degree, [self.field.zero] * self.dims[degree])

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, 0, [self.field.one])

    def basis_element(self, degree, i) -> AlgebraElement:
        coords = [self.field.zero] * self.dims[degree]
        coords[i] = self.field.one
        return AlgebraElement(self, degree, coords)

    def generators(self):
        return [self.basis_element(1, i) for i in range(self.dims[1])]

    def generator(self, label) -> AlgebraElement:
        if label not in self._gen_index:
            raise AlgebraError(f"no degree-one basis element labelled {label!r}")
        return self.basis_element(1, self._gen_index[label])

    def linear_form(self, coeffs: dict) -> AlgebraElement:
        """Element of degree 1 from a {label: coefficient} mapping."""
        f = self.field
        coords = [f.zero] * self.dims[1]
        for lab, c in coeffs.items():
            if lab not in self._gen_index:
                raise AlgebraError(f"unknown generator {lab!r}")
            i = self._gen_index[lab]
            coords[i] = f.add(coords[i], f.coerce(c))
        return AlgebraElement(self, 1, coords)

    def random_linear(self, rng: Random) -> AlgebraElement:
        return AlgebraElement(self, 1, [self.field.rand(rng) for _ in range(self.dims[1])])

    # -- multiplication ------------------------------------------------------

    def mult_basis(self, d1, i, d2, j):
        """Coordinates of (basis_i of degree d1) * (basis_j of degree d2)."""
        if d1 + d2 > self.cutoff:
            raise AlgebraError(f"product degree {d1 + d2} exceeds cutoff {self.cutoff}")
        if d1 == 0:
            return self.basis_element(d2, j).coords
        if d2 == 0:
            return self.basis_element(d1, i).coords
        return self._mult_basis_fn(d1, i, d2, j)

    def table(self, d1, d2):
        key = (d1, d2)
        if key not in self._tables:
            self._tables[key] = [
                [tuple(self.mult_basis(d1, i, d2, j)) for j in range(self.dims[d2])]
                for i in range(self.dims[d1])
            ]
        return self._tables[key]

    def np_table(self, d1, d2):
        """int64 tensor T[i, j, k]: coefficient of basis_k in e_i * e_j (GF only)."""
        key = (d1, d2)
        if key not in self._np_tables:
            if not isinstance(self.field, PrimeField):
                raise AlgebraError("packed tensors only exist over GF(p)")
            t = self.table(d1, d2)
            arr = np.zeros((self.dims[d1], self.dims[d2], self.dims[d1 + d2]), dtype=np.int64)
            for i, row in enumerate(t):
                for j, vec in enumerate(row):
                    arr[i, j, :] = vec
            self._np_tables[key] = arr
        return self._np_tables[key]

    def multiply(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        if a.degree + b.degree > self.cutoff:
            raise AlgebraError("product degree exceeds cutoff")
        f = self.field
        tab = self.table(a.degree, b.degree)
        out = [f.zero] * self.dims[a.degree + b.degree]
        for i, ca in enumerate(a.coords):
            if f.is_zero(ca):
                continue
            row = tab[i]
            for j, cb in enumerate(b.coords):
                if f.is_zero(cb):
                    continue
                c = f.mul(ca, cb)
                vec = row[j]
                for k, vk in enumerate(vec):
                    if not f.is_zero(vk):
                        out[k] = f.add(out[k], f.mul(c, vk))
        return AlgebraElement(self, a.degree + b.degree, out)

    def mult_map_matrix(self, elt: AlgebraElement, t: int) -> Matrix:
        """Matrix of multiplication by elt from degree t to degree t + deg(elt)."""
        d = elt.degree
        if t + d > self.cutoff:
            raise AlgebraError("multiplication map exceeds cutoff")
        f = self.field
        src, dst = self.dims[t], self.dims[t + d]
        if isinstance(f, PrimeField) and src and dst:
            T = self.np_table(d, t)
            arr = np.einsum("i,ijk->kj", np.array(elt.coords, dtype=np.int64), T) % f.p
            return Matrix(f, [[int(x) for x in row] for row in arr], cols=src)
        tab = self.table(d, t)
        cols = []
        for j in range(src):
            acc = [f.zero] * dst
            for i, c in enumerate(elt.coords):
                if f.is_zero(c):
                    continue
                vec = tab[i][j]
                for k, vk in enumerate(vec):
                    if not f.is_zero(vk):
                        acc[k] = f.add(acc[k], f.mul(c, vk))
            cols.append(acc)
        return Matrix(f, [[cols[j][k] for j in range(src)] for k in range(dst)], cols=src)

    def mult_map_array(self, coords, t: int):
        """numpy form of mult_map_matrix for GF(p): shape (dim_{t+1}, dim_t)."""
        T = self.np_table(1, t)
        return np.einsum("i,ijk->kj", np.asarray(coords, dtype=np.int64), T) % self.field.p

    # -- presentation checks ---------------------------------------------------

    def is_artinian(self) -> bool:
        return self.dims[self.cutoff] == 0

    def top_nonzero_degree(self) -> int:
        d = self.cutoff
        while d > 0 and self.dims[d] == 0:
            d -= 1
        return d

    def same_presentation(self, other) -> bool:
        return (
            self.field == other.field
            and self.cutoff == other.cutoff
            and self.basis == other.basis
        )

    def component_subspace_full(self, degree) -> Subspace:
        return Subspace.full(self.field, self.dims[degree])

    # -- serialization ---------------------------------------------------------

    def to_json(self, include_tables=True) -> dict:
        obj = {
            "format": "algebra",
            "field": field_to_json(self.field),
            "cutoff": self.cutoff,
            "dims": list(self.dims),
            "basis": [list(b) for b in self.basis],
        }
        if self.descriptor is not None:
            obj["descriptor"] = self.descriptor
        if include_tables:
            enc = self.field.encode
            tables = []
            for d1 in range(1, self.cutoff + 1):
                for d2 in range(d1, self.cutoff + 1 - d1):
                    tab = self.table(d1, d2)
                    tables.append(
                        {
                            "d1": d1,
                            "d2": d2,
                            "table": [[[enc(x) for x in vec] for vec in row] for row in tab],
                        }
                    )
            obj["mult"] = tables
        return obj

    @classmethod
    def from_json(cls, obj) -> "GradedAlgebra":
        field = field_from_json(obj["field"])
        cutoff = obj["cutoff"]
        basis = obj["basis"]
        dec = field.decode
        tables = {}
        for entry in obj.get("mult", []):
            d1, d2 = entry["d1"], entry["d2"]
            tables[(d1, d2)] = [
                [tuple(dec(x) for x in vec) for vec in row] for row in entry["table"]
            ]

        def mult_fn(d1, i, d2, j):
            if (d1, d2) in tables:
                return tables[(d1, d2)][i][j]
            if (d2, d1) in tables:
                return tables[(d2, d1)][j][i]
            raise AlgebraError(f"serialized algebra lacks the ({d1},{d2}) table")

        return cls(field, cutoff, basis, mult_fn, descriptor=obj.get("descriptor"))


def hilbert(algebra: GradedAlgebra):
    """The dimension vector (dim_0, ..., dim_D)."""
    return tuple(algebra.dims)


# -- Stanley-Reisner rings of graphs ------------------------------------------


def _mono_label(vertex, power):
    return vertex if power == 1 else f"{vertex}^{power}"


def stanley_reisner(g: Graph, cutoff: int, field=None, descriptor=None) -> GradedAlgebra:
    """The Stanley-Reisner ring of a graph, presented up to the cutoff degree.

    Nonzero monomials are supported on a vertex or on an edge, so the degree-d
    basis (d >= 1) consists of v^d for each vertex and u^a w^(d-a) for each
    edge {u, w}; products are monomial products reduced to zero exactly when
    the support stops being a vertex or an edge.
    """
    if field is None:
        field = PrimeField()
    if cutoff < 2:
        raise AlgebraError("cutoff must be at least 2")
    if not g.is_connected():
        raise AlgebraError("graph must be connected")
    vidx = {v: i for i, v in enumerate(g.vertices)}
    edge_set = {frozenset((vidx[u], vidx[w])) for u, w in g.edges}

    # per-degree monomials: ((vi, a),) or ((vi, a), (vj, b)) with vi < vj
    monomials = [[((0, 0),)]]  # degree 0 placeholder; basis label "1"
    index = [{}]
    labels = [["1"]]
    for d in range(1, cutoff + 1):
        mons = [((vidx[v], d),) for v in g.vertices]
        for u, w in g.edges:
            i, j = vidx[u], vidx[w]
            if i > j:
                i, j = j, i
            for a in range(d - 1, 0, -1):
                mons.append(((i, a), (j, d - a)))
        monomials.append(mons)
        index.append({m: k for k, m in enumerate(mons)})
        labs = []
        for m in mons:
            labs.append("*".join(_mono_label(g.vertices[v], a) for v, a in m))
        labels.append(labs)

    one = field.one
    zero = field.zero

    def mult_fn(d1, i, d2, j):
        m1, m2 = monomials[d1][i], monomials[d2][j]
        powers = {}
        for v, a in m1 + m2:
            powers[v] = powers.get(v, 0) + a
        support = sorted(powers)
        d = d1 + d2
        out = [zero] * len(monomials[d])
        if len(support) == 1:
            out[index[d][((support[0], d),)]] = one
        elif len(support) == 2 and frozenset(support) in edge_set:
            key = ((support[0], powers[support[0]]), (support[1], powers[support[1]]))
            out[index[d][key]] = one
        return out

    return GradedAlgebra(field, cutoff, labels, mult_fn, descriptor=descriptor)


# -- quotients of a polynomial ring by homogeneous relations -------------------


def _monomials_of_degree(nvars, d):
    """Exponent tuples of total degree d, in descending lexicographic order."""
    if d == 0:
        return [tuple([0] * nvars)]
    out = []

    def rec(prefix, remaining, pos):
        if pos == nvars - 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, pos + 1)

    rec([], d, 0)
    return out


def _exp_label(variables, exps):
    parts = [_mono_label(v, e) for v, e in zip(variables, exps) if e]
    return "*".join(parts) if parts else "1"


def algebra_from_relations(variables, relations, cutoff, field=None, descriptor=None) -> GradedAlgebra:
    """k[variables] modulo homogeneous relation polynomials, degree by degree.

    Each relation is a {exponent tuple: coefficient} dict.  The degree-d
    component is the monomial span modulo span{relation * monomial}; the basis
    is the canonical complement picked by trailing-pivot echelon on the
    descending-lex monomial order.
    """
    if field is None:
        field = PrimeField()
    nv = len(variables)
    rel_by_deg = {}
    for rel in relations:
        degs = {sum(e) for e in rel}
        if len(degs) != 1:
            raise AlgebraError("relations must be homogeneous")
        (d,) = degs
        if d == 0:
            raise AlgebraError("degree-zero relation makes the quotient trivial")
        if d > cutoff:
            raise AlgebraError("relation degree exceeds the cutoff")
        rel_by_deg.setdefault(d, []).append({e: field.coerce(c) for e, c in rel.items()})

    mons = [_monomials_of_degree(nv, d) for d in range(cutoff + 1)]
    midx = [{m: i for i, m in enumerate(ms)} for ms in mons]

    red_rows = [None] * (cutoff + 1)
    red_piv = [None] * (cutoff + 1)
    keep = [None] * (cutoff + 1)
    labels = [["1"]]
    keep[0] = [0]
    red_rows[0], red_piv[0] = [], []
    for d in range(1, cutoff + 1):
        rows = []
        for r, rels in rel_by_deg.items():
            if r > d:
                continue
            for rel in rels:
                for m in mons[d - r]:
                    vec = [field.zero] * len(mons[d])
                    for e, c in rel.items():
                        prod = tuple(a + b for a, b in zip(e, m))
                        vec[midx[d][prod]] = field.add(vec[midx[d][prod]], c)
                    rows.append(vec)
        rr, piv = rref_trailing(field, rows, len(mons[d]))
        red_rows[d], red_piv[d] = rr, piv
        pivset = set(piv)
        keep[d] = [i for i in range(len(mons[d])) if i not in pivset]
        labels.append([_exp_label(variables, mons[d][i]) for i in keep[d]])

    def normal_form(d, vec):
        v = list(vec)
        for row, pc in zip(red_rows[d], red_piv[d]):
            c = v[pc]
            if not field.is_zero(c):
                v = [field.sub(a, field.mul(c, b)) for a, b in zip(v, row)]
        return [v[i] for i in keep[d]]

    def mult_fn(d1, i, d2, j):
        e1 = mons[d1][keep[d1][i]]
        e2 = mons[d2][keep[d2][j]]
        prod = tuple(a + b for a, b in zip(e1, e2))
        d = d1 + d2
        vec = [field.zero] * len(mons[d])
        vec[midx[d][prod]] = field.one
        return normal_form(d, vec)

    return GradedAlgebra(field, cutoff, labels, mult_fn, descriptor=descriptor)


# -- quotient by a linear form -------------------------------------------------


class QuotientMap:
    """The data of B = A/(l) for a degree-one form l, with a canonical section.

    Keeps, per degree, the trailing-pivot echelon rows of span{l * A_(d-1)}
    and the complement columns; provides the projection A_d -> B_d and the
    section B_d -> A_d (each kept basis label maps to the parent basis
    monomial of the same label).
    """

    def __init__(self, source: GradedAlgebra, form: AlgebraElement, descriptor=None):
        if form.algebra is not source:
            raise AlgebraError("form does not live in the source algebra")
        if form.degree != 1 or form.is_zero():
            raise AlgebraError("quotient form must be a nonzero linear form")
        self.source = source
        self.form = form
        field = source.field
        D = source.cutoff
        self._keep = [None] * (D + 1)
        self._keep[0] = [0]
        self._red = [([], [])]
        labels = [["1"]]
        for d in range(1, D + 1):
            rows = []
            for i in range(source.dims[d - 1]):
                rows.append(list(source.multiply(form, source.basis_element(d - 1, i)).coords))
            rr, piv = rref_trailing(field, rows, source.dims[d])
            self._red.append((rr, piv))
            pivset = set(piv)
            self._keep[d] = [c for c in range(source.dims[d]) if c not in pivset]
            labels.append([source.basis[d][c] for c in self._keep[d]])

        qmap = self

        def mult_fn(d1, i, d2, j):
            vec = source.mult_basis(d1, qmap._keep[d1][i], d2, qmap._keep[d2][j])
            return qmap.project_vec(d1 + d2, vec)

        self.target = GradedAlgebra(field, D, labels, mult_fn, descriptor=descriptor)

    def project_vec(self, d, vec):
        field = self.source.field
        rows, piv = self._red[d]
        v = list(vec)
        for row, pc in zip(rows, piv):
            c = v[pc]
            if not field.is_zero(c):
                v = [field.sub(a, field.mul(c, b)) for a, b in zip(v, row)]
        return [v[c] for c in self._keep[d]]

    def lift_vec(self, d, coords):
        field = self.source.field
        v = [field.zero] * self.source.dims[d]
        for c, col in zip(coords, self._keep[d]):
            v[col] = c
        return v

    def project(self, elt: AlgebraElement) -> AlgebraElement:
        if elt.algebra is not self.source:
            raise AlgebraError("element does not live in the source algebra")
        return AlgebraElement(self.target, elt.degree, self.project_vec(elt.degree, elt.coords))

    def lift(self, elt: AlgebraElement) -> AlgebraElement:
        if elt.algebra is not self.target:
            raise AlgebraError("element does not live in the quotient algebra")
        return AlgebraElement(self.source, elt.degree, self.lift_vec(elt.degree, elt.coords))


def quotient_by_linear(algebra: GradedAlgebra, form: AlgebraElement) -> GradedAlgebra:
    return QuotientMap(algebra, form).target


# -- Artinian reductions of graph rings ----------------------------------------


@dataclass
class ReductionChain:
    """R_Gamma -> R_Gamma/(l1) -> R_Gamma/(l1, l2) with the two quotient maps."""

    graph: Graph
    top: GradedAlgebra
    steps: list  # [QuotientMap top->mid, QuotientMap mid->bottom]
    mode: str
    seed: int

    @property
    def mid(self) -> GradedAlgebra:
        return self.steps[0].target

    @property
    def bottom(self) -> GradedAlgebra:
        return self.steps[1].target

    def expected_artinian_hilbert(self):
        n, e = self.graph.n, self.graph.e
        out = [1, n - 2, e - n + 1] + [0] * (self.top.cutoff - 2)
        return tuple(out[: self.top.cutoff + 1])


def canonical_bipartite_forms(g: Graph, algebra: GradedAlgebra):
    """l1 = sum of X-side vertices, l2 = sum of Y-side vertices (as labels)."""
    if not g.is_bipartite():
        raise AlgebraError("canonical forms require a bipartite graph")
    xs, ys = g.bipartition
    return ({v: 1 for v in xs}, {v: 1 for v in ys})


def reduction_chain(
    g: Graph,
    mode: str = "canonical",
    seed: int = 0,
    cutoff: int = 3,
    field=None,
    retries: int = 64,
) -> ReductionChain:
    """Quotient a graph ring by two linear forms and certify the result.

    Canonical mode uses the bipartite sums (a system of parameters for any
    connected bipartite graph); generic mode samples uniform coefficients and
    certifies regularity a posteriori through the Hilbert function
    (1, n-2, e-n+1, 0, ...), resampling on failure.
    """
    if field is None:
        field = PrimeField()
    if cutoff < 3:
        raise AlgebraError("reduction cutoff must be at least 3 to witness m^3 = 0")
    if not g.is_connected():
        raise AlgebraError("graph must be connected")
    if g.e == 0:
        raise AlgebraError("graph must have at least one edge")
    if mode == "canonical" and not g.is_bipartite():
        raise AlgebraError("canonical mode requires a bipartite graph")

    descriptor_base = {
        "kind": "graph_reduction",
        "graph": g.to_json(),
        "mode": mode,
        "seed": seed,
        "cutoff": cutoff,
    }
    top = stanley_reisner(g, cutoff, field, descriptor=dict(descriptor_base, level=0))
    expected = [1, g.n - 2, g.e - g.n + 1] + [0] * (cutoff - 2)
    rng = Random(seed)

    attempts = retries if mode == "generic" else 1
    last = None
    for _ in range(attempts):
        if mode == "canonical":
            c1, c2 = canonical_bipartite_forms(g, top)
            l1 = top.linear_form(c1)
        else:
            l1 = top.random_linear(rng)
        q1 = QuotientMap(top, l1, descriptor=dict(descriptor_base, level=1))
        mid = q1.target
        if mode == "canonical":
            l2 = q1.project(top.linear_form(c2))
        else:
            l2 = q1.project(top.random_linear(rng))
        if l2.is_zero():
            last = "second form vanished in the quotient"
            continue
        q2 = QuotientMap(mid, l2, descriptor=dict(descriptor_base, level=2))
        bottom = q2.target
        if list(bottom.dims) == expected:
            return ReductionChain(graph=g, top=top, steps=[q1, q2], mode=mode, seed=seed)
        last = f"Hilbert function {tuple(bottom.dims)} != {tuple(expected)}"
        if mode == "canonical":
            break
    raise AlgebraError(f"no regular reduction found ({last})")


def artinian_reduction(g: Graph, mode="canonical", seed=0, cutoff=3, field=None, retries=64):
    """The Artinian quotient R_Gamma/(l1, l2); see reduction_chain for modes."""
    return reduction_chain(g, mode, seed, cutoff, field, retries).bottom


def algebra_to_json_str(algebra: GradedAlgebra) -> str:
    return json.dumps(algebra.to_json(), indent=1)
