"""Windows of complexes of graded free modules with linear differentials.

A window holds free modules F_i = R(-n_i)^{b_i} for i in [lo, hi], with the
twist n_i increasing by one per homological step, and differentials
d_i : F_i -> F_{i-1} whose entries are homogeneous of degree one.  Exactness
is certified degree by degree through exact rank computations: at (i, d) the
window is exact iff dim ker (d_i)_d equals rank (d_{i+1})_d, which together
with d_i d_{i+1} = 0 is the full condition.

For an Artinian algebra the finitely many nonzero internal degrees make the
certification complete; otherwise the report carries the degree bound it was
checked to.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import AlgebraElement, GradedAlgebra
from .fields import PrimeField
from .linalg import Matrix, Subspace


class ComplexError(ValueError):
    pass


@dataclass
class Periodicity:
    period: int
    verified: bool

    def to_json(self):
        return {"period": self.period, "verified": self.verified}


class FreeComplexWindow:
    """A finite window of a complex of graded free modules over one algebra."""

    def __init__(self, algebra, lo, hi, betti, differentials, base_twist=0, periodic=None):
        """betti: list of ranks for i = lo..hi; differentials: list of matrices
        (each a list of rows of degree-1 AlgebraElements) for i = lo+1..hi."""
        if hi < lo:
            raise ComplexError("empty window")
        self.algebra = algebra
        self.lo = lo
        self.hi = hi
        self.betti = list(betti)
        if len(self.betti) != hi - lo + 1:
            raise ComplexError("betti list does not match the index range")
        self.diffs = list(differentials)
        if len(self.diffs) != hi - lo:
            raise ComplexError("expected one differential per index above lo")
        self.base_twist = base_twist
        self.periodic = periodic
        for k, mat in enumerate(self.diffs):
            i = lo + 1 + k
            rows, cols = self.rank_of(i - 1), self.rank_of(i)
            if len(mat) != rows or any(len(r) != cols for r in mat):
                raise ComplexError(f"differential at {i} has the wrong shape")
            for r in mat:
                for e in r:
                    if not isinstance(e, AlgebraElement) or e.algebra is not algebra:
                        raise ComplexError("entries must be elements of the window's algebra")
                    if e.degree != 1:
                        raise ComplexError("differential entries must be homogeneous of degree 1")

    def rank_of(self, i) -> int:
        return self.betti[i - self.lo]

    def twist(self, i) -> int:
        return self.base_twist + (i - self.lo)

    def diff(self, i):
        if not (self.lo < i <= self.hi):
            raise ComplexError(f"no differential at index {i}")
        return self.diffs[i - self.lo - 1]

    def interior_indices(self):
        return range(self.lo + 1, self.hi)

    # -- exact verification ----------------------------------------------------

    def block_matrix(self, i, t) -> Matrix:
        """The degree piece of d_i acting from R_t^{b_i} to R_{t+1}^{b_{i-1}}."""
        R = self.algebra
        f = R.field
        mat = self.diff(i)
        b_out, b_in = self.rank_of(i - 1), self.rank_of(i)
        if t < 0 or t + 1 > R.cutoff:
            raise ComplexError("internal degree outside the algebra cutoff")
        src, dst = R.dims[t], R.dims[t + 1]
        if isinstance(f, PrimeField):
            big = np.zeros((b_out * dst, b_in * src), dtype=np.int64)
            for r in range(b_out):
                for c in range(b_in):
                    e = mat[r][c]
                    if e.is_zero() or src == 0 or dst == 0:
                        continue
                    big[r * dst : (r + 1) * dst, c * src : (c + 1) * src] = R.mult_map_array(
                        e.coords, t
                    )
            return Matrix(f, [[int(x) for x in row] for row in big], cols=b_in * src)
        zero = f.zero
        big = [[zero] * (b_in * src) for _ in range(b_out * dst)]
        for r in range(b_out):
            for c in range(b_in):
                mm = R.mult_map_matrix(mat[r][c], t)
                for k in range(dst):
                    row = big[r * dst + k]
                    for j in range(src):
                        row[c * src + j] = mm.entries[k][j]
        return Matrix(f, big, cols=b_in * src)

    def compose_check(self) -> bool:
        """All consecutive products d_i d_{i+1} vanish identically."""
        for i in range(self.lo + 1, self.hi):
            a = self.diff(i)
            b = self.diff(i + 1)
            rows, mid, cols = len(a), len(b), len(b[0]) if b else 0
            for r in range(rows):
                for c in range(cols):
                    acc = self.algebra.zero(2)
                    for k in range(mid):
                        acc = acc + a[r][k] * b[k][c]
                    if not acc.is_zero():
                        return False
        return True

    def graded_exactness(self, degree_bound=None) -> "ExactnessReport":
        """Per-index, per-degree exactness comparison of kernels and images."""
        R = self.algebra
        max_t = R.cutoff - 1
        records = []
        all_ok = True
        for i in self.interior_indices():
            n_i = self.twist(i)
            for t in range(0, max_t + 1):
                d = n_i + t
                if degree_bound is not None and d > degree_bound:
                    break
                cols = self.rank_of(i) * R.dims[t]
                ker = cols - self.block_matrix(i, t).rank() if cols else 0
                if t == 0:
                    inc = 0
                else:
                    inc = self.block_matrix(i + 1, t - 1).rank()
                ok = ker == inc
                all_ok = all_ok and ok
                records.append(ExactnessRecord(i, d, ker, inc, ok))
        complete = R.is_artinian() and degree_bound is None
        if complete:
            bound = None  # every nonzero graded piece was covered
        else:
            bound = min(
                (self.twist(i) + max_t for i in self.interior_indices()),
                default=self.twist(self.hi),
            )
            if degree_bound is not None:
                bound = min(bound, degree_bound)
        return ExactnessReport(
            records=tuple(records),
            exact=all_ok,
            certified_degree_bound=bound,
            complete=complete,
        )

    def dual(self) -> "FreeComplexWindow":
        """Apply Hom(-, R): reverse indices, transpose matrices, negate twists."""
        lo2, hi2 = -self.hi, -self.lo
        betti2 = [self.rank_of(-j) for j in range(lo2, hi2 + 1)]
        diffs2 = []
        for j in range(lo2 + 1, hi2 + 1):
            mat = self.diff(-j + 1)
            rows, cols = len(mat), len(mat[0]) if mat else 0
            diffs2.append([[mat[r][c] for r in range(rows)] for c in range(cols)])
        per = self.periodic
        return FreeComplexWindow(
            self.algebra,
            lo2,
            hi2,
            betti2,
            diffs2,
            base_twist=-self.twist(self.hi),
            periodic=Periodicity(per.period, per.verified) if per else None,
        )

    def verify_periodicity(self) -> bool:
        if self.periodic is None:
            return False
        k = self.periodic.period
        ok = True
        for i in range(self.lo + 1, self.hi + 1 - k):
            a, b = self.diff(i), self.diff(i + k)
            if a != b:
                ok = False
        self.periodic.verified = ok
        return ok

    # -- serialization ----------------------------------------------------------

    def to_json(self, include_algebra_tables=True) -> dict:
        enc = self.algebra.field.encode
        return {
            "format": "complex",
            "algebra": self.algebra.to_json(include_tables=include_algebra_tables),
            "lo": self.lo,
            "hi": self.hi,
            "base_twist": self.base_twist,
            "betti": list(self.betti),
            "differentials": [
                [[[enc(c) for c in e.coords] for e in row] for row in mat] for mat in self.diffs
            ],
            "periodic": self.periodic.to_json() if self.periodic else None,
        }

    @classmethod
    def from_json(cls, obj, algebra=None) -> "FreeComplexWindow":
        if obj.get("format") != "complex":
            raise ComplexError("not a complex file")
        if algebra is None:
            algebra = GradedAlgebra.from_json(obj["algebra"])
        dec = algebra.field.decode
        diffs = [
            [[AlgebraElement(algebra, 1, [dec(c) for c in e]) for e in row] for row in mat]
            for mat in obj["differentials"]
        ]
        per = obj.get("periodic")
        return cls(
            algebra,
            obj["lo"],
            obj["hi"],
            obj["betti"],
            diffs,
            base_twist=obj.get("base_twist", 0),
            periodic=Periodicity(per["period"], per.get("verified", False)) if per else None,
        )


@dataclass
class ExactnessRecord:
    index: int
    degree: int
    kernel_dim: int
    incoming_rank: int
    exact: bool


@dataclass
class ExactnessReport:
    records: tuple
    exact: bool
    certified_degree_bound: Optional[int]  # None when every nonzero degree was covered
    complete: bool  # True when the algebra is Artinian: all degrees were covered

    def failures(self):
        return [r for r in self.records if not r.exact]

    def to_json(self):
        return {
            "exact": self.exact,
            "complete": self.complete,
            "certified_degree_bound": self.certified_degree_bound,
            "failures": [
                {
                    "index": r.index,
                    "degree": r.degree,
                    "kernel_dim": r.kernel_dim,
                    "incoming_rank": r.incoming_rank,
                }
                for r in self.failures()
            ],
        }


def compose_check(w: FreeComplexWindow) -> bool:
    return w.compose_check()


def graded_exactness(w: FreeComplexWindow, degree_bound=None) -> ExactnessReport:
    return w.graded_exactness(degree_bound)


def dual(w: FreeComplexWindow) -> FreeComplexWindow:
    return w.dual()


def ezd_complex(R: GradedAlgebra, pair, half_length: int = 3) -> FreeComplexWindow:
    """The 2-periodic complex ... -> R -a-> R -b-> R -a-> ... of a certified pair."""
    from .analysis import verify_ezd  # local import to avoid a cycle

    if not verify_ezd(R, pair.a, pair.b):
        raise ComplexError("pair is not a certified pair of exact zero divisors")
    lo, hi = -half_length, half_length
    diffs = []
    for i in range(lo + 1, hi + 1):
        elt = pair.a if i % 2 == 0 else pair.b
        diffs.append([[elt]])
    period = 1 if pair.a == pair.b else 2
    w = FreeComplexWindow(
        R,
        lo,
        hi,
        [1] * (hi - lo + 1),
        diffs,
        base_twist=lo,  # so F_0 = R with no twist
        periodic=Periodicity(period, False),
    )
    w.verify_periodicity()
    return w


def cokernel_presentation(w: FreeComplexWindow, i: int):
    """The differential d_i viewed as a presentation matrix of its cokernel."""
    if not (w.lo < i <= w.hi):
        raise ComplexError("index has no differential in the window")
    return w.diff(i)


def fitting_support(R: GradedAlgebra, presentation):
    """Graded pieces (degree 1 and 2) of the ideal generated by the entries."""
    f = R.field
    entries = [e for row in presentation for e in row]
    for e in entries:
        if e.degree != 1:
            raise ComplexError("fitting support expects degree-1 entries")
    deg1 = Subspace.from_vectors(f, R.dims[1], [list(e.coords) for e in entries])
    prods = []
    for e in entries:
        for i in range(R.dims[1]):
            prods.append(list((R.basis_element(1, i) * e).coords))
    deg2 = Subspace.from_vectors(f, R.dims[2], prods)
    return deg1, deg2


@dataclass
class IndecomposabilityVerdict:
    verdict: str  # "indecomposable" | "inconclusive"
    reason: str
    certificate: Optional[dict] = None

    def to_json(self):
        return {"verdict": self.verdict, "reason": self.reason, "certificate": self.certificate}


def indecomposability_certificate(
    R: GradedAlgebra, w: FreeComplexWindow, i: int, no_ezd_certificate=None
) -> IndecomposabilityVerdict:
    """A rank-2 cokernel in a certified window over a ring with no exact zero
    divisors cannot split: any summand would be cyclic, i.e. R/(a) for an
    exact zero divisor a."""
    if not (w.lo < i <= w.hi):
        return IndecomposabilityVerdict("inconclusive", "index outside the window")
    if w.rank_of(i - 1) != 2:
        return IndecomposabilityVerdict(
            "inconclusive", "criterion applies to two-generated cokernels only"
        )
    if not no_ezd_certificate:
        return IndecomposabilityVerdict("inconclusive", "no no-ezd certificate supplied")
    return IndecomposabilityVerdict(
        "indecomposable (conditional on no-ezd certificate)",
        "betti 2 and the ring admits no exact zero divisors",
        certificate=no_ezd_certificate,
    )


@dataclass
class WindowCertificate:
    composes: bool
    exactness: ExactnessReport
    dual_exactness: ExactnessReport
    minimal: bool
    periodic: Optional[Periodicity]

    @property
    def certified(self) -> bool:
        return self.composes and self.exactness.exact and self.dual_exactness.exact and self.minimal

    def to_json(self):
        return {
            "composes": self.composes,
            "exactness": self.exactness.to_json(),
            "dual_exactness": self.dual_exactness.to_json(),
            "minimal": self.minimal,
            "periodic": self.periodic.to_json() if self.periodic else None,
            "certified": self.certified,
        }


def full_certification(w: FreeComplexWindow, degree_bound=None) -> WindowCertificate:
    """Compose + exactness + dual exactness + minimality in one report."""
    composes = w.compose_check()
    if composes:
        ex = w.graded_exactness(degree_bound)
        dex = w.dual().graded_exactness(degree_bound)
    else:
        empty = ExactnessReport(records=(), exact=False, certified_degree_bound=None, complete=False)
        ex = dex = empty
    if w.periodic is not None:
        w.verify_periodicity()
    # entries are degree-1 by construction, hence in the maximal ideal
    return WindowCertificate(
        composes=composes,
        exactness=ex,
        dual_exactness=dex,
        minimal=True,
        periodic=w.periodic,
    )
