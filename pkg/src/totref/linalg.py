"""Exact dense linear algebra over a field: rank, kernels, solving, subspaces.

Everything is computed by exact Gaussian elimination; there is no tolerance
anywhere.  Subspaces are kept in reduced row-echelon form, so two equal
subspaces have literally identical basis matrices.  Over GF(p) large
eliminations are routed through numpy int64 arithmetic (products of two
representatives stay below 2**63 for p < 2**31).
"""

from __future__ import annotations

import numpy as np

from .fields import PrimeField

_NP_CELL_THRESHOLD = 2000  # below this many cells pure Python wins on overhead


def _rref_py(field, rows, ncols, reduce_full=True):
    """In-place RREF of a list of row vectors; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if not field.is_zero(rows[i][c]):
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        rng = range(nrows) if reduce_full else range(r + 1, nrows)
        for i in rng:
            if i != r and not field.is_zero(rows[i][c]):
                f = rows[i][c]
                ri, rr_ = rows[i], rows[r]
                rows[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(ri, rr_)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows[:r] + rows[r:], pivots


def _rref_np(p, arr, reduce_full=True):
    """numpy RREF mod p; returns (array, pivot columns)."""
    A = arr % p
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = A[r] * inv % p
        if reduce_full:
            sel = np.nonzero(A[:, c])[0]
            sel = sel[sel != r]
        else:
            sel = r + 1 + np.nonzero(A[r + 1 :, c])[0]
        if sel.size:
            A[sel] = (A[sel] - np.outer(A[sel, c], A[r])) % p
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def _use_np(field, nrows, ncols):
    return isinstance(field, PrimeField) and nrows * ncols >= _NP_CELL_THRESHOLD


class Matrix:
    """Dense matrix over an exact field; entries stored as a list of rows."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field, entries, cols=None):
        self.field = field
        self.entries = [list(r) for r in entries]
        self.rows = len(self.entries)
        if self.rows:
            self.cols = len(self.entries[0])
            for r in self.entries:
                if len(r) != self.cols:
                    raise ValueError("ragged rows")
        else:
            if cols is None:
                raise ValueError("empty matrix needs an explicit column count")
            self.cols = cols

    @classmethod
    def zeros(cls, field, rows, cols):
        z = field.zero
        return cls(field, [[z] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, field, n):
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.entries[i][i] = field.one
        return m

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def mul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        f = self.field
        out = Matrix.zeros(f, self.rows, other.cols)
        for i in range(self.rows):
            row = self.entries[i]
            orow = out.entries[i]
            for k in range(self.cols):
                a = row[k]
                if f.is_zero(a):
                    continue
                brow = other.entries[k]
                for j in range(other.cols):
                    orow[j] = f.add(orow[j], f.mul(a, brow[j]))
        return out

    def mul_vec(self, vec):
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        f = self.field
        return [
            _dot(f, row, vec)
            for row in self.entries
        ]

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        if _use_np(self.field, self.rows, self.cols):
            _, piv = _rref_np(self.field.p, np.array(self.entries, dtype=np.int64), reduce_full=False)
            return len(piv)
        _, piv = _rref_py(self.field, self.entries, self.cols, reduce_full=False)
        return len(piv)

    def rref(self):
        """Returns (rref rows without zero rows, pivot column list)."""
        if self.rows == 0 or self.cols == 0:
            return [], []
        if _use_np(self.field, self.rows, self.cols):
            A, piv = _rref_np(self.field.p, np.array(self.entries, dtype=np.int64))
            return [[int(x) for x in A[i]] for i in range(len(piv))], piv
        rows, piv = _rref_py(self.field, self.entries, self.cols)
        return rows[: len(piv)], piv

    def kernel_basis(self) -> "Subspace":
        """Canonical basis of the right kernel {v : self @ v = 0}."""
        f = self.field
        n = self.cols
        rows, piv = self.rref()
        free = [c for c in range(n) if c not in set(piv)]
        vecs = []
        for c in free:
            v = [f.zero] * n
            v[c] = f.one
            for row, pc in zip(rows, piv):
                v[pc] = f.neg(row[c])
            vecs.append(v)
        return Subspace.from_vectors(f, n, vecs)

    def solve(self, rhs):
        """Some x with self @ x = rhs, or None when inconsistent."""
        if len(rhs) != self.rows:
            raise ValueError("shape mismatch")
        f = self.field
        aug = Matrix(f, [row + [b] for row, b in zip(self.entries, rhs)], cols=self.cols + 1)
        if self.rows == 0:
            return [f.zero] * self.cols
        rows, piv = aug.rref()
        x = [f.zero] * self.cols
        for row, pc in zip(rows, piv):
            if pc == self.cols:
                return None  # pivot in the augmented column: inconsistent
            x[pc] = row[self.cols]
        return x

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.entries == self.entries
            and other.cols == self.cols
        )

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols} over {self.field!r})"


def _dot(field, row, vec):
    acc = field.zero
    for a, b in zip(row, vec):
        if not (field.is_zero(a) or field.is_zero(b)):
            acc = field.add(acc, field.mul(a, b))
    return acc


def rref_trailing(field, rows, ncols):
    """Echelon form pivoting on the *last* nonzero coordinate of each row.

    Equivalent to ordinary RREF after reversing the coordinate order.  Used to
    pick quotient complements that discard the last basis labels (so e.g. a
    quotient by x1+...+x5 eliminates x5 and keeps x1..x4).
    Returns (rows, pivot columns), both in the original orientation.
    """
    if not rows or ncols == 0:
        return [], []
    rev = [list(reversed(r)) for r in rows]
    if _use_np(field, len(rows), ncols):
        A, piv = _rref_np(field.p, np.array(rev, dtype=np.int64))
        out = [[int(x) for x in reversed(A[i])] for i in range(len(piv))]
    else:
        rr, piv = _rref_py(field, rev, ncols)
        out = [list(reversed(r)) for r in rr[: len(piv)]]
    return out, [ncols - 1 - c for c in piv]


class Subspace:
    """A subspace of field^ambient with a canonical (RREF) basis."""

    __slots__ = ("field", "ambient", "basis")

    def __init__(self, field, ambient, canonical_rows):
        self.field = field
        self.ambient = ambient
        self.basis = tuple(tuple(r) for r in canonical_rows)

    @classmethod
    def from_vectors(cls, field, ambient, vectors) -> "Subspace":
        for v in vectors:
            if len(v) != ambient:
                raise ValueError("vector length does not match ambient dimension")
        rows, piv = Matrix(field, list(vectors), cols=ambient).rref() if vectors else ([], [])
        return cls(field, ambient, rows[: len(piv)])

    @classmethod
    def zero(cls, field, ambient) -> "Subspace":
        return cls(field, ambient, [])

    @classmethod
    def full(cls, field, ambient) -> "Subspace":
        return cls.from_vectors(field, ambient, Matrix.identity(field, ambient).entries)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def contains(self, vec) -> bool:
        return self.reduce(vec) is not None

    def reduce(self, vec):
        """Coordinates of vec in the canonical basis, or None if outside."""
        f = self.field
        v = list(vec)
        coords = []
        pivots = [next(j for j, x in enumerate(row) if not f.is_zero(x)) for row in self.basis]
        for row, pc in zip(self.basis, pivots):
            c = v[pc]
            coords.append(c)
            if not f.is_zero(c):
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        if any(not f.is_zero(x) for x in v):
            return None
        return coords

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.from_vectors(self.field, self.ambient, list(self.basis) + list(other.basis))

    def intersection(self, other: "Subspace") -> "Subspace":
        """Exact intersection via the kernel of [A^t | -B^t]."""
        self._check(other)
        f = self.field
        a, b = self.dim, other.dim
        if a == 0 or b == 0:
            return Subspace.zero(f, self.ambient)
        m = Matrix(
            f,
            [
                [self.basis[j][i] for j in range(a)]
                + [f.neg(other.basis[j][i]) for j in range(b)]
                for i in range(self.ambient)
            ],
            cols=a + b,
        )
        ker = m.kernel_basis()
        vecs = []
        for kv in ker.basis:
            v = [f.zero] * self.ambient
            for j in range(a):
                if not f.is_zero(kv[j]):
                    v = [f.add(x, f.mul(kv[j], y)) for x, y in zip(v, self.basis[j])]
            vecs.append(v)
        return Subspace.from_vectors(f, self.ambient, vecs)

    def _check(self, other):
        if self.ambient != other.ambient or self.field != other.field:
            raise ValueError("ambient dimension or field mismatch")

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and other.field == self.field
            and other.ambient == self.ambient
            and other.basis == self.basis
        )

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient})"


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a.sum(b)


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    return a.intersection(b)


def subspace_equal(a: Subspace, b: Subspace) -> bool:
    return a == b
