"""Exact dense linear algebra over a field, plus Smith normal form over Z.

Everything downstream (homology, sheaf cohomology, spectral pages, relation
ranks) reduces to the operations here: row reduction with exact pivots,
kernel/image bases, linear solves, and integer Smith invariants.  Matrices
are dense lists of rows; pivoting is first-nonzero so all derived bases are
deterministic functions of the input ordering.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from itertools import combinations


class Matrix:
    """Dense matrix over a field object (see torushom.field)."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows, ncols=None):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        if self.nrows:
            self.ncols = len(self.rows[0])
            if any(len(r) != self.ncols for r in self.rows):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != self.ncols:
                raise ValueError("ncols mismatch")
        else:
            if ncols is None:
                raise ValueError("empty matrix needs explicit ncols")
            self.ncols = ncols

    @classmethod
    def from_int_rows(cls, field, rows, ncols=None):
        return cls(field, [[field(v) for v in r] for r in rows], ncols)

    @classmethod
    def zero(cls, field, nrows, ncols):
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, field, cols, nrows):
        m = cls.zero(field, nrows, len(cols))
        for j, c in enumerate(cols):
            if len(c) != nrows:
                raise ValueError("column length mismatch")
            for i in range(nrows):
                m.rows[i][j] = c[i]
        return m

    def copy(self):
        return Matrix(self.field, [list(r) for r in self.rows], self.ncols)

    def column(self, j):
        return [r[j] for r in self.rows]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self):
        return Matrix(self.field, [self.column(j) for j in range(self.ncols)], self.nrows)

    def mul(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in mul")
        F = self.field
        out = Matrix.zero(F, self.nrows, other.ncols)
        for i in range(self.nrows):
            ri = self.rows[i]
            oi = out.rows[i]
            for k in range(self.ncols):
                a = ri[k]
                if F.is_zero(a):
                    continue
                rk = other.rows[k]
                for j in range(other.ncols):
                    oi[j] = F.add(oi[j], F.mul(a, rk[j]))
        return out

    def apply(self, vec):
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        F = self.field
        out = []
        for i in range(self.nrows):
            s = F.zero
            ri = self.rows[i]
            for j, v in enumerate(vec):
                if not F.is_zero(v):
                    s = F.add(s, F.mul(ri[j], v))
            out.append(s)
        return out

    def add(self, other):
        F = self.field
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in add")
        return Matrix(F, [[F.add(a, b) for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.rows, other.rows)], self.ncols)

    def scale(self, c):
        F = self.field
        return Matrix(F, [[F.mul(c, a) for a in r] for r in self.rows], self.ncols)

    def neg(self):
        return self.scale(self.field.neg(self.field.one))

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product, row-major block layout."""
        F = self.field
        out = Matrix.zero(F, self.nrows * other.nrows, self.ncols * other.ncols)
        for i in range(self.nrows):
            for j in range(self.ncols):
                a = self.rows[i][j]
                if F.is_zero(a):
                    continue
                for k in range(other.nrows):
                    for l in range(other.ncols):
                        out.rows[i * other.nrows + k][j * other.ncols + l] = \
                            F.mul(a, other.rows[k][l])
        return out

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ValueError("vstack width mismatch")
        return Matrix(self.field, [list(r) for r in self.rows] + [list(r) for r in other.rows],
                      self.ncols)

    def equal(self, other):
        F = self.field
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        return all(F.eq(a, b) for r1, r2 in zip(self.rows, other.rows)
                   for a, b in zip(r1, r2))

    def is_zero_matrix(self):
        F = self.field
        return all(F.is_zero(a) for r in self.rows for a in r)

    def rref(self):
        """Reduced row echelon form.  Returns (rref matrix, pivot column list)."""
        F = self.field
        m = [list(r) for r in self.rows]
        pivots = []
        pr = 0
        for pc in range(self.ncols):
            pivot_row = None
            for i in range(pr, self.nrows):
                if not F.is_zero(m[i][pc]):
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            m[pr], m[pivot_row] = m[pivot_row], m[pr]
            inv = F.inv(m[pr][pc])
            m[pr] = [F.mul(inv, a) for a in m[pr]]
            for i in range(self.nrows):
                if i != pr and not F.is_zero(m[i][pc]):
                    c = m[i][pc]
                    m[i] = [F.sub(a, F.mul(c, b)) for a, b in zip(m[i], m[pr])]
            pivots.append(pc)
            pr += 1
            if pr == self.nrows:
                break
        return Matrix(F, m, self.ncols), pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel_basis(self):
        """Basis of the right kernel, one vector per free column."""
        F = self.field
        R, pivots = self.rref()
        pivset = set(pivots)
        free = [j for j in range(self.ncols) if j not in pivset]
        basis = []
        for fj in free:
            v = [F.zero] * self.ncols
            v[fj] = F.one
            for r, pc in enumerate(pivots):
                v[pc] = F.neg(R.rows[r][fj])
            basis.append(v)
        return basis

    def solve(self, b):
        """One solution of self * x = b, or None if inconsistent."""
        F = self.field
        aug = Matrix(F, [list(r) + [bv] for r, bv in zip(self.rows, b)], self.ncols + 1)
        R, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [F.zero] * self.ncols
        for r, pc in enumerate(pivots):
            x[pc] = R.rows[r][self.ncols]
        return x

    def solve_matrix(self, B: "Matrix"):
        """X with self * X = B, or None.  Solves all columns on one reduction."""
        F = self.field
        if B.nrows != self.nrows:
            raise ValueError("shape mismatch in solve_matrix")
        aug = Matrix(F, [list(r) + list(br) for r, br in zip(self.rows, B.rows)],
                     self.ncols + B.ncols)
        R, pivots = aug.rref()
        if any(p >= self.ncols for p in pivots):
            return None
        X = Matrix.zero(F, self.ncols, B.ncols)
        for r, pc in enumerate(pivots):
            for j in range(B.ncols):
                X.rows[pc][j] = R.rows[r][self.ncols + j]
        return X


class IncrementalSpan:
    """Growing echelonized span of column vectors; O(dim^2) per insertion."""

    def __init__(self, field, ambient_dim):
        self.field = field
        self.ambient_dim = ambient_dim
        self.pivots = []       # pivot row index per stored vector
        self.vectors = []      # echelonized vectors, pivot entry normalized to 1

    @property
    def dim(self):
        return len(self.vectors)

    def reduce(self, vec):
        F = self.field
        v = list(vec)
        for p, w in zip(self.pivots, self.vectors):
            c = v[p]
            if not F.is_zero(c):
                v = [F.sub(a, F.mul(c, b)) for a, b in zip(v, w)]
        return v

    def add(self, vec) -> bool:
        """Insert vec; returns True when it enlarges the span."""
        F = self.field
        v = self.reduce(vec)
        p = next((i for i, a in enumerate(v) if not F.is_zero(a)), None)
        if p is None:
            return False
        inv = F.inv(v[p])
        self.pivots.append(p)
        self.vectors.append([F.mul(inv, a) for a in v])
        return True

    def contains(self, vec) -> bool:
        F = self.field
        return all(F.is_zero(a) for a in self.reduce(vec))


@dataclass
class SubspaceBasis:
    """A list of linearly independent vectors inside k^ambient_dim."""

    ambient_dim: int
    vectors: list

    def __post_init__(self):
        if any(len(v) != self.ambient_dim for v in self.vectors):
            raise ValueError("vector length != ambient_dim")

    @property
    def dim(self):
        return len(self.vectors)

    def matrix(self, field) -> Matrix:
        return Matrix.from_columns(field, self.vectors, self.ambient_dim)


def rank_kernel_image(M: Matrix):
    """Rank, kernel basis and image basis of a matrix over a field.

    The image basis is the set of original columns at the pivot positions,
    so it is a deterministic function of the column order.
    """
    R, pivots = M.rref()
    kernel = SubspaceBasis(M.ncols, M.kernel_basis())
    image = SubspaceBasis(M.nrows, [M.column(j) for j in pivots])
    return len(pivots), kernel, image


def column_space_basis(field, vectors, ambient_dim):
    """Greedy pivot basis of span(vectors), keeping earliest spanning vectors."""
    span = IncrementalSpan(field, ambient_dim)
    basis = []
    for v in vectors:
        if span.add(v):
            basis.append(list(v))
    return basis


def smith_invariants(rows) -> list:
    """Invariant factors d_1 | d_2 | ... of an integer matrix.

    Returns min(nrows, ncols) nonnegative integers satisfying the
    divisibility chain; trailing zeros pad up to min(nrows, ncols) when the
    rank is smaller.
    """
    A = [[int(v) for v in r] for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0 or n == 0:
        return []
    invariants = []
    t = 0
    while t < m and t < n:
        # move a nonzero entry (smallest magnitude) to the corner
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] != 0 and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        A[t], A[pivot[0]] = A[pivot[0]], A[t]
        for row in A:
            row[t], row[pivot[1]] = row[pivot[1]], row[t]
        while True:
            # Euclidean clearing of column t; a swap strictly shrinks the pivot
            for i in range(t + 1, m):
                while A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t] != 0:
                        A[t], A[i] = A[i], A[t]
            # Euclidean clearing of row t; only column j is modified, so a
            # swap-free pass leaves column t clear
            for j in range(t + 1, n):
                while A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    for i in range(m):
                        A[i][j] -= q * A[i][t]
                    if A[t][j] != 0:
                        for i in range(m):
                            A[i][t], A[i][j] = A[i][j], A[i][t]
            if any(A[i][t] != 0 for i in range(t + 1, m)):
                continue
            # pivot must divide the remaining block
            p = A[t][t]
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[offender])]
        invariants.append(abs(A[t][t]))
        t += 1
    invariants += [0] * (min(m, n) - len(invariants))
    return invariants


def minors_gcd(rows, k: int) -> int:
    """gcd of all k x k minors of an integer matrix (brute force oracle)."""
    A = [[int(v) for v in r] for r in rows]
    m, n = len(A), len(A[0]) if A else 0
    if k == 0:
        return 1
    if k > m or k > n:
        return 0
    g = 0
    for ris in combinations(range(m), k):
        for cjs in combinations(range(n), k):
            g = gcd(g, _int_det([[A[i][j] for j in cjs] for i in ris]))
    return abs(g)


def _int_det(a) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def int_det(a) -> int:
    return _int_det([[int(v) for v in r] for r in a])


def complement_in_span(field, space: SubspaceBasis, sub: SubspaceBasis):
    """Vectors of `space` extending `sub` to a basis of span(space).

    The complement is picked greedily in the order the space basis is given,
    so quotient bases are deterministic.
    """
    amb = space.ambient_dim
    if sub.ambient_dim != amb:
        raise ValueError("ambient mismatch")
    span = IncrementalSpan(field, amb)
    for v in sub.vectors:
        if not span.add(v):
            raise ValueError("subspace basis is dependent")
    comp = []
    for v in space.vectors:
        if span.add(v):
            comp.append(list(v))
    return comp


def induced_quotient_map(field, f: Matrix, src_pair, dst_pair) -> Matrix:
    """Matrix induced by f on quotients (space/subspace) -> (space/subspace).

    `src_pair` and `dst_pair` are (space, subspace) SubspaceBasis pairs.
    Raises ValueError when f does not map the source subspace into the
    destination subspace, or some image leaves the destination space.
    """
    src_space, src_sub = src_pair
    dst_space, dst_sub = dst_pair
    dst_comp = complement_in_span(field, dst_space, dst_sub)
    solver = Matrix.from_columns(field, dst_sub.vectors + dst_comp, dst_space.ambient_dim)
    for v in src_sub.vectors:
        coords = solver.solve(f.apply(v))
        if coords is None:
            raise ValueError("image of subspace leaves the destination space")
        if any(not field.is_zero(c) for c in coords[len(dst_sub.vectors):]):
            raise ValueError("f does not map subspace into subspace")
    src_comp = complement_in_span(field, src_space, src_sub)
    cols = []
    for v in src_comp:
        coords = solver.solve(f.apply(v))
        if coords is None:
            raise ValueError("image leaves the destination space")
        cols.append(coords[len(dst_sub.vectors):])
    return Matrix.from_columns(field, cols, len(dst_comp))
