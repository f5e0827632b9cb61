"""Cellular sheaves and cosheaves on a simplicial poset.

A sheaf assigns a stalk space to every poset element and a restriction
matrix to every cover relation; incidence signs live in the cochain
differential, not in the sheaf, so functoriality means the two composites
through any length-two interval are equal as matrices.  The standard
sheaves of the torus-space theory are built here: constant, upper-set,
local homology, and the structure sheaf (top local homology, with an
optional stalk at the empty face carrying the top reduced homology of the
whole poset).
"""
from __future__ import annotations

from dataclasses import dataclass

from .exactlin import Matrix
from .poset import SimplicialPoset, PosetError, incidence_number, complement_of_link
from .complexes import (
    GradedComplex, HomologyProfile, homology, cellular_chain_complex,
    chain_projection,
)


@dataclass
class CellularSheaf:
    poset: SimplicialPoset
    field: object
    stalk_dims: list
    rest: dict                    # (i, j) for covers i <1 j -> Matrix
    include_empty: bool = False
    name: str = ""

    def stalk_dim(self, i):
        return self.stalk_dims[i]

    def restriction(self, i, j) -> Matrix:
        """Restriction along i <= j, composed along one saturated chain."""
        S = self.poset
        if i == j:
            return Matrix.identity(self.field, self.stalk_dims[i])
        if not S.leq(i, j):
            raise PosetError(f"{i} is not below {j}")
        chain = [j]
        cur = j
        while cur != i:
            cur = next(c for c in S.covers[cur] if S.leq(i, c))
            chain.append(cur)
        chain.reverse()
        mat = self._cover_matrix(chain[0], chain[1])
        for a, b in zip(chain[1:], chain[2:]):
            mat = self._cover_matrix(a, b).mul(mat)
        return mat

    def _cover_matrix(self, i, j) -> Matrix:
        m = self.rest.get((i, j))
        if m is None:
            return Matrix.zero(self.field, self.stalk_dims[j], self.stalk_dims[i])
        return m


@dataclass
class CellularCosheaf:
    poset: SimplicialPoset
    field: object
    stalk_dims: list
    corest: dict                  # (j, i) for covers i <1 j -> Matrix (stalk j -> stalk i)
    name: str = ""

    def _cover_matrix(self, j, i) -> Matrix:
        m = self.corest.get((j, i))
        if m is None:
            return Matrix.zero(self.field, self.stalk_dims[i], self.stalk_dims[j])
        return m


def check_sheaf_functoriality(sheaf: CellularSheaf):
    """Two-path equality through every length-two interval; raises on failure."""
    S = sheaf.poset
    for j in range(S.size):
        if S.ranks[j] < 2:
            continue
        for i in S.below[j]:
            if S.ranks[i] != S.ranks[j] - 2:
                continue
            if i == 0 and not sheaf.include_empty:
                continue
            mids = [t for t in S.below[j] if S.ranks[t] == S.ranks[j] - 1 and S.leq(i, t)]
            m1, m2 = mids
            a = sheaf._cover_matrix(m1, j).mul(sheaf._cover_matrix(i, m1))
            b = sheaf._cover_matrix(m2, j).mul(sheaf._cover_matrix(i, m2))
            if not a.equal(b):
                raise ValueError(f"sheaf functoriality fails on {i} < {m1},{m2} < {j}")


def check_cosheaf_functoriality(cosheaf: CellularCosheaf):
    S = cosheaf.poset
    for j in range(S.size):
        if S.ranks[j] < 2:
            continue
        for i in S.below[j]:
            if S.ranks[i] != S.ranks[j] - 2 or i == 0:
                continue
            mids = [t for t in S.below[j] if S.ranks[t] == S.ranks[j] - 1 and S.leq(i, t)]
            m1, m2 = mids
            a = cosheaf._cover_matrix(m1, i).mul(cosheaf._cover_matrix(j, m1))
            b = cosheaf._cover_matrix(m2, i).mul(cosheaf._cover_matrix(j, m2))
            if not a.equal(b):
                raise ValueError(f"cosheaf functoriality fails on {i} < {m1},{m2} < {j}")


def _blocks(S, stalk_dims, degree, include_empty):
    ids = S.elements_of_dim(degree)
    if degree == -1:
        ids = [0] if include_empty else []
    ids = [i for i in ids if stalk_dims[i] > 0]
    offsets = {}
    total = 0
    for i in ids:
        offsets[i] = total
        total += stalk_dims[i]
    return ids, offsets, total


def cochain_complex(sheaf: CellularSheaf, truncated: bool = True) -> GradedComplex:
    """Incidence-signed cochain complex of a sheaf; degree of the empty face is -1."""
    S = sheaf.poset
    F = sheaf.field
    lowest = -1 if (sheaf.include_empty and not truncated) else 0
    info = {d: _blocks(S, sheaf.stalk_dims, d, lowest == -1) for d in range(lowest, S.n)}
    dims = {d: info[d][2] for d in info}
    diff = {}
    for d in range(lowest, S.n - 1):
        ids_d, off_d, tot_d = info[d]
        ids_e, off_e, tot_e = info[d + 1]
        mat = Matrix.zero(F, tot_e, tot_d)
        for i in ids_d:
            for j in S.covered_by[i]:
                if sheaf.stalk_dims[j] == 0:
                    continue
                sign = F(incidence_number(S, j, i))
                block = sheaf._cover_matrix(i, j)
                r0, c0 = off_e[j], off_d[i]
                for r in range(block.nrows):
                    for c in range(block.ncols):
                        v = block.rows[r][c]
                        if not F.is_zero(v):
                            mat.rows[r0 + r][c0 + c] = F.mul(sign, v)
        diff[d] = mat
    labels = {d: info[d][0] for d in info}
    cx = GradedComplex(F, dims, diff, shift=+1, labels=labels)
    cx.check_square_zero()
    return cx


@dataclass
class SheafCohomology:
    sheaf: CellularSheaf
    truncated: bool
    complex: GradedComplex
    profile: HomologyProfile

    @property
    def dims(self):
        return {d: self.profile.dims.get(d, 0) for d in self.complex.degrees()}


def sheaf_cohomology(sheaf: CellularSheaf, truncated: bool = True) -> SheafCohomology:
    cx = cochain_complex(sheaf, truncated)
    return SheafCohomology(sheaf, truncated, cx, homology(cx))


def chain_complex_of_cosheaf(cosheaf: CellularCosheaf) -> GradedComplex:
    S = cosheaf.poset
    F = cosheaf.field
    info = {d: _blocks(S, cosheaf.stalk_dims, d, False) for d in range(0, S.n)}
    dims = {d: info[d][2] for d in info}
    diff = {}
    for d in range(1, S.n):
        ids_d, off_d, tot_d = info[d]
        ids_e, off_e, tot_e = info[d - 1]
        mat = Matrix.zero(F, tot_e, tot_d)
        for j in ids_d:
            for i in S.covers[j]:
                if i == 0 or cosheaf.stalk_dims[i] == 0:
                    continue
                sign = F(incidence_number(S, j, i))
                block = cosheaf._cover_matrix(j, i)
                r0, c0 = off_e[i], off_d[j]
                for r in range(block.nrows):
                    for c in range(block.ncols):
                        v = block.rows[r][c]
                        if not F.is_zero(v):
                            mat.rows[r0 + r][c0 + c] = F.mul(sign, v)
        diff[d] = mat
    labels = {d: info[d][0] for d in info}
    cx = GradedComplex(F, dims, diff, shift=-1, labels=labels)
    cx.check_square_zero()
    return cx


def cosheaf_homology(cosheaf: CellularCosheaf) -> SheafCohomology:
    cx = chain_complex_of_cosheaf(cosheaf)
    return SheafCohomology(cosheaf, True, cx, homology(cx))


def tensor(A: CellularSheaf, B: CellularSheaf) -> CellularSheaf:
    """Stalkwise tensor product with Kronecker restriction maps."""
    if A.poset is not B.poset and A.poset.vertex_sets != B.poset.vertex_sets:
        raise ValueError("tensor of sheaves on different posets")
    if A.field != B.field:
        raise ValueError("tensor of sheaves over different fields")
    dims = [a * b for a, b in zip(A.stalk_dims, B.stalk_dims)]
    rest = {}
    S = A.poset
    for i in range(S.size):
        for j in S.covered_by[i]:
            if dims[i] and dims[j]:
                rest[(i, j)] = A._cover_matrix(i, j).kron(B._cover_matrix(i, j))
    return CellularSheaf(S, A.field, dims, rest,
                         include_empty=A.include_empty and B.include_empty,
                         name=f"{A.name}(x){B.name}")


# ---------------------------------------------------------------------------
# the standard sheaves

class LocalHomologyData:
    """Relative complexes H_*(S, S minus lk j) for all j, with the reduced
    complex of S itself at the empty face.  Shared backing store for the
    local homology sheaves and the structure sheaf."""

    def __init__(self, S: SimplicialPoset, field):
        self.poset = S
        self.field = field
        self.complexes = {}
        self.profiles = {}
        self.complexes[0] = cellular_chain_complex(S, field, reduced=True)
        self.profiles[0] = homology(self.complexes[0])
        for j in range(1, S.size):
            cx = cellular_chain_complex(S, field, relative_to=complement_of_link(S, j),
                                        reduced=True)
            self.complexes[j] = cx
            self.profiles[j] = homology(cx)

    def stalk_dim(self, j, i):
        if j == 0:
            return 0
        return self.profiles[j].dims.get(i, 0)

    def restriction(self, j1, j2, i) -> Matrix:
        """Matrix of loc_i(j1 < j2) in the representative bases."""
        proj = chain_projection(self.poset, self.field, self.complexes[j1],
                                self.complexes[j2])
        src = self.profiles[j1]
        dst = self.profiles[j2]
        cols = [dst.coords(i, proj[i].apply(z)) for z in src.representatives.get(i, [])]
        return Matrix.from_columns(self.field, cols, dst.dims.get(i, 0))


def standard_sheaf(S: SimplicialPoset, field, kind: str, *, dim: int = 1,
                   element: int | None = None, degree: int | None = None,
                   include_empty: bool = False,
                   local_data: LocalHomologyData | None = None,
                   check: bool = True) -> CellularSheaf:
    """Build one of the standard sheaves.

    kind = "constant":        value `dim` on every nonempty face.
    kind = "upper_set":       value `dim` on faces above `element`.
    kind = "local_homology":  stalks H_degree(S, S minus lk J).
    kind = "structure":       local homology in top degree; with
                              include_empty the empty face carries the top
                              reduced homology of S, restricted by the
                              chain-level projections.
    """
    F = field
    if kind == "constant":
        dims = [dim] * S.size
        dims[0] = 0
        ident = Matrix.identity(F, dim)
        rest = {}
        for i in range(1, S.size):
            for j in S.covered_by[i]:
                rest[(i, j)] = ident
        sheaf = CellularSheaf(S, F, dims, rest, include_empty=False,
                              name=f"constant({dim})")
    elif kind == "upper_set":
        if element is None:
            raise ValueError("upper_set needs element")
        up = set(S.upper_set(element))
        dims = [dim if i in up else 0 for i in range(S.size)]
        ident = Matrix.identity(F, dim)
        rest = {}
        for i in range(S.size):
            for j in S.covered_by[i]:
                if i in up and j in up:
                    rest[(i, j)] = ident
        sheaf = CellularSheaf(S, F, dims, rest, include_empty=(element == 0),
                              name=f"ups({element},{dim})")
    elif kind in ("local_homology", "structure"):
        if kind == "structure":
            if not S.is_pure():
                raise PosetError("structure sheaf needs a pure poset")
            degree = S.n - 1
        if degree is None:
            raise ValueError("local_homology needs degree")
        data = local_data or LocalHomologyData(S, F)
        dims = [data.stalk_dim(j, degree) for j in range(S.size)]
        rest = {}
        for i in range(1, S.size):
            for j in S.covered_by[i]:
                if dims[i] and dims[j]:
                    rest[(i, j)] = data.restriction(i, j, degree)
        empty = False
        if kind == "structure" and include_empty:
            empty = True
            dims[0] = data.profiles[0].dims.get(S.n - 1, 0)
            for v in S.covered_by[0]:
                if dims[0] and dims[v]:
                    rest[(0, v)] = data.restriction(0, v, degree)
        sheaf = CellularSheaf(S, F, dims, rest, include_empty=empty,
                              name="structure" if kind == "structure" else f"loc({degree})")
    else:
        raise ValueError(f"unknown standard sheaf kind {kind!r}")
    if check:
        check_sheaf_functoriality(sheaf)
    return sheaf


@dataclass
class ConstancyResult:
    is_constant: bool
    orientation: dict | None     # element id -> unit scaling the stalk basis
    witness: str | None

    def as_dict(self):
        return {"is_constant": self.is_constant,
                "witness": self.witness or ""}


def constancy_check(sheaf: CellularSheaf) -> ConstancyResult:
    """Try to trivialize a sheaf with one-dimensional stalks.

    Finds units o_I with o_I * a(I<J) = o_J over every cover; after
    rescaling the stalk bases by o the sheaf is the constant sheaf.  A
    failure returns the inconsistent cover or the offending stalk.
    """
    S = sheaf.poset
    F = sheaf.field
    for i in range(1, S.size):
        if sheaf.stalk_dims[i] != 1:
            return ConstancyResult(False, None,
                                   f"stalk at {i} has dimension {sheaf.stalk_dims[i]}")
    orient = {}
    for root in range(1, S.size):
        if root in orient:
            continue
        orient[root] = F.one
        queue = [root]
        while queue:
            cur = queue.pop()
            neighbors = [(cur, j) for j in S.covered_by[cur]] + \
                        [(i, cur) for i in S.covers[cur] if i != 0]
            for (i, j) in neighbors:
                a = sheaf._cover_matrix(i, j).rows[0][0]
                if F.is_zero(a):
                    return ConstancyResult(False, None,
                                           f"zero restriction on cover {i} < {j}")
                known_i = i in orient
                known_j = j in orient
                if known_i and known_j:
                    if not F.eq(F.mul(orient[i], a), orient[j]):
                        return ConstancyResult(False, None,
                                               f"inconsistent cycle through cover {i} < {j}")
                elif known_i:
                    orient[j] = F.mul(orient[i], a)
                    queue.append(j)
                elif known_j:
                    orient[i] = F.div(orient[j], a)
                    queue.append(i)
    return ConstancyResult(True, orient, None)


def restrict_to_link(sheaf: CellularSheaf, i: int) -> CellularSheaf:
    """Restriction of a sheaf to lk(i), with i playing the empty face.

    This is the structure sheaf of the dual face when applied to the
    structure sheaf of the whole poset.
    """
    from .poset import link as _link
    S = sheaf.poset
    L = _link(S, i)
    src = L.source_ids
    dims = [sheaf.stalk_dims[src[k]] for k in range(L.size)]
    rest = {}
    for a in range(L.size):
        for b in L.covered_by[a]:
            if dims[a] and dims[b]:
                rest[(a, b)] = sheaf._cover_matrix(src[a], src[b])
    return CellularSheaf(L, sheaf.field, dims, rest, include_empty=dims[0] > 0,
                         name=f"{sheaf.name}|lk({i})")


def sheaf_dump(sheaf: CellularSheaf) -> dict:
    """JSON-able dump (stalk dimensions and cover matrices) for golden tests."""
    def num(x):
        return str(x)
    return {
        "name": sheaf.name,
        "include_empty": sheaf.include_empty,
        "stalk_dims": list(sheaf.stalk_dims),
        "covers": {
            f"{i}<{j}": [[num(v) for v in row] for row in m.rows]
            for (i, j), m in sorted(sheaf.rest.items())
        },
    }
