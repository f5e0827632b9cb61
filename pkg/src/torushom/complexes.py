"""Chain complexes of simplicial posets and exact homology with induced maps.

One graded-complex engine serves both chain complexes (differential lowers
degree) and sheaf cochain complexes (raises degree).  Homology comes with
deterministic representative cycles and enough lift data to express any
cycle in the representative basis, which is what restriction maps of the
local homology sheaf need.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dfield

from .exactlin import Matrix, IncrementalSpan
from .poset import SimplicialPoset, SubposetMask, PosetError, incidence_number, \
    link, complement_of_link, mask_is_closed_downward


@dataclass
class GradedComplex:
    """Graded vector space with differentials d[k]: C_k -> C_{k+shift}."""

    field: object
    dims: dict
    diff: dict
    shift: int
    labels: dict = dfield(default_factory=dict)

    def dim(self, k):
        return self.dims.get(k, 0)

    def d(self, k) -> Matrix | None:
        return self.diff.get(k)

    def check_square_zero(self):
        for k, dk in self.diff.items():
            dn = self.diff.get(k + self.shift)
            if dn is not None:
                if not dn.mul(dk).is_zero_matrix():
                    raise ValueError(f"d^2 != 0 at degree {k}")

    def degrees(self):
        return sorted(self.dims)


class HomologyProfile:
    """Per-degree homology dimensions, representatives, and class coordinates."""

    def __init__(self, cx: GradedComplex):
        self.complex = cx
        F = cx.field
        self.dims = {}
        self.representatives = {}
        self._solvers = {}
        self._boundary_count = {}
        for k in cx.degrees():
            nk = cx.dim(k)
            dk = cx.d(k)
            if dk is None:
                cycles = [_unit(F, nk, i) for i in range(nk)]
            else:
                cycles = dk.kernel_basis()
            dprev = cx.d(k - cx.shift)
            boundaries = []
            if dprev is not None:
                _, pivots = dprev.rref()
                boundaries = [dprev.column(j) for j in pivots]
            reps = []
            span = IncrementalSpan(F, nk)
            for b in boundaries:
                span.add(b)
            for z in cycles:
                if span.add(z):
                    reps.append(z)
            self.dims[k] = len(reps)
            self.representatives[k] = reps
            cols = reps + boundaries
            self._boundary_count[k] = len(boundaries)
            self._solvers[k] = Matrix.from_columns(F, cols, nk) if cols else None

    def betti(self):
        return dict(self.dims)

    def coords(self, k, vec):
        """Coordinates of a cycle's class in the representative basis.

        Raises ValueError when `vec` is not a cycle (not in the span of
        representatives and boundaries).
        """
        nreps = self.dims.get(k, 0)
        solver = self._solvers.get(k)
        if solver is None:
            F = self.complex.field
            if any(not F.is_zero(v) for v in vec):
                raise ValueError("nonzero vector in a zero homology degree")
            return []
        x = solver.solve(vec)
        if x is None:
            raise ValueError("vector is not a cycle of this complex")
        return x[:nreps]


def _unit(F, n, i):
    v = [F.zero] * n
    v[i] = F.one
    return v


def homology(cx: GradedComplex) -> HomologyProfile:
    return HomologyProfile(cx)


# ---------------------------------------------------------------------------
# cellular complexes of simplicial posets

def cellular_chain_complex(S: SimplicialPoset, field, relative_to: SubposetMask | None = None,
                           reduced: bool = False) -> GradedComplex:
    """Chain complex with one generator per poset element and d = sum [J:I].

    `reduced` includes the empty face in degree -1.  A relative complex
    drops the generators of a downward-closed mask.
    """
    if relative_to is not None and not mask_is_closed_downward(S, relative_to):
        raise PosetError("relative mask is not downward closed")
    masked = relative_to.member if relative_to is not None else [False] * S.size
    lowest = -1 if reduced else 0
    labels = {}
    for d in range(lowest, S.n):
        ids = [i for i in S.elements_of_dim(d) if not masked[i]]
        if d == -1:
            ids = [0] if not masked[0] else []
        labels[d] = ids
    dims = {d: len(ids) for d, ids in labels.items()}
    index = {d: {e: k for k, e in enumerate(ids)} for d, ids in labels.items()}
    diff = {}
    for d in range(lowest + 1, S.n):
        mat = Matrix.zero(field, dims.get(d - 1, 0), dims.get(d, 0))
        for col, j in enumerate(labels[d]):
            for i in S.covers[j]:
                if masked[i]:
                    continue
                sign = incidence_number(S, j, i)
                mat.rows[index[d - 1][i]][col] = field(sign)
        diff[d] = mat
    cx = GradedComplex(field, dims, diff, shift=-1, labels=labels)
    cx.check_square_zero()
    return cx


def chain_projection(S: SimplicialPoset, field, src: GradedComplex, dst: GradedComplex) -> dict:
    """Degreewise projection between two cellular complexes of S.

    The destination's generators must be a subset of the source's (a
    quotient by a larger mask).  Returns per-degree matrices.
    """
    out = {}
    for d, dst_ids in dst.labels.items():
        src_ids = src.labels.get(d, [])
        src_index = {e: k for k, e in enumerate(src_ids)}
        mat = Matrix.zero(field, len(dst_ids), len(src_ids))
        for row, e in enumerate(dst_ids):
            if e in src_index:
                mat.rows[row][src_index[e]] = field.one
        out[d] = mat
    return out


def is_chain_map(f: dict, src: GradedComplex, dst: GradedComplex) -> bool:
    for k, fk in f.items():
        ds = src.d(k)
        dd = dst.d(k)
        if ds is None or dd is None:
            continue
        fprev = f.get(k + src.shift)
        if fprev is None:
            continue
        if not dd.mul(fk).equal(fprev.mul(ds)):
            return False
    return True


def induced_map(f: dict, src_h: HomologyProfile, dst_h: HomologyProfile) -> dict:
    """Matrices of H(f) in the representative bases; rejects non-chain-maps."""
    if not is_chain_map(f, src_h.complex, dst_h.complex):
        raise ValueError("not a chain map (does not commute with differentials)")
    out = {}
    for k in src_h.complex.degrees():
        reps = src_h.representatives.get(k, [])
        fk = f.get(k)
        cols = []
        for z in reps:
            img = fk.apply(z) if fk is not None else []
            cols.append(dst_h.coords(k, img))
        out[k] = Matrix.from_columns(src_h.complex.field, cols, dst_h.dims.get(k, 0)) \
            if cols or dst_h.dims.get(k, 0) else Matrix.zero(src_h.complex.field, 0, 0)
    return out


def reduced_betti(S: SimplicialPoset, field) -> dict:
    """Reduced Betti numbers of |S| from the poset's own cellular complex."""
    prof = homology(cellular_chain_complex(S, field, reduced=True))
    return {d: prof.dims.get(d, 0) for d in range(-1, S.n)}


def betti(S: SimplicialPoset, field) -> dict:
    """Unreduced Betti numbers of |S|."""
    prof = homology(cellular_chain_complex(S, field, reduced=False))
    return {d: prof.dims.get(d, 0) for d in range(0, S.n)}


def relative_link_homology(S: SimplicialPoset, field, j: int) -> HomologyProfile:
    """Homology of (S, S minus lk j); stalk data of the local homology sheaf."""
    mask = complement_of_link(S, j)
    return homology(cellular_chain_complex(S, field, relative_to=mask, reduced=True))


@dataclass
class ClassifyReport:
    buchsbaum: bool
    cohen_macaulay: bool
    pure: bool
    failures: list        # (element id or -1 for the global condition, degree, dim)

    def as_dict(self):
        return {"buchsbaum": self.buchsbaum, "cohen_macaulay": self.cohen_macaulay,
                "pure": self.pure,
                "failures": [list(f) for f in self.failures]}


def classify(S: SimplicialPoset, field) -> ClassifyReport:
    """Buchsbaum / Cohen-Macaulay verdicts over the active field.

    Buchsbaum: reduced link homology of every nonempty face vanishes off
    the top degree; Cohen-Macaulay additionally requires it for the empty
    face (the poset itself).  Link homology is read off the relative
    complexes H_*(S, S \\ lk I), which carry the same ranks shifted by |I|.
    """
    if not S.is_pure():
        return ClassifyReport(False, False, False, [(-1, -1, -1)])
    n = S.n
    failures = []
    for j in range(1, S.size):
        prof = relative_link_homology(S, field, j)
        for d, dim in prof.dims.items():
            # H_d(S, S \ lk j) = reduced H_{d - |j|}(lk j)
            if dim and d != n - 1:
                failures.append((j, d - S.ranks[j], dim))
    buchsbaum = not failures
    global_failures = []
    rb = reduced_betti(S, field)
    for d, dim in rb.items():
        if dim and d != n - 1:
            global_failures.append((0, d, dim))
    return ClassifyReport(buchsbaum, buchsbaum and not global_failures, True,
                          failures + global_failures)


def link_reduced_betti(S: SimplicialPoset, field, i: int) -> dict:
    """Reduced Betti numbers of lk_S(i) computed on the link poset itself."""
    L = link(S, i)
    return reduced_betti(L, field)


def order_complex_homology(S: SimplicialPoset, field) -> HomologyProfile:
    """Reduced homology of the order complex of S minus the empty face.

    Independent oracle for the cellular path: simplices are the chains of
    poset elements, with the standard alternating-sign boundary.
    """
    elems = [i for i in range(S.size) if i != 0]
    chains = {0: [(e,) for e in elems]}
    d = 0
    while chains.get(d):
        nxt = []
        for ch in chains[d]:
            top = ch[-1]
            for e in elems:
                if S.ranks[e] > S.ranks[top] and S.leq(top, e):
                    nxt.append(ch + (e,))
        d += 1
        if nxt:
            chains[d] = nxt
    dims = {-1: 1}
    labels = {-1: [()]}
    for k, cs in chains.items():
        cs_sorted = sorted(cs)
        labels[k] = cs_sorted
        dims[k] = len(cs_sorted)
    index = {k: {c: p for p, c in enumerate(cs)} for k, cs in labels.items()}
    diff = {}
    for k in sorted(chains):
        mat = Matrix.zero(field, dims.get(k - 1, 0), dims[k])
        for col, ch in enumerate(labels[k]):
            if k == 0:
                mat.rows[0][col] = field.one
                continue
            sign = 1
            for drop in range(len(ch)):
                face = ch[:drop] + ch[drop + 1:]
                row = index[k - 1][face]
                mat.rows[row][col] = field(sign)
                sign = -sign
        diff[k] = mat
    cx = GradedComplex(field, dims, diff, shift=-1, labels=labels)
    cx.check_square_zero()
    return homology(cx)
