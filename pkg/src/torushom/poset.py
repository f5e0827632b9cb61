"""Simplicial posets: construction, validation, links, incidence signs.

A simplicial poset is a finite ranked poset with a unique minimum (the
empty face, id 0) in which every lower interval is a boolean lattice.
Unlike a simplicial complex it may carry several faces with the same
vertex set, so the general input format is a cover table; a facet list
covers the complex case.  Element ids are dense integers assigned at
build time and every downstream table indexes by id.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dfield
from itertools import combinations


class PosetError(ValueError):
    pass


@dataclass
class SimplicialPoset:
    ranks: list
    vertex_sets: list          # sorted tuples of vertex labels
    covers: list               # ids one rank down, per element
    name: str = ""
    source_ids: tuple | None = None   # set for links: new id -> id in the parent poset

    covered_by: list = dfield(default_factory=list, repr=False)
    below: list = dfield(default_factory=list, repr=False)

    def __post_init__(self):
        m = len(self.ranks)
        self.covered_by = [[] for _ in range(m)]
        for j, cs in enumerate(self.covers):
            for i in cs:
                self.covered_by[i].append(j)
        self.covered_by = [tuple(sorted(v)) for v in self.covered_by]
        below = [set() for _ in range(m)]
        for i in sorted(range(m), key=lambda k: self.ranks[k]):
            below[i].add(i)
            for c in self.covers[i]:
                below[i] |= below[c]
        self.below = [frozenset(b) for b in below]

    @property
    def size(self):
        return len(self.ranks)

    @property
    def n(self):
        """Maximal rank (dim S + 1 for pure posets)."""
        return max(self.ranks)

    @property
    def dim(self):
        return self.n - 1

    def leq(self, i, j):
        return i in self.below[j]

    def elements_of_rank(self, r):
        return [i for i in range(self.size) if self.ranks[i] == r]

    def elements_of_dim(self, d):
        return self.elements_of_rank(d + 1)

    def vertices(self):
        return self.elements_of_rank(1)

    def vertex_labels(self):
        return sorted(self.vertex_sets[v][0] for v in self.vertices())

    def maximal_elements(self):
        return [i for i in range(self.size) if not self.covered_by[i]]

    def is_pure(self):
        return len({self.ranks[i] for i in self.maximal_elements()}) <= 1

    def upper_set(self, i):
        return [j for j in range(self.size) if self.leq(i, j)]


@dataclass
class SubposetMask:
    member: list                # bool per element id
    closed_downward: bool

    def ids(self):
        return [i for i, m in enumerate(self.member) if m]


@dataclass
class PosetDiagnostics:
    ok: bool
    pure: bool
    dim: int
    messages: list


def build_from_facets(facets, name="") -> SimplicialPoset:
    """Poset of all faces of a simplicial complex given by its facet list."""
    if not facets:
        raise PosetError("empty facet list")
    cleaned = []
    for f in facets:
        vs = tuple(sorted(set(int(v) for v in f)))
        if not vs:
            raise PosetError("empty facet")
        cleaned.append(vs)
    faces = set()
    for f in cleaned:
        for k in range(len(f) + 1):
            faces.update(combinations(f, k))
    ordered = sorted(faces, key=lambda s: (len(s), s))
    index = {s: i for i, s in enumerate(ordered)}
    ranks = [len(s) for s in ordered]
    covers = []
    for s in ordered:
        covers.append(tuple(sorted(index[t] for t in combinations(s, len(s) - 1))) if s else ())
    S = SimplicialPoset(ranks, list(ordered), covers, name=name)
    _validate_or_raise(S)
    return S


def build_from_cover_table(entries, name="") -> SimplicialPoset:
    """Poset from explicit (id, rank, vertex_set, covers) rows.

    Ids must be dense 0..m-1 with the empty face at id 0.  This is the
    general format: it can express parallel faces with equal vertex sets.
    """
    m = len(entries)
    by_id = {}
    for e in entries:
        i, rank, vs, cov = e
        if i in by_id:
            raise PosetError(f"duplicate id {i}")
        by_id[i] = (int(rank), tuple(sorted(int(v) for v in vs)), tuple(int(c) for c in cov))
    if sorted(by_id) != list(range(m)):
        raise PosetError("ids must be dense integers 0..m-1")
    ranks = [by_id[i][0] for i in range(m)]
    vsets = [by_id[i][1] for i in range(m)]
    covers = [tuple(sorted(by_id[i][2])) for i in range(m)]
    if m == 0 or ranks[0] != 0 or vsets[0] != ():
        raise PosetError("element 0 must be the empty face with rank 0")
    for i in range(m):
        for c in covers[i]:
            if not (0 <= c < m):
                raise PosetError(f"element {i} covers unknown id {c}")
            if ranks[c] != ranks[i] - 1:
                raise PosetError(f"cover {i} -> {c} is not graded")
    S = SimplicialPoset(ranks, vsets, covers, name=name)
    _validate_or_raise(S)
    return S


def _validate_or_raise(S: SimplicialPoset):
    diag = validate(S)
    if not diag.ok:
        raise PosetError("; ".join(diag.messages))


def validate(S: SimplicialPoset) -> PosetDiagnostics:
    """Check the simplicial poset axioms and report purity and dimension."""
    msgs = []
    if S.size == 0 or S.ranks[0] != 0 or S.vertex_sets[0] != ():
        msgs.append("missing empty face at id 0")
        return PosetDiagnostics(False, False, -2, msgs)
    if sum(1 for r in S.ranks if r == 0) != 1:
        msgs.append("more than one rank-0 element")
    for i in range(S.size):
        if len(S.vertex_sets[i]) != S.ranks[i]:
            msgs.append(f"element {i}: |vertex_set| != rank")
        for c in S.covers[i]:
            if S.ranks[c] != S.ranks[i] - 1:
                msgs.append(f"cover {i} -> {c} not graded")
            if not set(S.vertex_sets[c]) < set(S.vertex_sets[i]):
                msgs.append(f"cover {i} -> {c}: vertex set does not grow")
        if S.ranks[i] > 0 and not S.covers[i]:
            msgs.append(f"element {i} of positive rank covers nothing")
    if msgs:
        return PosetDiagnostics(False, S.is_pure(), S.dim, msgs)
    # boolean lower intervals: 2^|I| elements, one per sub-vertex-set
    for i in range(S.size):
        want = 1 << S.ranks[i]
        got = S.below[i]
        if len(got) != want:
            msgs.append(f"element {i}: lower interval has {len(got)} elements, "
                        f"expected {want} (not boolean)")
            continue
        seen = {S.vertex_sets[j] for j in got}
        expected = {tuple(sorted(c)) for k in range(S.ranks[i] + 1)
                    for c in combinations(S.vertex_sets[i], k)}
        if seen != expected:
            msgs.append(f"element {i}: lower interval misses some sub-vertex-sets")
    # square condition: exactly two intermediates for every I <_2 J
    for j in range(S.size):
        if S.ranks[j] < 2:
            continue
        for i in S.below[j]:
            if S.ranks[i] != S.ranks[j] - 2:
                continue
            mids = [t for t in S.below[j] if S.ranks[t] == S.ranks[j] - 1 and S.leq(i, t)]
            if len(mids) != 2:
                msgs.append(f"pair {i} <2 {j} has {len(mids)} intermediates, expected 2")
    ok = not msgs
    return PosetDiagnostics(ok, S.is_pure(), S.dim, msgs)


def incidence_number(S: SimplicialPoset, j: int, i: int) -> int:
    """Sign [J:I] for a cover relation I <_1 J.

    Convention: with vertex_set(J) = vertex_set(I) + {v}, the sign is
    (-1)^(number of vertices of J smaller than v).  It depends only on the
    vertex sets, so parallel faces get equal signs, and the square identity
    holds on every I <_2 J.
    """
    if i not in S.covers[j]:
        raise PosetError(f"{i} is not covered by {j}")
    added = set(S.vertex_sets[j]) - set(S.vertex_sets[i])
    if len(added) != 1:
        raise PosetError(f"cover {j} -> {i} adds {len(added)} vertices")
    v = added.pop()
    k = sum(1 for w in S.vertex_sets[j] if w < v)
    return -1 if k % 2 else 1


def link(S: SimplicialPoset, i: int) -> SimplicialPoset:
    """The upper set {J >= I} regraded with I as its empty face.

    Vertices of the link are the atoms (covers of I); each J >= I is
    relabeled by the set of atoms below it.  `source_ids` maps link ids
    back to ids of S.
    """
    members = sorted(S.upper_set(i), key=lambda j: (S.ranks[j], S.vertex_sets[j], j))
    newid = {j: k for k, j in enumerate(members)}
    atoms = [j for j in members if S.ranks[j] == S.ranks[i] + 1]
    atom_label = {a: t + 1 for t, a in enumerate(atoms)}
    base = S.ranks[i]
    ranks = [S.ranks[j] - base for j in members]
    vsets = []
    for j in members:
        labels = sorted(atom_label[a] for a in atoms if S.leq(a, j))
        vsets.append(tuple(labels))
    covers = []
    for j in members:
        cs = [newid[c] for c in S.covers[j] if S.leq(i, c)]
        covers.append(tuple(sorted(cs)))
    L = SimplicialPoset(ranks, vsets, covers, name=f"lk({S.name or 'S'},{i})",
                        source_ids=tuple(members))
    return L


def complement_of_link(S: SimplicialPoset, j: int) -> SubposetMask:
    """Mask of S minus the upper set of j; always downward closed."""
    if j == 0:
        raise PosetError("complement of lk(empty face) is empty")
    member = [not S.leq(j, i) for i in range(S.size)]
    mask = SubposetMask(member, True)
    assert mask_is_closed_downward(S, mask)
    return mask


def mask_is_closed_downward(S: SimplicialPoset, mask: SubposetMask) -> bool:
    for j in range(S.size):
        if mask.member[j]:
            if any(not mask.member[c] for c in S.covers[j]):
                return False
    return True


def face_counts(S: SimplicialPoset):
    """f-vector (f_-1, f_0, ..., f_{n-1}); rejects non-pure posets."""
    if not S.is_pure():
        raise PosetError("face_counts requires a pure poset")
    n = S.n
    return tuple(len(S.elements_of_rank(r)) for r in range(n + 1))


# ---------------------------------------------------------------------------
# presets

def preset(name: str) -> SimplicialPoset:
    """Named example posets: boundary_of_simplex(n), cross_polytope_boundary(n),
    digon_cycle(c), torus_7."""
    key, arg = _parse_preset(name)
    if key == "boundary_of_simplex":
        if arg is None or arg < 1:
            raise PosetError("boundary_of_simplex needs n >= 1")
        verts = range(1, arg + 2)
        return build_from_facets([c for c in combinations(verts, arg)], name=name)
    if key == "cross_polytope_boundary":
        if arg is None or arg < 1:
            raise PosetError("cross_polytope_boundary needs n >= 1")
        pairs = [(i, i + arg) for i in range(1, arg + 1)]
        facets = []
        for choice in range(1 << arg):
            facets.append(tuple(p[(choice >> k) & 1] for k, p in enumerate(pairs)))
        return build_from_facets(facets, name=name)
    if key == "digon_cycle":
        if arg is None or arg < 1:
            raise PosetError("digon_cycle needs c >= 1")
        return _digon_cycle(arg, name=name)
    if key == "torus_7":
        return build_from_facets(torus_7_facets(), name=name)
    raise PosetError(f"unknown preset {name!r}")


def _parse_preset(name: str):
    s = name.strip()
    if "(" in s:
        if not s.endswith(")"):
            raise PosetError(f"malformed preset {name!r}")
        key, argtxt = s[:-1].split("(", 1)
        try:
            return key.strip(), int(argtxt)
        except ValueError:
            raise PosetError(f"malformed preset argument in {name!r}") from None
    return s, None


def _digon_cycle(c: int, name="") -> SimplicialPoset:
    # c disjoint digons: vertices (2k-1, 2k) joined by two parallel edges
    entries = [(0, 0, (), ())]
    nid = 1
    vid = {}
    for k in range(1, c + 1):
        for v in (2 * k - 1, 2 * k):
            vid[v] = nid
            entries.append((nid, 1, (v,), (0,)))
            nid += 1
    for k in range(1, c + 1):
        a, b = 2 * k - 1, 2 * k
        for _ in range(2):
            entries.append((nid, 2, (a, b), (vid[a], vid[b])))
            nid += 1
    return build_from_cover_table(entries, name=name or f"digon_cycle({c})")


def torus_7_facets():
    """The 7-vertex (neighborly) triangulation of the torus."""
    tris = set()
    for s in range(7):
        tris.add(tuple(sorted(((0 + s) % 7 + 1, (1 + s) % 7 + 1, (3 + s) % 7 + 1))))
        tris.add(tuple(sorted(((0 + s) % 7 + 1, (2 + s) % 7 + 1, (3 + s) % 7 + 1))))
    return sorted(tris)
