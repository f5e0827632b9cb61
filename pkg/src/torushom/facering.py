"""Additive structure of the face ring modulo a linear system of parameters.

The degree-q generators are the faces of corank q, with stalk orientations
trivialized by the structure sheaf; relations come in two kinds.  The
first kind pairs every face one rank down with a subset of torus
coordinates through incidence signs and determinant coefficients; the
second kind pairs cocycle representatives of the connecting images with
the same coefficients.  All outputs are ranks and explicit kernel
vectors, never ring elements: the ring structure itself is out of scope.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dfield
from itertools import combinations

from .exactlin import Matrix, IncrementalSpan
from .poset import SimplicialPoset, PosetError, incidence_number
from .complexes import classify
from .sheaves import standard_sheaf, constancy_check, cochain_complex
from .specseq import ManifoldProfile, cone_profile
from .torusalg import CharacteristicMap, validate_charmap, coefficient_CAI


class _TrivializedComplex:
    """Cochain complex of the trivialized structure sheaf (constant values),
    plus the pairing evaluating top cochains against point classes."""

    def __init__(self, S: SimplicialPoset, field, orientation):
        self.S = S
        self.field = field
        self.orientation = orientation
        sheaf = standard_sheaf(S, field, "constant", dim=1, check=False)
        self.cx = cochain_complex(sheaf, truncated=True)

    def elements(self, degree):
        return self.cx.labels[degree]

    def cocycles(self, degree):
        d = self.cx.d(degree)
        if d is None:
            n = self.cx.dim(degree)
            return [[self.field.one if i == j else self.field.zero for j in range(n)]
                    for i in range(n)]
        return d.kernel_basis()

    def coboundaries(self, degree):
        d = self.cx.d(degree - 1)
        if d is None:
            return []
        _, piv = d.rref()
        return [d.column(j) for j in piv]

    def point_pairing(self, vec):
        """Augmentation of a top cochain: orientation-weighted coefficient sum."""
        F = self.field
        total = F.zero
        for k, e in enumerate(self.elements(self.S.n - 1)):
            total = F.add(total, F.mul(self.orientation[e], vec[k]))
        return total


@dataclass
class RelationSystem:
    field: object
    n: int
    poset: SimplicialPoset
    cmap: CharacteristicMap
    generators: dict            # q -> list of generator labels
    type1: dict                 # q -> list of rows (vectors over the generators)
    type2: dict | None          # q -> list of (class_index, A, row); None if unavailable
    type2_cocycles: dict = dfield(default_factory=dict)   # q -> representative cocycles
    type2_reason: str = ""
    orientation: dict | None = None
    sgn_flips: frozenset = frozenset()

    def generator_count(self, q):
        return len(self.generators.get(q, []))

    def generator_index(self, q):
        return {g: k for k, g in enumerate(self.generators[q])}

    def type1_rows(self, q):
        return self.type1.get(q, [])

    def type2_rows(self, q):
        if self.type2 is None:
            raise PosetError("second-kind relations unavailable: " + self.type2_reason)
        return [row for (_, _, row) in self.type2.get(q, [])]

    def cai(self, vertex_labels, A):
        c = coefficient_CAI(self.cmap, self.field, vertex_labels, A)
        if tuple(A) in self.sgn_flips:
            c = self.field.neg(c)
        return c

    def row_from_cocycle(self, q, z, A, elems):
        """Relation row attached to a degree-q cocycle and a subset A."""
        field = self.field
        gi = self.generator_index(q)
        row = [field.zero] * self.generator_count(q)
        for k, e in enumerate(elems):
            if field.is_zero(z[k]):
                continue
            row[gi[("f", e)]] = field.mul(z[k], self.cai(self.poset.vertex_sets[e], A))
        return row

    def as_dict(self):
        def rows_out(rows):
            return [[str(v) for v in r] for r in rows]
        out = {"n": self.n,
               "generators": {str(q): [list(map(str, g)) for g in gs]
                              for q, gs in sorted(self.generators.items())},
               "type1": {str(q): rows_out(rs) for q, rs in sorted(self.type1.items())}}
        if self.type2 is not None:
            out["type2"] = {str(q): rows_out([r for (_, _, r) in rs])
                            for q, rs in sorted(self.type2.items())}
        return out


def relation_system(S: SimplicialPoset, cmap: CharacteristicMap, field,
                    profile: ManifoldProfile | None = None,
                    sgn_flips=frozenset(), flip_orientation: bool = False) -> RelationSystem:
    """Assemble generators and both relation matrices.

    Requires an orientable homology manifold over the active field and a
    characteristic map of rank equal to the poset rank.  Second-kind rows
    need the cone profile: a user profile does not determine which classes
    the connecting maps hit, so for user profiles only the first kind is
    built and the second is marked unavailable.

    `sgn_flips` negates the determinant coefficient of the listed subsets
    and `flip_orientation` negates every trivialization unit; both leave
    all ranks invariant and exist exactly so tests can assert that.
    """
    n = S.n
    if cmap.n != n:
        raise PosetError("face ring needs torus rank equal to the poset rank")
    if not classify(S, field).buchsbaum:
        raise PosetError("poset is not Buchsbaum over the active field")
    rep = validate_charmap(S, cmap, field)
    if not rep.ok_field:
        raise PosetError(f"characteristic map invalid on faces {rep.field_failures}")
    structure = standard_sheaf(S, field, "structure", include_empty=True)
    cons = constancy_check(structure)
    if not cons.is_constant:
        raise PosetError("structure sheaf is not constant: " + (cons.witness or ""))
    orientation = dict(cons.orientation)
    if flip_orientation:
        orientation = {k: field.neg(v) for k, v in orientation.items()}
    if profile is None:
        profile = cone_profile(S, field)
    sgn_flips = frozenset(tuple(sorted(a)) for a in sgn_flips)

    subsets = {q: [tuple(c) for c in combinations(range(1, n + 1), q)]
               for q in range(n + 1)}
    generators = {}
    for q in range(n + 1):
        if q < n:
            generators[q] = [("f", e) for e in S.elements_of_rank(n - q)]
        else:
            generators[q] = [("e", m) for m in range(structure.stalk_dims[0])]

    system = RelationSystem(field, n, S, cmap, generators, {}, None,
                            orientation=orientation, sgn_flips=sgn_flips)

    type1 = {q: [] for q in range(n + 1)}
    for q in range(n):
        gi = system.generator_index(q)
        width = len(generators[q])
        for j in S.elements_of_rank(n - q - 1):
            if j == 0:
                for m in range(structure.stalk_dims[0]):
                    for A in subsets[q]:
                        row = [field.zero] * width
                        for v in S.covered_by[0]:
                            c = structure.rest[(0, v)].rows[0][m]
                            g = field.div(c, orientation[v])
                            row[gi[("f", v)]] = field.mul(
                                g, system.cai(S.vertex_sets[v], A))
                        type1[q].append(row)
            else:
                for A in subsets[q]:
                    row = [field.zero] * width
                    for i in S.covered_by[j]:
                        sign = field(incidence_number(S, i, j))
                        row[gi[("f", i)]] = field.mul(
                            sign, system.cai(S.vertex_sets[i], A))
                    type1[q].append(row)
    system.type1 = type1

    if profile.source != "cone":
        system.type2_reason = ("second-kind rows are determined by the cone "
                               "profile only")
        return system

    triv = _TrivializedComplex(S, field, orientation)
    type2 = {}
    cocycles_kept = {}
    for q in range(max(n - 1, 0)):
        degree = n - 1 - q
        cocycles = triv.cocycles(degree)
        if q == 0:
            kept = _pairing_kernel(field, triv, cocycles)
        else:
            kept = cocycles
        span = IncrementalSpan(field, triv.cx.dim(degree))
        for b in triv.coboundaries(degree):
            span.add(b)
        reps = [z for z in kept if span.add(z)]
        expected = profile.rank_delta[q]
        if len(reps) != expected:
            raise PosetError(f"degree {q}: found {len(reps)} connecting classes, "
                             f"profile says {expected}")
        if not reps:
            continue
        elems = triv.elements(degree)
        rows = []
        for ci, z in enumerate(reps):
            for A in subsets[q]:
                rows.append((ci, A, system.row_from_cocycle(q, z, A, elems)))
        type2[q] = rows
        cocycles_kept[q] = reps
    system.type2 = type2
    system.type2_cocycles = cocycles_kept
    return system


def _pairing_kernel(field, triv, cocycles):
    """Cocycles whose orientation-weighted point pairing vanishes."""
    if not cocycles:
        return []
    pair = [triv.point_pairing(z) for z in cocycles]
    rows = Matrix(field, [pair], len(cocycles))
    kernel = rows.kernel_basis()
    out = []
    width = len(cocycles[0])
    for coeffs in kernel:
        vec = [field.zero] * width
        for c, z in zip(coeffs, cocycles):
            if field.is_zero(c):
                continue
            vec = [field.add(a, field.mul(c, b)) for a, b in zip(vec, z)]
        out.append(vec)
    return out


def graded_quotient_rank(R: RelationSystem, include_type2: bool) -> dict:
    """Generator count modulo the relation rows, per degree."""
    out = {}
    for q in range(R.n + 1):
        rows = list(R.type1_rows(q))
        if include_type2:
            if R.type2 is None:
                raise PosetError("second-kind relations unavailable: " + R.type2_reason)
            rows += R.type2_rows(q)
        count = R.generator_count(q)
        rank = Matrix(R.field, rows, count).rank() if rows else 0
        out[q] = count - rank
    return out


@dataclass
class KernelGenerators:
    per_degree: dict           # q -> list of (class_index, A, residual vector)
    independent: bool
    representative_stable: bool

    def count(self):
        return sum(len(v) for v in self.per_degree.values())

    def as_dict(self):
        return {"count": self.count(), "independent": self.independent,
                "representative_stable": self.representative_stable,
                "per_degree": {str(q): [[ci, list(A), [str(v) for v in row]]
                                        for ci, A, row in rows]
                               for q, rows in sorted(self.per_degree.items())}}


def kernel_generators(R: RelationSystem) -> KernelGenerators:
    """Second-kind rows expressed in the first-kind quotient.

    Each row is reduced against the span of the first-kind rows; the
    reduced vector is supported on the quotient basis (the non-pivot
    generators).  Verifies that perturbing every representing cocycle by
    every coboundary generator leaves the reduced vectors exactly
    unchanged, and that the whole family is linearly independent.
    """
    if R.type2 is None:
        raise PosetError("second-kind relations unavailable: " + R.type2_reason)
    field = R.field
    S = R.poset
    triv = _TrivializedComplex(S, field, R.orientation)
    per_degree = {}
    independent = True
    stable = True
    all_residuals_rank = 0
    total = 0
    for q, rows in sorted(R.type2.items()):
        width = R.generator_count(q)
        t1span = IncrementalSpan(field, width)
        for r in R.type1_rows(q):
            t1span.add(r)
        reduced = [(ci, A, t1span.reduce(row)) for ci, A, row in rows]
        per_degree[q] = reduced
        stack = Matrix(field, [r for (_, _, r) in reduced], width)
        rk = stack.rank()
        all_residuals_rank += rk
        total += len(reduced)
        if rk != len(reduced):
            independent = False
        degree = R.n - 1 - q
        elems = triv.elements(degree)
        cbs = triv.coboundaries(degree)
        subsets = sorted({A for (_, A, _) in rows})
        for ci, z in enumerate(R.type2_cocycles.get(q, [])):
            for cb in cbs:
                zp = [field.add(a, b) for a, b in zip(z, cb)]
                for A in subsets:
                    rowp = R.row_from_cocycle(q, zp, A, elems)
                    base = next(r for (c2, A2, r) in reduced
                                if c2 == ci and A2 == A)
                    if t1span.reduce(rowp) != base:
                        stable = False
    return KernelGenerators(per_degree, independent and all_residuals_rank == total,
                            stable)
