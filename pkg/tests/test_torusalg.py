import itertools

import pytest

from torushom.field import QQ, PrimeField
from torushom.poset import preset, build_from_facets, PosetError
from torushom.fixtures import preset_charmap
from torushom.torusalg import (
    ExteriorAlgebra, CharacteristicMap, validate_charmap, coefficient_CAI,
    TorusSheafKit, keylemma_check, duality_check, les_duality_check,
)
from torushom.sheaves import sheaf_cohomology, cosheaf_homology

FIXTURES = ["boundary_of_simplex(2)", "boundary_of_simplex(3)",
            "cross_polytope_boundary(3)", "torus_7", "digon_cycle(2)"]


def fields_for(name):
    # torus_7 admits no map over F2 (proved in test_no_f2_charmap_for_torus_7)
    if name == "torus_7":
        return [QQ, PrimeField(3)]
    return [QQ, PrimeField(2), PrimeField(3)]


def test_exterior_dims_and_signs():
    ext = ExteriorAlgebra(4, QQ)
    assert [ext.dim(q) for q in range(5)] == [1, 4, 6, 4, 1]
    assert ext.shuffle_sign((1,), (2,)) == 1
    assert ext.shuffle_sign((2,), (1,)) == -1
    assert ext.shuffle_sign((1,), (1,)) == 0
    assert ext.wedge_basis((1, 3), (2,)) == (-1, (1, 2, 3))


def test_exterior_wedge_anticommutes():
    ext = ExteriorAlgebra(3, QQ)
    e1 = ext.one_form([QQ(1), QQ(0), QQ(0)])
    e2 = ext.one_form([QQ(0), QQ(1), QQ(0)])
    w12 = ext.wedge(1, e1, 1, e2)
    w21 = ext.wedge(1, e2, 1, e1)
    assert w12 == [QQ.neg(v) for v in w21]
    assert all(QQ.is_zero(v) for v in ext.wedge(1, e1, 1, e1))


def test_validate_charmap_triangle():
    S = preset("boundary_of_simplex(2)")
    rep = validate_charmap(S, preset_charmap("boundary_of_simplex(2)"), QQ)
    assert rep.ok_field and rep.ok_integral


def test_validate_charmap_edge_fails_over_z():
    S = build_from_facets([(1, 2)])
    cm = CharacteristicMap(2, {1: (1, 0), 2: (1, 2)})
    rep = validate_charmap(S, cm, QQ)
    assert rep.ok_field and not rep.ok_integral
    (elem, inv), = rep.integral_failures
    assert list(inv) == [1, 2]
    rep2 = validate_charmap(S, cm, PrimeField(2))
    assert not rep2.ok_field


def test_validate_charmap_digon_over_z():
    S = preset("digon_cycle(2)")
    rep = validate_charmap(S, preset_charmap("digon_cycle(2)"), QQ)
    assert rep.ok_field and rep.ok_integral


def test_torus7_charmap_fields():
    S = preset("torus_7")
    cm = preset_charmap("torus_7")
    assert validate_charmap(S, cm, QQ).ok_field
    assert validate_charmap(S, cm, PrimeField(3)).ok_field
    assert validate_charmap(S, cm, PrimeField(5)).ok_field
    assert not validate_charmap(S, cm, PrimeField(2)).ok_field
    assert not validate_charmap(S, cm, QQ).ok_integral


def test_no_f2_charmap_for_torus_7():
    # over F2 a valid map must label the 7 vertices bijectively by the
    # nonzero vectors of F2^3 (all vertex pairs are edges), avoiding
    # dependent triples on all 14 triangles; exhaustive search: impossible
    from torushom.poset import torus_7_facets
    tris = torus_7_facets()
    pts = [v for v in itertools.product((0, 1), repeat=3) if any(v)]
    found = False
    for perm in itertools.permutations(pts):
        om = {i + 1: perm[i] for i in range(7)}
        if all(tuple(a ^ b for a, b in zip(om[t[0]], om[t[1]])) != om[t[2]]
               for t in tris):
            found = True
            break
    assert not found


def test_charmap_missing_vertex_rejected():
    S = preset("boundary_of_simplex(2)")
    with pytest.raises(PosetError):
        validate_charmap(S, CharacteristicMap(2, {1: (1, 0), 2: (0, 1)}), QQ)


def test_ideal_sheaf_dimensions():
    # quotient stalk dimensions are C(n - |I|, q) for every face
    for name in ["boundary_of_simplex(2)", "torus_7", "digon_cycle(2)"]:
        S = preset(name)
        kit = TorusSheafKit(S, preset_charmap(name), QQ)
        n = kit.n
        from torushom.facevec import binom
        for q in range(n + 1):
            ideal = kit.ideal_sheaf(q)
            quot = kit.quotient_sheaf(q)
            for e in range(S.size):
                k = S.ranks[e]
                assert quot.stalk_dims[e] == binom(n - k, q), (name, e, q)
                assert ideal.stalk_dims[e] == binom(n, q) - binom(n - k, q)
        assert kit.ideal_sheaf(1).stalk_dims[0] == 0
        assert kit.quotient_sheaf(1).stalk_dims[0] == n


def test_ideal_sheaf_vertex_example():
    # one vertex with direction e1 in rank 2: ideal dims (0,1,1), quotient (1,1,0)
    S = build_from_facets([(1,)])
    kit = TorusSheafKit(S, CharacteristicMap(2, {1: (1, 0)}), QQ)
    v = S.vertices()[0]
    assert [kit.ideal_sheaf(q).stalk_dims[v] for q in range(3)] == [0, 1, 1]
    assert [kit.quotient_sheaf(q).stalk_dims[v] for q in range(3)] == [1, 1, 0]


def test_pi_cosheaf_dimensions():
    for name in ["boundary_of_simplex(2)", "torus_7"]:
        S = preset(name)
        kit = TorusSheafKit(S, preset_charmap(name), QQ)
        from torushom.facevec import binom
        for q in range(kit.n + 1):
            pi = kit.pi_cosheaf(q)
            for e in range(1, S.size):
                k = S.ranks[e]
                want = binom(kit.n - k, q - k) if q >= k else 0
                assert pi.stalk_dims[e] == want
                # vanishing at and below the face dimension
                if q <= k - 1:
                    assert pi.stalk_dims[e] == 0


def test_pi_form_nonzero_everywhere():
    for name in FIXTURES:
        S = preset(name)
        kit = TorusSheafKit(S, preset_charmap(name), QQ)
        for e in range(1, S.size):
            vec = kit.pi_form(e)
            assert any(not QQ.is_zero(v) for v in vec)


def test_coefficient_cai_examples():
    cm = CharacteristicMap(2, {1: (1, 0)})
    assert coefficient_CAI(cm, QQ, (1,), (1,)) == 0
    assert coefficient_CAI(cm, QQ, (1,), (2,)) in (QQ(1), QQ(-1))
    cm2 = CharacteristicMap(2, {1: (1, 0), 2: (0, 1)})
    assert coefficient_CAI(cm2, QQ, (1, 2), ()) in (QQ(1), QQ(-1))
    with pytest.raises(ValueError):
        coefficient_CAI(cm2, QQ, (1,), ())


def test_cai_matches_quotient_class_up_to_unit():
    # on faces of corank q the determinant coefficients are one consistent
    # unit away from the quotient-basis coordinates
    for name in ["boundary_of_simplex(2)", "torus_7"]:
        S = preset(name)
        kit = TorusSheafKit(S, preset_charmap(name), QQ)
        n = kit.n
        for e in range(1, S.size):
            q = n - S.ranks[e]
            if kit.quotient_sheaf(q).stalk_dims[e] != 1:
                continue
            unit = None
            for A in kit.ext.subsets(q):
                vec = [QQ.zero] * kit.ext.dim(q)
                vec[kit.ext.index(A)] = QQ.one
                cls = kit.quotient_class(e, q, vec)[0]
                cai = coefficient_CAI(kit.cmap, QQ, S.vertex_sets[e], A)
                if QQ.is_zero(cai):
                    assert QQ.is_zero(cls)
                    continue
                ratio = QQ.div(cls, cai)
                if unit is None:
                    unit = ratio
                assert ratio == unit, (name, e, A)


def test_keylemma_all_fixtures_all_fields():
    for name in FIXTURES:
        S = preset(name)
        cm = preset_charmap(name)
        for F in fields_for(name):
            rep = keylemma_check(S, cm, F)
            assert rep.passed, (name, F, rep.violations)
            n = cm.n
            assert all(rep.table[(i, 0)] == 0 for i in range(S.n))


def test_keylemma_triangle_values():
    S = preset("boundary_of_simplex(2)")
    rep = keylemma_check(S, preset_charmap("boundary_of_simplex(2)"), QQ)
    assert rep.table[(1, 1)] == 3
    assert rep.table[(0, 1)] == 0


def test_duality_all_fixtures_all_fields():
    for name in FIXTURES:
        S = preset(name)
        cm = preset_charmap(name)
        for F in fields_for(name):
            rep = duality_check(S, cm, F)
            assert rep.passed, (name, F)


def test_duality_vanishes_beyond_top_grading():
    S = preset("boundary_of_simplex(2)")
    kit = TorusSheafKit(S, preset_charmap("boundary_of_simplex(2)"), QQ)
    # degree above the torus rank: both sides identically zero
    q = kit.n
    coh = sheaf_cohomology(kit.structure_tensor_ideal(q), truncated=True)
    hom = cosheaf_homology(kit.pi_cosheaf(q))
    assert coh.dims.get(0, 0) == hom.dims.get(S.n - 1, 0)


def test_torus_rank_larger_than_poset_rank():
    # a 3-torus over the circle: vanishing range still uses the poset rank
    S = preset("boundary_of_simplex(2)")
    cm = CharacteristicMap(3, {1: (1, 0, 0), 2: (0, 1, 0), 3: (1, 1, 1)})
    assert validate_charmap(S, cm, QQ).ok_field
    rep = keylemma_check(S, cm, QQ)
    assert rep.passed, rep.violations
    assert max(q for (_, q) in rep.table) == 3
    assert duality_check(S, cm, QQ).passed
    assert les_duality_check(S, cm, QQ).passed
    from torushom.specseq import e2_border_sheaf_crosscheck
    with pytest.raises(PosetError):
        e2_border_sheaf_crosscheck(S, cm, QQ)
    from torushom.facering import relation_system
    with pytest.raises(PosetError):
        relation_system(S, cm, QQ)


def test_charmap_rank_below_poset_rank_rejected():
    S = preset("boundary_of_simplex(3)")
    with pytest.raises(PosetError):
        validate_charmap(S, CharacteristicMap(2, {1: (1, 0), 2: (0, 1),
                                                  3: (1, 1), 4: (1, 2)}), QQ)


def test_les_duality_all_fixtures():
    for name in FIXTURES:
        S = preset(name)
        cm = preset_charmap(name)
        for F in fields_for(name):
            rep = les_duality_check(S, cm, F)
            assert rep.passed, (name, F)
            assert rep.sheaf_rows == rep.cosheaf_rows
