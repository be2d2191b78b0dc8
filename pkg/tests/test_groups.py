import pytest
from hypothesis import given, settings, strategies as st

from graphprod.exceptions import CapExceeded
from graphprod.groups import (Action, ActionIso, CosetSpace, InfiniteCyclic, InfiniteDihedral,
                              PresetSubgroup, check_action_iso, core, coset_action,
                              cyclic, dihedral, find_action_iso, format_cycles, klein,
                              make_group, parse_cycles, perm_inv, perm_mul, preset, symmetric)


def test_make_group_orders():
    assert make_group(1, []).order == 1
    assert make_group(3, ["(0 1 2)", "(0 1)"]).order == 6
    assert make_group(4, ["(0 1 2 3)"]).order == 4


def test_make_group_rejects_bad_permutation():
    with pytest.raises(ValueError):
        make_group(3, [(0, 0, 1)])
    with pytest.raises(ValueError):
        parse_cycles("(0 5)", 3)


def test_order_cap():
    with pytest.raises(CapExceeded):
        make_group(6, ["(0 1)", "(0 1 2 3 4 5)"], cap=100)


def test_cycle_round_trip():
    p = parse_cycles("(0 2)(1 3 4)", 5)
    assert format_cycles(p) == "(0 2)(1 3 4)"
    assert format_cycles(tuple(range(4))) == "()"


def test_composition_convention():
    # mul(p, q)[x] == p[q[x]]
    p, q = parse_cycles("(0 1)", 3), parse_cycles("(1 2)", 3)
    assert perm_mul(p, q) == tuple(p[q[x]] for x in range(3))


def test_coset_space_examples():
    Z4 = cyclic(4)
    X = CosetSpace(Z4, Z4.trivial_subgroup())
    assert len(X) == 4
    assert sorted(X.permutation(Z4.generators[0])) == [0, 1, 2, 3]
    S3 = symmetric(3)
    assert len(CosetSpace(S3, S3.subgroup([parse_cycles("(0 1)", 3)]))) == 3
    D5 = dihedral(5)
    rot = D5.mul(D5.generators[0], D5.generators[1])
    assert len(CosetSpace(D5, D5.subgroup([rot]))) == 2


def test_coset_space_identity_first():
    S3 = symmetric(3)
    X = CosetSpace(S3, S3.subgroup([S3.generators[1]]))
    assert X.points[0] == S3.identity
    assert X.point_of(S3.generators[1]) == 0


def test_core_examples():
    S3 = symmetric(3)
    assert core(S3, S3.trivial_subgroup()).is_trivial
    assert core(S3, S3.subgroup([parse_cycles("(0 1)", 3)])).is_trivial
    Z4 = cyclic(4)
    g2 = Z4.power(Z4.generators[0], 2)
    N = core(Z4, Z4.subgroup([g2]))
    assert N.element_set == {Z4.identity, g2}


def test_check_action_iso_examples():
    Z4, K = cyclic(4), klein()
    g2 = Z4.power(Z4.generators[0], 2)
    H, Hs = Z4.subgroup([g2]), K.subgroup([K.generators[0]])
    # Z_2 acting on Z_4 / Z_2 and on K / Z_2: both are the swap of two points
    act = coset_action(H, CosetSpace(Z4, Z4.subgroup([Z4.generators[0]])))
    assert act.size == 1
    act = Action(H, 2, lambda h, x: x if h == Z4.identity else 1 - x)
    act_s = Action(Hs, 2, lambda h, x: x if h == K.identity else 1 - x)
    assert check_action_iso(act, act_s, ActionIso(tuple(Hs.generators), (0, 1))) == (True, None)
    assert check_action_iso(act, act_s, ActionIso(tuple(Hs.generators), (1, 0)))[0]


def test_check_action_iso_regular_vs_trivial():
    Z3 = cyclic(3)
    regular = coset_action(Z3, CosetSpace(Z3, Z3.trivial_subgroup()))
    trivial = Action(Z3, 3, lambda g, x: x)
    ok, why = check_action_iso(regular, trivial, ActionIso(tuple(Z3.generators), (0, 1, 2)))
    assert not ok and "equivariance" in why


def test_check_action_iso_size_mismatch():
    Z2, Z3 = cyclic(2), cyclic(3)
    a = coset_action(Z2, CosetSpace(Z2, Z2.trivial_subgroup()))
    b = coset_action(Z3, CosetSpace(Z3, Z3.trivial_subgroup()))
    ok, why = check_action_iso(a, b, ActionIso(tuple(Z3.generators), (0, 1)))
    assert not ok and "size" in why


def test_find_action_iso_examples():
    Z4, K = cyclic(4), klein()
    g2 = Z4.power(Z4.generators[0], 2)
    H, Hs = Z4.subgroup([g2]), K.subgroup([K.generators[0]])
    a = coset_action(H, CosetSpace(Z4, Z4.trivial_subgroup()))
    b = coset_action(Hs, CosetSpace(K, K.trivial_subgroup()))
    iso = find_action_iso(a, b)
    assert iso is not None and check_action_iso(a, b, iso)[0]
    same = find_action_iso(a, a)
    assert same is not None and check_action_iso(a, a, same)[0]
    Z2 = cyclic(2)
    swap = coset_action(Z2, CosetSpace(Z2, Z2.trivial_subgroup()))
    fixed = Action(Z2, 2, lambda g, x: x)
    assert find_action_iso(swap, fixed) is None


def test_find_action_iso_cap():
    S4 = symmetric(4)
    a = coset_action(S4, CosetSpace(S4, S4.trivial_subgroup()))
    with pytest.raises(CapExceeded):
        find_action_iso(a, a)


def test_dinfty_translation_has_infinite_order():
    D = InfiniteDihedral()
    st_ = D.mul(*D.generators)
    powers = [D.power(st_, k) for k in range(101)]
    assert len(set(powers)) == 101


def test_dinfty_laws():
    D = InfiniteDihedral()
    s, t = D.generators
    assert D.mul(s, s) == D.identity == D.mul(t, t)
    assert D.word_of(D.mul(s, t)) == [("s", 1), ("t", 1)]
    for g in [(3, 0), (-2, 1), (0, 1), (5, 1)]:
        assert D.evaluate(D.word_of(g)) == g
        assert D.mul(g, D.inv(g)) == D.identity


def test_presets():
    assert preset("cyclic 5").order == 5
    assert preset("dihedral 4").order == 8
    assert preset("symmetric 4").order == 24
    assert preset("klein").order == 4
    assert isinstance(preset("Z"), InfiniteCyclic)
    assert isinstance(preset("Dinfty"), InfiniteDihedral)
    for bad in ["", "cyclic", "foo 3", "z"]:
        with pytest.raises(ValueError):
            preset(bad)


def test_preset_subgroup_indices():
    D = InfiniteDihedral()
    assert D.subgroup([(1, 0)]).index == 2
    assert D.subgroup([(0, 1)]).index is None
    assert D.subgroup([(0, 1), (2, 1)]).index == 2
    assert D.subgroup([(0, 1), (4, 0)]).index == 4
    Z = InfiniteCyclic()
    assert Z.subgroup([6, 4]).index == 2


# ---------------------------------------------------------------------------
# properties


small_groups = st.sampled_from([cyclic(4), cyclic(6), dihedral(4), dihedral(5), symmetric(3),
                                symmetric(4), klein()])


@settings(max_examples=40, deadline=None)
@given(small_groups, st.data())
def test_lagrange_and_left_action(G, data):
    gens = data.draw(st.lists(st.sampled_from(G.elements), max_size=2))
    A = G.subgroup(gens)
    X = CosetSpace(G, A)
    assert len(X) * A.order == G.order
    g = data.draw(st.sampled_from(G.elements))
    h = data.draw(st.sampled_from(G.elements))
    for x in range(len(X)):
        assert X.act(G.identity, x) == x
        assert X.act(G.mul(g, h), x) == X.act(g, X.act(h, x))


@settings(max_examples=40, deadline=None)
@given(small_groups, st.data())
def test_core_is_normal_and_inside(G, data):
    gens = data.draw(st.lists(st.sampled_from(G.elements), max_size=2))
    A = G.subgroup(gens)
    N = core(G, A)
    assert N.element_set <= A.element_set
    for s in G.generators:
        assert {G.mul(G.mul(s, n), perm_inv(s)) for n in N.elements} == N.element_set


@settings(max_examples=30, deadline=None)
@given(small_groups, st.data())
def test_found_iso_respects_orbit_sizes(G, data):
    gens = data.draw(st.lists(st.sampled_from(G.elements), max_size=1))
    A = G.subgroup(gens)
    X = CosetSpace(G, A)
    hg = data.draw(st.lists(st.sampled_from(G.elements), max_size=1))
    H = G.subgroup(hg)
    if H.order > 12 or len(X) > 12:
        return
    a = coset_action(H, X)
    iso = find_action_iso(a, a)
    assert iso is not None
    sizes = sorted(len(o) for o in a.orbits())
    image_sizes = sorted(len({iso.phi[x] for x in o}) for o in a.orbits())
    assert sizes == image_sizes


@settings(max_examples=100, deadline=None)
@given(st.integers(-20, 20), st.integers(0, 1), st.integers(0, 6), st.integers(0, 1),
       st.integers(-5, 5))
def test_preset_coset_representatives(k, e, d, has_refl, c):
    D = InfiniteDihedral()
    gens = [(d, 0)] + ([(c, 1)] if has_refl else [])
    A = PresetSubgroup(D, gens)
    g = (k, e)
    t = A.left_rep(g)
    assert A.contains(D.mul(D.inv(t), g))
    r = A.right_rep(g)
    assert A.contains(D.mul(g, D.inv(r)))
    for a in gens:
        assert A.left_rep(D.mul(g, a)) == t
        assert A.right_rep(D.mul(a, g)) == r
