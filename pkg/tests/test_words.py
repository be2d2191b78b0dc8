import pytest
from hypothesis import given, settings, strategies as st

from conftest import family
from graphprod.exceptions import GraphProdError
from graphprod.graphs import SimpleGraph
from graphprod.groups import InfiniteDihedral, cyclic, klein, symmetric
from graphprod.words import (PairFamily, abelianization, in_clique_subgroup, invert, multiply,
                             normalize, presentation, project_to_product,
                             word_engine_abelianization)


def make(vertices, edges, groups, A=None):
    g = SimpleGraph(vertices, edges)
    G = dict(zip(vertices, groups))
    subs = {v: G[v].subgroup(gens) for v, gens in (A or {}).items()}
    return PairFamily(g, G, subs)


Z2 = cyclic(2)
S3 = symmetric(3)
S3_A = (1, 0, 2)  # the transposition s1


def free_z2():
    return make(["a", "b"], [], [Z2, Z2])


def edge_z2():
    return make(["a", "b"], [("a", "b")], [Z2, Z2])


def s3_pairs():
    return make(["a", "b"], [], [S3, S3], {"a": [S3_A], "b": [S3_A]})


# ---------------------------------------------------------------------------
# presentation


def test_presentation_direct_product():
    pres = presentation(edge_z2())
    assert pres.generators == ["a.g", "b.g"]
    assert pres.to_text() == "generators: a.g b.g\na.g^2\nb.g^2\n[a.g,b.g]\n"
    assert len(pres.all_relators()) == 3


def test_presentation_free_product():
    pres = presentation(free_z2())
    assert pres.commutators == []
    assert abelianization(pres) == [2, 2]


def test_presentation_commutator_rule():
    pres = presentation(s3_pairs())
    pairs = {(s, tuple(w)) for s, w in pres.commutators}
    # every generator commutes with the subgroup generator of the other vertex
    expected = {("a.s1", (("b.s1", 1),)), ("a.s2", (("b.s1", 1),)),
                ("b.s2", (("a.s1", 1),))}
    assert pairs == expected


def test_presentation_json_round_trip():
    pres = presentation(s3_pairs())
    data = pres.to_json()
    assert data["generators"] == ["a.s1", "a.s2", "b.s1", "b.s2"]
    assert [["a.s1", 2]] in data["relators"]


def test_abelianization_examples():
    cyc = make(["a"], [], [Z2])
    assert abelianization(presentation(cyc)) == [2]
    assert abelianization(presentation(free_z2())) == [2, 2]
    assert abelianization(presentation(family("pentagon_z2"))) == [2] * 5
    assert abelianization(presentation(family("pentagon_raag"))) == [0] * 5
    assert abelianization(presentation(s3_pairs())) == [2, 2]


@pytest.mark.parametrize("name", ["free_z2", "complete_z2", "pentagon_z2", "pentagon_z3",
                                  "s3_pairs", "path_s3_z2", "pentagon_raag", "square_dinfty",
                                  "z4_z2_pair"])
def test_abelianization_routes_agree(name):
    F = family(name)
    assert abelianization(presentation(F)) == word_engine_abelianization(F)


# ---------------------------------------------------------------------------
# normal form examples


def test_empty_word():
    F = free_z2()
    assert normalize(F, []) == F.identity
    assert F.identity.is_identity


def test_free_z2_short_words():
    F = free_z2()
    forms = {F.format(x) for x in F.ball(3)}
    assert forms == {"e", "a.g", "b.g", "a.g b.g", "b.g a.g", "a.g b.g a.g", "b.g a.g b.g"}


def test_commuting_letters_sorted():
    F = edge_z2()
    ba = F.parse("b.g a.g")
    assert F.format(ba) == "a.g b.g"
    assert ba == F.parse("a.g b.g")


def test_same_vertex_merge():
    F = make(["a", "b"], [], [cyclic(4), cyclic(4)])
    g = F.parse("a.g")
    assert F.format(multiply(F, g, g)) == "a.g^2"
    assert len(multiply(F, g, g).word) == 1


def test_subgroup_letters_go_to_apart():
    F = s3_pairs()
    b1, a2 = F.parse("a.s2"), F.parse("b.s1")
    x = multiply(F, b1, a2)
    assert [i for i, _ in x.word] == [0]
    assert x.apart[1] == S3_A
    y = multiply(F, b1, F.parse("b.s2"))
    assert [i for i, _ in y.word] == [0, 1]


def test_identity_laws():
    F = s3_pairs()
    x = F.parse("a.s2 b.s2 a.s1")
    assert multiply(F, x, F.identity) == x == multiply(F, F.identity, x)
    assert multiply(F, x, invert(F, x)) == F.identity


def test_projection_examples():
    F = free_z2()
    e = Z2.identity
    assert project_to_product(F, F.identity) == (e, e)
    assert project_to_product(F, F.parse("a.g b.g a.g b.g")) == (e, e)
    G = s3_pairs()
    x = G.normalize([(0, S3_A), (1, S3_A)])
    assert x.word == ()
    assert project_to_product(G, x) == (S3_A, S3_A)


def test_clique_subgroup_examples():
    F = free_z2()
    for S in (0, 1, 2):
        assert in_clique_subgroup(F, F.identity, S)
    G = s3_pairs()
    assert in_clique_subgroup(G, G.normalize([(0, S3_A)]), 0)
    assert not in_clique_subgroup(F, F.parse("a.g b.g"), 1)
    assert in_clique_subgroup(F, F.parse("a.g"), 1)


def test_parse_errors():
    F = free_z2()
    for bad in ["g", "c.g", "a.h", "a.(0 5)"]:
        with pytest.raises(GraphProdError):
            F.parse(bad)


def test_foreign_element_rejected():
    F, G = free_z2(), free_z2()
    with pytest.raises(GraphProdError):
        multiply(F, F.identity, G.identity)


def test_complete_graph_enumerates_the_product():
    F = make(["a", "b"], [("a", "b")], [cyclic(3), S3])
    assert len(F.ball(6)) == 3 * 6


def test_infinite_preset_letters():
    D = InfiniteDihedral()
    F = make(["a", "b"], [], [D, D], {"a": [(0, 1)], "b": [(0, 1)]})
    x = F.parse("a.t a.s")
    assert F.format(F.parse(F.format(x))) == F.format(x)
    assert multiply(F, x, invert(F, x)) == F.identity


# ---------------------------------------------------------------------------
# properties


def shuffle_reduced(F, word):
    for i in range(len(word)):
        for j in range(i + 1, len(word)):
            if word[i][0] == word[j][0]:
                between = [word[k][0] for k in range(i + 1, j)]
                if not any(not F.graph.adjacent(word[i][0], k) for k in between):
                    return False
    return True


FAMILIES = {
    "free_z2": free_z2(),
    "edge_z2": edge_z2(),
    "s3_pairs": s3_pairs(),
    "path": make(["a", "b", "c"], [("a", "b"), ("b", "c")], [S3, Z2, cyclic(4)],
                 {"c": [(2, 3, 0, 1)]}),
    "pentagon_klein": make(["a", "b", "c", "d", "e"],
                           [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")],
                           [klein()] * 5, {v: [(1, 0, 3, 2)] for v in "abcde"}),
}


@st.composite
def raw_words(draw, F, max_size=8):
    n = draw(st.integers(0, max_size))
    out = []
    for _ in range(n):
        i = draw(st.integers(0, F.n - 1))
        out.append((i, draw(st.sampled_from(F.groups[i].elements))))
    return out


families = st.sampled_from(sorted(FAMILIES))


@settings(max_examples=150, deadline=None)
@given(families, st.data())
def test_normal_form_invariants(name, data):
    F = FAMILIES[name]
    x = normalize(F, data.draw(raw_words(F)))
    assert shuffle_reduced(F, x.word)
    assert F._canon(x.word) == x.word
    for i, t in x.word:
        assert t != F.groups[i].identity and t in F.transversal(i)
    for i, a in enumerate(x.apart):
        assert F.subgroups[i].contains(a)
    assert F.parse(F.format(x)) == x


@settings(max_examples=150, deadline=None)
@given(families, st.data())
def test_group_laws(name, data):
    F = FAMILIES[name]
    u, v, w = (data.draw(raw_words(F, 5)) for _ in range(3))
    x, y, z = normalize(F, u), normalize(F, v), normalize(F, w)
    assert normalize(F, u + v) == multiply(F, x, y)
    assert multiply(F, multiply(F, x, y), z) == multiply(F, x, multiply(F, y, z))
    assert multiply(F, x, invert(F, x)) == F.identity
    assert invert(F, invert(F, x)) == x


@settings(max_examples=150, deadline=None)
@given(families, st.data())
def test_projection_is_homomorphism(name, data):
    F = FAMILIES[name]
    x, y = (normalize(F, data.draw(raw_words(F, 6))) for _ in range(2))
    px, py, pxy = F.project(x), F.project(y), F.project(multiply(F, x, y))
    assert pxy == tuple(G.mul(a, b) for G, a, b in zip(F.groups, px, py))


@settings(max_examples=100, deadline=None)
@given(families, st.data())
def test_relations_hold(name, data):
    """Swapping neighbouring letters at adjacent vertices, or moving a
    subgroup letter past a letter of another vertex, gives the same element."""
    F = FAMILIES[name]
    u = data.draw(raw_words(F, 6))
    pos = data.draw(st.integers(0, max(len(u) - 2, 0)))
    if len(u) < 2:
        return
    (i, g), (j, h) = u[pos], u[pos + 1]
    if i == j:
        return
    commute = (F.graph.adjacent(i, j) or F.subgroups[i].contains(g)
               or F.subgroups[j].contains(h))
    if commute:
        swapped = u[:pos] + [u[pos + 1], u[pos]] + u[pos + 2:]
        assert normalize(F, swapped) == normalize(F, u)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_restriction_to_full_subgraph(data):
    F = FAMILIES["path"]
    keep = ["a", "b"]
    sub = F.restrict(keep)
    u, v = (data.draw(raw_words(sub, 5)) for _ in range(2))
    xs, ys = normalize(sub, u), normalize(sub, v)
    lift = {i: F.graph.index[name] for i, name in enumerate(sub.vertices)}
    xf = normalize(F, [(lift[i], g) for i, g in u])
    yf = normalize(F, [(lift[i], g) for i, g in v])
    prod_s, prod_f = multiply(sub, xs, ys), multiply(F, xf, yf)
    assert [(sub.vertices[i], t) for i, t in prod_s.word] == \
        [(F.vertices[i], t) for i, t in prod_f.word]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from([0, 1]), max_size=12))
def test_free_product_matches_dihedral_arithmetic(letters):
    # Z2 * Z2 is D_inf with a -> s, b -> t
    F, D = free_z2(), InfiniteDihedral()
    s, t = D.generators
    x = normalize(F, [(i, (1, 0)) for i in letters])
    d = D.identity
    for i in letters:
        d = D.mul(d, s if i == 0 else t)
    reduced = [i for i, _ in x.word]
    assert all(a != b for a, b in zip(reduced, reduced[1:]))
    e = D.identity
    for i in reduced:
        e = D.mul(e, s if i == 0 else t)
    assert e == d
    assert (x == F.identity) == (d == D.identity)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1), st.integers(1, 2)), max_size=8))
def test_free_product_forms_alternate(letters):
    F = make(["a", "b"], [], [cyclic(3), cyclic(3)])
    x = normalize(F, [(i, F.groups[i].power(F.groups[i].generators[0], k)) for i, k in letters])
    vs = [i for i, _ in x.word]
    assert all(a != b for a, b in zip(vs, vs[1:]))
    assert x.apart == F.identity.apart
