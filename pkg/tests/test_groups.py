import itertools

import pytest
from hypothesis import given, strategies as st

from cglab.errors import ResourceCap, TorsionInput
from cglab.groups import TORSION, FreeGroup, FreeProductCyclic, parse_model


def _classes_by_search(model, radius, conj_radius):
    """Conjugacy classes of the ball, found by conjugating with every short element."""
    ball = model.ball(radius)
    members = set(ball)
    parent = {g: g for g in ball}

    def find(g):
        while parent[g] != g:
            parent[g] = parent[parent[g]]
            g = parent[g]
        return g
    for g in ball:
        for h in model.ball(conj_radius):
            c = model.geodesic_form(model.inverse(h) + g + h)
            if c in members:
                parent[find(c)] = find(g)
    groups = {}
    for g in ball:
        groups.setdefault(find(g), set()).add(g)
    return {frozenset(s) for s in groups.values()}


def _classes_by_key(model, radius):
    groups = {}
    for g in model.ball(radius):
        groups.setdefault(model.conj_key(g), set()).add(g)
    return {frozenset(s) for s in groups.values()}


@pytest.mark.parametrize("descriptor", ["free:2", "zm*zn:2,2", "zm*zn:2,3"])
def test_conj_key_matches_conjugation_search(descriptor):
    model = parse_model(descriptor)
    assert _classes_by_key(model, 3) == _classes_by_search(model, 3, 4)


def test_comm_key_matches_power_search(f2):
    elems = [g for g in f2.ball(3) if g]
    powers = range(1, 4)

    def commensurable(u, v):
        return any(f2.conj_key(f2.power(u, m)) == f2.conj_key(f2.power(v, s * n))
                   for m in powers for n in powers for s in (1, -1))
    for u, v in itertools.combinations(elems, 2):
        assert commensurable(u, v) == (f2.comm_key(u) == f2.comm_key(v)), (u, v)


def test_descriptors():
    assert parse_model("free:3") == FreeGroup(3)
    assert parse_model(" zm*zn:2,3 ").descriptor == "zm*zn:2,3"
    for bad in ("free", "free:x", "z2*z3", "zm*zn:2"):
        with pytest.raises(ValueError):
            parse_model(bad)
    with pytest.raises(ValueError):
        FreeProductCyclic(1, 3)


def test_free_product_tokens():
    assert parse_model("zm*zn:2,3").alphabet.tokens == ("a", "b", "B")
    assert parse_model("zm*zn:3,4").alphabet.tokens == ("a", "A", "b", "b2", "B")


def test_geodesic_forms(f2, dinf, z23):
    p = lambda m, s: m.alphabet.parse(s)
    assert f2.geodesic_form(p(f2, "abB")) == p(f2, "a")
    assert dinf.geodesic_form(p(dinf, "aab")) == p(dinf, "b")
    assert z23.geodesic_form(p(z23, "bb")) == p(z23, "B")
    assert z23.geodesic_form(p(z23, "bbb")) == ()


def test_conj_keys(f2, dinf):
    p = lambda m, s: m.alphabet.parse(s)
    assert f2.conj_key(p(f2, "baB")) == p(f2, "a")
    assert f2.conj_key(p(f2, "ba")) == p(f2, "ab")
    assert dinf.conj_key(p(dinf, "aba")) == p(dinf, "b")


def test_primitive_roots(f2, z23):
    p = lambda m, s: m.alphabet.parse(s)
    assert f2.primitive_root(p(f2, "abab")) == (p(f2, "ab"), 2)
    assert f2.primitive_root(p(f2, "ab")) == (p(f2, "ab"), 1)
    assert z23.primitive_root(p(z23, "ababab")) == (p(z23, "ab"), 3)
    assert not f2.is_primitive(p(f2, "aa"))
    assert f2.is_primitive(p(f2, "ab"))
    assert not f2.is_primitive(())
    with pytest.raises(TorsionInput):
        f2.primitive_root(())


def test_comm_keys(f2, dinf):
    p = lambda m, s: m.alphabet.parse(s)
    assert f2.comm_key(p(f2, "A")) == p(f2, "a")
    assert f2.comm_key(p(f2, "AB")) == p(f2, "ab")
    assert dinf.comm_key(p(dinf, "a")) is TORSION
    assert f2.comm_key(()) is TORSION


@pytest.mark.parametrize("descriptor,sizes", [
    ("free:2", [1, 4, 12, 36, 108]),
    ("free:3", [1, 6, 30, 150]),
    ("zm*zn:2,2", [1, 2, 2, 2, 2]),
    ("zm*zn:2,3", [1, 3, 4, 6, 8, 12]),
])
def test_sphere_sizes(descriptor, sizes):
    model = parse_model(descriptor)
    for n, size in enumerate(sizes):
        words = list(model.enumerate_sphere(n))
        assert len(words) == size == model.sphere_size(n)
        assert words == sorted(words)
        assert all(model.geodesic_form(x) == x for x in words)


def test_sphere_examples(f2, dinf):
    assert list(f2.enumerate_sphere(0)) == [()]
    assert [dinf.alphabet.format(x) for x in dinf.enumerate_sphere(2)] == ["ab", "ba"]


def test_shards_partition_sphere(z23):
    shards = [list(z23.enumerate_sphere(5, x)) for x in range(3)]
    assert sum(shards, []) == list(z23.enumerate_sphere(5))


def test_enumeration_cap():
    model = FreeGroup(2, enum_cap=3)
    with pytest.raises(ResourceCap):
        list(model.enumerate_sphere(4))


def test_default_caps():
    assert FreeGroup(2).enum_cap == 14
    assert parse_model("zm*zn:2,2").enum_cap == 512


@pytest.mark.parametrize("descriptor", ["free:2", "zm*zn:2,3", "zm*zn:3,4"])
def test_automata_match_predicates(descriptor):
    model = parse_model(descriptor)
    geo, cgeo = model.geodesic_dfa(), model.conj_geodesic_dfa()
    letters = range(len(model.alphabet))
    for n in range(5):
        for x in itertools.product(letters, repeat=n):
            assert geo.accepts(x) == model.is_geodesic(x)
            assert cgeo.accepts(x) == model.is_conj_geodesic(x)


def _group_words(model):
    return st.lists(st.integers(0, len(model.alphabet) - 1), max_size=12).map(tuple)


Z34 = FreeProductCyclic(3, 4)


@given(_group_words(Z34), _group_words(Z34), _group_words(Z34))
def test_free_product_is_associative(x, y, z):
    m = Z34
    assert m.multiply(m.multiply(x, y), z) == m.multiply(x, m.multiply(y, z))
    assert m.multiply(x, m.inverse(x)) == ()


@given(_group_words(Z34), _group_words(Z34))
def test_conj_key_is_conjugation_invariant(x, h):
    m = Z34
    conj = m.geodesic_form(m.inverse(h) + x + h)
    assert m.conj_key(conj) == m.conj_key(x)
    assert m.is_conj_geodesic(m.cyclic_form(x))


F3 = FreeGroup(3)


@given(_group_words(F3), st.integers(1, 4))
def test_power_comm_key(x, k):
    m = F3
    if m.has_finite_order(x):
        return
    assert m.comm_key(m.power(x, k)) == m.comm_key(x) == m.comm_key(m.inverse(x))
    root, e = m.primitive_root(m.power(x, k))
    assert e % k == 0 and m.is_primitive(root)
