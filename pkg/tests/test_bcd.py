import itertools
from math import comb

import pytest

from cglab.bcd import (LEX_GREATER, LEX_LESS, LEX_UNDECIDED, BcdConfig, PaddedAlphabet,
                       bcd_pair_check, bcd_witness, build_bcd_automaton, build_bcd_nfa,
                       build_delta, build_lex_automaton, build_S, delta_apply, partners, zip_pair)
from cglab.errors import InvariantViolation, LengthMismatch, NotConjGeodesic, ResourceCap
from cglab.groups import FreeGroup, parse_model


def padded(cfg, text):
    return cfg.padded.parse(text, cfg.model.alphabet)


@pytest.fixture(scope="module")
def cfg2(f2):
    return BcdConfig(f2, 2)


@pytest.fixture(scope="module")
def cfg1(f2):
    return BcdConfig(f2, 1)


def test_padded_alphabet(f2):
    pa = PaddedAlphabet.for_model(f2)
    assert pa.tokens == ("a", "A", "b", "B", "$")
    assert pa.pad == 4 and pa.letters == (0, 1, 2, 3, 4)
    assert len(pa.pairs) == 25 and len(pa.triples) == 125
    assert pa.unpad(pa.parse("a$b$", f2.alphabet)) == f2.alphabet.parse("ab")
    assert pa.format(pa.parse("a$B", f2.alphabet)) == "a$B"
    with pytest.raises(LengthMismatch):
        zip_pair((0,), (0, 1))


def test_config_bounds(f2):
    with pytest.raises(ResourceCap):
        BcdConfig(f2, 5)
    with pytest.raises(ValueError):
        BcdConfig(f2, -1)
    assert len(BcdConfig(f2, 2).ball) == 17
    assert BcdConfig(FreeGroup(3), 4).K == 4


def test_pair_check_examples(f2, cfg2):
    cfg0 = BcdConfig(f2, 0)
    ab, ba = padded(cfg2, "ab"), padded(cfg2, "ba")
    assert bcd_pair_check(cfg2, ab, ab)
    assert bcd_pair_check(cfg2, ab, ba)
    g = bcd_witness(cfg2, ab, ba)
    assert f2.multiply(g, ab) == f2.multiply(ba, g)
    assert f2.alphabet.format(g) == "A"
    assert not bcd_pair_check(cfg0, ab, ba)
    with pytest.raises(LengthMismatch):
        bcd_pair_check(cfg2, ab, padded(cfg2, "b"))


def test_nfa_and_dfa_agree(cfg1):
    nfa = build_bcd_nfa(cfg1)
    dfa = build_bcd_automaton(cfg1)
    for n in range(4):
        for w in itertools.product(cfg1.padded.pairs, repeat=n):
            assert nfa.accepts(w) == dfa.accepts(w)


@pytest.mark.parametrize("K", [1, 2])
def test_cyclic_shift_closure(f2, K):
    m = build_bcd_automaton(BcdConfig(f2, K))
    for n in range(1, 5):
        for w in m.words(n):
            for i in range(1, n):
                assert m.accepts(w[i:] + w[:i]), w


def test_automaton_on_free_product():
    model = parse_model("zm*zn:2,3")
    cfg = BcdConfig(model, 2)
    m = build_bcd_automaton(cfg)
    for n in range(4):
        for w in itertools.product(cfg.padded.pairs, repeat=n):
            U, V = tuple(p[0] for p in w), tuple(p[1] for p in w)
            assert m.accepts(w) == bcd_pair_check(cfg, U, V)


def test_lex_comparator(f2):
    pa = PaddedAlphabet.for_model(f2)
    lex = build_lex_automaton(pa)
    assert lex.n_states == 4  # undecided, less, greater, plus the fail state
    assert not lex.accepts(zip_pair((0,), (0,)))
    assert lex.accepts(zip_pair(f2.alphabet.parse("a"), f2.alphabet.parse("b")))
    assert lex.accepts(zip_pair(f2.alphabet.parse("ba"), f2.alphabet.parse("bb")))
    for n in range(5):
        for w in itertools.product(pa.pairs, repeat=n):
            u, v = tuple(p[0] for p in w), tuple(p[1] for p in w)
            assert lex.accepts(w) == (u < v)
    assert (LEX_UNDECIDED, LEX_LESS, LEX_GREATER) == (0, -1, 1)


def test_padding_sorts_last(cfg2):
    lex = build_lex_automaton(cfg2.padded)
    assert lex.accepts(zip_pair(padded(cfg2, "ab$"), padded(cfg2, "a$b")))


def test_S_membership(cfg2):
    s = build_S(cfg2)
    assert s.accepts(padded(cfg2, "ab$a"))
    assert not s.accepts(padded(cfg2, "a$A"))
    assert s.accepts(padded(cfg2, "$$"))


def test_S_counts(f2, cfg2):
    s = build_S(cfg2)
    c = f2.conj_geodesic_dfa().count_per_length(8)
    expect = [sum(comb(n, j) * c[j] for j in range(n + 1)) for n in range(9)]
    assert s.count_per_length(8) == expect


def test_S_exclusion(f2, cfg2):
    ab = f2.alphabet.parse("ab")
    s = build_S(cfg2, exclude=[ab])
    assert not s.accepts(ab) and not s.accepts(ab + (cfg2.padded.pad,))
    assert s.accepts(f2.alphabet.parse("ba"))


def _delta(dm, text):
    model = dm.cfg.model
    return model.alphabet.format(delta_apply(dm, model.alphabet.parse(text))[0])


def test_delta_examples(delta_k2, delta_k1):
    assert _delta(delta_k2, "ab") == "ab"
    assert _delta(delta_k2, "ba") == "ab"
    assert _delta(delta_k1, "ba") == "ab"
    assert _delta(delta_k2, "") == ""
    assert _delta(delta_k2, "baa") == "aab"


def test_delta_partner_for_ba_is_brute_force_minimum(delta_k2):
    cfg = delta_k2.cfg
    U = padded(cfg, "ba")
    brute = [V for V in itertools.product(cfg.padded.letters, repeat=2)
             if cfg.model.is_conj_geodesic(cfg.padded.unpad(V)) and bcd_pair_check(cfg, U, V)]
    assert partners(delta_k2, U) == [min(brute)]
    assert cfg.padded.unpad(min(brute)) == padded(cfg, "ab")


def test_delta_at_K0_is_identity(f2, delta_k0):
    for n in range(5):
        for U in f2.enumerate_sphere(n):
            if f2.is_conj_geodesic(U):
                assert delta_apply(delta_k0, U)[0] == U


def test_delta_preserves_class_and_is_injective(f2, delta_k2):
    images = {}
    for n in range(7):
        for U in f2.enumerate_sphere(n):
            if not f2.is_conj_geodesic(U):
                continue
            out, V, g = delta_apply(delta_k2, U)
            key = f2.conj_key(U)
            assert f2.conj_key(out) == key
            assert f2.is_conj_geodesic(out)
            assert f2.multiply(g, U) == f2.multiply(out, g)
            images.setdefault(key, set()).add(out)
    outputs = [o for outs in images.values() for o in outs]
    assert len(outputs) == len(set(outputs))


def test_delta_rejects_non_geodesics(delta_k2, f2):
    for text in ("aA", "abA"):
        with pytest.raises(NotConjGeodesic):
            delta_apply(delta_k2, f2.alphabet.parse(text))


def test_alternative_formula_misses_unique_partners(f2, delta_k2, delta_k0):
    # with K = 0 every input is its own unique partner, so nothing survives
    for n in range(4):
        for U in f2.enumerate_sphere(n):
            if f2.is_conj_geodesic(U):
                assert partners(delta_k0, U, delta_k0.m2_variant) == []
    # otherwise it agrees with the default exactly where a second partner exists
    for n in range(5):
        for U in f2.enumerate_sphere(n):
            if not f2.is_conj_geodesic(U):
                continue
            all_partners = partners(delta_k2, U, delta_k2.partners)
            alt = partners(delta_k2, U, delta_k2.m2_variant)
            if len(all_partners) > 1:
                assert alt == partners(delta_k2, U)
            else:
                assert alt == []
    with pytest.raises(InvariantViolation):
        delta_apply(type(delta_k2)(delta_k2.cfg, delta_k2.m2_variant, delta_k2.s, delta_k2.m,
                                   delta_k2.partners, delta_k2.t1, delta_k2.t2), ())


def test_materialized_matches_lazy(f2):
    cfg = BcdConfig(f2, 0)
    eager = build_delta(cfg, materialize=True)
    lazy = build_delta(cfg, materialize=False)
    for n in range(4):
        for w in itertools.product(cfg.padded.pairs, repeat=n):
            assert eager.m2.accepts(w) == lazy.m2.accepts(w)


def test_triple_languages(delta_k1):
    cfg = delta_k1.cfg
    ab, ba = padded(cfg, "ab"), padded(cfg, "ba")
    triple = tuple(zip(ab, ab, ba))
    assert delta_k1.t1.accepts(triple)
    assert delta_k1.t2.accepts(triple)  # ab < ba
    assert not delta_k1.t2.accepts(tuple(zip(ab, ba, ab)))
