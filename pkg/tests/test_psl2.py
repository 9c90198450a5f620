import random
from math import gcd

import pytest

from bimanin.psl2 import (
    ID, INF, MINUS_ONE, ONE, S, T, U, U2, US, V, ZERO,
    Cusp, CuspError, Psl2Element, Psl2Error,
    common_neighbors, cusp_act, cusp_adjacent, cusp_distance, cusp_height,
    cusp_path, cusp_region, eps_conjugate, format_cusp, parse_cusp,
    psl2_make, psl2_from_cusps, psl2_mapping, word,
)


def bounded_cusps(bound):
    out = set()
    for p in range(-bound, bound + 1):
        for q in range(0, bound + 1):
            if (p, q) != (0, 0) and gcd(p, q) == 1:
                out.add(Cusp(p, q))
    return sorted(out)


def bfs_distance(a, b, bound):
    """Exhaustive-search oracle on the graph truncated to |p|,|q| <= bound."""
    verts = bounded_cusps(bound)
    if a == b:
        return 0
    dist = {a: 0}
    frontier = [a]
    while frontier:
        nxt = []
        for x in frontier:
            for y in verts:
                if y not in dist and cusp_adjacent(x, y):
                    dist[y] = dist[x] + 1
                    if y == b:
                        return dist[y]
                    nxt.append(y)
        frontier = nxt
    raise AssertionError("target not reached inside bound")


def eval_word(text):
    out = ID
    for token in text.split("*"):
        if token == "1":
            continue
        base, _, exp = token.partition("^")
        g = {"S": S, "T": T, "U": U, "V": V}[base]
        out = out * g ** (int(exp) if exp else 1)
    return out


# ---------------------------------------------------------------- elements

def test_psl2_make_canonicalizes():
    assert psl2_make(0, -1, 1, 0) == S
    assert psl2_make(0, 1, -1, 1).key() == (0, -1, 1, -1)  # -U, sign fixed
    assert psl2_make(-1, 0, 0, -1) == ID


def test_psl2_make_rejects_bad_determinant():
    with pytest.raises(Psl2Error):
        psl2_make(1, 0, 0, 2)


def test_group_relations():
    assert S * S == ID
    assert U * U * U == ID
    assert U2 * S == T
    assert V == S * U2 * S
    assert (T * S * U).inv() * (T * S * U) == ID


def test_eps_conjugation():
    assert eps_conjugate(S) == S
    assert eps_conjugate(U) == V
    assert eps_conjugate(T) == T.inv()
    g = T * S * U2 * T.inv()
    assert eps_conjugate(eps_conjugate(g)) == g


def test_word_roundtrip():
    rng = random.Random(7)
    gens = [S, T, T.inv(), U]
    for _ in range(60):
        g = ID
        for _ in range(rng.randrange(0, 9)):
            g = g * rng.choice(gens)
        assert eval_word(word(g)) == g
    assert word(U2 * S) == "U^2*S"
    assert word(ID) == "1"


# ------------------------------------------------------------------- cusps

def test_cusp_canonical_form():
    assert Cusp(2, 4).key() == (1, 2)
    assert Cusp(-3, -6).key() == (1, 2)
    assert Cusp(5, 0).key() == (1, 0)
    assert Cusp(-7, 0).key() == (1, 0)
    with pytest.raises(CuspError):
        Cusp(0, 0)


def test_cusp_parse_format():
    assert parse_cusp("oo") == INF
    assert parse_cusp("2/5") == Cusp(2, 5)
    assert parse_cusp("-3") == Cusp(-3, 1)
    assert format_cusp(INF) == "oo"
    assert format_cusp(Cusp(2, 5)) == "2/5"
    assert format_cusp(Cusp(-3, 1)) == "-3"
    with pytest.raises(CuspError):
        parse_cusp("x/y")


def test_cusp_action():
    assert cusp_act(S, INF) == ZERO
    assert cusp_act(U, ZERO) == ONE
    assert cusp_act(T, Cusp(2, 5)) == Cusp(7, 5)
    assert cusp_act(U, INF) == ZERO
    assert cusp_act(U2, INF) == ONE


def test_cusp_adjacency():
    assert cusp_adjacent(INF, ZERO)
    assert cusp_adjacent(Cusp(1, 2), Cusp(1, 3))
    assert not cusp_adjacent(INF, Cusp(2, 5))
    assert not cusp_adjacent(ONE, MINUS_ONE)


def test_psl2_from_cusps_and_mapping():
    g = psl2_from_cusps(Cusp(1, 2), Cusp(1, 3))
    assert g.act(INF) == Cusp(1, 2) and g.act(ZERO) == Cusp(1, 3)
    m = psl2_mapping(INF, ZERO, Cusp(1, 2), Cusp(1, 3))
    assert m == g
    # A pair with mismatched cross products admits no mapping.
    assert psl2_mapping(INF, Cusp(1, 2), INF, ZERO) is None
    # Stabilizer-style solve: g fixes 0 and moves oo to 1/3.
    m = psl2_mapping(ZERO, INF, ZERO, Cusp(1, 3))
    assert m is not None and m.act(ZERO) == ZERO and m.act(INF) == Cusp(1, 3)


# ---------------------------------------------------------------- distance

def test_distance_examples():
    assert cusp_distance(INF, INF) == 0
    assert cusp_distance(INF, ZERO) == 1
    assert cusp_distance(INF, Cusp(2, 5)) == 3


def test_distance_2_5_has_no_short_chain():
    # Brute force over all cusps with |p|, |q| <= 8: no length-2 chain.
    mids = [x for x in bounded_cusps(8)
            if cusp_adjacent(INF, x) and cusp_adjacent(x, Cusp(2, 5))]
    assert mids == []


def test_distance_matches_bfs_oracle():
    verts = bounded_cusps(5)
    rng = random.Random(11)
    for _ in range(40):
        a, b = rng.choice(verts), rng.choice(verts)
        assert cusp_distance(a, b) == bfs_distance(a, b, 24)


def test_metric_axioms_on_sample():
    verts = bounded_cusps(4)
    moves = [S, U, T, U * T, T.inv() * S]
    dist = {}
    for a in verts:
        for b in verts:
            dist[a, b] = cusp_distance(a, b)
    for a in verts:
        for b in verts:
            assert dist[a, b] == dist[b, a]
            assert (dist[a, b] == 0) == (a == b)
            for g in moves:
                assert cusp_distance(g.act(a), g.act(b)) == dist[a, b]
    for a in verts:
        for b in verts:
            for c in verts:
                assert dist[a, c] <= dist[a, b] + dist[b, c]


def test_height_examples():
    assert cusp_height(INF) == 1
    assert cusp_height(ONE) == 1
    assert cusp_height(ZERO) == 1
    assert cusp_height(MINUS_ONE) == 1
    assert cusp_height(Cusp(1, 2)) == 2
    assert cusp_height(Cusp(2, 5)) == 3


def test_region_partition():
    assert cusp_region(MINUS_ONE) == "B0"
    assert cusp_region(Cusp(1, 2)) == "B1"
    assert cusp_region(Cusp(-3, 2)) == "B4"
    counts = {"B0": 0, "B1": 0, "B2": 0, "B3": 0, "B4": 0}
    for x in bounded_cusps(30):
        counts[cusp_region(x)] += 1
    assert counts["B0"] == 4
    assert counts["B1"] == counts["B2"] == counts["B3"] == counts["B4"] > 0


def test_region_symmetries():
    sample = bounded_cusps(20)
    b1 = {x for x in sample if cusp_region(x) == "B1"}
    # eps.(p : q) = (-p : q) swaps B1 and B3; S swaps B1 and B4.
    eps_image = {Cusp(-x.p, x.q) for x in b1}
    assert all(cusp_region(y) == "B3" for y in eps_image)
    s_image = {cusp_act(S, x) for x in b1}
    assert all(cusp_region(y) == "B4" for y in s_image)


def test_mediant_lemma_on_adjacent_b1_pairs():
    # The published height bound for the difference cusp (<= min) fails on
    # concrete pairs, e.g. (1/2, 3/7); the machine-checked bound is min + 1.
    # See tests/test_acceptance.py and the decisions ledger.
    rng = random.Random(3)
    cands = [x for x in bounded_cusps(40) if cusp_region(x) == "B1"]
    pairs = []
    while len(pairs) < 200:
        x = rng.choice(cands)
        y = rng.choice(cands)
        if x != y and cusp_adjacent(x, y):
            pairs.append((x, y))
    for x, y in pairs:
        mediant, diff = common_neighbors(x, y)
        for z in (mediant, diff):
            assert cusp_adjacent(x, z) and cusp_adjacent(y, z)
        low = min(cusp_height(x), cusp_height(y))
        assert cusp_height(mediant) == low + 1
        assert cusp_height(diff) <= low + 1


def test_common_neighbors_are_the_only_ones():
    rng = random.Random(17)
    cands = [x for x in bounded_cusps(12) if cusp_region(x) == "B1"]
    pool = bounded_cusps(40)
    checked = 0
    while checked < 30:
        x, y = rng.choice(cands), rng.choice(cands)
        if x == y or not cusp_adjacent(x, y):
            continue
        checked += 1
        both = {z for z in pool
                if cusp_adjacent(x, z) and cusp_adjacent(y, z)}
        assert both == set(common_neighbors(x, y))


# -------------------------------------------------------------------- path

def check_chain(chain, a, b):
    assert chain[0].act(INF) == a
    assert chain[-1].act(ZERO) == b
    for g, h in zip(chain, chain[1:]):
        assert g.act(ZERO) == h.act(INF)
    for g in chain:
        assert cusp_adjacent(g.act(INF), g.act(ZERO))


def test_path_examples():
    assert cusp_path(INF, INF) == []
    assert cusp_path(INF, ZERO) == [ID]
    chain = cusp_path(INF, Cusp(2, 5))
    assert len(chain) == 3
    check_chain(chain, INF, Cusp(2, 5))
    assert [g.act(ZERO) for g in chain] == [ZERO, Cusp(1, 2), Cusp(2, 5)]


def test_path_validity_random():
    verts = bounded_cusps(9)
    rng = random.Random(5)
    for _ in range(60):
        a, b = rng.choice(verts), rng.choice(verts)
        if a == b:
            continue
        chain = cusp_path(a, b)
        check_chain(chain, a, b)
        assert len(chain) >= cusp_distance(a, b)


def test_path_reversal_is_stepwise_gs():
    rng = random.Random(13)
    verts = bounded_cusps(7)
    for _ in range(25):
        a, b = rng.choice(verts), rng.choice(verts)
        if a == b:
            continue
        chain = cusp_path(a, b)
        reverse = [g * S for g in reversed(chain)]
        check_chain(reverse, b, a)
