import random
from fractions import Fraction

import pytest

from bimanin import _modular
from bimanin.groupalgebra import ga1, ga2, ideal_generators
from bimanin.linalg import kernel_basis, rank
from bimanin.polyaction import (
    PolyError, PolyVec, act1_matrix, act2_matrix, act_poly, format_poly,
    ga_action_matrix, ga_action_op, haberland_pairing, haberland_pairing2,
    kron, mat_apply, mat_mul, parity_flip_matrix, parity_projector,
    parse_poly, second_flip,
)
from bimanin.psl2 import ID, S, T, U, U2, US, eps_conjugate

F = Fraction


def poly1(text, w):
    return parse_poly(text, w, 0)


def test_act1_identity_and_t():
    assert act1_matrix(ID, 4) == [[int(i == j) for j in range(5)] for i in range(5)]
    m = act1_matrix(T, 2)
    # X^2 -> (X-1)^2 = 1 - 2X + X^2
    assert [row[2] for row in m] == [1, -2, 1]


def test_act1_s_weight_10():
    p = poly1("1 - X^10", 10)
    assert act_poly(S, p) == -p


def test_act1_rejects_odd_weight():
    with pytest.raises(PolyError):
        act1_matrix(S, 3)


def test_act1_homomorphism_random_words():
    rng = random.Random(31)
    gens = [S, U, T]
    for _ in range(50):
        w = rng.choice([2, 4, 6, 8, 10, 12])
        g = ID
        h = ID
        for _ in range(rng.randrange(1, 4)):
            g = g * rng.choice(gens)
            h = h * rng.choice(gens)
        assert act1_matrix(g * h, w) == mat_mul(act1_matrix(g, w),
                                                act1_matrix(h, w))


def test_torsion_relations_at_small_weights():
    for w in range(2, 13, 2):
        ident = act1_matrix(ID, w)
        ms = act1_matrix(S, w)
        mu = act1_matrix(U, w)
        assert mat_mul(ms, ms) == ident
        assert mat_mul(mu, mat_mul(mu, mu)) == ident


def test_act2_examples():
    assert act2_matrix(ID, ID, 2, 2) == [[int(i == j) for j in range(9)]
                                         for i in range(9)]
    p = parse_poly("1 - X1^2*X2^2", 2, 2)
    moved = PolyVec.from_flat(2, 2, mat_apply(act2_matrix(S, S, 2, 2),
                                              p.flatten()))
    assert moved == -p
    q = parse_poly("X1^2", 2, 2)
    image = PolyVec.from_flat(2, 2, mat_apply(act2_matrix(T, ID, 2, 2),
                                              q.flatten()))
    assert image == parse_poly("1 - 2*X1 + X1^2", 2, 2)


def test_act2_is_kron_of_act1():
    assert act2_matrix(U, T, 2, 4) == kron(act1_matrix(U, 2),
                                           act1_matrix(T, 4))


def test_ga_action_matrix_examples():
    one_plus_s = ga_action_matrix(ga1(ID, S), 2)
    assert rank(one_plus_s) == 1
    k = kernel_basis(one_plus_s, 3)
    assert k.rows == ((F(1), F(0), F(-1)), (F(0), F(1), F(0)))
    one_u = ga_action_matrix(ga1(ID, U, U2), 2)
    assert mat_apply(one_u, poly1("1 - X^2", 2).flatten()) == [0, 0, 0]
    # (S,S) is an involution with trace 1 on V_{2,2}, so the kernel of
    # (1,1)+(S,S) is its -1 eigenspace of dimension (9-1)/2 = 4.
    diag_s = ga_action_matrix(ga2((ID, ID), (S, S)), 2, 2)
    assert kernel_basis(diag_s, 9).dim == 4


def test_ga_action_op_matches_exact_matrix():
    x = ideal_generators("I2")[1]
    exact = ga_action_matrix(x, 2, 4)
    op = ga_action_op(x, 2, 4)
    for p in _modular.WORK_PRIMES[:2]:
        got = op.mod(p)
        assert all(got[i, j] == exact[i][j] % p
                   for i in range(len(exact)) for j in range(len(exact)))
    assert op.bound() >= max(abs(v) for row in exact for v in row)


def test_parity_projectors():
    plus = parity_projector(2, 2, "+")
    minus = parity_projector(2, 2, "-")
    kept = [i for i in range(9) if plus[i][i]]
    # (m1, m2) with m1 + m2 even, m1 major: 1, X2^2, X1X2, X1^2, X1^2X2^2
    assert kept == [0, 2, 4, 6, 8]
    assert mat_mul(plus, plus) == plus
    assert all(plus[i][j] + minus[i][j] == int(i == j)
               for i in range(9) for j in range(9))


def test_parity_flip_conjugates_generator_matrices():
    for w1, w2 in [(2, 2), (2, 4)]:
        flip = parity_flip_matrix(w1, w2)
        for gen in ideal_generators("I2"):
            conj = type(gen)(2, {(eps_conjugate(a), eps_conjugate(b)): c
                                 for (a, b), c in gen.terms.items()})
            lhs = ga_action_matrix(conj, w1, w2)
            rhs = mat_mul(flip, mat_mul(ga_action_matrix(gen, w1, w2), flip))
            assert lhs == rhs


def test_haberland_pairing_values():
    w = 6
    x0 = poly1("1", w)
    xw = poly1("X^6", w)
    assert haberland_pairing(x0, xw) == 1
    p = poly1("4 - 4*X + X^2", 2)   # (X-2)^2
    assert haberland_pairing(p, poly1("X^2", 2)) == 4
    # [X, X] has m + m' = w, so the defining formula applies: -1/C(2,1);
    # the evaluation identity [(X-a)^2, P] = P(a) forces the same value.
    x1 = poly1("X", 2)
    assert haberland_pairing(x1, x1) == F(-1, 2)
    # A genuinely off-diagonal monomial pair pairs to zero.
    assert haberland_pairing(x1, poly1("X^2", 2)) == 0


def test_haberland_invariance_and_evaluation():
    rng = random.Random(5)
    for w in (2, 4, 6, 8, 10):
        p = PolyVec.from_flat(w, 0, [rng.randrange(-5, 6) for _ in range(w + 1)])
        q = PolyVec.from_flat(w, 0, [rng.randrange(-5, 6) for _ in range(w + 1)])
        for g in (S, U, T):
            assert haberland_pairing(act_poly(g, p), act_poly(g, q)) == \
                haberland_pairing(p, q)
        for a in (F(0), F(1), F(-2), F(3, 5)):
            # (X - a)^w expanded
            pw = PolyVec.from_flat(
                w, 0, [F((-a) ** (w - m)) * _binom(w, m) for m in range(w + 1)])
            value = sum(q.coeffs[m][0] * a ** m for m in range(w + 1))
            assert haberland_pairing(pw, q) == value


def _binom(n, k):
    from math import comb
    return comb(n, k)


def test_haberland_pairing2_is_multiplicative():
    rng = random.Random(8)
    p1 = PolyVec.from_flat(2, 0, [rng.randrange(-4, 5) for _ in range(3)])
    p2 = PolyVec.from_flat(4, 0, [rng.randrange(-4, 5) for _ in range(5)])
    q1 = PolyVec.from_flat(2, 0, [rng.randrange(-4, 5) for _ in range(3)])
    q2 = PolyVec.from_flat(4, 0, [rng.randrange(-4, 5) for _ in range(5)])
    tensor_p = PolyVec(2, 4, tuple(
        tuple(p1.coeffs[m1][0] * p2.coeffs[m2][0] for m2 in range(5))
        for m1 in range(3)))
    tensor_q = PolyVec(2, 4, tuple(
        tuple(q1.coeffs[m1][0] * q2.coeffs[m2][0] for m2 in range(5))
        for m1 in range(3)))
    assert haberland_pairing2(tensor_p, tensor_q) == \
        haberland_pairing(p1, q1) * haberland_pairing(p2, q2)


def test_second_flip():
    p = parse_poly("1 - X1^2*X2^8 + X2", 2, 8)
    assert second_flip(p) == parse_poly("1 - X1^2*X2^8 - X2", 2, 8)


def test_diagonal_restriction():
    q = parse_poly("1 - X1^2*X2^8", 2, 8)
    assert q.diagonal() == parse_poly("1 - X^10", 10, 0)


def test_grammar_roundtrip():
    cases = ["0", "1 - X1^2*X2^8", "28/45*X2^2 - X1*X2^3 + 2*X1^2",
             "-3/7 + X1"]
    for text in cases:
        p = parse_poly(text, 2, 8)
        assert parse_poly(format_poly(p), 2, 8) == p
    single = parse_poly("4X - 25X^3 + 42X^5 - 25X^7 + 4X^9", 10, 0)
    assert format_poly(single) == "4*X - 25*X^3 + 42*X^5 - 25*X^7 + 4*X^9"
    assert parse_poly("1 - Z^10", 10) == parse_poly("1 - X^10", 10)


def test_grammar_rejects_garbage():
    with pytest.raises(PolyError):
        parse_poly("1 + Y^2", 2, 2)
    with pytest.raises(PolyError):
        parse_poly("X1^5", 2, 2)
