import random

import pytest

from bimanin.groupalgebra import (
    GroupAlgebraElement, GroupAlgebraError, eps_conj_pairwise, format_ga,
    ga1, ga2, ga_mul, ideal_generators, thm3_identity_suite, unit,
)
from bimanin.psl2 import ID, S, T, U, U2, US, V


def test_mul_examples():
    left = ga2((ID, ID), (ID, S))       # (1, 1+S)
    right = ga2((ID, ID), (S, ID))      # (1+S, 1)
    product = ga_mul(left, right)
    assert product == ga2((ID, ID), (ID, S), (S, ID), (S, S))
    x = ga2((T, U), (2, S, ID))
    assert ga_mul(x, unit(2)) == x
    assert ga_mul(ga1(ID, S), ga1(ID, (-1, S))) == ga1((0, ID))
    assert not ga_mul(ga1(ID, S), ga1(ID, (-1, S)))


def test_mul_order_mismatch():
    with pytest.raises(GroupAlgebraError):
        ga_mul(ga1(ID), ga2((ID, ID)))


def test_mul_associative_random():
    rng = random.Random(23)
    gens = [ID, S, U, U2, US, T]
    def rand_elt():
        return ga2(*[(rng.choice((-2, -1, 1, 2)), rng.choice(gens), rng.choice(gens))
                     for _ in range(3)])
    for _ in range(50):
        x, y, z = rand_elt(), rand_elt(), rand_elt()
        assert (x * y) * z == x * (y * z)


def test_ideal_generator_lists():
    assert ideal_generators("I1") == [ga1(ID, S), ga1(ID, U, U2)]
    assert ideal_generators("ID") == [
        ga2((ID, ID), (S, S)),
        ga2((ID, ID), (U, U), (U2, U2)),
    ]
    i2 = ideal_generators("I2")
    assert i2[0] == ga2((ID, ID), (ID, S), (S, ID), (S, S))
    assert i2[1] == ga2((S, S), (S, US), (US, US), (ID, U), (-1, U2, U2))
    # Products in the published list are expanded.
    assert i2[2] == ga2((ID, ID), (U, ID), (U2, ID),
                        (S, S), (US, S), (U2 * S, S))


def test_i2_minus_is_pairwise_conjugate():
    minus = ideal_generators("I2minus")
    assert minus[0] == ga2((ID, ID), (ID, S), (S, ID), (S, S))
    assert minus[1] == ga2((S, S), (S, V * S), (US, V * S), (ID, V),
                           (-1, U2, V * V))
    # Third generator only involves 1 and S in the second slot: unchanged.
    assert minus[2] == ideal_generators("I2")[2]
    # Fourth becomes (1, 1+V+V^2)[(1,1)+(S,S)].
    expected = ga2((ID, ID), (ID, V), (ID, V * V)) * ga2((ID, ID), (S, S))
    assert minus[3] == expected
    for g, gm in zip(ideal_generators("I2"), minus):
        assert eps_conj_pairwise(g) == gm
        assert eps_conj_pairwise(gm) == g


def test_unknown_ideal():
    with pytest.raises(GroupAlgebraError):
        ideal_generators("I3")


def test_thm3_identity_suite_passes():
    report = thm3_identity_suite()
    assert len(report) == 12
    assert all(entry["status"] == "pass" for entry in report)
    labels = {entry["check"] for entry in report}
    assert "thm3/g1 in ID" in labels and "thm3/g2 in IV" in labels


def test_thm3_negative_control():
    report = thm3_identity_suite(corrupt=True)
    assert any(entry["status"] == "fail" for entry in report)
    bad = next(e for e in report if e["status"] == "fail")
    assert "difference" in bad["witness"]


def test_format():
    x = ga2((2, U2 * S, S), (-1, ID, ID))
    text = format_ga(x)
    assert "2*(U^2*S, S)" in text
    assert "(1, 1)" in text
    assert format_ga(ga2((0, ID, ID))) == "0"
