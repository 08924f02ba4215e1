import random

import pytest

from adams import relations as rel
from adams import steenrod as st
from adams.relations import (a_phi, adem_element, adem_pairs, b0_add,
                             b0_from_f0, b0_mul, b0_scale, decompose_left,
                             decompose_right, f0_product, pair_decompose_phi,
                             par_words, phi_lift, q_f0, rbar_project, u_phi)


def test_adem_element_examples():
    assert adem_element(1, 1) == frozenset({(1, 1)})
    assert adem_element(1, 2) == frozenset({(1, 2), (3,)})
    assert adem_element(2, 2) == frozenset({(2, 2), (3, 1)})


def test_adem_element_precondition():
    with pytest.raises(ValueError):
        adem_element(2, 1)
    with pytest.raises(ValueError):
        adem_element(0, 1)


def test_adem_elements_are_relations():
    for d in range(2, 14):
        for (n, m) in adem_pairs(d):
            assert q_f0(adem_element(n, m)) == st.ZERO


def test_decompose_right_examples():
    assert decompose_right(adem_element(1, 1)) == {((), (1, 1)): frozenset({()})}
    sq1_11 = f0_product(frozenset({(1,)}), adem_element(1, 1))
    assert decompose_right(sq1_11) == {((), (1, 1)): frozenset({(1,)})}
    sq2_11 = f0_product(frozenset({(2,)}), adem_element(1, 1))
    assert decompose_right(sq2_11) == {((2,), (1, 1)): frozenset({()})}


def test_decompose_right_rejects_nonrelation():
    with pytest.raises(ValueError):
        decompose_right(frozenset({(3,)}))


def test_decompose_left_examples():
    assert decompose_left(adem_element(1, 2)) == {((1, 2), ()): frozenset({()})}
    r = f0_product(adem_element(1, 1), frozenset({(1,)}))
    assert decompose_left(r) == {((1, 1), ()): frozenset({(1,)})}
    r = f0_product(adem_element(2, 4), frozenset({(2,)}))
    assert decompose_left(r) == {((2, 4), (2,)): frozenset({()})}


def random_relation(rng, max_deg=12):
    out = set()
    for _ in range(rng.randint(1, 3)):
        d = rng.randint(2, max_deg)
        pairs = adem_pairs(d)
        (n, m) = rng.choice(pairs)
        left_deg = rng.randint(0, max_deg - d)
        right_deg = max_deg - d - left_deg
        lw = rng.choice(list(all_words(left_deg)))
        rw = rng.choice(list(all_words(right_deg)))
        for w in adem_element(n, m):
            out ^= {lw + w + rw}
    return frozenset(out)


def all_words(d, _cache={}):
    if d not in _cache:
        if d == 0:
            _cache[d] = [()]
        else:
            _cache[d] = [(k,) + w for k in range(1, d + 1) for w in all_words(d - k)]
    return _cache[d]


def test_decompose_right_round_trip_random():
    rng = random.Random(5)
    for _ in range(30):
        r = random_relation(rng)
        back = set()
        for pi, c in decompose_right(r).items():
            back ^= set(f0_product(par_words(pi), c))
        assert frozenset(back) == r


def test_decompose_left_round_trip_random():
    rng = random.Random(6)
    for _ in range(30):
        r = random_relation(rng)
        back = set()
        for ((n, m), suffix), c in decompose_left(r).items():
            piece = f0_product(adem_element(n, m), frozenset({suffix}))
            back ^= set(f0_product(c, piece))
        assert frozenset(back) == r


def test_rbar_kills_products_of_relations():
    r = f0_product(adem_element(1, 1), adem_element(1, 1))
    assert rbar_project(r) == {}
    assert rbar_project(adem_element(2, 2)) == {((), (2, 2)): st.UNIT}
    r = f0_product(adem_element(1, 1), frozenset({(1,)}))
    assert rbar_project(r) == {((), (1, 1)): frozenset({(1,)})}


def test_phi_lift_examples():
    assert phi_lift(adem_element(1, 1)) == {(1, 1): 1}
    assert phi_lift(adem_element(2, 3)) == {(2, 3): 1, (5,): 1, (4, 1): 1}
    r = f0_product(adem_element(1, 1), frozenset({(2,)}))
    assert phi_lift(r) == {(1, 1, 2): 1}


def test_phi_lift_right_equivariant():
    rng = random.Random(9)
    for _ in range(20):
        r = random_relation(rng, max_deg=9)
        d = rng.randint(1, 4)
        f = frozenset({rng.choice(all_words(d))})
        lhs = phi_lift(f0_product(r, f))
        rhs = b0_mul(phi_lift(r), b0_from_f0(f))
        assert lhs == rhs


def test_phi_lift_reduces_to_input():
    rng = random.Random(10)
    for _ in range(20):
        r = random_relation(rng)
        assert rel.b0_mod2(phi_lift(r)) == r


def test_pair_decompose_phi_examples():
    p = pair_decompose_phi(phi_lift(adem_element(1, 1)))
    assert p.xbar == adem_element(1, 1) and p.xi == st.ZERO
    p = pair_decompose_phi({(2,): 2})
    assert p.xbar == frozenset() and p.xi == frozenset({(2,)})
    b = b0_add(b0_mul({(1,): 1}, phi_lift(adem_element(1, 1))),
               b0_scale(3, phi_lift(f0_product(frozenset({(1,)}),
                                               adem_element(1, 1)))))
    p = pair_decompose_phi(b)
    assert p.xbar == frozenset()
    assert p.xi == a_phi(frozenset({(1,)}), adem_element(1, 1))


def test_pair_decompose_psi_examples():
    p = rel.pair_decompose_psi({(1, 1): 2})
    assert p.xbar == frozenset() and p.xi == st.ZERO
    p = rel.pair_decompose_psi({(2,): 2})
    assert p.xbar == frozenset() and p.xi == frozenset({(2,)})
    # the two splittings disagree on the first relation lift
    p = rel.pair_decompose_psi(phi_lift(adem_element(1, 1)))
    assert p.xbar == adem_element(1, 1) and p.xi == frozenset({(2,)})


def test_pair_decompose_psi_recovers_relation():
    rng = random.Random(15)
    for _ in range(15):
        r = random_relation(rng, max_deg=10)
        assert rel.pair_decompose_psi(phi_lift(r)).xbar == r


def test_a_phi_examples():
    assert a_phi(frozenset({(1,)}), adem_element(1, 1)) == st.ZERO
    rng = random.Random(12)
    for _ in range(10):
        r = random_relation(rng, max_deg=8)
        assert a_phi(st.UNIT, r) == st.ZERO


def test_a_phi_right_linear():
    rng = random.Random(13)
    for _ in range(15):
        r = random_relation(rng, max_deg=8)
        alpha = frozenset({rng.choice(st.admissible_basis(rng.randint(1, 4)))})
        f = frozenset({rng.choice(all_words(rng.randint(1, 3)))})
        lhs = a_phi(alpha, f0_product(r, f))
        rhs = st.product(a_phi(alpha, r), q_f0(f))
        assert lhs == rhs


def test_u_phi_first_relation():
    assert u_phi(adem_element(1, 1)) == frozenset({((1,), (1,))})


def test_u_phi_split_independence():
    rng = random.Random(14)
    for _ in range(12):
        r = random_relation(rng, max_deg=9)
        assert u_phi(r, "left") == u_phi(r, "right")


def test_u_phi_two_divisible_zero():
    # a lift that is twice anything has relation part 0 and defect 0
    assert u_phi(frozenset()) == frozenset()
