import numpy as np

from supportvar.algebra import unit_module
from supportvar.cohomology import (act, check_action_signs, check_graded_commutativity, ext_dims,
                                   ext_vanishes, multiplicity_check, ring_table, yoneda_product)


def test_ext_dims(z2, klein, sw3):
    assert ext_dims(unit_module(z2), unit_module(z2), 5) == [1] * 6
    assert ext_dims(unit_module(klein), unit_module(klein), 5) == [1, 2, 3, 4, 5, 6]
    S0, S1 = sw3.simples
    d = [a + b for a, b in zip(ext_dims(S0, S0, 5), ext_dims(S0, S1, 5))]
    assert d == [1] * 6


def test_ring_z2(z2):
    t = ring_table(z2, 4)
    u = t.by_label("h1_0")
    u2 = yoneda_product(u, u)
    assert not u2.is_zero() and u2.degree == 2


def test_ring_z3_parity(z3):
    t = ring_table(z3, 6)
    assert t.parity_mode == "even"
    assert t.hilbert == [1, 0, 1, 0, 1, 0, 1]


def test_graded_commutativity(klein):
    t = ring_table(klein, 4)
    assert t.hilbert == [1, 2, 3, 4, 5]
    assert not check_graded_commutativity(t)


def test_action_signs(klein, sw3):
    x = ring_table(klein, 2, products=False).by_label("h1_0")
    assert not check_action_signs(x, unit_module(klein), unit_module(klein), 4)
    z = ring_table(sw3, 2, products=False).by_label("h2_0")
    S0, S1 = sw3.simples
    assert not check_action_signs(z, S0, S1, 4)


def test_act_unit_is_product(klein):
    x = ring_table(klein, 2, products=False).by_label("h1_0")
    one = unit_module(klein)
    a = act(x, one, one, 4)
    assert all(np.asarray(m).size for m in a.values())


def test_ext_vanishes(klein, sw3):
    P = klein.principal[0].module
    v = ext_vanishes(P, unit_module(klein), 8)
    assert v["verdict"] == "vanishes-from-1" and not v["red_flag"]
    assert ext_vanishes(unit_module(klein), unit_module(klein), 8)["verdict"] == "nonvanishing"


def test_multiplicity_three_way(sw3):
    for S in sw3.simples:
        for a, e, h in multiplicity_check(S, 8):
            assert a == e == h
