import numpy as np
import pytest

from supportvar.algebra import is_projective, unit_module, tensor_module
from supportvar.carlson import (build_L_zeta, check_product_ses, check_tensor_variety,
                                find_reducing_element, phi_is_zero, realize, split_by_variety)
from supportvar.cohomology import ring_table
from supportvar.errors import CannotSplit, OddDegree, PreconditionError, ZeroClass
from supportvar.growth import variety_dim


def cls(A, label, D=2):
    return ring_table(A, D, products=False).by_label(label)


def test_L_dims(z2, klein):
    assert build_L_zeta(cls(z2, "h1_0")).module.dim == 0
    rec = build_L_zeta(cls(klein, "h1_0"))
    assert rec.module.dim == 2 == rec.omega.dim - 1


def test_zero_class(klein):
    x = cls(klein, "h1_0")
    with pytest.raises(ZeroClass):
        build_L_zeta(x.scale(0))


def test_odd_degree(z3):
    from supportvar.cohomology import ext_space
    one = unit_module(z3)
    u = ext_space(one, one, 1).basis()[0]
    with pytest.raises(OddDegree):
        build_L_zeta(u)


def test_realize(klein):
    assert realize([], klein).dim == 1
    x, y = cls(klein, "h1_0"), cls(klein, "h1_1")
    assert variety_dim(realize([x])).gamma == 1
    assert is_projective(realize([x, y]))


def test_tensor_variety(klein):
    x, y = cls(klein, "h1_0"), cls(klein, "h1_1")
    r = check_tensor_variety(x, build_L_zeta(y).module, 12, predicted=0)
    assert r["ok"] and r["variety_dim"] == 0


def test_product_ses(klein, z2):
    x, y = cls(klein, "h1_0"), cls(klein, "h1_1")
    assert check_product_ses(x, y)["ok"]
    assert check_product_ses(x, x)["ok"]
    u = cls(z2, "h1_0")
    assert check_product_ses(u, u)["ok"]


def test_phi(z2, klein):
    u = cls(z2, "h1_0")
    assert not phi_is_zero(u, unit_module(z2), 8)
    x = cls(klein, "h1_0")
    from supportvar.cohomology import yoneda_product
    x2 = yoneda_product(x, x)
    assert phi_is_zero(x2, build_L_zeta(x).module, 8)
    P = klein.principal[0].module
    assert phi_is_zero(x, P, 8)


def test_reduction(klein, z2):
    red = find_reducing_element(unit_module(klein))
    assert red.zeta.degree == 1 and red.variety_dim_after == 1
    red = find_reducing_element(unit_module(z2))
    assert is_projective(red.reduced)
    with pytest.raises(PreconditionError):
        find_reducing_element(klein.principal[0].module)


def test_split_base_case(klein):
    x, y = cls(klein, "h1_0"), cls(klein, "h1_1")
    sr = split_by_variety(build_L_zeta(x).module, x, y, 12)
    assert {sr.X1.dim, sr.X2.dim} == {0, 2}


def test_split_unit_refused(klein):
    x, y = cls(klein, "h1_0"), cls(klein, "h1_1")
    with pytest.raises(CannotSplit) as info:
        split_by_variety(unit_module(klein), x, y, 12)
    assert info.value.stage == "annihilation"
