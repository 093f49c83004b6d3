import json

import numpy as np
import pytest

from supportvar.algebra import (AlgebraPresentation, AModule, composition_multiplicities, decompose,
                                direct_sum, is_indecomposable, is_projective, module_isomorphic,
                                radical_filtration_multiplicities, regular_module, stably_isomorphic,
                                tensor_module, unit_module, validate)
from supportvar.builders import build, group_algebra
from supportvar.errors import InvalidParams


def test_validate_corpus(z2, klein, z3, sw3):
    for A in (z2, klein, z3, sw3):
        assert validate(A).ok, A.name


def test_sweedler_shape(sw3):
    assert sw3.dim == 4
    assert len(sw3.simples) == 2
    assert all(S.dim == 1 for S in sw3.simples)
    assert sorted(P.module.dim for P in sw3.principal) == [2, 2]


def test_group_algebra_local(klein):
    assert len(klein.simples) == 1
    assert klein.principal[0].module.dim == 4


def test_json_roundtrip(sw3):
    B = AlgebraPresentation.from_json(json.loads(json.dumps(sw3.to_json())))
    assert B.content_hash() == sw3.content_hash()
    M = regular_module(sw3)
    N = AModule.from_json(json.loads(json.dumps(M.to_json())), B)
    assert N.content_hash() == M.content_hash()


def test_invalid_params():
    with pytest.raises(InvalidParams):
        build("sweedler", 2)
    with pytest.raises(InvalidParams):
        build("group-algebra", 4, [2])


def test_multiplicity_formula(sw3):
    R = regular_module(sw3)
    assert list(composition_multiplicities(R)) == list(radical_filtration_multiplicities(R)) == [2, 2]


def test_projectivity(klein):
    assert is_projective(regular_module(klein))
    assert not is_projective(unit_module(klein))


def test_decompose_sum(z3):
    S = unit_module(z3)
    P = z3.principal[0].module
    X = direct_sum(S, P, S)
    rep = decompose(X)
    assert sorted(rep.dims) == [1, 1, 3]
    assert all(is_indecomposable(M) for M in rep.summands)
    assert module_isomorphic(X, direct_sum(P, S, S))


def test_stable_iso(klein):
    one = unit_module(klein)
    X = tensor_module(one, direct_sum(one, regular_module(klein)))
    assert stably_isomorphic(X, one)
    assert not stably_isomorphic(one, direct_sum(one, one))


def test_tensor_with_projective_is_projective(sw3):
    P = sw3.principal[0].module
    for S in sw3.simples:
        assert is_projective(tensor_module(S, P))
        assert is_projective(tensor_module(P, S))


def test_radical_nilpotent(z3):
    M = regular_module(z3)
    from supportvar.algebra import module_radical
    assert module_radical(M).shape[1] == 2
