import json

import pytest

from supportvar.algebra import stably_isomorphic, unit_module
from supportvar.errors import CacheCorrupt
from supportvar.resolve import (cache_key, cached_resolution, load, minimal_resolution,
                                padded_cover_kernel, projective_cover, store, syzygy)


def test_dims_cyclic(z2, z3, sw3):
    assert minimal_resolution(unit_module(z2), 6).dims == [2] * 7
    assert minimal_resolution(unit_module(z3), 6).dims == [3] * 7
    assert minimal_resolution(unit_module(sw3), 6).dims == [2] * 7


def test_dims_klein(klein):
    res = minimal_resolution(unit_module(klein), 6)
    assert res.dims == [4 * (n + 1) for n in range(7)]
    assert not res.check_exact() and not res.check_minimal()


def test_projective_cover_minimal(sw3):
    for S in sw3.simples:
        P, epi, _ = projective_cover(S)
        assert P.dim == 2
    assert syzygy(sw3.simples[0]).dim == 1


def test_extend_matches_fresh(klein):
    one = unit_module(klein)
    a = minimal_resolution(one, 3).extend(6)
    assert a.dims == minimal_resolution(one, 6).dims


def test_cache_roundtrip(klein, tmp_path):
    one = unit_module(klein)
    res = cached_resolution(one, 5, tmp_path)
    again = load(tmp_path, one)
    assert again.dims == res.dims and again.depth == 5


def test_cache_extends_prefix(klein, tmp_path):
    one = unit_module(klein)
    cached_resolution(one, 5, tmp_path)
    path = tmp_path / f"{cache_key(one)}.json"
    before = json.loads(path.read_text())["differentials"][:6]
    res = cached_resolution(one, 8, tmp_path)
    after = json.loads(path.read_text())
    assert res.depth == 8 and after["manifest"]["depth"] == 8
    assert after["differentials"][:6] == before


def test_truncated_cache_rejected(klein, tmp_path):
    one = unit_module(klein)
    path = store(tmp_path, minimal_resolution(one, 4))
    text = path.read_text()
    path.write_text(text[: len(text) // 2])
    with pytest.raises(CacheCorrupt):
        load(tmp_path, one)


def test_tampered_cache_rejected(klein, tmp_path):
    one = unit_module(klein)
    path = store(tmp_path, minimal_resolution(one, 4))
    obj = json.loads(path.read_text())
    obj["differentials"][2]["entries"][0] ^= 1
    path.write_text(json.dumps(obj))
    with pytest.raises(CacheCorrupt):
        load(tmp_path, one)


def test_schanuel(z3):
    one = unit_module(z3)
    K = padded_cover_kernel(one, [1], seed=3)
    assert K.dim == 5
    assert stably_isomorphic(K, syzygy(one))
