import json
import math

import pytest
from hypothesis import given, strategies as st

from supportvar.errors import SequenceTooShort
from supportvar.growth import (GrowthSequence, Surd, berlekamp_massey, complexity, fpdims_of_simples,
                               gamma_estimate, load_sequences, perron_root, variety_dim)
from supportvar.algebra import regular_module, unit_module


def test_surd_arithmetic():
    r2 = Surd(0, 1, 2)
    assert r2 * r2 == Surd(2)
    assert (Surd(3, 1, 2) + Surd(2, 2, 2)) == Surd(5, 3, 2)
    assert Surd(0, 1, 8) == Surd(0, 2, 2)
    assert abs(float(Surd(3, 1, 2)) - (3 + math.sqrt(2))) < 1e-15
    with pytest.raises(TypeError):
        Surd.coerce(1.5)


def test_berlekamp_massey_fibonacci():
    seq = [1, 1]
    for _ in range(12):
        seq.append(seq[-1] + seq[-2])
    C, L = berlekamp_massey(seq)
    assert L == 2 and list(C) == [Surd(1), Surd(-1), Surd(-1)]


@given(st.integers(1, 4), st.integers(1, 9))
def test_polynomial_growth(deg, scale):
    vals = [scale * (n + 1) ** (deg - 1) for n in range(20)]
    v = gamma_estimate(vals)
    assert v.gamma == deg and v.method == "recurrence-exact"


def test_zero_and_exponential():
    assert gamma_estimate([4, 0, 0, 0, 0, 0, 0, 0, 0, 0]).gamma == 0
    v = gamma_estimate([2 ** n for n in range(16)])
    assert v.gamma is None and "exponential" in str(v.diagnostics)


def test_too_short():
    with pytest.raises(SequenceTooShort):
        gamma_estimate([1, 2, 3])


def test_fixture_values():
    from supportvar.acceptance import fixture_path
    seqs = load_sequences(fixture_path())
    assert gamma_estimate(seqs["V_fpdims"]).gamma == 1
    assert gamma_estimate(seqs["unit_ext_hilbert"]).gamma == 2


def test_load_list(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps([1, 2, 3, 4, 5, 6, 7, 8, 9]))
    (label, seq), = load_sequences(p).items()
    assert isinstance(seq, GrowthSequence) and gamma_estimate(seq).gamma == 2


def test_perron():
    r = perron_root([[0, 1], [2, 0]])
    assert r.surd == Surd(0, 1, 2) and abs(r.value - math.sqrt(2)) < 1e-12
    assert perron_root([[2, 1], [1, 2]]).surd == Surd(3)
    assert perron_root([[1]]).value == 1


def test_fpdims(sw3, klein):
    assert fpdims_of_simples(sw3) == [1, 1]
    assert fpdims_of_simples(klein) == [1]


def test_complexity_agrees(klein, z3, sw3):
    assert complexity(unit_module(klein)).gamma == variety_dim(unit_module(klein)).gamma == 2
    assert complexity(unit_module(z3)).gamma == 1
    assert variety_dim(regular_module(sw3)).gamma == 0
