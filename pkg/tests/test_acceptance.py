"""The twelve acceptance criteria; each prints one PASS/FAIL line."""

import pytest

from supportvar.acceptance import CRITERIA


@pytest.mark.parametrize("num,title,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print(f"\ncriterion {num}: {'PASS' if ok else 'FAIL'} ({title}) {detail}")
    assert ok, detail
