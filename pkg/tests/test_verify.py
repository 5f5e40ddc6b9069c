import time

import pytest

from stiefel_curvature import cheeger as ch
from stiefel_curvature import curvature as cv
from stiefel_curvature import verify as vf
from stiefel_curvature.cli import main
from stiefel_curvature.stiefel import TangentCoords


def test_check_bookkeeping():
    c = vf.Check("x", 1e-10)
    assert c.passed and c.count == 0
    c.update(1e-12)
    c.update(5e-11)
    assert c.passed and c.count == 2 and c.worst == 5e-11
    c.update(float("nan"))
    assert not c.passed


def test_fast_level_passes_within_budget(capsys):
    start = time.perf_counter()
    assert main(["verify", "--level", "fast"]) == 0
    assert time.perf_counter() - start < 10.0
    out = capsys.readouterr().out
    for name in vf.SUITES:
        assert f"PASS {name}" in out


def test_unknown_level():
    with pytest.raises(ValueError):
        vf.run_suites("medium")


def test_suite_subset():
    res = vf.run_suites("fast", names=("einstein",))
    assert [r.name for r in res] == ["einstein"] and res[0].passed


def test_mutated_curvature_is_caught(monkeypatch, capsys):
    original = cv.curvature_coords

    def corrupted(alpha, x1, x2, x3):
        R = original(alpha, x1, x2, x3)
        return TangentCoords(R.A, 1.000001 * R.B)

    monkeypatch.setattr(cv, "curvature_coords", corrupted)
    assert main(["verify", "--level", "fast"]) == 1
    out = capsys.readouterr().out
    assert "FAIL cross_path" in out and "verification failed" in out


def test_mutated_bracket_is_caught(monkeypatch):
    original = ch.bracket_P
    monkeypatch.setattr(ch, "bracket_P", lambda t, u, v: original(t * 1.001, u, v))
    (res,) = vf.run_suites("fast", names=("cheeger",))
    assert not res.passed


def test_mutated_ricci_is_caught(monkeypatch):
    original = cv.ricci
    monkeypatch.setattr(cv, "ricci", lambda alpha, n, p, x, y: 1.0001 * original(alpha, n, p, x, y))
    (res,) = vf.run_suites("fast", names=("ricci",))
    assert not res.passed
