# -*- coding: utf-8 -*-
import operator
import pytest
from hermrbc.backends import serial, threads

ITEMS = [(1, 2), (3, 4), (5, 6), (7, 8)]
EXPECTED = [2, 12, 30, 56]


@pytest.mark.backends
def test_serial():
    assert serial.map(operator.mul, ITEMS) == EXPECTED
    assert serial.map(operator.mul, iter(ITEMS), unused=1) == EXPECTED


@pytest.mark.backends
def test_threads_temporary():
    """Pool created per call, results keep item order."""
    assert threads.map(operator.mul, ITEMS, workers=2) == EXPECTED
    assert threads.map(operator.mul, []) == []


@pytest.mark.backends
def test_threads_session():
    session = threads.create(2)
    try:
        assert threads.map(operator.mul, ITEMS, session=session) == EXPECTED
        assert threads.map(operator.mul, ITEMS[:1], session=session) == EXPECTED[:1]
    finally:
        threads.destroy(session)


@pytest.mark.backends
def test_joblib():
    pytest.importorskip("joblib")
    from hermrbc.backends import joblib  # pylint: disable=import-outside-toplevel
    assert joblib.map(operator.mul, ITEMS, n_jobs=2, prefer="threads") == EXPECTED
