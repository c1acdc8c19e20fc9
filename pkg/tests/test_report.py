# -*- coding: utf-8 -*-
import json
import os
import numpy as np
import pytest
from hermrbc import curvature, exceptions, report

jsonable_cases = [
    (1 + 2j, [1.0, 2.0]),
    (np.complex128(-0.5j), [-0.0, -0.5]),
    (np.array([[1, 2], [3, 4]]), [[1, 2], [3, 4]]),
    (np.array([1j, 2]), [[0.0, 1.0], [2.0, 0.0]]),
    (np.float64(0.25), 0.25),
    (np.int64(3), 3),
    (np.bool_(True), True),
    (float("inf"), "inf"),
    (float("nan"), "nan"),
    ((1, None, "a"), [1, None, "a"]),
    ({1: 2}, {"1": 2})
]


@pytest.mark.report
@pytest.mark.parametrize("value, expected", jsonable_cases)
def test_jsonable(value, expected):
    assert report.jsonable(value) == expected


@pytest.mark.report
def test_jsonable_objects():
    """Directions, dataclasses and as_dict holders."""
    xi = curvature.PsdDirection(np.diag([1.0, 0.0]))
    assert report.jsonable(xi) == [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]
    triple = curvature.RicciTriple(np.eye(1), np.eye(1), np.eye(1))
    assert report.jsonable(triple)["ric2"] == [[1.0]]
    with pytest.raises(exceptions.JSONEncodeError):
        report.jsonable(object())


@pytest.mark.report
def test_build():
    """Top level keys, timings only when given."""
    data = report.build("eval", {"point": [0j]}, {"x": 1}, 3)
    assert set(data) == {"tool", "tool_version", "command", "convention_block", "inputs", "results", "seed", "table"}
    assert data["convention_block"]["torsion_factor"] == curvature.TORSION_FACTOR
    assert data["convention_block"]["fubini_study"]["hsc_constant"] == 2.0
    assert "timings" in report.build("eval", {}, {}, timings={"total_seconds": 0.1})


@pytest.mark.report
def test_dumps():
    """Sorted keys, two space indent, trailing newline, no bare NaN."""
    text = report.dumps({"b": 1, "a": {"z": float("nan"), "y": 2 + 0j}})
    assert text.endswith("}\n")
    assert text.index('"a"') < text.index('"b"')
    assert '\n  "a": {' in text
    assert json.loads(text) == {"a": {"y": [2.0, 0.0], "z": "nan"}, "b": 1}
    assert text == report.dumps({"a": {"y": 2 + 0j, "z": float("nan")}, "b": 1})
    with pytest.raises(exceptions.JSONEncodeError):
        report.dumps({"a": {1, 2}})


@pytest.mark.report
def test_entry():
    assert report.entry("metric.jet", "exact", g=1) == {"operation": "metric.jet", "tolerance_class": "exact", "g": 1}


@pytest.mark.report
def test_write_atomic():
    path = "/tmp/hermrbc-report.json"
    report.write_atomic("{}\n", path)
    with open(path, "r", encoding="utf-8") as handle:
        assert handle.read() == "{}\n"
    os.remove(path)
    assert not [name for name in os.listdir("/tmp") if name.startswith(".hermrbc-report.json.")]
    with pytest.raises(exceptions.FileIOError):
        report.write_atomic("{}", "/xxx/xxx/report.json")


@pytest.mark.report
def test_write_atomic_cleanup(monkeypatch):
    """A failed rename leaves neither the target nor the temporary file."""
    def fail(source, target):
        raise OSError("rename failed")

    monkeypatch.setattr(report.os, "replace", fail)
    path = "/tmp/hermrbc-failed.json"
    with pytest.raises(exceptions.FileIOError):
        report.write_atomic("{}\n", path)
    assert not os.path.exists(path)
    assert not [name for name in os.listdir("/tmp") if name.startswith(".hermrbc-failed.json.")]


@pytest.mark.report
def test_flat_row():
    row = report.flat_row({"a": np.float64(1.5), "b": [1j], "c": "x", "d": 2 + 1j})
    assert row == {"a": 1.5, "b": "[[0.0, 1.0]]", "c": "x", "d": 2 + 1j}
    assert isinstance(row["a"], float)
