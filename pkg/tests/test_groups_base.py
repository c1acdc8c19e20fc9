# -*- coding: utf-8 -*-
import os
import json
import pandas as pd
import pytest
from hermrbc import exceptions, metric
from hermrbc.base import BaseGroup

DATA = {
    "tool": "hermrbc", "command": "test", "results": {"value": 1 + 1j},
    "table": [{"a": 1, "b": 2.5}, {"a": 2, "b": [1, 2]}]
}

exception_cases = [
    ("response", exceptions.UnsupportedOutput),
    ("content:/xxx/xxx.json", exceptions.FileIOError),
    ("json:/xxx/xxx.json", exceptions.FileIOError),
    ("pandas:/xxx/xxx.xxx", exceptions.UnsupportedExtension),
    ("pandas:/xxx/xxx.csv", exceptions.FileIOError)
]

results = [
    ("content", None, DATA),
    ("content:/tmp/hermrbc-result1.json", None, DATA),
    ("pandas", {
        "change:columns": {"b": "cb", "a": "ca"}, "change:reorder": True, "change:reindex": "ca"
    }, pd.DataFrame({"ca": [1, 2], "cb": [2.5, "[1, 2]"]}).set_index("ca")),
    ("pandas:/tmp/hermrbc-result2.csv", {
        "change:columns": {"b": "cb", "a": "ca"}, "change:reorder": True, "change:reindex": "cb"
    }, pd.DataFrame({"ca": [1, 2], "cb": [2.5, "[1, 2]"]}).set_index("cb")),
    ("pandas:/tmp/hermrbc-result3.html", None, pd.DataFrame({"a": [1, 2], "b": [2.5, "[1, 2]"]}))
]


def run(func, items):
    """Backend dummy function."""
    return [func(*item) for item in items]


@pytest.mark.groups
@pytest.mark.parametrize("output, exception", exception_cases)
def test_base_exceptions(output, exception):
    """Test base process exceptions."""
    with pytest.raises(exception):
        group = BaseGroup(run)
        group.process(DATA, output)


@pytest.mark.groups
def test_base_writer_exception():
    """Pandas writer failures are wrapped."""
    with pytest.raises(exceptions.PandasRuntimeError):
        BaseGroup(run).process(DATA, "pandas", {"change:columns": {"a": "ca"}, "change:reorder": True,
                                                "change:reindex": "nosuch"})


@pytest.mark.groups
def test_base_prepare():
    """Test base prepare method."""
    source = {
        "self": "<...>", "metric_ref": "fs", "point": [0j, 0j], "lam": 1.0, "cond": "nonneg", "params": None,
        "g": metric.catalog("flat", {"n": 2}), "output": "pandas", "writer": None, "args": {"seed": 1}
    }
    group = BaseGroup(run)
    result = group.prepare(source, ["metric_ref"])
    assert result == {
        "point": [0j, 0j], "lambda": 1.0, "condition": "nonneg",
        "domain_metric": metric.catalog("flat", {"n": 2}).describe()
    }
    assert group.started is not None


@pytest.mark.groups
def test_base_merge():
    group = BaseGroup(run, args={"seed": 1, "samples": 10})
    assert group.merge({"seed": 0, "starts": 2}, {"samples": 5}) == {"seed": 1, "starts": 2, "samples": 5}


@pytest.mark.groups
def test_base_build_timings():
    """Timings appear only when enabled."""
    group = BaseGroup(run)
    group.prepare({}, [])
    assert "timings" not in group.build("test", {}, {})
    group = BaseGroup(run, timings=True)
    group.prepare({}, [])
    assert group.build("test", {}, {})["timings"]["total_seconds"] >= 0


@pytest.mark.groups
@pytest.mark.parametrize("output, writer, result", results)
def test_base_process(output, writer, result):
    """Test base process method."""
    group = BaseGroup(run)
    parts = output.split(":")
    if isinstance(result, pd.DataFrame):
        pd.testing.assert_frame_equal(group.process(DATA, output, writer), result)
    else:
        assert group.process(DATA, output) == result
    if "." in output:
        assert os.path.exists(parts[1])
        if parts[1].endswith(".json"):
            with open(parts[1], "r", encoding="utf-8") as handle:
                assert json.load(handle)["results"]["value"] == [1.0, 1.0]
        os.remove(parts[1])


@pytest.mark.groups
def test_base_json():
    """Serialized output matches the deterministic dump."""
    text = BaseGroup(run).process(DATA, "json")
    assert json.loads(text)["table"][1]["b"] == [1, 2]
