# -*- coding: utf-8 -*-
import json
import pathlib
import numpy as np
import pytest
from hermrbc import exceptions, metric

DATA = pathlib.Path(__file__).parent / "data"

catalog_cases = [
    ("flat", {"n": 3}, 3),
    ("fs", {"n": 2}, 2),
    ("fubini_study_affine", {"n": 4}, 4),
    ("example_2_2", {"eps": 0.3}, 2),
    ("example_2_2", {"n": 3, "eps": 0.5}, 3),
    ("example_2_2_dual", {"eps": 0.3}, 2),
    ("example_2_3", {"b": 1.0}, 2),
    ("product(flat, fubini_study_affine)", {"n_flat": 1, "n_fs": 2}, 3)
]

parameter_cases = [
    ("nosuch", {}, exceptions.UnknownMetric),
    ("flat", {}, exceptions.ParameterError),
    ("flat", {"n": 0}, exceptions.ParameterError),
    ("flat", {"n": 1.5}, exceptions.ParameterError),
    ("example_2_2", {}, exceptions.ParameterError),
    ("example_2_2", {"eps": 1.0}, exceptions.ParameterError),
    ("example_2_2", {"eps": 0.0}, exceptions.ParameterError),
    ("example_2_2", {"eps": 0.3, "b": 1.0}, exceptions.ParameterError),
    ("example_2_3", {"b": -1.0}, exceptions.ParameterError),
    ("example_2_3", {"b": 1.0, "n": 3}, exceptions.ParameterError),
    ("example_2_2", {"eps": float("nan")}, exceptions.ParameterError)
]

file_cases = [
    ({"dimension": 2}, exceptions.MetricFileError),
    ({"dimension": "two", "entries_upper": [["1"]]}, exceptions.MetricFileError),
    ({"dimension": 2, "entries_upper": [["1", "0"]]}, exceptions.DimensionMismatch),
    ({"dimension": 1, "entries_upper": [["1 + q"]]}, exceptions.UnknownParameter),
    ({"dimension": 1, "entries_upper": [["1 + i*z1*zb1"]]}, exceptions.NonRealDiagonal)
]


@pytest.mark.metric
@pytest.mark.parametrize("name, params, n", catalog_cases)
def test_catalog(name, params, n):
    """Catalog metrics build, are Hermitian and positive definite at the origin."""
    spec = metric.catalog(name, params)
    assert spec.n == n
    jet = metric.jet(spec, np.zeros(n))
    np.testing.assert_allclose(jet.g, jet.g.conj().T, atol=1e-15)
    assert np.linalg.eigvalsh(jet.g)[0] > 0
    assert all(value < 1e-12 for value in jet.residuals().values())


@pytest.mark.metric
@pytest.mark.parametrize("name, params, exception", parameter_cases)
def test_catalog_exceptions(name, params, exception):
    """Unknown names and parameters outside their ranges."""
    with pytest.raises(exception):
        metric.catalog(name, params)


@pytest.mark.metric
def test_aliases_and_describe():
    """Aliases resolve to the canonical entry, listing carries example entries."""
    assert metric.lookup("fs").name == "fubini_study_affine"
    assert metric.lookup("product(flat,fubini_study_affine)").name == "product_flat_fubini_study"
    description = metric.describe("example_2_2")
    assert description["required"] == ["eps"]
    assert description["domain_hint"] == 0.2
    assert len(description["entries_upper"]) == 2
    assert len(metric.CATALOG) == 6


@pytest.mark.metric
def test_example_2_3_values():
    """Closed form entries at a point."""
    p = [0.1 + 0.05j, -0.08j]
    g = metric.catalog("example_2_3", {"b": 1.0}).evaluate(p)
    z1, z2 = p
    np.testing.assert_allclose(g[0, 0], 1 - abs(z1) ** 2 + 2 * abs(z2) ** 2, atol=1e-15)
    np.testing.assert_allclose(g[1, 1], 1 - 5 * abs(z1) ** 2 - abs(z2) ** 2, atol=1e-15)
    np.testing.assert_allclose(g[0, 1], 2 * z2 * np.conj(z1), atol=1e-15)
    np.testing.assert_allclose(g[1, 0], np.conj(g[0, 1]), atol=1e-15)


@pytest.mark.metric
def test_dual_is_inverse():
    """example_2_2 times example_2_2_dual is the identity."""
    p = [0.12 - 0.05j, 0.07 + 0.1j]
    g = metric.catalog("example_2_2", {"eps": 0.3}).evaluate(p)
    h = metric.catalog("example_2_2_dual", {"eps": 0.3}).evaluate(p)
    np.testing.assert_allclose(g @ h, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(h @ g, np.eye(2), atol=1e-12)


@pytest.mark.metric
def test_jet_against_differences():
    """Exact metric jet agrees with the finite difference oracle."""
    spec = metric.catalog("example_2_2_dual", {"eps": 0.3})
    p = [0.1 + 0.02j, -0.05 + 0.08j]
    exact, approx = metric.jet(spec, p), metric.fd_jet(spec, p, 1e-4)
    np.testing.assert_allclose(approx.g, exact.g, atol=1e-12)
    np.testing.assert_allclose(approx.dg_hol, exact.dg_hol, atol=1e-6)
    np.testing.assert_allclose(approx.dg_anti, exact.dg_anti, atol=1e-6)
    np.testing.assert_allclose(approx.ddg, exact.ddg, atol=1e-4)


@pytest.mark.metric
def test_jet_checks():
    """Dimension and validity radius checks."""
    spec = metric.catalog("example_2_2", {"eps": 0.3})
    with pytest.raises(exceptions.DimensionMismatch):
        metric.jet(spec, [0.0])
    with pytest.raises(exceptions.RegionError):
        metric.jet(spec, [0.3, 0.0])
    assert metric.jet(spec, [0.3, 0.0], check_region=False).n == 2


@pytest.mark.metric
def test_dual_pole():
    """The dual metric is not positive definite beyond |z|^2 = 1/(1 - eps)."""
    spec = metric.catalog("example_2_2_dual", {"eps": 0.3})
    with pytest.raises((exceptions.NotPositiveDefinite, exceptions.EvaluationError)):
        metric.jet(spec, [1.3, 0.0], check_region=False)


@pytest.mark.metric
@pytest.mark.parametrize("mode", ["random", "grid"])
def test_region_points(mode):
    """Points stay inside the ball, random mode is reproducible."""
    points = metric.region_points(2, 0.5, 40, 7, mode)
    assert points.shape == (40, 2)
    assert np.all(np.linalg.norm(points, axis=1) <= 0.5 + 1e-12)
    assert np.array_equal(points, metric.region_points(2, 0.5, 40, 7, mode))


@pytest.mark.metric
def test_region_exceptions():
    """Bad counts, radii and modes."""
    with pytest.raises(exceptions.ConfigError):
        metric.region_points(2, 0.5, 0)
    with pytest.raises(exceptions.ConfigError):
        metric.region_points(2, -0.5, 10)
    with pytest.raises(exceptions.ConfigError):
        metric.region_points(2, 0.5, 10, mode="spiral")


@pytest.mark.metric
def test_validate():
    """Failures beyond the validity region are report content."""
    spec = metric.catalog("example_2_2_dual", {"eps": 0.3})
    inside = metric.validate(spec, 0.2, 50, seed=1)
    assert inside["positive_definite"] and inside["failure"] is None
    assert inside["max_asymmetry"] < 1e-12
    outside = metric.validate(spec, 3.0, 200, seed=1)
    assert not outside["positive_definite"]
    assert outside["failure"]["index"] >= 0


@pytest.mark.metric
def test_load_file():
    """Metric file with a validity radius."""
    spec = metric.load(DATA / "ball.json")
    assert spec.name == "ball" and spec.n == 2 and spec.domain_hint == 0.5
    np.testing.assert_allclose(metric.jet(spec, [0, 0]).g, np.eye(2), atol=1e-15)
    assert metric.resolve(str(DATA / "ball.json")).describe()["dimension"] == 2
    with pytest.raises(exceptions.NonRealDiagonal):
        metric.load(DATA / "complex_diagonal.json")


@pytest.mark.metric
@pytest.mark.parametrize("data, exception", file_cases)
def test_file_exceptions(data, exception):
    """Malformed metric definitions."""
    with pytest.raises(exception):
        metric.from_dict(data)


@pytest.mark.metric
def test_load_exceptions():
    """Missing files and invalid JSON."""
    with pytest.raises(exceptions.MetricFileError):
        metric.load("/tmp/hermrbc-nosuch-metric.json")
    path = pathlib.Path("/tmp/hermrbc-invalid-metric.json")
    path.write_text("{not json", encoding="utf-8")
    try:
        with pytest.raises(exceptions.MetricFileError):
            metric.load(path)
    finally:
        path.unlink()
    with pytest.raises(exceptions.UnknownMetric):
        metric.resolve("nosuch")


@pytest.mark.metric
def test_describe_spec():
    """Description keeps the source strings."""
    spec = metric.from_dict(json.loads((DATA / "ball.json").read_text(encoding="utf-8")))
    description = spec.describe()
    assert description["entries_upper"][0][1] == "zb1*z2/(1 - normsq(z))^2"
    assert description["parameters"] == {}
