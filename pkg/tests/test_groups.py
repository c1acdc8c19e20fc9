# -*- coding: utf-8 -*-
import json
import pathlib
import numpy as np
import pandas as pd
import pytest
from hermrbc import HermRBC, exceptions, metric

DATA = pathlib.Path(__file__).parent / "data"
ARGS = {"samples": 2000, "starts": 2, "iterations": 100, "seed": 1}


@pytest.fixture(name="client")
def fixture_client():
    with HermRBC(args=ARGS) as client:
        yield client


@pytest.mark.groups
def test_catalog(client):
    """List, show and validate."""
    data = client.catalog.list()
    assert data["command"] == "catalog list"
    assert len(data["results"]["catalog"]["entries"]) == len(metric.CATALOG)
    assert [row["name"] for row in data["table"]] == sorted(metric.CATALOG)

    entry = client.catalog.show("fs")["results"]["entry"]
    assert entry["name"] == "fubini_study_affine" and entry["operation"] == "metric.catalog"
    with pytest.raises(exceptions.UnknownMetric):
        client.catalog.show("nosuch")

    frame = client.catalog.list(output="pandas")
    assert isinstance(frame, pd.DataFrame) and len(frame) == len(metric.CATALOG)

    data = client.catalog.validate("example_2_2", 0.2, 50)
    assert data["seed"] == 1
    assert data["inputs"]["metric_ref"] == "example_2_2"
    assert data["results"]["validation"]["operation"] == "metric.validate"


@pytest.mark.groups
def test_curvature_evaluate(client):
    """Origin of example_2_3 with b = 1."""
    data = client.curvature.evaluate("example_2_3", [0, 0], {"b": 1.0}, directions=3, vectors=[[1, 0]])
    ricci = data["results"]["ricci"]
    assert ricci["ric3"][0][0].real == pytest.approx(-1.0, abs=1e-12)
    assert data["inputs"]["metric"]["name"] == "example_2_3"
    assert data["results"]["hsc"]["count"] == 4
    assert len(data["table"]) == 4
    assert data["results"]["gauduchon"]["residual"] < 1e-10
    with pytest.raises(exceptions.RegionError):
        client.curvature.evaluate("example_2_3", [0.3, 0], {"b": 1.0})


@pytest.mark.groups
def test_curvature_evaluate_json(client):
    """Serialized output is plain JSON and repeatable."""
    first = client.curvature.evaluate("fs", [0.1, 0.05j], {"n": 2}, directions=2, output="json")
    second = client.curvature.evaluate("fs", [0.1, 0.05j], {"n": 2}, directions=2, output="json")
    assert first == second
    data = json.loads(first)
    assert data["results"]["curvature"]["frame"] == "coordinate"
    assert data["results"]["hsc"]["min"] == pytest.approx(2.0, abs=1e-10)
    assert data["results"]["hsc"]["max"] == pytest.approx(2.0, abs=1e-10)


@pytest.mark.groups
def test_curvature_rbc(client):
    """Uniform weights and the matching direction at the origin of example_2_2."""
    data = client.curvature.rbc("example_2_2", [0, 0], weights=[1, 1], xi=np.eye(2), params={"eps": 0.3})
    assert data["results"]["rbc"]["value"] == pytest.approx(-0.3, abs=1e-12)
    assert data["results"]["quad_form"]["value"] == pytest.approx(-0.3, abs=1e-12)
    assert data["results"]["rbc"]["weights"] == pytest.approx([2 ** -0.5, 2 ** -0.5])
    with pytest.raises(exceptions.DegenerateDirection):
        client.curvature.rbc("example_2_2", [0, 0], weights=[0, 0])


@pytest.mark.groups
def test_curvature_identities(client):
    data = client.curvature.identities("example_2_2", [[0, 0], [0.1, -0.05j]], {"eps": 0.3})
    assert len(data["table"]) == 2
    assert data["results"]["identities"]["torsion_identity"] < 1e-10
    assert data["results"]["identities"]["gauduchon_identity"] < 1e-10
    assert data["results"]["finite_differences"]["ricci_form"] < 1e-5


@pytest.mark.groups
def test_curvature_calibrate(client):
    results = client.curvature.calibrate()["results"]
    assert results["calibration"]["best"] == 0.5
    assert results["calibration"]["agrees"]


@pytest.mark.groups
def test_certify_point(client):
    """Fubini-Study is certified, example_2_2 refuted."""
    data = client.certify.point("fs", [0, 0], "pos", {"n": 2})
    assert data["results"]["status"] == "certified"
    assert data["results"]["verdict"]["evidence"] == "spectral"
    assert data["inputs"]["condition"] == "pos"

    data = client.certify.point("example_2_2", [0, 0], "nonneg", {"eps": 0.3})
    assert data["results"]["status"] == "refuted"
    assert data["table"][0]["status"] == "refuted"
    with pytest.raises(exceptions.ConfigError):
        client.certify.point("fs", [0, 0], "positive")


@pytest.mark.groups
def test_certify_scan(client):
    data = client.certify.scan("example_2_2", 0.1, 3, "nonneg", directions=2, params={"eps": 0.3})
    assert data["results"]["status"] == "refuted"
    assert data["results"]["summary"]["statuses"]["refuted"] == 3
    assert [row["index"] for row in data["table"]] == [0, 1, 2]
    assert all("hsc_min" in row for row in data["table"])


@pytest.mark.groups
def test_negative_directions(client):
    """A negative direction count is an input error, not a numpy failure."""
    with pytest.raises(exceptions.ConfigError):
        client.curvature.evaluate("flat", [0, 0], {"n": 2}, directions=-3)
    with pytest.raises(exceptions.ConfigError):
        client.certify.scan("example_2_2", 0.1, 2, "nonneg", directions=-1, params={"eps": 0.3})


@pytest.mark.groups
def test_certify_constant(client):
    data = client.certify.constant("flat", [0, 0], 0.0, {"n": 2})
    assert data["results"]["status"] == "consistent"
    data = client.certify.constant("flat", [0, 0], 1.0, {"n": 2})
    assert data["results"]["status"] == "inconsistent"


@pytest.mark.groups
def test_schwarz_report(client):
    """Flat identity with measured bounds."""
    data = client.schwarz.report("flat", "flat", "identity", points=[[0, 0], [0.1, 0.05j], [-0.02, 0.1]],
                                 params={"n": 2})
    measured = data["results"]["measured_bounds"]["bounds"]
    assert measured.lam == pytest.approx(0.0, abs=1e-10)
    assert data["results"]["schwarz"]["hypotheses_verified"] == 3
    assert data["results"]["schwarz"]["conclusions_hold"]
    assert len(data["table"]) == 3
    assert "sup_bound" not in data["results"]


@pytest.mark.groups
def test_schwarz_report_given_bounds(client):
    """Given bounds skip measuring; the sup block is added on request."""
    data = client.schwarz.report("flat", str(DATA / "ball.json"), "identity", count=2, radius=0.1, lam=0.0,
                                 kappa=1.0, sup=True)
    assert "measured_bounds" not in data["results"]
    assert data["inputs"]["lambda"] == 0.0
    assert data["inputs"]["target_metric"]["name"] == "ball"
    assert "sup_bound" in data["results"]


@pytest.mark.groups
def test_schwarz_bochner(client):
    data = client.schwarz.bochner("flat", "fs", "identity", [0.1, 0.05j], {"n": 2})
    bochner = data["results"]["bochner"]
    assert bochner["residual"] <= 1e-4
    assert data["inputs"]["target_metric"]["dimension"] == 2


@pytest.mark.groups
def test_montecarlo_fs_moment(client):
    data = client.montecarlo.fs_moment(2, [[1, 1, 1, 1], [1, 1, 2, 2], [1, 2, 1, 2]], unitary=True,
                                       args={"samples": 20000})
    assert data["results"]["status"] == "pass"
    assert data["table"][0]["target"] == pytest.approx(1 / 3)
    assert "rotated_estimate" in data["table"][0]


@pytest.mark.groups
def test_montecarlo_berger(client):
    data = client.montecarlo.berger("fs", params={"n": 2}, synthetic=2, args={"samples": 20000})
    assert data["results"]["status"] == "pass"
    assert [row["tensor"] for row in data["table"]] == ["fubini_study_affine", "synthetic0", "synthetic1"]
    assert data["results"]["synthetic"]["count"] == 2
    with pytest.raises(exceptions.ConfigError):
        client.montecarlo.berger()
