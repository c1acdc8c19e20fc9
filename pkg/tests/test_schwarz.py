# -*- coding: utf-8 -*-
import pathlib
import numpy as np
import pytest
from hermrbc import exceptions, metric, schwarz, wirtinger

DATA = pathlib.Path(__file__).parent / "data"
BUDGET = {"samples": 1000, "starts": 2, "iterations": 100, "seed": 0}
POINTS = [[0.0, 0.0], [0.1, -0.05j], [0.02 + 0.1j, 0.15]]

bochner_cases = [
    ("flat", "flat", "identity"),
    ("flat", "ball", "identity"),
    ("flat", "flat", "square"),
    ("fs", "example_2_2_dual", "identity"),
    ("example_2_2", "fs", "square"),
    ("example_2_3", "ball", "identity")
]

map_cases = [
    (lambda: schwarz.MapSpec.from_texts(2, 2, ["z1", "zb2"]), exceptions.NonHolomorphicMap),
    (lambda: schwarz.MapSpec.from_texts(2, 2, ["z1"]), exceptions.DimensionMismatch),
    (lambda: schwarz.MapSpec(1, 1, (wirtinger.Var(3),)), exceptions.DimensionMismatch),
    (lambda: schwarz.builtin_map("identity", 2, 3), exceptions.DimensionMismatch),
    (lambda: schwarz.builtin_map("rotation", 2, 2), exceptions.ConfigError),
    (lambda: schwarz.load_map("/tmp/hermrbc-nosuch-map.json"), exceptions.MetricFileError),
    (lambda: schwarz.SchwarzBounds(0.0, mu=-1.0), exceptions.ConfigError),
    (lambda: schwarz.SchwarzBounds(0.0, kappa=-1.0), exceptions.ConfigError),
    (lambda: schwarz.SchwarzBounds(0.0, r=0), exceptions.ConfigError)
]


def spec(name):
    if name == "ball":
        return metric.load(DATA / "ball.json")
    params = {"example_2_2": {"eps": 0.3}, "example_2_2_dual": {"eps": 0.3}, "example_2_3": {"b": 1.0}}
    return metric.catalog(name, params.get(name, {"n": 2}))


def mapping(name):
    if name == "square":
        return schwarz.load_map(DATA / "square.json")
    return schwarz.builtin_map(name, 2, 2)


@pytest.mark.schwarz
@pytest.mark.parametrize("factory, exception", map_cases)
def test_map_exceptions(factory, exception):
    with pytest.raises(exception):
        factory()


@pytest.mark.schwarz
def test_map_jet():
    """Exact first and pure second derivatives of a polynomial map."""
    f = mapping("square")
    assert f.describe()["target_dim"] == 2
    z1, z2 = 0.1 + 0.2j, -0.3j
    mj = schwarz.map_jet(f, [z1, z2])
    c = 0.5
    np.testing.assert_allclose(mj.fp, [z1 + c * z1 ** 2, z2 + c * z1 * z2], atol=1e-15)
    np.testing.assert_allclose(mj.df, [[1 + 2 * c * z1, 0], [c * z2, 1 + c * z1]], atol=1e-15)
    np.testing.assert_allclose(mj.d2f[0], [[2 * c, 0], [0, 0]], atol=1e-15)
    np.testing.assert_allclose(mj.d2f[1], [[0, c], [c, 0]], atol=1e-15)
    with pytest.raises(exceptions.DimensionMismatch):
        schwarz.map_jet(f, [0.0])


@pytest.mark.schwarz
def test_resolve_map():
    assert schwarz.resolve_map("identity", 2, 2).name == "identity"
    assert schwarz.resolve_map(str(DATA / "square.json"), 2, 2).name == "square"
    with pytest.raises(exceptions.DimensionMismatch):
        schwarz.resolve_map(str(DATA / "square.json"), 3, 2)


@pytest.mark.schwarz
def test_trace_u_identity():
    """u = tr_g h for the identity map, equal to m between equal metrics."""
    for name in ("flat", "fs", "example_2_3"):
        terms = schwarz.bochner_terms(spec(name), spec(name), mapping("identity"), [0.1, 0.05j])
        assert terms["u"] == pytest.approx(2.0)
    terms = schwarz.bochner_terms(spec("flat"), spec("ball"), mapping("identity"), [0.0, 0.0])
    assert terms["u"] == pytest.approx(2.0)
    assert terms["nabla_df_norm2"] == pytest.approx(0.0, abs=1e-14)


@pytest.mark.schwarz
@pytest.mark.parametrize("g, h, f", bochner_cases)
def test_bochner_identity(g, h, f):
    """Finite difference Laplacian of u matches the Bochner right hand side."""
    for p in POINTS:
        assert schwarz.bochner_residual(spec(g), spec(h), mapping(f), p) <= schwarz.ACCEPT


@pytest.mark.schwarz
@pytest.mark.slow
@pytest.mark.parametrize("g, h, f", bochner_cases)
def test_bochner_identity_region(g, h, f):
    """The Bochner identity holds at fifty random points of a small ball."""
    for p in metric.region_points(2, 0.05, 50, seed=7):
        assert schwarz.bochner_residual(spec(g), spec(h), mapping(f), p) <= schwarz.ACCEPT


@pytest.mark.schwarz
def test_laplacian_step():
    with pytest.raises(exceptions.ConfigError):
        schwarz.box_u_fd(spec("flat"), spec("flat"), mapping("identity"), [0, 0], 0.1)


@pytest.mark.schwarz
def test_cauchy_schwarz_gap():
    """Nonnegative for semidefinite forms, zero for multiples of the metric."""
    g = np.array([[2, 0.5j], [-0.5j, 1]])
    assert schwarz.cauchy_schwarz_gap(3 * g, g) == pytest.approx(0.0, abs=1e-12)
    phi = np.array([[1, 0], [0, 0]], dtype=complex)
    assert schwarz.cauchy_schwarz_gap(phi, g) > 0


@pytest.mark.schwarz
@pytest.mark.parametrize("m", [2, 3])
def test_cauchy_schwarz_gap_random(m):
    """Nonnegative for random semidefinite forms against random metrics."""
    rng = np.random.default_rng(m)
    for _ in range(1000):
        A = 0.5 * (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m)))
        g = A @ A.conj().T + np.eye(m)
        V = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        V[:, rng.integers(1, m + 1):] = 0
        phi = V @ V.conj().T
        phi /= np.linalg.norm(phi)
        assert schwarz.cauchy_schwarz_gap(phi, g) >= -1e-12


@pytest.mark.schwarz
def test_report_flat():
    """Flat to flat identity: everything vanishes and the hypotheses hold."""
    f = mapping("identity")
    result = schwarz.schwarz_inequality_report(spec("flat"), spec("flat"), f, POINTS, schwarz.SchwarzBounds(0.0),
                                               BUDGET)
    summary = result["summary"]
    assert summary["rank"] == 2 and summary["r"] == 2
    assert summary["hypotheses_verified"] == len(POINTS)
    assert summary["max_bochner_residual"] < 1e-6
    assert summary["conclusions_hold"]
    assert [row["index"] for row in result["rows"]] == [0, 1, 2]
    assert all(row["hypothesis_curvature_evidence"] == "spectral" for row in result["rows"])


@pytest.mark.schwarz
def test_report_ball():
    """Identity into the ball: kappa = 1 is certified spectrally and the conclusions hold."""
    bounds = schwarz.SchwarzBounds(0.0, 0.0, 1.0)
    result = schwarz.schwarz_inequality_report(spec("flat"), spec("ball"), mapping("identity"), POINTS, bounds,
                                               BUDGET)
    summary = result["summary"]
    assert summary["hypotheses_verified"] == len(POINTS)
    assert summary["min_rank_bound_residual"] >= -1e-10
    assert summary["min_conclusion_residual"] >= -schwarz.ACCEPT
    assert summary["min_kato_residual"] >= -schwarz.ACCEPT
    assert summary["min_cauchy_schwarz_gap"] >= -1e-12
    assert summary["conclusions_hold"]
    origin = result["rows"][0]
    assert origin["u"] == pytest.approx(2.0)
    assert origin["box_u"] == pytest.approx(6.0, abs=1e-4)


@pytest.mark.schwarz
def test_report_constant():
    """Constant maps are handled without the logarithmic branch."""
    result = schwarz.schwarz_inequality_report(spec("flat"), spec("ball"), mapping("constant"), POINTS[:2],
                                               schwarz.SchwarzBounds(0.0, 0.0, 1.0), BUDGET)
    assert result["summary"]["rank"] == 0
    assert result["summary"]["notices"]
    assert all(row["critical"] and row["u"] == 0 for row in result["rows"])
    assert result["summary"]["min_log_conclusion_residual"] is None


@pytest.mark.schwarz
def test_report_exceptions():
    with pytest.raises(exceptions.ConfigError):
        schwarz.schwarz_inequality_report(spec("flat"), spec("flat"), mapping("identity"), [],
                                          schwarz.SchwarzBounds(0.0))
    with pytest.raises(exceptions.ConfigError):
        schwarz.schwarz_inequality_report(spec("flat"), spec("flat"), mapping("identity"), POINTS,
                                          schwarz.SchwarzBounds(0.0, r=3))
    with pytest.raises(exceptions.DimensionMismatch):
        schwarz.schwarz_inequality_report(metric.catalog("flat", {"n": 3}), spec("flat"), mapping("identity"),
                                          POINTS, schwarz.SchwarzBounds(0.0))


@pytest.mark.schwarz
def test_measure_bounds():
    """Ball curvature: B <= -2 from optimization, B <= -1 from the spectral bound."""
    measured = schwarz.measure_bounds(spec("flat"), spec("ball"), mapping("identity"), POINTS[:2], budget=BUDGET)
    bounds = measured["bounds"]
    assert bounds.lam == pytest.approx(0.0, abs=1e-12)
    assert bounds.kappa == pytest.approx(2.0, abs=1e-8)
    assert measured["kappa_certified"] == pytest.approx(1.0, abs=1e-8)
    assert bounds.r == 2


@pytest.mark.schwarz
def test_sup_bound():
    """Bounds apply only with positive kappa + mu."""
    f = mapping("identity")
    result = schwarz.sup_bound_check(spec("flat"), spec("flat"), f, POINTS, schwarz.SchwarzBounds(1.0, 0.0, 1.0))
    assert result["max_u"] == pytest.approx(2.0)
    assert {check["name"] for check in result["checks"]} == {"trace", "rank"}
    assert all(check["classification"] == "consistent" for check in result["checks"])
    result = schwarz.sup_bound_check(spec("flat"), spec("flat"), f, POINTS, schwarz.SchwarzBounds(1.0, 1.0, 0.0))
    assert [check["name"] for check in result["checks"]] == ["trace"]
    with pytest.raises(exceptions.NoApplicableBound):
        schwarz.sup_bound_check(spec("flat"), spec("flat"), f, POINTS, schwarz.SchwarzBounds(1.0))
