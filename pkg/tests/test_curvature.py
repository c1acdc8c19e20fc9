# -*- coding: utf-8 -*-
import numpy as np
import pytest
from hermrbc import certify, curvature, exceptions, metric, numerics

EPS = 0.3
ORIGIN = [0.0, 0.0]
POINT = [0.08 - 0.03j, -0.05 + 0.06j]

identity_cases = [
    ("example_2_2", {"eps": EPS}),
    ("example_2_2_dual", {"eps": EPS}),
    ("example_2_3", {"b": 1.0}),
    ("fs", {"n": 2})
]


def tensor(name, params, p=ORIGIN, unitary=True):
    j = metric.jet(metric.catalog(name, params), p)
    return curvature.unitary_tensor(j) if unitary else curvature.chern_tensor(j)


@pytest.mark.curvature
def test_flat():
    """Flat metric has vanishing curvature."""
    t = tensor("flat", {"n": 3}, [0.1, 0.2j, -0.3])
    assert np.max(np.abs(t.R)) == 0


@pytest.mark.curvature
def test_fubini_study_origin():
    """R = delta_ij delta_kl + delta_il delta_kj, Einstein with constant n + 1."""
    t = tensor("fs", {"n": 2})
    d = np.eye(2)
    np.testing.assert_allclose(t.R, np.einsum("ij,kl->ijkl", d, d) + np.einsum("il,kj->ijkl", d, d), atol=1e-14)
    ric = curvature.ricci(t)
    c, residual = curvature.einstein_constant(ric.ric1, t.metric)
    assert c == pytest.approx(3.0) and residual < 1e-12


@pytest.mark.curvature
def test_fubini_study_constant_hsc():
    """Holomorphic sectional curvature 2 in every direction and at every point."""
    t = tensor("fs", {"n": 3}, [0.2, -0.1j, 0.3 + 0.1j], unitary=False)
    V = np.random.default_rng(4).standard_normal((50, 3)) + 1j * np.random.default_rng(5).standard_normal((50, 3))
    np.testing.assert_allclose(curvature.hsc_batch(t, V), 2.0, atol=1e-10)
    assert curvature.symmetry_report(t)["kahler_like"] < 1e-12


@pytest.mark.curvature
def test_example_2_2_origin():
    """R = -delta_ij delta_kl + (2 - eps) delta_il delta_kj, H = 1 - eps, B(uniform) = -n + 2 - eps."""
    t = tensor("example_2_2", {"eps": EPS})
    d = np.eye(2)
    expected = -np.einsum("ij,kl->ijkl", d, d) + (2 - EPS) * np.einsum("il,kj->ijkl", d, d)
    np.testing.assert_allclose(t.R, expected, atol=1e-14)
    assert curvature.hsc(t, [0.6, 0.8j]) == pytest.approx(1 - EPS)
    weights = curvature.FrameWeights.normalized(t.frame, [1, 1])
    assert curvature.rbc_value(t, weights) == pytest.approx(-2 + 2 - EPS)
    assert curvature.quad_form(t, np.eye(2) / np.sqrt(2)) == pytest.approx(-EPS)


@pytest.mark.curvature
def test_example_2_2_dual_origin():
    """The dual has H = -(1 - eps) and positive B at uniform weights."""
    t = tensor("example_2_2_dual", {"eps": EPS})
    assert curvature.hsc(t, [1, 0]) == pytest.approx(-(1 - EPS))
    weights = curvature.FrameWeights.normalized(t.frame, [1, 1])
    value, imaginary = curvature.rbc_value(t, weights, residual=True)
    assert value == pytest.approx(EPS) and imaginary < 1e-14


@pytest.mark.curvature
def test_example_2_3_origin():
    """Components, Ricci traces and B at uniform weights for b = 1."""
    b = 1.0
    t = tensor("example_2_3", {"b": b})
    R = t.R
    assert R[0, 0, 0, 0] == pytest.approx(1)
    assert R[1, 1, 1, 1] == pytest.approx(1)
    assert R[1, 1, 0, 0] == pytest.approx(-(1 + b))
    assert R[0, 0, 1, 1] == pytest.approx(1 + 4 * b)
    assert R[1, 0, 0, 1] == pytest.approx(-(1 + b))
    assert R[0, 1, 1, 0] == pytest.approx(-(1 + b))
    ric = curvature.ricci(t)
    assert ric.ric1[0, 0] == pytest.approx(2 + 4 * b)
    assert ric.ric1[1, 1] == pytest.approx(-b)
    assert ric.ric2[0, 0] == pytest.approx(-b)
    assert ric.ric2[1, 1] == pytest.approx(2 + 4 * b)
    assert ric.ric3[0, 0] == pytest.approx(-b)
    weights = curvature.FrameWeights.normalized(t.frame, [1, 1])
    assert curvature.rbc_value(t, weights) == pytest.approx((2 + 3 * b) / 2)


@pytest.mark.curvature
def test_hsc_frame_invariance():
    """The holomorphic sectional curvature does not depend on the frame."""
    j = metric.jet(metric.catalog("example_2_3", {"b": 1.0}), POINT)
    coordinate = curvature.chern_tensor(j)
    unitary = curvature.unitary_tensor(j)
    E = unitary.frame.E
    np.testing.assert_allclose(E.T @ j.g @ E.conj(), np.eye(2), atol=1e-12)
    for v in ([1, 0], [0.3, -0.7j], [1 + 1j, 2]):
        c = np.linalg.solve(E, np.asarray(v, dtype=complex))
        assert curvature.hsc(coordinate, v) == pytest.approx(curvature.hsc(unitary, c), abs=1e-12)


@pytest.mark.curvature
def test_rotation():
    """Rotating the frame by U rotates the directions, Q is unchanged."""
    t = tensor("example_2_3", {"b": 1.0}, POINT)
    U = numerics.random_unitary(2, 9)
    rotated = curvature.rotate(t, U)
    xi = curvature.PsdDirection.from_matrix(np.array([[2, 0.5j], [-0.5j, 1]]))
    moved = U.conj().T @ xi.xi @ U
    assert curvature.quad_form(t, xi) == pytest.approx(curvature.quad_form(rotated, moved), abs=1e-12)
    np.testing.assert_allclose(rotated.frame.E, t.frame.E @ U, atol=1e-14)


@pytest.mark.curvature
@pytest.mark.parametrize("name, params", identity_cases)
def test_hermitian_symmetry(name, params):
    """R_{i jbar k lbar} = conj(R_{j ibar l kbar}) away from the origin."""
    t = tensor(name, params, POINT)
    assert curvature.symmetry_report(t)["hermitian"] < 1e-12


@pytest.mark.curvature
@pytest.mark.parametrize("name, params", identity_cases)
def test_torsion_identities(name, params):
    """First Bianchi type identities for the torsion and the Gauduchon form."""
    spec = metric.catalog(name, params)
    assert curvature.torsion_identity_residual(spec, POINT) < 1e-10
    assert curvature.gauduchon_identity_residual(spec, POINT) < 1e-10


@pytest.mark.curvature
def test_kahler_torsion():
    """Fubini-Study is Kaehler, example_2_2 is not."""
    fs = curvature.torsion_eta(metric.jet(metric.catalog("fs", {"n": 2}), POINT))
    assert np.max(np.abs(fs.torsion)) < 1e-14
    assert np.max(np.abs(fs.eta)) < 1e-14
    j = metric.jet(metric.catalog("example_2_2", {"eps": EPS}), POINT)
    data = curvature.torsion_eta(j)
    assert np.max(np.abs(data.torsion)) > 1e-3
    np.testing.assert_allclose(data.torsion, -np.transpose(data.torsion, (0, 2, 1)), atol=1e-15)
    np.testing.assert_allclose(curvature.torsion_eta(j, 1.0).torsion, 2 * data.torsion, atol=1e-15)


@pytest.mark.curvature
def test_calibration():
    """The torsion normalization in use wins the calibration."""
    best, residuals = curvature.calibrate_torsion_factor()
    assert best == curvature.TORSION_FACTOR
    assert residuals[best] < 1e-10
    assert set(residuals) == set(curvature.TORSION_CANDIDATES)


@pytest.mark.curvature
def test_ricci_form():
    """First Ricci tensor equals -dd log det g."""
    spec = metric.catalog("example_2_2", {"eps": EPS})
    ric1 = curvature.ricci(curvature.chern_tensor(metric.jet(spec, POINT))).ric1
    np.testing.assert_allclose(curvature.ricci_form_fd(spec, POINT), ric1, atol=1e-5)


@pytest.mark.curvature
def test_pairsum():
    """Berger pair sum of Fubini-Study at a one-hot weight."""
    t = tensor("fs", {"n": 2})
    assert curvature.h_positive_pairsum(t, [1, 0]) == pytest.approx(4.0)
    with pytest.raises(exceptions.InvalidDirection):
        curvature.h_positive_pairsum(t, [1, -1])
    with pytest.raises(exceptions.DegenerateDirection):
        curvature.h_positive_pairsum(t, [0, 0])


@pytest.mark.curvature
def test_frame_exceptions():
    """Frame bookkeeping errors."""
    j = metric.jet(metric.catalog("fs", {"n": 2}), POINT)
    coordinate, unitary = curvature.chern_tensor(j), curvature.unitary_tensor(j)
    with pytest.raises(exceptions.FrameMismatch):
        curvature.to_frame(unitary, unitary.frame)
    with pytest.raises(exceptions.FrameMismatch):
        curvature.rotate(coordinate, np.eye(2))
    with pytest.raises(exceptions.FrameMismatch):
        curvature.rbc_value(coordinate, curvature.FrameWeights.normalized(unitary.frame, [1, 0]))
    other = curvature.unitary_tensor(metric.jet(metric.catalog("fs", {"n": 2}), ORIGIN))
    with pytest.raises(exceptions.FrameMismatch):
        curvature.rbc_value(unitary, curvature.FrameWeights.normalized(other.frame, [1, 0]))
    with pytest.raises(exceptions.FrameMismatch):
        curvature.to_frame(coordinate, other.frame)


@pytest.mark.curvature
def test_direction_exceptions():
    """Weights and PSD directions are validated on construction."""
    frame = numerics.UnitaryFrame(np.eye(2))
    with pytest.raises(exceptions.InvalidDirection):
        curvature.FrameWeights(frame, [1, 1])
    with pytest.raises(exceptions.InvalidDirection):
        curvature.FrameWeights(frame, [-1, 0])
    with pytest.raises(exceptions.DimensionMismatch):
        curvature.FrameWeights(frame, [1, 0, 0])
    with pytest.raises(exceptions.DegenerateDirection):
        curvature.FrameWeights.normalized(frame, [0, 0])
    with pytest.raises(exceptions.InvalidDirection):
        curvature.PsdDirection(np.diag([1, -1]) / np.sqrt(2))
    with pytest.raises(exceptions.InvalidDirection):
        curvature.PsdDirection(np.eye(2))
    with pytest.raises(exceptions.DegenerateDirection):
        curvature.PsdDirection.from_matrix(np.zeros((2, 2)))
    with pytest.raises(exceptions.DegenerateDirection):
        curvature.hsc(curvature.ChernTensor(np.zeros((2, 2, 2, 2)), np.eye(2)), [0, 0])


@pytest.mark.curvature
def test_psd_direction():
    """From weights and back to the spectrum."""
    U = numerics.random_unitary(3, 2)
    xi = curvature.PsdDirection.from_weights(U, [3, 0, 4])
    values, _ = xi.spectral()
    np.testing.assert_allclose(values, [0, 0.6, 0.8], atol=1e-12)
    assert np.trace(xi.xi @ xi.xi).real == pytest.approx(1)


@pytest.mark.curvature
def test_example_2_2_hsc_everywhere():
    """H = 1 - eps in every direction at the origin."""
    t = tensor("example_2_2", {"eps": EPS}, unitary=False)
    rng = np.random.default_rng(11)
    V = rng.standard_normal((100000, 2)) + 1j * rng.standard_normal((100000, 2))
    np.testing.assert_allclose(curvature.hsc_batch(t, V), 1 - EPS, atol=1e-9)


@pytest.mark.curvature
def test_example_2_3_quadratic_form():
    """Q = x^2 + y^2 + 3b xy - 2(1 + b)|t|^2 for xi = [[x, t], [conj(t), y]] at the origin, b = 1."""
    t = tensor("example_2_3", {"b": 1.0})
    xis = certify.sample_directions(2, 1000, np.random.default_rng(12))
    for xi in xis:
        x, y, s = xi[0, 0].real, xi[1, 1].real, xi[0, 1]
        expected = x ** 2 + y ** 2 + 3 * x * y - 4 * abs(s) ** 2
        assert curvature.quad_form(t, xi) == pytest.approx(expected, abs=1e-10)


@pytest.mark.curvature
@pytest.mark.parametrize("n", [2, 3])
def test_fubini_study_kahler(n):
    """Away from the origin: no torsion, Kaehler symmetries and H = 2 at every point and direction."""
    spec = metric.catalog("fs", {"n": n})
    rng = np.random.default_rng(13)
    for p in metric.region_points(n, 0.5, 10, seed=n):
        j = metric.jet(spec, p)
        data = curvature.torsion_eta(j)
        assert np.linalg.norm(data.torsion) <= 1e-10
        assert np.linalg.norm(data.eta) <= 1e-10
        t = curvature.chern_tensor(j)
        assert curvature.symmetry_report(t)["kahler_like"] <= 1e-8
        V = rng.standard_normal((10, n)) + 1j * rng.standard_normal((10, n))
        np.testing.assert_allclose(curvature.hsc_batch(t, V), 2.0, atol=1e-10)


@pytest.mark.curvature
@pytest.mark.parametrize("name, params", identity_cases)
def test_hermitian_symmetry_region(name, params):
    """Hermitian pair symmetry at random points of the validity ball."""
    spec = metric.catalog(name, params)
    for p in metric.region_points(2, 0.1, 100, seed=14):
        assert curvature.symmetry_report(curvature.unitary_tensor(metric.jet(spec, p)))["hermitian"] < 1e-12
