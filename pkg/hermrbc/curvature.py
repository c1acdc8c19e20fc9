# -*- coding: utf-8 -*-
"""Chern connection and curvature of a metric jet.

``R[i, j, k, l]`` is R_{i jbar k lbar}; the pair (i, jbar) carries the derivative directions::

    R_{i jbar k lbar} = -d_i d_jbar g_{k lbar} + g^{p qbar} d_i g_{k qbar} d_jbar g_{p lbar}

with the cometric g^{p qbar} stored at ``g_inv[q, p]``.
"""
# pylint: disable=invalid-name
from typing import Dict, Optional, Sequence, Tuple, Union
from dataclasses import dataclass
import logging
import numpy as np
from hermrbc import exceptions, metric, numerics, wirtinger
from hermrbc.numerics import UnitaryFrame

logger = logging.getLogger("hermrbc.curvature")

TORSION_FACTOR = 0.5
TORSION_CANDIDATES = (1.0, 0.5)
INDEX_CONVENTION = "R[i,j,k,l] = R_{i jbar k lbar}, first pair carries the derivative directions"


@dataclass
class ChernTensor:
    """Curvature at a point.

    :param R: rank-4 array indexed (i, jbar, k, lbar).
    :param metric: metric matrix in the tensor's frame, identity for unitary frames.
    :param frame: None for the coordinate frame, else the unitary frame.
    :param tag: metric/point identifier.
    """
    R: np.ndarray
    metric: np.ndarray
    frame: Optional[UnitaryFrame] = None
    tag: str = ""

    @property
    def n(self) -> int:
        return self.R.shape[0]

    @property
    def unitary(self) -> bool:
        return self.frame is not None


@dataclass
class TorsionData:
    """Connection coefficients ``gamma[k, i, j]`` = Gamma^k_{ij}, torsion and Gauduchon 1-form."""
    gamma: np.ndarray
    torsion: Optional[np.ndarray] = None
    eta: Optional[np.ndarray] = None


@dataclass
class RicciTriple:
    ric1: np.ndarray
    ric2: np.ndarray
    ric3: np.ndarray

    def as_dict(self) -> Dict[str, np.ndarray]:
        return {"ric1": self.ric1, "ric2": self.ric2, "ric3": self.ric3}


@dataclass
class FrameWeights:
    """Unitary frame with nonnegative unit weights a."""
    frame: UnitaryFrame
    a: np.ndarray

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float).reshape(-1)
        if self.a.shape[0] != self.frame.n:
            raise exceptions.DimensionMismatch(f"{self.a.shape[0]} weights for a frame of dimension {self.frame.n}")
        if np.any(self.a < 0):
            raise exceptions.InvalidDirection(f"Weights must be nonnegative, got {self.a.tolist()}")
        if abs(float(np.linalg.norm(self.a)) - 1) > numerics.TOLERANCES["exact"]:
            raise exceptions.InvalidDirection(f"Weights must have unit norm, got {float(np.linalg.norm(self.a))!r}")

    @classmethod
    def normalized(cls, frame: UnitaryFrame, a: Sequence[float]) -> "FrameWeights":
        """Weights scaled to unit norm."""
        a = np.asarray(a, dtype=float).reshape(-1)
        norm = float(np.linalg.norm(a))
        if norm <= 1e-14:
            raise exceptions.DegenerateDirection("All weights are zero")
        return cls(frame, a / norm)


@dataclass
class PsdDirection:
    """Hermitian positive semidefinite matrix with unit Frobenius norm."""
    xi: np.ndarray

    def __post_init__(self):
        try:
            xi = numerics.hermitian(self.xi, numerics.TOLERANCES["decomposition"])
        except exceptions.NotHermitian as ex:
            raise exceptions.InvalidDirection(f"Direction is not Hermitian: {ex.message}") from None
        lowest = float(np.linalg.eigvalsh(xi)[0])
        if lowest < -numerics.TOLERANCES["decomposition"]:
            raise exceptions.InvalidDirection(f"Direction is not positive semidefinite, eigenvalue {lowest:.3e}")
        norm = float(np.real(np.trace(xi @ xi)))
        if abs(norm - 1) > numerics.TOLERANCES["decomposition"]:
            raise exceptions.InvalidDirection(f"Direction must satisfy tr(xi^2) = 1, got {norm!r}")
        self.xi = xi

    @property
    def n(self) -> int:
        return self.xi.shape[0]

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "PsdDirection":
        """Normalize a PSD matrix to unit Frobenius norm."""
        m = np.asarray(m, dtype=complex)
        norm = float(np.linalg.norm(m))
        if norm <= 1e-14:
            raise exceptions.DegenerateDirection("Direction has vanishing norm")
        return cls(m / norm)

    @classmethod
    def from_weights(cls, U: np.ndarray, a: Sequence[float]) -> "PsdDirection":
        """xi = U diag(a) U^H, normalized."""
        U = np.asarray(U, dtype=complex)
        a = np.asarray(a, dtype=float)
        return cls.from_matrix((U * a) @ U.conj().T)

    def spectral(self) -> Tuple[np.ndarray, np.ndarray]:
        """Ascending eigenvalues clipped at zero and the unitary eigenvector matrix."""
        values, vectors = numerics.eigh(self.xi, numerics.TOLERANCES["decomposition"])
        return np.clip(values, 0, None), vectors


def chern_tensor(j: metric.MetricJet) -> ChernTensor:
    """Curvature in the coordinate frame."""
    R = -j.ddg + np.einsum("qp,ikq,jpl->ijkl", j.g_inv, j.dg_hol, j.dg_anti)
    return ChernTensor(R, j.g, None, j.tag)


def frame_at(j: metric.MetricJet, tol: float = numerics.TOLERANCES["exact"]) -> UnitaryFrame:
    """g-unitary tangent frame, e_a = sum_i E[i, a] d_i with E^T g conj(E) = I."""
    return numerics.unitary_frame(j.g.T, j.tag, tol)


def to_frame(t: ChernTensor, E: UnitaryFrame) -> ChernTensor:
    """Express a coordinate-frame tensor in a unitary frame of the same point.

    :param t: coordinate-frame tensor.
    :param E: frame with the same tag.
    :return: tensor in the unitary frame.
    """
    if t.unitary:
        raise exceptions.FrameMismatch(f"Tensor is already expressed in frame '{t.frame.tag}'")
    if E.n != t.n or (E.tag and t.tag and E.tag != t.tag):
        raise exceptions.FrameMismatch(f"Frame '{E.tag}' does not belong to tensor at '{t.tag}'")
    F = E.E
    R = np.einsum("ijkl,ia,jb,kc,ld->abcd", t.R, F, F.conj(), F, F.conj(), optimize=True)
    return ChernTensor(R, np.eye(t.n, dtype=complex), E, t.tag)


def rotate(t: ChernTensor, U: np.ndarray) -> ChernTensor:
    """Unitary-frame tensor re-expressed in the frame with columns E @ U."""
    if not t.unitary:
        raise exceptions.FrameMismatch("Rotation needs a tensor in a unitary frame")
    U = np.asarray(U, dtype=complex)
    R = np.einsum("ijkl,ia,jb,kc,ld->abcd", t.R, U, U.conj(), U, U.conj(), optimize=True)
    return ChernTensor(R, t.metric, t.frame.compose(U), t.tag)


def unitary_tensor(j: metric.MetricJet) -> ChernTensor:
    """Curvature in the frame produced by frame_at."""
    return to_frame(chern_tensor(j), frame_at(j))


def connection(j: metric.MetricJet) -> TorsionData:
    """Gamma^k_{ij} = g^{k qbar} d_i g_{j qbar}."""
    return TorsionData(np.einsum("qk,ijq->kij", j.g_inv, j.dg_hol))


def torsion_eta(j: metric.MetricJet, factor: float = TORSION_FACTOR) -> TorsionData:
    """Connection, torsion T^k_{ij} = factor (Gamma^k_{ij} - Gamma^k_{ji}) and eta_j = sum_i T^i_{ij}."""
    data = connection(j)
    data.torsion = factor * (data.gamma - np.transpose(data.gamma, (0, 2, 1)))
    data.eta = np.einsum("iij->j", data.torsion)
    return data


def torsion_derivative(j: metric.MetricJet) -> np.ndarray:
    """Exact d_lbar T^k_{ij}, indexed [l, k, i, j]."""
    d_inv = -np.einsum("ab,lbc,cd->lad", j.g_inv, j.dg_anti, j.g_inv)
    d_gamma = np.einsum("lqk,ijq->lkij", d_inv, j.dg_hol) + np.einsum("qk,iljq->lkij", j.g_inv, j.ddg)
    return d_gamma - np.transpose(d_gamma, (0, 1, 3, 2))


def torsion_identity_residual(spec: metric.MetricSpec, p: Sequence[complex],
                              factor: float = TORSION_FACTOR) -> float:
    """Max residual of 2 factor T_{ij qbar, lbar} = R_{j lbar i qbar} - R_{i lbar j qbar}.

    :param spec: metric.
    :param p: point.
    :param factor: torsion normalization multiplying T = Gamma - Gamma^t.
    :return: max absolute residual.
    """
    j = metric.jet(spec, p)
    R = chern_tensor(j).R
    lowered = np.einsum("kq,lkij->lijq", j.g, torsion_derivative(j))
    expected = np.einsum("jliq->lijq", R) - np.einsum("iljq->lijq", R)
    return float(np.max(np.abs(2 * factor * lowered - expected)))


def calibrate_torsion_factor(points: Sequence[Sequence[complex]] = None, eps: float = 0.3,
                             seed: int = 0) -> Tuple[float, Dict[float, float]]:
    """Pick the torsion normalization minimizing the identity residual on example_2_2.

    :param points: evaluation points, default 20 random points of radius 0.1.
    :param eps: example_2_2 parameter.
    :param seed: seed of the default points.
    :return: best factor and the max residual of every candidate.
    """
    spec = metric.catalog("example_2_2", {"n": 2, "eps": eps})
    if points is None:
        points = metric.region_points(2, 0.1, 20, seed)
    residuals = {
        factor: max(torsion_identity_residual(spec, p, factor) for p in points) for factor in TORSION_CANDIDATES
    }
    best = min(residuals, key=residuals.get)
    logger.info("torsion factor calibration %s, chosen %s", residuals, best)
    return best, residuals


def eta_derivative(j: metric.MetricJet, factor: float = TORSION_FACTOR) -> np.ndarray:
    """eta_{j, lbar} = factor sum_i d_lbar T^i_{ij}, indexed [j, l]."""
    return factor * np.einsum("liij->jl", torsion_derivative(j))


def gauduchon_identity_residual(spec: metric.MetricSpec, p: Sequence[complex],
                                factor: float = TORSION_FACTOR) -> float:
    """Max residual of 2 eta_{j,lbar} = sum_{i,q} (R_{j lbar i qbar} - R_{i lbar j qbar}) g^{i qbar}."""
    j = metric.jet(spec, p)
    R = chern_tensor(j).R
    expected = np.einsum("jliq,qi->jl", R, j.g_inv) - np.einsum("iljq,qi->jl", R, j.g_inv)
    return float(np.max(np.abs(2 * eta_derivative(j, factor) - expected)))


def eta_trace(j: metric.MetricJet, factor: float = TORSION_FACTOR) -> complex:
    """sum_i eta_{i, ibar} in a g(p)-unitary gauge, i.e. g^{j lbar} eta_{j, lbar}."""
    return complex(np.einsum("lj,jl->", j.g_inv, eta_derivative(j, factor)))


def ricci(t: ChernTensor, g: np.ndarray = None) -> RicciTriple:
    """First, second and third Ricci tensors, traced with the metric of the tensor's frame."""
    g = t.metric if g is None else np.asarray(g, dtype=complex)
    g_inv = numerics.invert_pd(g)
    return RicciTriple(
        np.einsum("lk,ijkl->ij", g_inv, t.R),
        np.einsum("lk,klij->ij", g_inv, t.R),
        np.einsum("lk,ilkj->ij", g_inv, t.R)
    )


def ricci_form_fd(spec: metric.MetricSpec, p: Sequence[complex], step: float = 1e-4) -> np.ndarray:
    """-d_k d_lbar log det g by finite differences, the first Ricci tensor."""
    def logdet(z: np.ndarray) -> float:
        sign, value = np.linalg.slogdet(spec.evaluate(z))
        if abs(sign.real) < 0.5:
            raise exceptions.NotPositiveDefinite(0.0, "Metric determinant is not positive")
        return value

    return -wirtinger.fd_wirtinger(logdet, p, step)[3]


def einstein_constant(ric: np.ndarray, g: np.ndarray) -> Tuple[float, float]:
    """Least squares fit ric = c g.

    :return: constant c and max entrywise residual.
    """
    ric, g = np.asarray(ric, dtype=complex), np.asarray(g, dtype=complex)
    c = float(np.real(np.vdot(g, ric)) / np.real(np.vdot(g, g)))
    return c, float(np.max(np.abs(ric - c * g)))


def hsc(t: ChernTensor, v: Sequence[complex], g: np.ndarray = None) -> float:
    """Holomorphic sectional curvature R(v, vbar, v, vbar) / |v|_g^4."""
    g = t.metric if g is None else np.asarray(g, dtype=complex)
    v = np.asarray(v, dtype=complex).reshape(-1)
    norm = float(np.real(v @ g @ v.conj()))
    if norm <= 1e-28:
        raise exceptions.DegenerateDirection(f"Direction has g-norm {np.sqrt(max(norm, 0.0)):.3e}")
    value = np.einsum("ijkl,i,j,k,l->", t.R, v, v.conj(), v, v.conj())
    return float(np.real(value)) / norm ** 2


def hsc_batch(t: ChernTensor, V: np.ndarray, g: np.ndarray = None) -> np.ndarray:
    """hsc of every row of V."""
    g = t.metric if g is None else np.asarray(g, dtype=complex)
    V = np.asarray(V, dtype=complex)
    norms = np.real(np.einsum("si,ij,sj->s", V, g, V.conj()))
    if np.any(norms <= 1e-28):
        raise exceptions.DegenerateDirection("Batch contains a direction with vanishing g-norm")
    values = np.einsum("ijkl,si,sj,sk,sl->s", t.R, V, V.conj(), V, V.conj(), optimize=True)
    return np.real(values) / norms ** 2


def _require_unitary(t: ChernTensor, frame: UnitaryFrame = None):
    if not t.unitary:
        raise exceptions.FrameMismatch("Real bisectional curvature needs a tensor in a unitary frame")
    if frame is not None and not t.frame.same(frame):
        raise exceptions.FrameMismatch(f"Weights refer to frame '{frame.tag}', tensor to '{t.frame.tag}'")


def rbc_value(t: ChernTensor, w: FrameWeights, residual: bool = False) -> Union[float, Tuple[float, float]]:
    """B(e, a) = sum_{ij} R_{i ibar j jbar} a_i a_j / |a|^2.

    :param t: tensor in the frame of the weights.
    :param w: frame weights.
    :param residual: also return the imaginary residual.
    :return: value, or value and imaginary residual.
    """
    _require_unitary(t, w.frame)
    diagonal = np.einsum("iijj->ij", t.R)
    value = complex(w.a @ diagonal @ w.a) / float(w.a @ w.a)
    return (value.real, abs(value.imag)) if residual else value.real


def quad_form(t: ChernTensor, xi: Union[PsdDirection, np.ndarray], residual: bool = False):
    """Q(xi) = sum R_{i jbar k lbar} xi_ij xi_kl."""
    _require_unitary(t)
    if not isinstance(xi, PsdDirection):
        xi = PsdDirection(xi)
    if xi.n != t.n:
        raise exceptions.DimensionMismatch(f"Direction of dimension {xi.n} for tensor of dimension {t.n}")
    value = complex(np.einsum("ijkl,ij,kl->", t.R, xi.xi, xi.xi))
    return (value.real, abs(value.imag)) if residual else value.real


def h_positive_pairsum(t: ChernTensor, a: Sequence[float]) -> float:
    """sum_{i,k} (R_{i ibar k kbar} + R_{i kbar k ibar}) a_i a_k."""
    _require_unitary(t)
    a = np.asarray(a, dtype=float).reshape(-1)
    if np.any(a < 0):
        raise exceptions.InvalidDirection(f"Weights must be nonnegative, got {a.tolist()}")
    if not np.any(a > 0):
        raise exceptions.DegenerateDirection("All weights are zero")
    pairs = np.einsum("iikk->ik", t.R) + np.einsum("ikki->ik", t.R)
    return float(np.real(a @ pairs @ a))


def symmetry_report(t: ChernTensor, c: float = 0.0) -> Dict[str, float]:
    """Residuals of the Hermitian pair symmetry, Kaehler-like symmetry, pair skew-symmetry
    and the constant-RBC pattern R_{i jbar k lbar} + R_{k lbar i jbar} = 2c g_{i lbar} g_{k jbar}."""
    R, g = t.R, t.metric
    swapped = np.transpose(R, (2, 3, 0, 1))
    pattern = 2 * c * np.einsum("il,kj->ijkl", g, g)
    return {
        "hermitian": float(np.max(np.abs(R - np.conj(np.transpose(R, (1, 0, 3, 2)))))),
        "kahler_like": float(max(
            np.max(np.abs(R - np.transpose(R, (2, 1, 0, 3)))), np.max(np.abs(R - np.transpose(R, (0, 3, 2, 1))))
        )),
        "skew": float(np.max(np.abs(R + swapped))),
        "constant": float(np.max(np.abs(R + swapped - pattern)))
    }
