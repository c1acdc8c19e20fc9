# -*- coding: utf-8 -*-
"""Small dense complex linear algebra used by the curvature engine.

Dimensions stay small (n <= 8), so everything is plain dense numpy/scipy.
"""
from typing import Tuple, Optional
from dataclasses import dataclass
import numpy as np
from scipy import linalg
from hermrbc import exceptions

TOLERANCES = {
    "exact": 1e-12,
    "decomposition": 1e-10,
    "symmetry": 1e-8,
    "fd": 1e-4
}


@dataclass(frozen=True)
class UnitaryFrame:
    """Columns of ``E`` are the frame vectors e_1..e_n.

    :param E: n x n complex matrix.
    :param tag: identifier of the metric/point the frame diagonalizes.
    """
    E: np.ndarray
    tag: str = ""

    @property
    def n(self) -> int:
        return self.E.shape[0]

    def compose(self, other: np.ndarray, tag: str = None) -> "UnitaryFrame":
        """Frame with columns E @ other, e.g. an eigenbasis expressed in this frame.

        :param other: unitary matrix.
        :param tag: tag of the new frame, defaults to this frame's tag.
        :return: composed frame.
        """
        return UnitaryFrame(self.E @ other, self.tag if tag is None else tag)

    def same(self, other: "UnitaryFrame", tol: float = TOLERANCES["decomposition"]) -> bool:
        """Check that two frames refer to the same point and vectors."""
        return (
            self.tag == other.tag and self.E.shape == other.E.shape
            and bool(np.allclose(self.E, other.E, rtol=0, atol=tol))
        )


def asymmetry(m: np.ndarray) -> float:
    """Maximal entrywise Hermitian asymmetry relative to the largest entry."""
    m = np.asarray(m, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    return float(np.max(np.abs(m - m.conj().T))) / scale if m.size else 0.0


def hermitian(m: np.ndarray, tol: float = TOLERANCES["exact"]) -> np.ndarray:
    """Validate and symmetrize a matrix, m <- (m + m^H) / 2.

    :param m: square complex matrix.
    :param tol: relative asymmetry tolerance.
    :return: symmetrized copy.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise exceptions.DimensionMismatch(f"Expected a square matrix, got shape {m.shape}")
    value = asymmetry(m)
    if value > tol:
        raise exceptions.NotHermitian(value, f"Matrix is not Hermitian, max asymmetry {value:.3e}")
    return (m + m.conj().T) / 2


def eigh(m: np.ndarray, tol: float = TOLERANCES["exact"]) -> Tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition.

    :param m: Hermitian matrix.
    :param tol: Hermitian tolerance.
    :return: ascending eigenvalues and unitary eigenvector matrix, m = V diag(w) V^H.
    """
    values, vectors = linalg.eigh(hermitian(m, tol))
    return values, vectors


def min_eigenvalue(m: np.ndarray, tol: float = TOLERANCES["exact"]) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(linalg.eigvalsh(hermitian(m, tol))[0])


def invert_pd(m: np.ndarray, tol: float = TOLERANCES["exact"], floor: float = 1e-12) -> np.ndarray:
    """Inverse of a Hermitian positive definite matrix.

    :param m: Hermitian positive definite matrix.
    :param tol: Hermitian tolerance.
    :param floor: smallest admissible eigenvalue.
    :return: Hermitian inverse.
    """
    m = hermitian(m, tol)
    lowest = float(linalg.eigvalsh(m)[0])
    if lowest <= floor:
        raise exceptions.NotPositiveDefinite(lowest, f"Matrix is not positive definite, eigenvalue {lowest:.3e}")
    result = linalg.cho_solve(linalg.cho_factor(m, lower=True), np.eye(m.shape[0], dtype=complex))
    return (result + result.conj().T) / 2


def unitary_frame(m: np.ndarray, tag: str = "", tol: float = TOLERANCES["exact"],
                  floor: float = 1e-12) -> UnitaryFrame:
    """Frame E with E^H m E = I from the Cholesky factor m = L L^H, E = (L^H)^-1.

    :param m: Hermitian positive definite matrix.
    :param tag: frame tag.
    :param tol: Hermitian tolerance.
    :param floor: smallest admissible eigenvalue.
    :return: upper triangular frame.
    """
    m = hermitian(m, tol)
    lowest = float(linalg.eigvalsh(m)[0])
    if lowest <= floor:
        raise exceptions.NotPositiveDefinite(lowest, f"Matrix is not positive definite, eigenvalue {lowest:.3e}")
    factor = linalg.cholesky(m, lower=True)
    frame = linalg.solve_triangular(factor.conj().T, np.eye(m.shape[0], dtype=complex), lower=False)
    return UnitaryFrame(frame, tag)


def random_unitary(n: int, seed: Optional[int] = None, rng: np.random.Generator = None) -> np.ndarray:
    """Haar-distributed unitary from the phase-corrected QR of a Ginibre matrix.

    :param n: dimension.
    :param seed: seed, same seed gives bit-identical output.
    :param rng: generator to draw from instead of a fresh seeded one.
    :return: n x n unitary matrix.
    """
    if n < 1:
        raise exceptions.DimensionMismatch(f"Dimension must be positive, got {n}")
    rng = rng if rng is not None else np.random.default_rng(seed)
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_unitaries(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Stacked Haar unitaries, shape (count, n, n)."""
    z = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
    q, r = np.linalg.qr(z)
    diagonal = np.diagonal(r, axis1=1, axis2=2)
    return q * (diagonal / np.abs(diagonal))[:, None, :]


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian matrix with standard complex Gaussian entries."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2


def numerical_rank(m: np.ndarray, threshold: float = 1e-8) -> int:
    """Number of singular values above threshold."""
    return int(np.sum(np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False) > threshold))
