# -*- coding: utf-8 -*-
"""Monte Carlo checks of unitary-invariant moments on the unit sphere of C^n.

The uniform sphere expectation of the scale and phase invariant integrands below equals
the unit-volume Fubini-Study integral over projective space.
"""
# pylint: disable=too-many-arguments,invalid-name
from typing import Callable, Iterator, List, Sequence, Tuple
from dataclasses import dataclass
import logging
import math
import numpy as np
from hermrbc import exceptions
from hermrbc.curvature import ChernTensor

logger = logging.getLogger("hermrbc.sampling")

CHUNK = 65536
SIGMAS = 3.0
FLOOR = 1e-4


@dataclass
class MomentEstimate:
    """Sample mean with its standard error."""
    value: complex
    std_error: float
    samples: int
    seed: int

    def within(self, target: complex, sigmas: float = SIGMAS, floor: float = FLOOR) -> bool:
        """Acceptance gate |value - target| <= sigmas * std_error + floor."""
        return abs(self.value - target) <= sigmas * self.std_error + floor

    def deviation(self, target: complex) -> float:
        """Distance to target in standard errors, inf when the error vanishes but the values differ."""
        distance = abs(self.value - target)
        if self.std_error == 0:
            return 0.0 if distance <= 1e-14 else math.inf
        return distance / self.std_error


def _chunk(n: int, seed: int, index: int, size: int) -> np.ndarray:
    rng = np.random.default_rng([seed, index])
    w = rng.standard_normal((CHUNK, n)) + 1j * rng.standard_normal((CHUNK, n))
    w = w[:size]
    return w / np.linalg.norm(w, axis=1, keepdims=True)


def sphere_sample(n: int, count: int, seed: int = 0) -> Iterator[np.ndarray]:
    """Uniform unit vectors of C^n from normalized complex Gaussians, yielded in chunks.

    :param n: dimension.
    :param count: total number of vectors.
    :param seed: seed, chunk k draws from generator (seed, k).
    :return: iterator of arrays of shape (size, n).
    """
    if n < 1 or count < 1:
        raise exceptions.ConfigError(f"Sphere sampling needs n >= 1 and count >= 1, got n={n}, count={count}")
    for index in range(math.ceil(count / CHUNK)):
        yield _chunk(n, seed, index, min(CHUNK, count - index * CHUNK))


class _Accumulator:
    """Streaming sums of a complex statistic."""

    def __init__(self):
        self.count = 0
        self.total = 0j
        self.squares = 0.0

    def add(self, values: np.ndarray):
        self.count += values.shape[0]
        self.total += complex(np.sum(values))
        self.squares += float(np.sum(np.abs(values) ** 2))

    def estimate(self, seed: int) -> MomentEstimate:
        mean = self.total / self.count
        if self.count > 1:
            variance = max(self.squares - self.count * abs(mean) ** 2, 0.0) / (self.count - 1)
        else:
            variance = 0.0
        return MomentEstimate(mean, math.sqrt(variance / self.count), self.count, seed)


def _indices(n: int, idx: Sequence[int]) -> Tuple[int, int, int, int]:
    if len(idx) != 4 or any(int(k) != k or not 1 <= k <= n for k in idx):
        raise exceptions.ConfigError(f"Moment needs four indices in 1..{n}, got {list(idx)}")
    return tuple(int(k) - 1 for k in idx)


def fs_moment_target(n: int, idx: Sequence[int]) -> float:
    """(delta_ij delta_kl + delta_il delta_kj) / (n(n+1))."""
    i, j, k, l = _indices(n, idx)
    return ((i == j) * (k == l) + (i == l) * (k == j)) / (n * (n + 1))


def fs_moment(n: int, idx: Sequence[int], count: int, seed: int = 0, unitary: np.ndarray = None) -> MomentEstimate:
    """Estimate E[w_i conj(w_j) w_k conj(w_l)] over the unit sphere.

    :param n: dimension.
    :param idx: 1-based indices (i, j, k, l).
    :param count: number of samples.
    :param seed: seed.
    :param unitary: optional unitary applied to every sample.
    :return: estimate.
    """
    i, j, k, l = _indices(n, idx)
    accumulator = _Accumulator()
    for index, w in enumerate(sphere_sample(n, count, seed)):
        if unitary is not None:
            w = w @ np.asarray(unitary, dtype=complex).T
        accumulator.add(w[:, i] * w[:, j].conj() * w[:, k] * w[:, l].conj())
        logger.debug("moment chunk %d", index)
    return accumulator.estimate(seed)


def berger_closed_form(t: ChernTensor, b: Sequence[float]) -> float:
    """(1/(n(n+1))) sum_{i,k} (R_{i ibar k kbar} + R_{i kbar k ibar}) b_i^2 b_k^2."""
    n = t.n
    b2 = np.asarray(b, dtype=float) ** 2
    pairs = np.einsum("iikk->ik", t.R) + np.einsum("ikki->ik", t.R)
    return float(np.real(b2 @ pairs @ b2)) / (n * (n + 1))


def berger_check(t: ChernTensor, b: Sequence[float], count: int, seed: int = 0) -> dict:
    """Compare the Monte Carlo average of R(bw, conj(bw), bw, conj(bw)) with its closed form.

    :param t: tensor in a unitary frame.
    :param b: nonnegative weights.
    :param count: number of samples.
    :param seed: seed.
    :return: estimate, closed form and deviation in standard errors.
    """
    if not t.unitary:
        raise exceptions.FrameMismatch("Berger averaging needs a tensor in a unitary frame")
    b = np.asarray(b, dtype=float).reshape(-1)
    if b.shape[0] != t.n:
        raise exceptions.DimensionMismatch(f"{b.shape[0]} weights for a tensor of dimension {t.n}")
    if np.any(b < 0):
        raise exceptions.InvalidDirection(f"Weights must be nonnegative, got {b.tolist()}")
    accumulator = _Accumulator()
    for w in sphere_sample(t.n, count, seed):
        v = w * b
        accumulator.add(np.real(np.einsum("ijkl,si,sj,sk,sl->s", t.R, v, v.conj(), v, v.conj(), optimize=True)))
    estimate = accumulator.estimate(seed)
    closed = berger_closed_form(t, b)
    return {
        "estimate": estimate.value.real, "std_error": estimate.std_error, "samples": count, "seed": seed,
        "closed_form": closed, "difference": estimate.value.real - closed,
        "sigmas": estimate.deviation(closed), "agree": estimate.within(closed),
        "weights": b
    }


def synthetic_tensor(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random rank-4 tensor with the Hermitian pair symmetry R_{ijkl} = conj(R_{jilk})."""
    z = rng.standard_normal((n, n, n, n)) + 1j * rng.standard_normal((n, n, n, n))
    return (z + np.conj(np.transpose(z, (1, 0, 3, 2)))) / 2


def moment_table(n: int, indices: Sequence[Sequence[int]], count: int, seed: int = 0,
                 mapper: Callable = None) -> List[dict]:
    """Estimates and targets of several moments, one row each."""
    items = [(n, idx, count, seed) for idx in indices]
    results = mapper(fs_moment, items) if mapper else [fs_moment(*item) for item in items]
    rows = []
    for idx, estimate in zip(indices, results):
        target = fs_moment_target(n, idx)
        rows.append({
            "n": n, "idx": list(idx), "estimate": estimate.value, "std_error": estimate.std_error,
            "target": target, "sigmas": estimate.deviation(target), "pass": estimate.within(target),
            "samples": estimate.samples, "seed": estimate.seed
        })
    return rows
