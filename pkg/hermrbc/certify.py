# -*- coding: utf-8 -*-
"""Sign certification of real bisectional curvature over the PSD sphere.

Evidence tiers, strongest first:

- ``spectral``: the extreme eigenvalues of the quadratic form on all Hermitian matrices
  clear the threshold, a proof for the point.
- ``optimized``: multi-start local optimization and sampling agree with the condition.
- ``sampled``: a sampled or optimized direction violates the condition (a witness).
"""
# pylint: disable=too-many-arguments,too-many-locals,invalid-name
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple
from dataclasses import dataclass, field
import logging
import math
import numpy as np
from hermrbc import exceptions, metric, numerics
from hermrbc.curvature import ChernTensor, PsdDirection
from hermrbc import curvature

logger = logging.getLogger("hermrbc.certify")

MARGIN = 1e-9
CHUNK = 8192
BUDGET = {"samples": 100000, "starts": 32, "tol": 1e-12, "iterations": 500, "seed": 0}
CONDITIONS = {"gt": ">", "ge": ">=", "lt": "<", "le": "<="}
ALIASES = {"pos": ("gt", 0.0), "nonneg": ("ge", 0.0), "neg": ("lt", 0.0), "nonpos": ("le", 0.0)}

__all__ = [
    "PsdDirection", "Verdict", "QuadraticForm", "Extremum", "SampleExtrema", "parse_condition",
    "spectral_bounds", "sample_extrema", "optimize_extremum", "certify_sign", "constant_rbc_check", "scan"
]


def parse_condition(text: str) -> Tuple[str, float]:
    """Condition string to (kind, threshold): pos, nonneg, neg, nonpos or gt:c, ge:c, lt:c, le:c."""
    if text in ALIASES:
        return ALIASES[text]
    kind, _, value = text.partition(":")
    if kind not in CONDITIONS or not value:
        raise exceptions.ConfigError(f"Invalid condition '{text}'")
    try:
        threshold = float(value)
    except ValueError:
        raise exceptions.ConfigError(f"Invalid condition threshold '{value}'") from None
    if not math.isfinite(threshold):
        raise exceptions.ConfigError(f"Invalid condition threshold '{value}'")
    return kind, threshold


def hermitian_basis(n: int) -> np.ndarray:
    """Orthonormal basis of Hermitian n x n matrices for <A, B> = tr(AB), shape (n^2, n, n)."""
    basis = []
    for i in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[i, i] = 1
        basis.append(m)
    for i in range(n):
        for j in range(i + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[i, j] = s[j, i] = 1 / math.sqrt(2)
            a = np.zeros((n, n), dtype=complex)
            a[i, j], a[j, i] = 1j / math.sqrt(2), -1j / math.sqrt(2)
            basis.extend([s, a])
    return np.stack(basis)


class QuadraticForm:
    """Real symmetric representation of xi -> Q(xi) on Hermitian matrices."""

    def __init__(self, t: ChernTensor):
        if not t.unitary:
            raise exceptions.FrameMismatch("Quadratic form needs a tensor in a unitary frame")
        self.n = t.n
        self.R = t.R
        self.basis = hermitian_basis(t.n)
        K = np.einsum("ijkl,mij,pkl->mp", t.R, self.basis, self.basis, optimize=True)
        self.matrix = np.real(K + K.T) / 2

    def coords(self, xi: np.ndarray) -> np.ndarray:
        return np.real(np.einsum("mij,ji->m", self.basis, xi))

    def value(self, xi: np.ndarray) -> float:
        x = self.coords(xi)
        return float(x @ self.matrix @ x)

    def gradient(self, xi: np.ndarray) -> np.ndarray:
        """Hermitian G with dQ = tr(G dxi)."""
        return 2 * np.einsum("m,mij->ij", self.matrix @ self.coords(xi), self.basis)

    def values(self, xis: np.ndarray) -> np.ndarray:
        """Q of a stack of matrices, shape (s, n, n)."""
        return np.real(np.einsum("ijkl,sij,skl->s", self.R, xis, xis, optimize=True))

    def bounds(self) -> Tuple[float, float]:
        values = np.linalg.eigvalsh(self.matrix)
        return float(values[0]), float(values[-1])


def spectral_bounds(t: ChernTensor) -> Tuple[float, float]:
    """Extreme eigenvalues of the form on unit Frobenius Hermitian matrices.

    :param t: tensor in a unitary frame.
    :return: lower and upper bound of Q on the PSD sphere.
    """
    return QuadraticForm(t).bounds()


class SampleExtrema(NamedTuple):
    min: float
    argmin: PsdDirection
    max: float
    argmax: PsdDirection
    count: int


class Extremum(NamedTuple):
    value: float
    direction: PsdDirection
    converged: bool


def canonical_directions(n: int) -> np.ndarray:
    """Frame one-hot directions followed by the uniform-weight direction I / sqrt(n)."""
    result = [np.diag(np.eye(n)[k]).astype(complex) for k in range(n)]
    result.append(np.eye(n, dtype=complex) / math.sqrt(n))
    return np.stack(result)


def sample_directions(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Interleaved unitary/weight samples (even slots) and normalized Gram samples (odd slots)."""
    count_a, count_b = (size + 1) // 2, size // 2
    U = numerics.random_unitaries(n, count_a, rng)
    a = np.sqrt(rng.dirichlet(np.ones(n), count_a))
    frames = np.einsum("sia,sa,sja->sij", U, a, U.conj())
    V = rng.standard_normal((count_b, n, n)) + 1j * rng.standard_normal((count_b, n, n))
    rank = rng.integers(1, n + 1, count_b)
    V = V * (np.arange(n)[None, None, :] < rank[:, None, None])
    grams = V @ np.conj(np.transpose(V, (0, 2, 1)))
    grams /= np.linalg.norm(grams, axis=(1, 2), keepdims=True)
    result = np.empty((size, n, n), dtype=complex)
    result[0::2] = frames
    result[1::2] = grams
    return result


def _chunk_extrema(R: np.ndarray, seed: int, index: int, size: int) -> Tuple[float, np.ndarray, float, np.ndarray]:
    n = R.shape[0]
    rng = np.random.default_rng([seed, index])
    xis = sample_directions(n, CHUNK, rng)[:size]
    values = np.real(np.einsum("ijkl,sij,skl->s", R, xis, xis, optimize=True))
    low, high = int(np.argmin(values)), int(np.argmax(values))
    return float(values[low]), xis[low], float(values[high]), xis[high]


def _serial(func: Callable, items: Sequence) -> List:
    return [func(*item) for item in items]


def sample_extrema(t: ChernTensor, count: int, seed: int = 0, mapper: Callable = None) -> SampleExtrema:
    """Empirical extrema of Q over canonical and random PSD directions.

    Random directions come in chunks with their own generators, so a run with ``count``
    samples sees exactly the first ``count`` directions of any larger run.

    :param t: tensor in a unitary frame.
    :param count: number of random directions, canonical ones come on top.
    :param seed: seed.
    :param mapper: ``map(func, items)`` of an execution backend, items are argument tuples.
    :return: extrema and their directions.
    """
    if count < 0:
        raise exceptions.ConfigError(f"Sample count must be nonnegative, got {count}")
    form = QuadraticForm(t)
    candidates = canonical_directions(t.n)
    values = form.values(candidates)
    low, high = int(np.argmin(values)), int(np.argmax(values))
    best = [float(values[low]), candidates[low], float(values[high]), candidates[high]]
    chunks = [(t.R, seed, index, min(CHUNK, count - index * CHUNK)) for index in range(math.ceil(count / CHUNK))]
    results = (mapper or _serial)(_chunk_extrema, chunks)
    for index, (lo, lo_xi, hi, hi_xi) in enumerate(results):
        logger.debug("sample chunk %d: min %.6g max %.6g", index, lo, hi)
        if lo < best[0]:
            best[0], best[1] = lo, lo_xi
        if hi > best[2]:
            best[2], best[3] = hi, hi_xi
    return SampleExtrema(best[0], PsdDirection.from_matrix(best[1]), best[2], PsdDirection.from_matrix(best[3]), count)


def _factor(direction: PsdDirection) -> np.ndarray:
    values, vectors = direction.spectral()
    return vectors * np.sqrt(values)


def _objective(form: QuadraticForm, V: np.ndarray) -> Tuple[float, np.ndarray]:
    """Q(VV^H / |VV^H|) and its gradient with respect to V."""
    S = V @ V.conj().T
    norm = float(np.linalg.norm(S))
    q = form.value(S)
    G = form.gradient(S) / norm ** 2 - 2 * q * S / norm ** 4
    return q / norm ** 2, 2 * G @ V


def _descend(form: QuadraticForm, V: np.ndarray, sign: float, tol: float, iterations: int) -> Tuple[float, np.ndarray, bool]:
    V = V / np.linalg.norm(V)
    value, gradient = _objective(form, V)
    step = 1.0
    for _ in range(iterations):
        slope = float(np.sum(np.abs(gradient) ** 2))
        if slope < 1e-30:
            return value, V, True
        while True:
            candidate = V - sign * step * gradient
            candidate /= np.linalg.norm(candidate)
            trial, trial_gradient = _objective(form, candidate)
            if sign * (value - trial) >= 1e-4 * step * slope:
                break
            step /= 2
            if step < 1e-16:
                return value, V, True
        improvement = sign * (value - trial)
        V, value, gradient = candidate, trial, trial_gradient
        step *= 2
        if improvement < tol:
            return value, V, True
    return value, V, False


def _run_start(R: np.ndarray, sign: float, tol: float, iterations: int, seed: int, start: int,
               initial: Optional[np.ndarray]) -> Tuple[float, np.ndarray, bool]:
    t = ChernTensor(R, np.eye(R.shape[0]), numerics.UnitaryFrame(np.eye(R.shape[0])))
    form = QuadraticForm(t)
    if initial is None:
        rng = np.random.default_rng([seed, start])
        n = R.shape[0]
        initial = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    value, V, converged = _descend(form, initial, sign, tol, iterations)
    S = V @ V.conj().T
    return value, S / np.linalg.norm(S), converged


def optimize_extremum(t: ChernTensor, direction: str = "min", starts: int = 32, tol: float = 1e-12,
                      seed: int = 0, iterations: int = 500, initial: Sequence[PsdDirection] = (),
                      mapper: Callable = None) -> Extremum:
    """Multi-start gradient search on the factor chart xi = VV^H / |VV^H|_F.

    :param t: tensor in a unitary frame.
    :param direction: "min" or "max".
    :param starts: number of random starts.
    :param tol: per-run stop threshold on the step improvement.
    :param seed: seed, start s uses generator (seed, s).
    :param iterations: iteration cap per start.
    :param initial: extra starting directions tried before the random starts.
    :param mapper: execution backend map.
    :return: best value, its direction and whether the best run converged.
    """
    if direction not in ("min", "max"):
        raise exceptions.ConfigError(f"Direction must be 'min' or 'max', got '{direction}'")
    if starts < 1 or tol <= 0 or iterations < 1:
        raise exceptions.ConfigError("Optimization needs starts >= 1, tol > 0 and iterations >= 1")
    QuadraticForm(t)
    sign = 1.0 if direction == "min" else -1.0
    items = [(t.R, sign, tol, iterations, seed, -1 - k, _factor(d)) for k, d in enumerate(initial)]
    items += [(t.R, sign, tol, iterations, seed, s, None) for s in range(starts)]
    results = (mapper or _serial)(_run_start, items)
    best = None
    for index, (value, xi, converged) in enumerate(results):
        logger.debug("start %d: %s %.12g converged=%s", index, direction, value, converged)
        if best is None or sign * (best[0] - value) > 0:
            best = (value, xi, converged)
    return Extremum(best[0], PsdDirection.from_matrix(best[1]), best[2])


@dataclass
class Verdict:
    """Certification result of a sign condition at one point."""
    condition: str
    threshold: float
    status: str
    evidence: Optional[str]
    spectral_lower: float
    spectral_upper: float
    best_min: float
    best_max: float
    witness: Optional[PsdDirection] = None
    witness_value: Optional[float] = None
    samples: int = 0
    starts: int = 0
    seed: int = 0
    converged: bool = True
    tag: str = ""
    bounds_consistent: bool = True

    def as_dict(self) -> dict:
        return {
            "condition": f"B {CONDITIONS[self.condition]} {self.threshold!r}", "kind": self.condition,
            "threshold": self.threshold, "status": self.status, "evidence": self.evidence,
            "spectral_lower": self.spectral_lower, "spectral_upper": self.spectral_upper,
            "best_min": self.best_min, "best_max": self.best_max,
            "witness": None if self.witness is None else self.witness.xi, "witness_value": self.witness_value,
            "samples": self.samples, "starts": self.starts, "seed": self.seed, "converged": self.converged,
            "bounds_consistent": self.bounds_consistent, "point": self.tag
        }


def _merge_budget(budget: Dict = None) -> Dict:
    merged = {**BUDGET, **(budget or {})}
    for key in ("samples", "starts", "iterations"):
        if int(merged[key]) != merged[key] or merged[key] < 0 or (key != "samples" and merged[key] < 1):
            raise exceptions.ConfigError(f"Budget '{key}' must be a positive integer, got {merged[key]}")
    if merged["tol"] <= 0:
        raise exceptions.ConfigError(f"Budget 'tol' must be positive, got {merged['tol']}")
    return merged


def _lower_side(kind: str) -> bool:
    return kind in ("gt", "ge")


def _holds_spectrally(kind: str, c: float, lower: float, upper: float) -> bool:
    return {
        "ge": lower >= c - MARGIN, "gt": lower > c + MARGIN, "le": upper <= c + MARGIN, "lt": upper < c - MARGIN
    }[kind]


def _violation(kind: str, c: float, value: float) -> bool:
    return value <= c - MARGIN if _lower_side(kind) else value >= c + MARGIN


def _bounds_consistent(t: ChernTensor, lower: float, upper: float, best_min: float, best_max: float) -> bool:
    breach = max(lower - best_min, best_max - upper)
    if breach > MARGIN:
        logger.warning("%s: attained values [%.12g, %.12g] leave the spectral bounds [%.12g, %.12g] by %.3g",
                       t.tag, best_min, best_max, lower, upper, breach)
        return False
    return True


def certify_sign(t: ChernTensor, kind: str, c: float = 0.0, budget: Dict = None,
                 mapper: Callable = None) -> Verdict:
    """Decide B kind c at a point.

    :param t: tensor in a unitary frame.
    :param kind: "gt", "ge", "lt" or "le".
    :param c: threshold.
    :param budget: {samples, starts, tol, iterations, seed} overrides.
    :param mapper: execution backend map.
    :return: verdict.
    """
    if kind not in CONDITIONS:
        raise exceptions.ConfigError(f"Unknown condition '{kind}'")
    budget = _merge_budget(budget)
    form = QuadraticForm(t)
    lower, upper = form.bounds()
    canonical = canonical_directions(t.n)
    values = form.values(canonical)
    best_min, best_max = float(values.min()), float(values.max())
    if _bounds_consistent(t, lower, upper, best_min, best_max) and _holds_spectrally(kind, c, lower, upper):
        logger.info("%s: B %s %r certified by spectral bounds (%.6g, %.6g)", t.tag, CONDITIONS[kind], c, lower, upper)
        return Verdict(kind, c, "certified", "spectral", lower, upper, best_min, best_max, seed=budget["seed"],
                       tag=t.tag)

    sampled = sample_extrema(t, int(budget["samples"]), int(budget["seed"]), mapper)
    lower_side = _lower_side(kind)
    seed_direction = sampled.argmin if lower_side else sampled.argmax
    optimum = optimize_extremum(
        t, "min" if lower_side else "max", int(budget["starts"]), float(budget["tol"]), int(budget["seed"]),
        int(budget["iterations"]), [seed_direction], mapper
    )
    best_min = min(sampled.min, optimum.value) if lower_side else sampled.min
    best_max = max(sampled.max, optimum.value) if not lower_side else sampled.max
    if lower_side:
        witness = optimum.direction if optimum.value <= sampled.min else sampled.argmin
    else:
        witness = optimum.direction if optimum.value >= sampled.max else sampled.argmax
    witness_value = curvature.quad_form(t, witness)
    verdict = Verdict(
        kind, c, "inconclusive", None, lower, upper, best_min, best_max,
        samples=sampled.count, starts=int(budget["starts"]), seed=int(budget["seed"]),
        converged=optimum.converged, tag=t.tag,
        bounds_consistent=_bounds_consistent(t, lower, upper, best_min, best_max)
    )
    if _violation(kind, c, witness_value):
        verdict.status, verdict.evidence = "refuted", "sampled"
        verdict.witness, verdict.witness_value = witness, witness_value
    elif optimum.converged and _holds_spectrally(kind, c, best_min, best_max):
        verdict.status, verdict.evidence = "certified", "optimized"
    logger.info("%s: B %s %r %s (%s)", t.tag, CONDITIONS[kind], c, verdict.status, verdict.evidence)
    return verdict


def constant_rbc_check(spec: metric.MetricSpec, p: Sequence[complex], c: float,
                       tol: float = numerics.TOLERANCES["symmetry"]) -> dict:
    """Pointwise residuals implied by real bisectional curvature constantly equal to c.

    :param spec: metric.
    :param p: point.
    :param c: constant.
    :param tol: acceptance threshold of every residual.
    :return: residual bundle and the consistency flag.
    """
    j = metric.jet(spec, p)
    t = curvature.unitary_tensor(j)
    n = spec.n
    symmetry = curvature.symmetry_report(t, c)
    trace = curvature.eta_trace(j)
    expected = -0.5 * c * n * (n - 1)
    residuals = {
        "component": symmetry["constant"],
        "eta_trace": abs(trace - expected),
        "gauduchon": curvature.gauduchon_identity_residual(spec, p)
    }
    if c == 0:
        triple = curvature.ricci(t)
        residuals.update({name: float(np.max(np.abs(value))) for name, value in triple.as_dict().items()})
        residuals["skew"] = symmetry["skew"]
    consistent = all(value <= tol for value in residuals.values())
    logger.info("%s: constant RBC %r %s", j.tag, c, "consistent" if consistent else "inconsistent")
    return {
        "metric": spec.name, "point": j.p, "c": c, "eta_trace": trace, "eta_trace_expected": expected,
        "residuals": residuals, "tolerance": tol, "consistent": consistent
    }


@dataclass
class ScanResult:
    """Per-point verdicts in point order and the summary."""
    points: np.ndarray
    verdicts: List[Verdict]
    summary: dict
    hsc: List[Optional[Tuple[float, float]]] = field(default_factory=list)


def hsc_directions(n: int, count: int, seed: int = 0, index: int = 0) -> np.ndarray:
    """Random coordinate directions for the holomorphic sectional curvature at the point with this index."""
    if count < 0:
        raise exceptions.ConfigError(f"Direction count must be nonnegative, got {count}")
    rng = np.random.default_rng([seed, 1, index])
    return rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))


def _scan_point(spec: metric.MetricSpec, p: np.ndarray, kind: str, c: float, budget: Dict,
                directions: int, seed: int, index: int) -> Tuple[Verdict, Optional[Tuple[float, float]]]:
    j = metric.jet(spec, p)
    t = curvature.unitary_tensor(j)
    verdict = certify_sign(t, kind, c, budget)
    extremes = None
    if directions:
        values = curvature.hsc_batch(curvature.chern_tensor(j), hsc_directions(spec.n, directions, seed, index))
        extremes = (float(values.min()), float(values.max()))
    return verdict, extremes


def summarize(kind: str, c: float, verdicts: Sequence[Verdict]) -> dict:
    """Strongest classification supported by the verdicts, e.g. evidence of quasi-positivity."""
    total = len(verdicts)
    statuses = {status: sum(v.status == status for v in verdicts) for status in ("certified", "refuted", "inconclusive")}
    if _lower_side(kind):
        weak = sum(v.best_min >= c - MARGIN for v in verdicts)
        strict = sum(v.best_min > c + MARGIN for v in verdicts)
        words = ("at least", "above")
    else:
        weak = sum(v.best_max <= c + MARGIN for v in verdicts)
        strict = sum(v.best_max < c - MARGIN for v in verdicts)
        words = ("at most", "below")
    if statuses["refuted"]:
        classification = f"condition refuted at {statuses['refuted']} of {total} points"
    elif weak == total and strict == total:
        classification = f"B {words[1]} {c!r} at all {total} sampled points"
    elif weak == total:
        classification = (
            f"B {words[0]} {c!r} on all sampled points, {words[1]} {c!r} at {strict} of {total}"
            + (" (evidence for quasi-sign)" if strict else "")
        )
    else:
        classification = f"B {words[0]} {c!r} at {weak} of {total} sampled points"
    return {
        "points": total, "statuses": statuses, "weak": weak, "strict": strict,
        "classification": classification,
        "evidence": sorted({v.evidence for v in verdicts if v.evidence})
    }


def scan(spec: metric.MetricSpec, radius: float, count: int, kind: str, c: float = 0.0, budget: Dict = None,
         mode: str = "random", directions: int = 0, mapper: Callable = None) -> ScanResult:
    """Certify a condition at sampled points of a ball.

    :param spec: metric.
    :param radius: ball radius, at most the validity radius.
    :param count: number of points.
    :param kind: condition kind.
    :param c: threshold.
    :param budget: certification budget, its seed also drives the point sampling.
    :param mode: "random" or "grid".
    :param directions: if positive, also sample this many holomorphic sectional curvatures per point.
    :param mapper: execution backend map over points.
    :return: verdicts in point order with summary.
    """
    if spec.domain_hint is not None and radius > spec.domain_hint:
        raise exceptions.RegionError(
            f"Region radius {radius} exceeds validity radius {spec.domain_hint} of metric '{spec.name}'"
        )
    if directions < 0:
        raise exceptions.ConfigError(f"Direction count must be nonnegative, got {directions}")
    budget = _merge_budget(budget)
    seed = int(budget["seed"])
    points = metric.region_points(spec.n, radius, count, seed, mode)
    items = [(spec, p, kind, c, budget, directions, seed, index) for index, p in enumerate(points)]
    results = (mapper or _serial)(_scan_point, items)
    verdicts = [verdict for verdict, _ in results]
    for index, verdict in enumerate(verdicts):
        logger.debug("point %d: %s", index, verdict.status)
    summary = summarize(kind, c, verdicts)
    summary.update({"radius": radius, "mode": mode})
    hsc = [extremes for _, extremes in results]
    if directions:
        summary["hsc_min"] = min(e[0] for e in hsc)
        summary["hsc_max"] = max(e[1] for e in hsc)
    logger.info("scan of '%s': %s", spec.name, summary["classification"])
    return ScanResult(points, verdicts, summary, hsc)
