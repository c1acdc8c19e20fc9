# -*- coding: utf-8 -*-
"""Pointwise checks of the Schwarz calculation for holomorphic maps f: (M, g) -> (N, h).

With f^a_i = d f_a / d z_i, the pullback trace is u = g^{i jbar} h_{a bbar} f^a_i conj(f^b_j) and::

    box u = |nabla df|^2 + Ric2(g)_{k lbar} g^{k qbar} g^{p lbar} (f*h)_{p qbar}
            - R^h_{a bbar c dbar} A^{a bbar} A^{c dbar},   A^{a bbar} = g^{i jbar} f^a_i conj(f^b_j)

Laplacians are checked by finite differences of the exactly evaluated u.
"""
# pylint: disable=too-many-arguments,too-many-locals,invalid-name
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union
from dataclasses import dataclass
import json
import logging
import pathlib
import numpy as np
from scipy import linalg
from hermrbc import certify, curvature, exceptions, metric, numerics, wirtinger

logger = logging.getLogger("hermrbc.schwarz")

CRITICAL = 1e-10
RANK_THRESHOLD = 1e-8
STEP = 1e-3
ACCEPT = 1e-4
BUILTIN_MAPS = ("identity", "constant")


@dataclass(frozen=True, eq=False)
class MapSpec:
    """Holomorphic map given by n component expressions in z_1..z_m."""
    m: int
    n: int
    components: Tuple[wirtinger.Expr, ...]
    name: str = "map"

    def __post_init__(self):
        if len(self.components) != self.n:
            raise exceptions.DimensionMismatch(f"Map '{self.name}' has {len(self.components)} components, expected {self.n}")
        for index, component in enumerate(self.components):
            if not component.is_holomorphic():
                raise exceptions.NonHolomorphicMap(
                    f"Component {index + 1} of map '{self.name}' contains conjugated variables: {component}"
                )
            top = wirtinger.variables(component)
            if top is not None and top > self.m:
                raise exceptions.DimensionMismatch(f"Component {index + 1} of map '{self.name}' uses z{top}, m = {self.m}")

    @classmethod
    def from_texts(cls, m: int, n: int, texts: Sequence[str], params: Dict[str, float] = None,
                   name: str = "map") -> "MapSpec":
        return cls(m, n, tuple(wirtinger.parse(text, m, params) for text in texts), name)

    def describe(self) -> dict:
        return {"name": self.name, "domain_dim": self.m, "target_dim": self.n,
                "components": [str(c) for c in self.components]}


@dataclass
class MapJet:
    """Map data at p: image point, df[a, i] = f^a_i and d2f[a, i, j] = d_j f^a_i."""
    p: np.ndarray
    fp: np.ndarray
    df: np.ndarray
    d2f: np.ndarray


@dataclass
class SchwarzBounds:
    """Constants lambda, mu >= 0, kappa >= 0 and optionally the rank r."""
    lam: float
    mu: float = 0.0
    kappa: float = 0.0
    r: Optional[int] = None

    def __post_init__(self):
        if self.mu < 0 or self.kappa < 0:
            raise exceptions.ConfigError(f"Schwarz constants need mu >= 0 and kappa >= 0, got {self.mu}, {self.kappa}")
        if self.r is not None and self.r < 1:
            raise exceptions.ConfigError(f"Rank must be positive, got {self.r}")

    def as_dict(self) -> dict:
        return {"lambda": self.lam, "mu": self.mu, "kappa": self.kappa, "r": self.r}


def builtin_map(name: str, m: int, n: int) -> MapSpec:
    """``identity`` (m = n) or ``constant`` (the origin of the target)."""
    if name == "identity":
        if m != n:
            raise exceptions.DimensionMismatch(f"Identity map needs equal dimensions, got {m} and {n}")
        return MapSpec(m, n, tuple(wirtinger.Var(k + 1) for k in range(n)), "identity")
    if name == "constant":
        return MapSpec(m, n, tuple(wirtinger.Const(0.0) for _ in range(n)), "constant")
    raise exceptions.ConfigError(f"Unknown built-in map '{name}'")


def load_map(path: Union[str, pathlib.Path], params: Dict[str, float] = None) -> MapSpec:
    """Load {"domain_dim", "target_dim", "components"} from a JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
        m, n = int(data["domain_dim"]), int(data["target_dim"])
        texts = [str(text) for text in data["components"]]
        params = {**{str(k): float(v) for k, v in (data.get("parameters") or {}).items()}, **(params or {})}
    except OSError as ex:
        raise exceptions.MetricFileError(ex, f"Cannot read map file '{path}': {ex.strerror}") from None
    except json.JSONDecodeError as ex:
        raise exceptions.MetricFileError(ex, f"Invalid JSON in map file '{path}': {ex.msg}") from None
    except (KeyError, TypeError, ValueError, AttributeError) as ex:
        raise exceptions.MetricFileError(ex, f"Malformed map definition '{path}': {ex!r}") from None
    return MapSpec.from_texts(m, n, texts, params, str(data.get("name", pathlib.Path(path).stem)))


def resolve_map(ref: Union[str, MapSpec], m: int, n: int) -> MapSpec:
    """Built-in map name, map file path or an already built map, checked against the dimensions."""
    f = ref if isinstance(ref, MapSpec) else builtin_map(ref, m, n) if ref in BUILTIN_MAPS else load_map(ref)
    if f.m != m or f.n != n:
        raise exceptions.DimensionMismatch(f"Map '{f.name}' is C^{f.m} -> C^{f.n}, metrics need C^{m} -> C^{n}")
    return f


def map_jet(f: MapSpec, p: Sequence[complex]) -> MapJet:
    """Exact value, first and pure second derivatives of every component."""
    p = np.asarray(p, dtype=complex).reshape(-1)
    if p.shape[0] != f.m:
        raise exceptions.DimensionMismatch(f"Point of dimension {p.shape[0]} for map from C^{f.m}")
    jets = [wirtinger.holomorphic_jet2(component, p) for component in f.components]
    return MapJet(
        p, np.array([j.value for j in jets], dtype=complex),
        np.array([j.d1 for j in jets], dtype=complex).reshape(f.n, f.m),
        np.array([j.d2 for j in jets], dtype=complex).reshape(f.n, f.m, f.m)
    )


def pullback(h: np.ndarray, df: np.ndarray) -> np.ndarray:
    """(f*h)_{i jbar} = h_{a bbar} f^a_i conj(f^b_j)."""
    return df.T @ h @ df.conj()


def trace_u(gj: metric.MetricJet, hj: metric.MetricJet, mj: MapJet) -> float:
    """u = tr_g f*h."""
    if gj.n != mj.df.shape[1] or hj.n != mj.df.shape[0]:
        raise exceptions.DimensionMismatch("Metric and map dimensions do not match")
    return float(np.real(np.trace(gj.g_inv @ pullback(hj.g, mj.df))))


def nabla_df(gj: metric.MetricJet, hj: metric.MetricJet, mj: MapJet) -> Tuple[np.ndarray, float]:
    """Second fundamental form (nabla df)^a_{ij} and its squared norm.

    (nabla df)^a_{ij} = d_j f^a_i - Gamma^{g,k}_{ji} f^a_k + Gamma^{h,a}_{bc}(f(p)) f^b_j f^c_i
    """
    gamma_g = curvature.connection(gj).gamma
    gamma_h = curvature.connection(hj).gamma
    df = mj.df
    N = mj.d2f - np.einsum("kji,ak->aij", gamma_g, df) + np.einsum("abc,bj,ci->aij", gamma_h, df, df)
    norm = np.einsum("pi,qj,xy,xij,ypq->", gj.g_inv, gj.g_inv, hj.g, N, N.conj())
    return N, float(np.real(norm))


def _u_function(g: metric.MetricSpec, h: metric.MetricSpec, f: MapSpec) -> Callable[[np.ndarray], float]:
    def u(z: np.ndarray) -> float:
        mj = map_jet(f, z)
        phi = pullback(h.evaluate(mj.fp), mj.df)
        return float(np.real(np.trace(np.linalg.solve(g.evaluate(z), phi))))
    return u


def box_fd(func: Callable[[np.ndarray], float], g_inv: np.ndarray, p: Sequence[complex], step: float,
           refine: bool = False) -> Tuple[float, np.ndarray]:
    """g^{i jbar} d_i d_jbar func by central differences, with first derivatives."""
    _, d_hol, _, d2 = (wirtinger.richardson if refine else wirtinger.fd_wirtinger)(func, p, step)
    return float(np.real(np.einsum("ji,ij->", g_inv, d2))), d_hol


def box_u_fd(g: metric.MetricSpec, h: metric.MetricSpec, f: MapSpec, p: Sequence[complex],
             step: float = STEP, refine: bool = False) -> float:
    """Complex Laplacian of u at p by finite differences.

    :param g: domain metric.
    :param h: target metric.
    :param f: holomorphic map.
    :param p: point.
    :param step: step in (0, 1e-2].
    :param refine: use the Richardson combination of steps h and h/2.
    :return: box_g u.
    """
    if not 0 < step <= 1e-2:
        raise exceptions.ConfigError(f"Laplacian step must lie in (0, 1e-2], got {step}")
    g_inv = numerics.invert_pd(g.evaluate(p))
    return box_fd(_u_function(g, h, f), g_inv, p, step, refine)[0]


def _jets(g: metric.MetricSpec, h: metric.MetricSpec, f: MapSpec, p: Sequence[complex]):
    mj = map_jet(f, p)
    gj = metric.jet(g, p, check_region=False)
    hj = metric.jet(h, mj.fp, check_region=False)
    return gj, hj, mj


def bochner_terms(g: metric.MetricSpec, h: metric.MetricSpec, f: MapSpec, p: Sequence[complex]) -> dict:
    """Exactly evaluated terms of the Bochner identity at p."""
    gj, hj, mj = _jets(g, h, f, p)
    phi = pullback(hj.g, mj.df)
    ric2 = curvature.ricci(curvature.chern_tensor(gj)).ric2
    Rh = curvature.chern_tensor(hj).R
    A = mj.df @ gj.g_inv.T @ mj.df.conj().T
    _, norm = nabla_df(gj, hj, mj)
    ric_term = float(np.real(np.einsum("kl,qk,lp,pq->", ric2, gj.g_inv, gj.g_inv, phi)))
    rh_term = float(np.real(np.einsum("abcd,ab,cd->", Rh, A, A)))
    return {
        "u": float(np.real(np.trace(gj.g_inv @ phi))), "nabla_df_norm2": norm, "ric_term": ric_term,
        "rh_term": rh_term, "rhs": norm + ric_term - rh_term, "phi": phi, "image": mj.fp, "df": mj.df,
        "g_inv": gj.g_inv, "g": gj.g, "ric2": ric2
    }


def bochner_residual(g: metric.MetricSpec, h: metric.MetricSpec, f: MapSpec, p: Sequence[complex],
                     step: float = STEP, tol: float = ACCEPT) -> float:
    """|box u (finite differences) - right hand side of the Bochner identity|.

    Falls back to the Richardson combination when the plain residual exceeds tol.
    """
    rhs = bochner_terms(g, h, f, p)["rhs"]
    residual = abs(box_u_fd(g, h, f, p, step) - rhs)
    if residual > tol:
        refined = abs(box_u_fd(g, h, f, p, step, refine=True) - rhs)
        logger.info("bochner residual %.3e above %.1e, Richardson gives %.3e", residual, tol, refined)
        residual = min(residual, refined)
    return residual


def cauchy_schwarz_gap(phi: np.ndarray, g: np.ndarray) -> float:
    """|Phi|_g^2 - (tr_g Phi)^2 / m, nonnegative for Hermitian semidefinite Phi."""
    E = numerics.unitary_frame(np.asarray(g).T).E
    unitary = E.T @ phi @ E.conj()
    return float(np.real(np.sum(np.abs(unitary) ** 2)) - np.real(np.trace(unitary)) ** 2 / phi.shape[0])


def hypothesis_ricci(terms: dict, lam: float, mu: float) -> float:
    """Minimum generalized eigenvalue of Ric2(g) + lam g - mu f*h relative to g."""
    form = terms["ric2"] + lam * terms["g"] - mu * terms["phi"]
    form = (form + form.conj().T) / 2
    return float(linalg.eigvalsh(form, (terms["g"] + terms["g"].conj().T) / 2)[0])


def kato_residuals(g: metric.MetricSpec, h: metric.MetricSpec, f: MapSpec, p: Sequence[complex],
                   terms: dict = None, step: float = STEP) -> dict:
    """Kato inequality |du|_g^2 <= u |nabla df|^2 and the log-Laplacian inequality off the critical set.

    :return: {"kato", "box_log_u", "lemma", "critical"}, residuals nonnegative when the inequalities hold.
    """
    terms = terms or bochner_terms(g, h, f, p)
    u, g_inv = terms["u"], terms["g_inv"]
    if u < CRITICAL:
        return {"kato": 0.0, "box_log_u": None, "lemma": None, "critical": True}
    function = _u_function(g, h, f)
    _, du = box_fd(function, g_inv, p, step)
    du = np.asarray(du).reshape(-1)
    gradient = float(np.real(np.einsum("lk,k,l->", g_inv, du, du.conj())))
    box_log, _ = box_fd(lambda z: np.log(function(z)), g_inv, p, step)
    lower = (terms["ric_term"] - terms["rh_term"]) / u
    return {
        "kato": u * terms["nabla_df_norm2"] - gradient, "box_log_u": box_log, "lemma": box_log - lower,
        "critical": False
    }


def max_rank(f: MapSpec, points: Sequence[Sequence[complex]]) -> int:
    """Largest numerical rank of df over the points."""
    return max(numerics.numerical_rank(map_jet(f, p).df, RANK_THRESHOLD) for p in points)


def _point_report(g, h, f, index, p, bounds: SchwarzBounds, r: int, budget: Dict, step: float,
                  tol: float) -> dict:
    m = g.n
    terms = bochner_terms(g, h, f, p)
    u = terms["u"]
    box_u = box_u_fd(g, h, f, p, step)
    residual = abs(box_u - terms["rhs"])
    if residual > tol:
        refined = box_u_fd(g, h, f, p, step, refine=True)
        if abs(refined - terms["rhs"]) < residual:
            box_u, residual = refined, abs(refined - terms["rhs"])
    kato = kato_residuals(g, h, f, p, terms, step)
    hyp_i = hypothesis_ricci(terms, bounds.lam, bounds.mu)
    ht = curvature.unitary_tensor(metric.jet(h, terms["image"], check_region=False))
    verdict = certify.certify_sign(ht, "le", -bounds.kappa, budget)
    verified = hyp_i >= -numerics.TOLERANCES["decomposition"] and verdict.status == "certified"
    coefficient = bounds.kappa / r + bounds.mu / m
    row = {
        "index": index, "point": np.asarray(p), "image": terms["image"], "u": u, "box_u": box_u,
        "bochner_rhs": terms["rhs"], "bochner_residual": residual, "nabla_df_norm2": terms["nabla_df_norm2"],
        "ric_term": terms["ric_term"], "rh_term": terms["rh_term"], "kato_residual": kato["kato"],
        "lemma_residual": kato["lemma"], "critical": kato["critical"],
        "hypothesis_ricci_min": hyp_i, "hypothesis_curvature": verdict.status,
        "hypothesis_curvature_evidence": verdict.evidence, "hypotheses_verified": verified,
        "cauchy_schwarz_gap": cauchy_schwarz_gap(terms["phi"], terms["g"]),
        "rank_bound_residual": -(bounds.kappa / r) * u ** 2 - terms["rh_term"],
        "conclusion_residual": box_u - (-bounds.lam * u + coefficient * u ** 2),
        "log_conclusion_residual": None if kato["critical"] else kato["box_log_u"] - (-bounds.lam + coefficient * u)
    }
    logger.debug("schwarz point %d: u=%.6g residual=%.3e verified=%s", index, u, residual, verified)
    return row


def schwarz_inequality_report(g: metric.MetricSpec, h: metric.MetricSpec, f: MapSpec,
                              points: Sequence[Sequence[complex]], bounds: SchwarzBounds,
                              budget: Dict = None, step: float = STEP, tol: float = ACCEPT,
                              mapper: Callable = None) -> dict:
    """Identity, hypotheses and conclusions of the Schwarz inequality at every point.

    :param g: domain metric.
    :param h: target metric.
    :param f: holomorphic map.
    :param points: nonempty points.
    :param bounds: constants; r defaults to the measured rank.
    :param budget: certification budget for the curvature hypothesis.
    :param step: finite difference step.
    :param tol: acceptance threshold.
    :param mapper: execution backend map over points.
    :return: rows in point order and summary.
    """
    points = [np.asarray(p, dtype=complex).reshape(-1) for p in points]
    if not points:
        raise exceptions.ConfigError("Schwarz report needs at least one point")
    if f.m != g.n or f.n != h.n:
        raise exceptions.DimensionMismatch(f"Map C^{f.m} -> C^{f.n} between metrics of dimensions {g.n} and {h.n}")
    rank = max_rank(f, points)
    notices = []
    if rank == 0:
        notices.append("constant map: u vanishes identically, logarithmic branch skipped")
    r = bounds.r or max(rank, 1)
    if r > min(f.m, f.n):
        raise exceptions.ConfigError(f"Rank {r} exceeds min(m, n) = {min(f.m, f.n)}")
    items = [(g, h, f, index, p, bounds, r, budget or {}, step, tol) for index, p in enumerate(points)]
    rows = mapper(_point_report, items) if mapper else [_point_report(*item) for item in items]
    verified = [row for row in rows if row["hypotheses_verified"]]

    def worst(key: str, selection: List[dict]) -> Optional[float]:
        values = [row[key] for row in selection if row[key] is not None]
        return min(values) if values else None

    summary = {
        "points": len(rows), "rank": rank, "r": r, "bounds": {**bounds.as_dict(), "r": r},
        "max_bochner_residual": max(row["bochner_residual"] for row in rows),
        "min_kato_residual": worst("kato_residual", rows),
        "min_lemma_residual": worst("lemma_residual", rows),
        "min_cauchy_schwarz_gap": worst("cauchy_schwarz_gap", rows),
        "hypotheses_verified": len(verified),
        "min_rank_bound_residual": worst("rank_bound_residual", verified),
        "min_conclusion_residual": worst("conclusion_residual", verified),
        "min_log_conclusion_residual": worst("log_conclusion_residual", verified),
        "notices": notices
    }
    summary["conclusions_hold"] = all(
        value is None or value >= -tol
        for value in (summary["min_conclusion_residual"], summary["min_log_conclusion_residual"])
    )
    logger.info("schwarz report: %d points, %d verified, bochner %.3e",
                len(rows), len(verified), summary["max_bochner_residual"])
    return {"rows": rows, "summary": summary}


def measure_bounds(g: metric.MetricSpec, h: metric.MetricSpec, f: MapSpec, points: Sequence[Sequence[complex]],
                   mu: float = 0.0, budget: Dict = None) -> dict:
    """Smallest lambda and largest kappa supported at the sampled points.

    lambda makes Ric2(g) + lambda g - mu f*h semidefinite at every point; kappa comes from
    the largest real bisectional curvature of h at the image points, certified when the
    spectral upper bound is negative, otherwise from sampling and optimization.

    :return: {"bounds": SchwarzBounds, "lambda_evidence", "kappa_evidence", "kappa_certified"}.
    """
    points = [np.asarray(p, dtype=complex).reshape(-1) for p in points]
    merged = {**certify.BUDGET, **(budget or {})}
    lam, spectral, optimized = -np.inf, -np.inf, -np.inf
    for p in points:
        terms = bochner_terms(g, h, f, p)
        lam = max(lam, -hypothesis_ricci(terms, 0.0, mu))
        ht = curvature.unitary_tensor(metric.jet(h, terms["image"], check_region=False))
        spectral = max(spectral, certify.spectral_bounds(ht)[1])
        sampled = certify.sample_extrema(ht, int(merged["samples"]), int(merged["seed"]))
        best = certify.optimize_extremum(
            ht, "max", int(merged["starts"]), float(merged["tol"]), int(merged["seed"]), int(merged["iterations"]),
            [sampled.argmax]
        )
        optimized = max(optimized, sampled.max, best.value)
    kappa = max(-optimized, 0.0)
    certified = max(-spectral, 0.0)
    rank = max(max_rank(f, points), 1)
    logger.info("measured lambda %.6g, kappa %.6g (certified %.6g)", lam, kappa, certified)
    return {
        "bounds": SchwarzBounds(float(lam), mu, float(kappa), rank),
        "lambda_evidence": "sampled", "kappa_evidence": "optimized", "kappa_certified": float(certified)
    }


def sup_bound_check(g: metric.MetricSpec, h: metric.MetricSpec, f: MapSpec, points: Sequence[Sequence[complex]],
                    bounds: SchwarzBounds) -> dict:
    """Compare the sampled supremum of u with the supremum bounds.

    The corollary bound m lambda / (kappa + mu) needs kappa + mu > 0; the rank bound
    r lambda / kappa needs mu = 0 and kappa > 0.
    """
    m = g.n
    values = [bochner_terms(g, h, f, p)["u"] for p in points]
    observed = max(values)
    r = bounds.r or max(max_rank(f, points), 1)
    result = {"max_u": observed, "points": len(values), "bounds": {**bounds.as_dict(), "r": r}, "checks": []}
    if bounds.kappa + bounds.mu > 0:
        result["checks"].append({"name": "trace", "bound": m * bounds.lam / (bounds.kappa + bounds.mu)})
    if bounds.mu == 0 and bounds.kappa > 0:
        result["checks"].append({"name": "rank", "bound": r * bounds.lam / bounds.kappa})
    if not result["checks"]:
        raise exceptions.NoApplicableBound(
            f"No supremum bound applies with kappa = {bounds.kappa} and mu = {bounds.mu}"
        )
    for check in result["checks"]:
        consistent = observed <= check["bound"] + numerics.TOLERANCES["symmetry"]
        check["classification"] = (
            "consistent" if consistent else "violated (hypotheses likely unmet or region not representative)"
        )
    return result
