# -*- coding: utf-8 -*-
"""Hermitian metrics on a chart, the built-in catalog and pointwise jets.

Index convention: ``g[k, l]`` is g_{k lbar}; jets carry ``dg_hol[i, k, l]`` = d_i g_{k lbar},
``dg_anti[j, k, l]`` = d_jbar g_{k lbar} and ``ddg[i, j, k, l]`` = d_i d_jbar g_{k lbar}.
"""
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union
from dataclasses import dataclass, field
import json
import logging
import math
import pathlib
import numpy as np
from hermrbc import exceptions, numerics, wirtinger

logger = logging.getLogger("hermrbc.metric")

DIAGONAL_CHECK_POINTS = 32


@dataclass(frozen=True, eq=False)
class MetricSpec:
    """Metric given by its upper triangle, row i holding entries (i, i), (i, i+1), ..., (i, n-1).

    The lower triangle is the conjugate of the upper one, so g_{j ibar} = conj(g_{i jbar})
    holds for every spec that can be constructed.

    :param name: identifier.
    :param n: dimension.
    :param upper: upper triangle expressions.
    :param params: parameter values bound into the expressions.
    :param domain_hint: validity radius around the origin, None for unbounded.
    :param texts: upper triangle source strings, echoed by reports.
    """
    name: str
    n: int
    upper: Tuple[Tuple[wirtinger.Expr, ...], ...]
    params: Dict[str, float] = field(default_factory=dict)
    domain_hint: Optional[float] = None
    texts: Tuple[Tuple[str, ...], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise exceptions.DimensionMismatch(f"Metric dimension must be positive, got {self.n}")
        if len(self.upper) != self.n or any(len(row) != self.n - i for i, row in enumerate(self.upper)):
            raise exceptions.DimensionMismatch(f"Metric '{self.name}' needs an upper triangle of dimension {self.n}")
        lower = tuple(tuple(self.upper[j][i - j].conjugate() for j in range(i)) for i in range(self.n))
        object.__setattr__(self, "_lower", lower)

    @classmethod
    def from_texts(cls, name: str, n: int, texts: Sequence[Sequence[str]], params: Dict[str, float] = None,
                   domain_hint: Optional[float] = None) -> "MetricSpec":
        """Parse upper triangle strings.

        :param name: identifier.
        :param n: dimension.
        :param texts: row-major upper triangle expression strings.
        :param params: parameter values.
        :param domain_hint: validity radius.
        :return: metric specification.
        """
        params = dict(params or {})
        if len(texts) != n or any(len(row) != n - i for i, row in enumerate(texts)):
            raise exceptions.DimensionMismatch(f"Metric '{name}' needs an upper triangle of dimension {n}")
        upper = tuple(tuple(wirtinger.parse(text, n, params) for text in row) for row in texts)
        return cls(name, n, upper, params, domain_hint, tuple(tuple(row) for row in texts))

    def entry(self, i: int, j: int) -> wirtinger.Expr:
        """Expression of g_{i jbar}, 0-based."""
        if i <= j:
            return self.upper[i][j - i]
        return self._lower[i][j]  # pylint: disable=no-member

    def evaluate(self, p: Sequence[complex]) -> np.ndarray:
        """Metric matrix at p, without positivity checks."""
        p = np.asarray(p, dtype=complex).reshape(-1)
        if p.shape[0] != self.n:
            raise exceptions.DimensionMismatch(f"Point of dimension {p.shape[0]} for metric of dimension {self.n}")
        result = np.empty((self.n, self.n), dtype=complex)
        for i in range(self.n):
            for j in range(i, self.n):
                value = self.upper[i][j - i].evaluate(p)
                result[i, j] = value
                result[j, i] = np.conj(value)
        return result

    def tag(self, p: Sequence[complex]) -> str:
        """Identifier of this metric at a point, used to tag frames."""
        p = np.asarray(p, dtype=complex).reshape(-1)
        return f"{self.name}@" + ",".join(f"{complex(x)!r}" for x in p)

    def describe(self) -> dict:
        return {
            "name": self.name, "dimension": self.n, "parameters": dict(sorted(self.params.items())),
            "domain_hint": self.domain_hint,
            "entries_upper": [[str(e) for e in row] for row in self.upper] if not self.texts
            else [list(row) for row in self.texts]
        }


@dataclass
class MetricJet:
    """Pointwise metric data, arrays indexed as described in the module docstring."""
    p: np.ndarray
    g: np.ndarray
    dg_hol: np.ndarray
    dg_anti: np.ndarray
    ddg: np.ndarray
    g_inv: np.ndarray
    tag: str = ""

    @property
    def n(self) -> int:
        return self.g.shape[0]

    def residuals(self) -> Dict[str, float]:
        """Deviation from the jet invariants."""
        n = self.n
        return {
            "conjugation_first": float(np.max(np.abs(self.dg_anti - np.conj(np.transpose(self.dg_hol, (0, 2, 1)))))),
            "conjugation_second": float(np.max(np.abs(
                self.ddg - np.conj(np.transpose(self.ddg, (1, 0, 3, 2)))
            ))),
            "inverse": float(np.max(np.abs(self.g @ self.g_inv - np.eye(n))))
        }


def _conjugate_jet(jet: wirtinger.Jet2) -> wirtinger.Jet2:
    return wirtinger.Jet2(np.conj(jet.value), np.conj(jet.d1_anti), np.conj(jet.d1_hol), np.conj(jet.d2_mixed.T))


def _check_region(spec: MetricSpec, p: np.ndarray, slack: float = 1e-12):
    if spec.domain_hint is not None and float(np.linalg.norm(p)) > spec.domain_hint + slack:
        raise exceptions.RegionError(
            f"Point with |z| = {float(np.linalg.norm(p)):.6g} outside validity radius {spec.domain_hint} "
            f"of metric '{spec.name}'"
        )


def _assemble(spec: MetricSpec, p: np.ndarray, g: np.ndarray, dg_hol: np.ndarray, dg_anti: np.ndarray,
              ddg: np.ndarray, tol: float) -> MetricJet:
    for k in range(spec.n):
        if abs(g[k, k].imag) > tol:
            raise exceptions.NonRealDiagonal(
                f"Diagonal entry ({k + 1},{k + 1}) of '{spec.name}' has imaginary part {g[k, k].imag:.3e}"
            )
    g_inv = numerics.invert_pd(g, tol)
    return MetricJet(p, numerics.hermitian(g, tol), dg_hol, dg_anti, ddg, g_inv, spec.tag(p))


def jet(spec: MetricSpec, p: Sequence[complex], tol: float = numerics.TOLERANCES["exact"],
        check_region: bool = True) -> MetricJet:
    """Exact metric jet at p.

    :param spec: metric.
    :param p: point in C^n.
    :param tol: tolerance for Hermitian and real-diagonal checks.
    :param check_region: reject points outside the validity radius.
    :return: metric jet.
    """
    p = np.asarray(p, dtype=complex).reshape(-1)
    n = spec.n
    if p.shape[0] != n:
        raise exceptions.DimensionMismatch(f"Point of dimension {p.shape[0]} for metric of dimension {n}")
    if check_region:
        _check_region(spec, p)
    g = np.empty((n, n), dtype=complex)
    dg_hol = np.empty((n, n, n), dtype=complex)
    dg_anti = np.empty((n, n, n), dtype=complex)
    ddg = np.empty((n, n, n, n), dtype=complex)
    for k in range(n):
        for l in range(k, n):
            upper = wirtinger.jet2(spec.upper[k][l - k], p)
            pairs = [(k, l, upper)]
            if l != k:
                pairs.append((l, k, _conjugate_jet(upper)))
            for a, b, entry in pairs:
                g[a, b] = entry.value
                dg_hol[:, a, b] = entry.d1_hol
                dg_anti[:, a, b] = entry.d1_anti
                ddg[:, :, a, b] = entry.d2_mixed
    return _assemble(spec, p, g, dg_hol, dg_anti, ddg, tol)


def fd_jet(spec: MetricSpec, p: Sequence[complex], step: float = 1e-4,
           tol: float = numerics.TOLERANCES["exact"]) -> MetricJet:
    """Finite difference metric jet, the oracle for exact jets and everything built on them."""
    p = np.asarray(p, dtype=complex).reshape(-1)
    g, dg_hol, dg_anti, ddg = wirtinger.fd_wirtinger(spec.evaluate, p, step)
    return _assemble(spec, p, g, dg_hol, dg_anti, ddg, max(tol, numerics.TOLERANCES["fd"]))


def region_points(n: int, radius: float, count: int, seed: int = 0, mode: str = "random") -> np.ndarray:
    """Points of the ball |z| <= radius in C^n.

    :param n: dimension.
    :param radius: ball radius.
    :param count: number of points.
    :param seed: seed of the random mode.
    :param mode: "random" for uniform samples, "grid" for a lattice clipped to the ball.
    :return: array of shape (count, n).
    """
    if count < 1:
        raise exceptions.ConfigError(f"Point count must be positive, got {count}")
    if radius < 0:
        raise exceptions.ConfigError(f"Radius must be nonnegative, got {radius}")
    if mode == "random":
        rng = np.random.default_rng(seed)
        x = rng.standard_normal((count, 2 * n))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        x *= radius * rng.random((count, 1)) ** (1 / (2 * n))
        return x[:, :n] + 1j * x[:, n:]
    if mode == "grid":
        side = max(2, math.ceil(count ** (1 / (2 * n))))
        while True:
            axis = np.linspace(-radius, radius, side)
            mesh = np.stack(np.meshgrid(*([axis] * (2 * n)), indexing="ij"), axis=-1).reshape(-1, 2 * n)
            inside = mesh[np.linalg.norm(mesh, axis=1) <= radius * (1 + 1e-12)]
            if inside.shape[0] >= count or radius == 0:
                break
            side += 1
        inside = inside[:count]
        if inside.shape[0] < count:
            inside = np.repeat(inside, count, axis=0)[:count]
        return inside[:, :n] + 1j * inside[:, n:]
    raise exceptions.ConfigError(f"Unknown region mode '{mode}'")


def validate(spec: MetricSpec, radius: float, count: int, seed: int = 0, mode: str = "random",
             tol: float = numerics.TOLERANCES["exact"]) -> dict:
    """Sample the metric over a ball and report positivity and symmetry.

    Failures are report content, never exceptions.

    :param spec: metric.
    :param radius: ball radius, may exceed the validity radius.
    :param count: number of points.
    :param seed: sampling seed.
    :param mode: "random" or "grid".
    :param tol: positivity floor and real-diagonal tolerance.
    :return: report dictionary.
    """
    lowest, asymmetry, diagonal, failure = math.inf, 0.0, 0.0, None
    points = region_points(spec.n, radius, count, seed, mode)
    for index, p in enumerate(points):
        try:
            g = spec.evaluate(p)
        except exceptions.EvaluationError as ex:
            if failure is None:
                failure = {"index": index, "point": p, "reason": str(ex)}
            continue
        asymmetry = max(asymmetry, numerics.asymmetry(g))
        diagonal = max(diagonal, float(np.max(np.abs(np.diag(g).imag))))
        value = float(np.linalg.eigvalsh((g + g.conj().T) / 2)[0])
        lowest = min(lowest, value)
        if failure is None and value <= tol:
            failure = {"index": index, "point": p, "reason": f"not positive definite, eigenvalue {value!r}"}
    logger.info("validated '%s' at %d points, min eigenvalue %.6g", spec.name, count, lowest)
    return {
        "metric": spec.name, "radius": radius, "count": count, "seed": seed, "mode": mode,
        "min_eigenvalue": lowest if lowest != math.inf else None,
        "max_asymmetry": asymmetry, "max_diagonal_imag": diagonal,
        "positive_definite": failure is None, "failure": failure
    }


def _diagonal_texts(n: int, diagonal: Callable[[int], str], off: Callable[[int, int], str]) -> List[List[str]]:
    return [[diagonal(i) if j == i else off(i, j) for j in range(i, n)] for i in range(n)]


def _sumsq(indices: Sequence[int]) -> str:
    return "(" + " + ".join(f"z{k}*zb{k}" for k in indices) + ")"


def _flat(params: Dict[str, float]) -> Tuple[int, List[List[str]]]:
    n = params["n"]
    return n, _diagonal_texts(n, lambda i: "1", lambda i, j: "0")


def _fubini_study(params: Dict[str, float]) -> Tuple[int, List[List[str]]]:
    n = params["n"]
    return n, _diagonal_texts(
        n,
        lambda i: f"1/(1 + normsq(z)) - zb{i + 1}*z{i + 1}/(1 + normsq(z))^2",
        lambda i, j: f"-zb{i + 1}*z{j + 1}/(1 + normsq(z))^2"
    )


def _example_2_2(params: Dict[str, float]) -> Tuple[int, List[List[str]]]:
    n = params["n"]
    return n, _diagonal_texts(
        n,
        lambda i: f"(1 + normsq(z)) + (eps - 2)*zb{i + 1}*z{i + 1}",
        lambda i, j: f"(eps - 2)*zb{i + 1}*z{j + 1}"
    )


def _example_2_2_dual(params: Dict[str, float]) -> Tuple[int, List[List[str]]]:
    n = params["n"]
    denominator = "((1 + normsq(z))*(1 - (1 - eps)*normsq(z)))"
    return n, _diagonal_texts(
        n,
        lambda i: f"1/(1 + normsq(z)) + (2 - eps)*z{i + 1}*zb{i + 1}/{denominator}",
        lambda i, j: f"(2 - eps)*zb{i + 1}*z{j + 1}/{denominator}"
    )


def _example_2_3(params: Dict[str, float]) -> Tuple[int, List[List[str]]]:
    return 2, [
        ["1 - z1*zb1 + (1 + b)*z2*zb2", "(1 + b)*z2*zb1"],
        ["1 - (1 + 4*b)*z1*zb1 - z2*zb2"]
    ]


def _product_flat_fubini_study(params: Dict[str, float]) -> Tuple[int, List[List[str]]]:
    flat, fs = params["n_flat"], params["n_fs"]
    n = flat + fs
    r = _sumsq(range(flat + 1, n + 1))

    def diagonal(i: int) -> str:
        if i < flat:
            return "1"
        return f"1/(1 + {r}) - zb{i + 1}*z{i + 1}/(1 + {r})^2"

    def off(i: int, j: int) -> str:
        if i < flat:
            return "0"
        return f"-zb{i + 1}*z{j + 1}/(1 + {r})^2"

    return n, _diagonal_texts(n, diagonal, off)


@dataclass(frozen=True)
class CatalogEntry:
    """Catalog record: builder, parameter rules and a human readable formula."""
    name: str
    builder: Callable[[Dict[str, float]], Tuple[int, List[List[str]]]]
    required: Tuple[str, ...]
    defaults: Dict[str, float]
    example: Dict[str, float]
    formula: str
    radius: Optional[float]
    aliases: Tuple[str, ...] = ()


def _positive_int(name: str, minimum: int = 1):
    def check(value: float):
        if float(value) != int(value) or int(value) < minimum:
            raise exceptions.ParameterError(f"Parameter '{name}' must be an integer >= {minimum}, got {value}")
    return check


def _open_unit(name: str):
    def check(value: float):
        if not 0 < value < 1:
            raise exceptions.ParameterError(f"Parameter '{name}' must lie in (0, 1), got {value}")
    return check


def _positive(name: str):
    def check(value: float):
        if not value > 0:
            raise exceptions.ParameterError(f"Parameter '{name}' must be positive, got {value}")
    return check


def _two(value: float):
    if value != 2:
        raise exceptions.ParameterError(f"Metric 'example_2_3' is two dimensional, got n = {value}")


CHECKS = {
    "n": _positive_int("n"), "n_flat": _positive_int("n_flat"), "n_fs": _positive_int("n_fs"),
    "eps": _open_unit("eps"), "b": _positive("b")
}

CATALOG = {
    entry.name: entry for entry in [
        CatalogEntry(
            "flat", _flat, ("n",), {}, {"n": 2},
            "g_{i jbar} = delta_ij", None
        ),
        CatalogEntry(
            "fubini_study_affine", _fubini_study, ("n",), {}, {"n": 2},
            "g_{i jbar} = d_i d_jbar log(1 + |z|^2) = delta_ij/(1 + |z|^2) - zbar_i z_j/(1 + |z|^2)^2", None,
            ("fs", "fubini_study")
        ),
        CatalogEntry(
            "example_2_2", _example_2_2, ("eps",), {"n": 2}, {"n": 2, "eps": 0.3},
            "g_{i jbar} = (1 + |z|^2) delta_ij + (eps - 2) zbar_i z_j, 0 < eps < 1", 0.2
        ),
        CatalogEntry(
            "example_2_2_dual", _example_2_2_dual, ("eps",), {"n": 2}, {"n": 2, "eps": 0.3},
            "h_{i jbar} = delta_ij/(1 + |z|^2) + (2 - eps) zbar_i z_j/((1 + |z|^2)(1 - (1 - eps)|z|^2)), "
            "the inverse matrix of example_2_2", 0.2
        ),
        CatalogEntry(
            "example_2_3", _example_2_3, ("b",), {"n": 2}, {"b": 1.0},
            "g_{1 1bar} = 1 - |z1|^2 + (1 + b)|z2|^2, g_{2 2bar} = 1 - (1 + 4b)|z1|^2 - |z2|^2, "
            "g_{1 2bar} = (1 + b) z2 zbar_1, b > 0", 0.2
        ),
        CatalogEntry(
            "product_flat_fubini_study", _product_flat_fubini_study, ("n_flat", "n_fs"), {},
            {"n_flat": 1, "n_fs": 1},
            "block diagonal: flat on z_1..z_p, Fubini-Study affine chart on z_(p+1)..z_(p+q)", None,
            ("product(flat, fubini_study_affine)", "product(flat,fubini_study_affine)")
        )
    ]
}

ALIASES = {alias: entry.name for entry in CATALOG.values() for alias in entry.aliases}


def lookup(name: str) -> CatalogEntry:
    """Catalog entry by name or alias."""
    key = ALIASES.get(name, name)
    if key not in CATALOG:
        raise exceptions.UnknownMetric(f"Unknown catalog metric '{name}'")
    return CATALOG[key]


def catalog(name: str, params: Dict[str, float] = None) -> MetricSpec:
    """Build a catalog metric.

    :param name: catalog name or alias.
    :param params: parameters, missing optional ones take catalog defaults.
    :return: metric specification.
    """
    entry = lookup(name)
    params = {**entry.defaults, **(params or {})}
    missing = [key for key in entry.required if key not in params]
    if missing:
        raise exceptions.ParameterError(f"Metric '{entry.name}' requires parameters {missing}")
    known = set(entry.required) | set(entry.defaults)
    unknown = sorted(set(params) - known)
    if unknown:
        raise exceptions.ParameterError(f"Metric '{entry.name}' does not take parameters {unknown}")
    for key, value in params.items():
        if value is None or (isinstance(value, float) and math.isnan(value)):
            raise exceptions.ParameterError(f"Parameter '{key}' of '{entry.name}' is undefined")
        CHECKS.get(key, lambda v: None)(value)
    if entry.name == "example_2_3":
        _two(params["n"])
    for key in ("n", "n_flat", "n_fs"):
        if key in params:
            params[key] = int(params[key])
    n, texts = entry.builder(params)
    bound = {key: float(value) for key, value in params.items() if key not in ("n", "n_flat", "n_fs")}
    spec = MetricSpec.from_texts(entry.name, n, texts, bound, entry.radius)
    object.__setattr__(spec, "params", dict(params))
    return spec


def describe(name: str) -> dict:
    """Catalog listing entry: parameters, validity radius, formula and example entries."""
    entry = lookup(name)
    spec = catalog(entry.name, entry.example)
    return {
        "name": entry.name, "aliases": list(entry.aliases), "required": list(entry.required),
        "defaults": dict(entry.defaults), "domain_hint": entry.radius, "formula": entry.formula,
        "example_parameters": dict(entry.example), "entries_upper": [list(row) for row in spec.texts]
    }


def from_dict(data: dict, source: str = "<dict>") -> MetricSpec:
    """Build a metric from the file schema and check the diagonal is real.

    :param data: {"name", "dimension", "parameters", "entries_upper"[, "domain_hint"]}.
    :param source: origin used in messages.
    :return: metric specification.
    """
    try:
        name = str(data.get("name", pathlib.Path(source).stem))
        n = int(data["dimension"])
        params = {str(k): float(v) for k, v in (data.get("parameters") or {}).items()}
        texts = [[str(text) for text in row] for row in data["entries_upper"]]
        hint = data.get("domain_hint")
        hint = float(hint) if hint is not None else None
    except (KeyError, TypeError, ValueError, AttributeError) as ex:
        raise exceptions.MetricFileError(ex, f"Malformed metric definition '{source}': {ex!r}") from None
    spec = MetricSpec.from_texts(name, n, texts, params, hint)
    points = region_points(n, hint if hint is not None else 1.0, DIAGONAL_CHECK_POINTS, 0)
    for p in points:
        for k in range(n):
            try:
                value = spec.upper[k][0].evaluate(p)
            except exceptions.EvaluationError:
                continue
            if abs(value.imag) > numerics.TOLERANCES["exact"] * max(1.0, abs(value)):
                raise exceptions.NonRealDiagonal(
                    f"Diagonal entry ({k + 1},{k + 1}) of '{name}' is not real: {value!r} at {p.tolist()}"
                )
    return spec


def load(path: Union[str, pathlib.Path]) -> MetricSpec:
    """Load a metric definition file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as ex:
        raise exceptions.MetricFileError(ex, f"Cannot read metric file '{path}': {ex.strerror}") from None
    except json.JSONDecodeError as ex:
        raise exceptions.MetricFileError(ex, f"Invalid JSON in metric file '{path}': {ex.msg}") from None
    if not isinstance(data, dict):
        raise exceptions.MetricFileError(TypeError(type(data)), f"Metric file '{path}' must hold an object")
    return from_dict(data, str(path))


def resolve(ref: Union[str, MetricSpec], params: Dict[str, float] = None) -> MetricSpec:
    """Catalog name, alias, metric file path or an already built spec."""
    if isinstance(ref, MetricSpec):
        return ref
    key = ALIASES.get(ref, ref)
    if key in CATALOG:
        entry = CATALOG[key]
        known = set(entry.required) | set(entry.defaults)
        return catalog(key, {k: v for k, v in (params or {}).items() if k in known})
    if ref.endswith(".json") or pathlib.Path(ref).is_file():
        return load(ref)
    raise exceptions.UnknownMetric(f"Unknown metric '{ref}', neither a catalog name nor a metric file")
