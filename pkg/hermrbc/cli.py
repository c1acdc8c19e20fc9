# -*- coding: utf-8 -*-
"""Command line front end writing deterministic JSON reports.

Exit codes: 0 success, 2 usage or input error, 3 when ``--fail-on`` triggers.
"""
# pylint: disable=too-many-instance-attributes
from typing import Dict, List, Optional, Sequence
from dataclasses import dataclass, field
import argparse
import logging
import pathlib
import sys
from hermrbc import certify, exceptions, metric, numerics, report
from hermrbc.hermrbc import HermRBC

EXIT_OK = 0
EXIT_ERROR = 2
EXIT_FAIL = 3
FAIL_ON = ("none", "refuted", "inconclusive")


@dataclass
class RunConfig:
    """Validated global flags."""
    seed: int = 0
    samples: int = certify.BUDGET["samples"]
    starts: int = certify.BUDGET["starts"]
    iterations: int = certify.BUDGET["iterations"]
    tolerances: Dict[str, float] = field(default_factory=dict)
    output_path: Optional[str] = None
    fail_on: str = "none"
    backend: str = "serial"
    log: Optional[int] = None
    timings: bool = False

    def __post_init__(self):
        for name in ("samples", "starts", "iterations"):
            if getattr(self, name) < 1:
                raise exceptions.ConfigError(f"--{name} must be positive, got {getattr(self, name)}")
        if self.seed < 0:
            raise exceptions.ConfigError(f"--seed must be nonnegative, got {self.seed}")
        if self.fail_on not in FAIL_ON:
            raise exceptions.ConfigError(f"--fail-on must be one of {list(FAIL_ON)}, got '{self.fail_on}'")
        for name, value in self.tolerances.items():
            if name not in numerics.TOLERANCES:
                raise exceptions.ConfigError(f"Unknown tolerance class '{name}'")
            if not value > 0:
                raise exceptions.ConfigError(f"--tol-{name} must be positive, got {value}")

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        tolerances = {
            name: getattr(ns, f"tol_{name}") for name in numerics.TOLERANCES if getattr(ns, f"tol_{name}") is not None
        }
        return cls(
            ns.seed, ns.samples, ns.starts, ns.iterations, tolerances, ns.out, ns.fail_on, ns.backend, ns.log,
            ns.timings
        )

    def args(self) -> dict:
        """Common group arguments: budget plus tolerance overrides."""
        tolerances = {**numerics.TOLERANCES, **self.tolerances}
        return {
            "seed": self.seed, "samples": self.samples, "starts": self.starts, "iterations": self.iterations,
            "tol": tolerances["exact"], **{f"tol_{name}": value for name, value in tolerances.items()}
        }


def parse_complex(text: str) -> complex:
    """Literal of the form a, a+bi, a-bi or bi."""
    literal = text.strip().replace("i", "j")
    try:
        if not literal:
            raise ValueError(text)
        return complex(literal)
    except ValueError:
        raise exceptions.ConfigError(f"Invalid complex literal '{text}'") from None


def parse_point(text: str) -> List[complex]:
    """Comma separated complex literals."""
    return [parse_complex(part) for part in text.split(",")]


def parse_indices(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise exceptions.ConfigError(f"Invalid index list '{text}'") from None


def parse_weights(text: str):
    """``uniform`` or comma separated nonnegative reals."""
    if text == "uniform":
        return text
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise exceptions.ConfigError(f"Invalid weights '{text}'") from None


def parse_params(ns: argparse.Namespace) -> Dict[str, float]:
    """Metric parameters from --n, --eps, --b and --param key=value."""
    params = {}
    for pair in getattr(ns, "param", None) or []:
        key, sep, value = pair.partition("=")
        if not sep:
            raise exceptions.ConfigError(f"Invalid parameter '{pair}', expected key=value")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise exceptions.ConfigError(f"Invalid value of parameter '{key}': '{value}'") from None
    for key in ("n", "eps", "b"):
        value = getattr(ns, key, None)
        if value is not None and not isinstance(value, (str, list)):
            params[key] = value
    return params


def _global_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("global")
    group.add_argument("--seed", type=int, default=0, help="random seed")
    group.add_argument("--samples", type=int, default=certify.BUDGET["samples"], help="sample budget")
    group.add_argument("--starts", type=int, default=certify.BUDGET["starts"], help="optimization starts")
    group.add_argument("--iterations", type=int, default=certify.BUDGET["iterations"], help="iterations per start")
    for name, value in numerics.TOLERANCES.items():
        group.add_argument(f"--tol-{name}", type=float, default=None, help=f"{name} tolerance, default {value}")
    group.add_argument("--out", default=None, help="report path, .json or a pandas table extension")
    group.add_argument("--fail-on", default="none", help="none, refuted or inconclusive")
    group.add_argument("--backend", default="serial", help="serial, threads or joblib")
    group.add_argument("--log", type=int, default=None, help="1 - debug, 2 - info")
    group.add_argument("--timings", action="store_true", help="record wall clock timings")
    return parser


def _metric_parser(b_weights: bool = False) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("metric parameters")
    group.add_argument("--n", type=int, default=None, help="dimension")
    group.add_argument("--eps", type=float, default=None, help="example_2_2 parameter")
    if not b_weights:
        group.add_argument("--b", type=float, default=None, help="example_2_3 parameter")
    group.add_argument("--param", action="append", default=[], help="key=value metric parameter")
    return parser


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the eval, certify, schwarz, mc and catalog commands."""
    common, metric_params = _global_parser(), _metric_parser()
    parser = argparse.ArgumentParser(prog="hermrbc", description="Chern curvature of Hermitian metrics")
    commands = parser.add_subparsers(dest="command", required=True)

    evaluate = commands.add_parser("eval", parents=[common, metric_params], help="curvature data at a point")
    evaluate.add_argument("metric", help="catalog name or metric file")
    evaluate.add_argument("--point", required=True, help="comma separated complex literals")
    evaluate.add_argument("--directions", type=int, default=0, help="random HSC directions")
    evaluate.add_argument("--vector", action="append", default=[], help="explicit HSC direction")

    check = commands.add_parser("certify", parents=[common, metric_params], help="certify a sign condition")
    check.add_argument("metric", help="catalog name or metric file")
    check.add_argument("--point", default=None, help="single point, the origin by default")
    check.add_argument("--radius", type=float, default=None, help="scan a ball of this radius")
    check.add_argument("--points", type=int, default=100, help="scan points")
    check.add_argument("--mode", default="random", help="random or grid")
    check.add_argument("--directions", type=int, default=0, help="HSC directions per scan point")
    check.add_argument("--cond", default="nonneg", help="pos, nonneg, neg, nonpos, gt:c, ge:c, lt:c, le:c")
    check.add_argument("--constant", type=float, default=None, help="check constant RBC equal to this value")

    lemma = commands.add_parser("schwarz", parents=[common, metric_params], help="Schwarz calculation")
    lemma.add_argument("g", help="domain metric")
    lemma.add_argument("h", help="target metric")
    lemma.add_argument("map", help="identity, constant or map file")
    lemma.add_argument("--point", action="append", default=[], help="explicit point, repeatable")
    lemma.add_argument("--radius", type=float, default=0.05, help="ball radius")
    lemma.add_argument("--points", type=int, default=10, help="random points")
    lemma.add_argument("--lambda", dest="lam", type=float, default=None, help="lambda, measured when missing")
    lemma.add_argument("--mu", type=float, default=0.0, help="mu")
    lemma.add_argument("--kappa", type=float, default=None, help="kappa, measured when missing")
    lemma.add_argument("--rank", type=int, default=None, help="rank bound r")
    lemma.add_argument("--sup", action="store_true", help="add the supremum bound block")

    carlo = commands.add_parser("mc", help="Monte Carlo checks")
    kinds = carlo.add_subparsers(dest="kind", required=True)
    moment = kinds.add_parser("fs-moment", parents=[common], help="unit sphere moments")
    moment.add_argument("--n", type=int, required=True, help="dimension")
    moment.add_argument("--idx", action="append", required=True, help="1-based i,j,k,l, repeatable")
    moment.add_argument("--unitary", action="store_true", help="also estimate after a random unitary")
    berger = kinds.add_parser("berger", parents=[common, _metric_parser(True)], help="Berger averaging")
    berger.add_argument("--metric", default=None, help="catalog name or metric file")
    berger.add_argument("--point", default=None, help="point, the origin by default")
    berger.add_argument("--b", dest="weights", default="uniform", help="uniform or comma separated weights")
    berger.add_argument("--synthetic", type=int, default=0, help="random pair-symmetric tensors")

    listing = commands.add_parser("catalog", help="built-in metrics")
    actions = listing.add_subparsers(dest="action", required=True)
    actions.add_parser("list", parents=[common], help="list catalog entries")
    show = actions.add_parser("show", parents=[common], help="show one entry")
    show.add_argument("name")
    validate = actions.add_parser("validate", parents=[common, metric_params], help="sample positivity")
    validate.add_argument("name")
    validate.add_argument("--radius", type=float, required=True, help="ball radius")
    validate.add_argument("--points", type=int, default=1000, help="sample points")
    validate.add_argument("--mode", default="random", help="random or grid")
    return parser


def _run(client: HermRBC, ns: argparse.Namespace):
    """Dispatch to the facade, returning the report and the group that produced it."""
    params = parse_params(ns)
    if ns.command == "eval":
        vectors = [parse_point(v) for v in ns.vector] or None
        return client.curvature, client.curvature.evaluate(
            ns.metric, parse_point(ns.point), params, ns.directions, vectors
        )
    if ns.command == "certify":
        if ns.constant is not None:
            point = parse_point(ns.point) if ns.point else _origin(ns.metric, params)
            return client.certify, client.certify.constant(ns.metric, point, ns.constant, params)
        if ns.radius is not None:
            return client.certify, client.certify.scan(
                ns.metric, ns.radius, ns.points, ns.cond, ns.mode, ns.directions, params
            )
        point = parse_point(ns.point) if ns.point else _origin(ns.metric, params)
        return client.certify, client.certify.point(ns.metric, point, ns.cond, params)
    if ns.command == "schwarz":
        points = [parse_point(p) for p in ns.point] or None
        return client.schwarz, client.schwarz.report(
            ns.g, ns.h, ns.map, points, ns.radius, ns.points, ns.lam, ns.mu, ns.kappa, ns.rank, ns.sup, params
        )
    if ns.command == "mc" and ns.kind == "fs-moment":
        return client.montecarlo, client.montecarlo.fs_moment(ns.n, [parse_indices(i) for i in ns.idx], ns.unitary)
    if ns.command == "mc":
        point = parse_point(ns.point) if ns.point else None
        return client.montecarlo, client.montecarlo.berger(
            ns.metric, point, parse_weights(ns.weights), params, ns.synthetic, ns.n or 2
        )
    if ns.action == "list":
        return client.catalog, client.catalog.list()
    if ns.action == "show":
        return client.catalog, client.catalog.show(ns.name)
    return client.catalog, client.catalog.validate(ns.name, ns.radius, ns.points, params, ns.mode)


def _origin(ref: str, params: dict) -> List[complex]:
    return [0j] * metric.resolve(ref, params).n


def failed(data: dict, fail_on: str) -> bool:
    """Whether the report status triggers --fail-on."""
    if fail_on == "none":
        return False
    status = data.get("results", {}).get("status")
    if data.get("command") == "schwarz":
        status = "certified" if data["results"]["schwarz"]["conclusions_hold"] else "refuted"
    bad = {"refuted", "fail", "inconsistent"}
    if fail_on == "inconclusive":
        bad.add("inconclusive")
    return status in bad


def main(argv: Sequence[str] = None) -> int:
    """Console entry point.

    :param argv: arguments without the program name.
    :return: exit code.
    """
    ns = build_parser().parse_args(argv)
    logging.basicConfig(format="%(name)s:%(levelname)s:%(message)s")
    client = None
    try:
        config = RunConfig.from_namespace(ns)
        client = HermRBC(config.backend, config.args(), config.log, config.timings)
        group, data = _run(client, ns)
        if config.output_path and pathlib.Path(config.output_path).suffix != ".json":
            group.process(data, f"pandas:{config.output_path}")
        elif config.output_path:
            group.process(data, f"json:{config.output_path}")
        else:
            sys.stdout.write(report.dumps(data))
    except (exceptions.ModuleException, exceptions.NumericsException, exceptions.BackendException) as ex:
        sys.stderr.write(f"hermrbc: error: {ex}\n")
        return EXIT_ERROR
    finally:
        if client is not None:
            client.destroy()
    return EXIT_FAIL if failed(data, config.fail_on) else EXIT_OK
