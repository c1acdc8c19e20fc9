# -*- coding: utf-8 -*-
# pylint: disable=unused-argument,too-many-arguments,too-many-locals
from typing import Sequence, Union
import numpy as np
import pandas as pd
from hermrbc import certify, exceptions, metric, report, schwarz
from hermrbc.base import BaseGroup


class SchwarzGroup(BaseGroup):
    """Schwarz calculation for holomorphic maps between Hermitian metrics."""

    def report(
        self, g: Union[str, metric.MetricSpec], h: Union[str, metric.MetricSpec],
        f: Union[str, schwarz.MapSpec] = "identity", points: Sequence[Sequence[complex]] = None,
        radius: float = 0.05, count: int = 10, lam: float = None, mu: float = 0.0, kappa: float = None,
        rank: int = None, sup: bool = False, params: dict = None, args: dict = None,
        output: str = "content", writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """Bochner identity, hypotheses and inequality residuals at sampled points.

        :param g: domain metric reference.
        :param h: target metric reference.
        :param f: "identity", "constant", map file or map spec.
        :param points: explicit points, otherwise random points of the ball.
        :param radius: ball radius for random points.
        :param count: number of random points.
        :param lam: lambda, measured when missing.
        :param mu: mu.
        :param kappa: kappa, measured when missing.
        :param rank: rank bound r, measured when missing.
        :param sup: add the supremum bound block.
        :param params: metric parameters shared by both metrics.
        :param args: additional / override budget and "fd_step", "tol_fd".
        :param output: output format for 'process' method.
        :param writer: pandas writer parameters.
        :return: data in requested output format.
        """
        inputs = self.prepare(locals(), ["g", "h", "f"])
        args = self.merge({**certify.BUDGET, "fd_step": schwarz.STEP, "tol_fd": schwarz.ACCEPT}, args)
        budget = {key: args[key] for key in certify.BUDGET}
        gs, hs = resolve_pair(g, h, params)
        fs = schwarz.resolve_map(f, gs.n, hs.n)
        inputs.update({"domain_metric": gs.describe(), "target_metric": hs.describe(), "map": fs.describe()})
        if points is None:
            points = metric.region_points(gs.n, radius, count, int(args["seed"]))
        points = [np.asarray(p, dtype=complex).reshape(-1) for p in points]

        results = {}
        if lam is None or kappa is None:
            measured = schwarz.measure_bounds(gs, hs, fs, points, mu, budget)
            results["measured_bounds"] = report.entry(
                "schwarz.measure_bounds", "decomposition", bounds=measured["bounds"],
                lambda_evidence=measured["lambda_evidence"], kappa_evidence=measured["kappa_evidence"],
                kappa_certified=measured["kappa_certified"]
            )
            lam = measured["bounds"].lam if lam is None else lam
            kappa = measured["bounds"].kappa if kappa is None else kappa
        bounds = schwarz.SchwarzBounds(float(lam), float(mu), float(kappa), rank)
        result = schwarz.schwarz_inequality_report(
            gs, hs, fs, points, bounds, budget, float(args["fd_step"]), float(args["tol_fd"]), self.run
        )
        results["schwarz"] = report.entry("schwarz.schwarz_inequality_report", "fd", **result["summary"])
        if sup:
            results["sup_bound"] = report.entry(
                "schwarz.sup_bound_check", "symmetry", **schwarz.sup_bound_check(gs, hs, fs, points, bounds)
            )
        return self.process(
            self.build("schwarz", inputs, results, int(args["seed"]), result["rows"]), output, writer
        )

    def bochner(
        self, g: Union[str, metric.MetricSpec], h: Union[str, metric.MetricSpec],
        f: Union[str, schwarz.MapSpec], point: Sequence[complex], params: dict = None, args: dict = None,
        output: str = "content", writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """Terms of the Bochner identity and its finite difference residual at one point.

        :param g: domain metric reference.
        :param h: target metric reference.
        :param f: "identity", "constant", map file or map spec.
        :param point: point.
        :param params: metric parameters shared by both metrics.
        :param args: additional / override arguments, "fd_step" and "tol_fd".
        :param output: output format for 'process' method.
        :param writer: pandas writer parameters.
        :return: data in requested output format.
        """
        inputs = self.prepare(locals(), ["g", "h", "f"])
        args = self.merge({"fd_step": schwarz.STEP, "tol_fd": schwarz.ACCEPT}, args)
        gs, hs = resolve_pair(g, h, params)
        fs = schwarz.resolve_map(f, gs.n, hs.n)
        inputs.update({"domain_metric": gs.describe(), "target_metric": hs.describe(), "map": fs.describe()})
        terms = schwarz.bochner_terms(gs, hs, fs, point)
        residual = schwarz.bochner_residual(gs, hs, fs, point, float(args["fd_step"]), float(args["tol_fd"]))
        results = {
            "bochner": report.entry(
                "schwarz.bochner_residual", "fd", residual=residual,
                **{key: terms[key] for key in ("u", "nabla_df_norm2", "ric_term", "rh_term", "rhs", "image")}
            )
        }
        return self.process(self.build("schwarz bochner", inputs, results), output, writer)


def resolve_pair(g: Union[str, metric.MetricSpec], h: Union[str, metric.MetricSpec],
                 params: dict = None):
    """Resolve both metrics, a catalog metric missing its dimension takes the other one's."""
    params = dict(params or {})
    try:
        gs = metric.resolve(g, params)
    except exceptions.ParameterError:
        if "n" in params:
            raise
        hs = metric.resolve(h, params)
        return metric.resolve(g, {**params, "n": hs.n}), hs
    return gs, metric.resolve(h, {"n": gs.n, **params})
