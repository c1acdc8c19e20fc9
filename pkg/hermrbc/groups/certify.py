# -*- coding: utf-8 -*-
# pylint: disable=unused-argument,too-many-arguments,too-many-locals
from typing import Sequence, Union
import pandas as pd
from hermrbc import certify, curvature, metric, numerics, report
from hermrbc.base import BaseGroup


class CertifyGroup(BaseGroup):
    """Sign certification of the real bisectional curvature and constant curvature checks."""

    def point(
        self, metric_ref: Union[str, metric.MetricSpec], point: Sequence[complex], cond: str = "nonneg",
        params: dict = None, args: dict = None, output: str = "content", writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """Certify a condition at one point.

        :param metric_ref: catalog name, metric file or metric spec.
        :param point: point in C^n.
        :param cond: condition, "pos", "nonneg", "neg", "nonpos" or "<kind>:<threshold>".
        :param params: metric parameters.
        :param args: additional / override budget: samples, starts, tol, iterations, seed.
        :param output: output format for 'process' method.
        :param writer: pandas writer parameters.
        :return: data in requested output format.
        """
        inputs = self.prepare(locals(), ["metric_ref"])
        budget = self.merge(certify.BUDGET, args)
        kind, c = certify.parse_condition(cond)
        spec = metric.resolve(metric_ref, params)
        inputs["metric"] = spec.describe()
        t = curvature.unitary_tensor(metric.jet(spec, point))
        verdict = certify.certify_sign(t, kind, c, _budget(budget), self.run)
        results = {
            "verdict": report.entry("certify.certify_sign", "decomposition", **verdict.as_dict()),
            "status": verdict.status
        }
        return self.process(
            self.build("certify", inputs, results, int(budget["seed"]), [verdict.as_dict()]), output, writer
        )

    def scan(
        self, metric_ref: Union[str, metric.MetricSpec], radius: float, points: int = 100, cond: str = "nonneg",
        mode: str = "random", directions: int = 0, params: dict = None, args: dict = None,
        output: str = "content", writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """Certify a condition at sampled points of a ball around the origin.

        :param metric_ref: catalog name, metric file or metric spec.
        :param radius: ball radius, at most the validity radius.
        :param points: number of points.
        :param cond: condition.
        :param mode: "random" or "grid".
        :param directions: holomorphic sectional curvature directions per point.
        :param params: metric parameters.
        :param args: additional / override budget.
        :param output: output format for 'process' method.
        :param writer: pandas writer parameters.
        :return: data in requested output format.
        """
        inputs = self.prepare(locals(), ["metric_ref"])
        budget = self.merge(certify.BUDGET, args)
        kind, c = certify.parse_condition(cond)
        spec = metric.resolve(metric_ref, params)
        inputs["metric"] = spec.describe()
        result = certify.scan(spec, radius, points, kind, c, _budget(budget), mode, directions, self.run)
        rows = []
        for index, (p, verdict) in enumerate(zip(result.points, result.verdicts)):
            rows.append({"index": index, "point": p, **verdict.as_dict()})
            if directions:
                rows[-1]["hsc_min"], rows[-1]["hsc_max"] = result.hsc[index]
        statuses = result.summary["statuses"]
        status = "refuted" if statuses["refuted"] else "inconclusive" if statuses["inconclusive"] else "certified"
        results = {
            "summary": report.entry("certify.scan", "decomposition", **result.summary),
            "verdicts": [verdict.as_dict() for verdict in result.verdicts],
            "status": status
        }
        return self.process(self.build("certify scan", inputs, results, int(budget["seed"]), rows), output, writer)

    def constant(
        self, metric_ref: Union[str, metric.MetricSpec], point: Sequence[complex], c: float = 0.0,
        params: dict = None, args: dict = None, output: str = "content", writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """Check the pointwise identities implied by constant real bisectional curvature.

        :param metric_ref: catalog name, metric file or metric spec.
        :param point: point in C^n.
        :param c: constant.
        :param params: metric parameters.
        :param args: additional / override arguments, "tol_symmetry".
        :param output: output format for 'process' method.
        :param writer: pandas writer parameters.
        :return: data in requested output format.
        """
        inputs = self.prepare(locals(), ["metric_ref"])
        args = self.merge({"tol_symmetry": numerics.TOLERANCES["symmetry"]}, args)
        spec = metric.resolve(metric_ref, params)
        inputs["metric"] = spec.describe()
        result = certify.constant_rbc_check(spec, point, c, float(args["tol_symmetry"]))
        rows = [{"residual": key, "value": value} for key, value in sorted(result["residuals"].items())]
        results = {
            "constant_rbc": report.entry("certify.constant_rbc_check", "symmetry", **result),
            "status": "consistent" if result["consistent"] else "inconsistent"
        }
        return self.process(self.build("certify constant", inputs, results, table=rows), output, writer)


def _budget(args: dict) -> dict:
    return {key: args[key] for key in certify.BUDGET}
