# -*- coding: utf-8 -*-
# pylint: disable=unused-argument,too-many-arguments
from typing import Union
import pandas as pd
from hermrbc import metric, numerics, report
from hermrbc.base import BaseGroup


class CatalogGroup(BaseGroup):
    """Built-in metrics and metric definition files."""

    def list(
        self, args: dict = None, output: str = "content", writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """List catalog entries.

        :param args: additional / override arguments.
        :param output: output format for 'process' method.
        :param writer: pandas writer parameters.
        :return: data in requested output format.
        """
        inputs = self.prepare(locals(), [])
        entries = [metric.describe(name) for name in sorted(metric.CATALOG)]
        table = [
            {
                "name": item["name"], "aliases": item["aliases"], "required": item["required"],
                "domain_hint": item["domain_hint"], "formula": item["formula"]
            } for item in entries
        ]
        results = {"catalog": report.entry("metric.catalog", "exact", entries=entries)}
        return self.process(self.build("catalog list", inputs, results, table=table), output, writer)

    def show(
        self, name: str, args: dict = None, output: str = "content", writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """Show one catalog entry with its defining expressions.

        :param name: catalog name or alias.
        :param args: additional / override arguments.
        :param output: output format for 'process' method.
        :param writer: pandas writer parameters.
        :return: data in requested output format.
        """
        inputs = self.prepare(locals(), [])
        item = metric.describe(name)
        table = [
            {"row": i + 1, "column": i + k + 1, "entry": text}
            for i, row in enumerate(item["entries_upper"]) for k, text in enumerate(row)
        ]
        results = {"entry": report.entry("metric.catalog", "exact", **item)}
        return self.process(self.build("catalog show", inputs, results, table=table), output, writer)

    def validate(
        self, metric_ref: Union[str, metric.MetricSpec], radius: float, count: int = 1000,
        params: dict = None, mode: str = "random", args: dict = None, output: str = "content",
        writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """Sample a metric over a ball and report positivity and symmetry.

        :param metric_ref: catalog name, metric file or metric spec.
        :param radius: ball radius.
        :param count: number of points.
        :param params: metric parameters.
        :param mode: "random" or "grid".
        :param args: additional / override arguments, "seed" and "tol_exact".
        :param output: output format for 'process' method.
        :param writer: pandas writer parameters.
        :return: data in requested output format.
        """
        inputs = self.prepare(locals(), [])
        args = self.merge({"seed": 0, "tol_exact": numerics.TOLERANCES["exact"]}, args)
        spec = metric.resolve(metric_ref, params)
        result = metric.validate(spec, radius, count, int(args["seed"]), mode, float(args["tol_exact"]))
        results = {"validation": report.entry("metric.validate", "exact", **result)}
        return self.process(
            self.build("catalog validate", inputs, results, int(args["seed"]), [result]), output, writer
        )
