# -*- coding: utf-8 -*-
from typing import Union, Any, Callable, Optional
import pathlib
import time
import pandas as pd
from hermrbc import exceptions, metric, report, schwarz


class BaseGroup:
    """Base class for groups."""

    def __init__(self, run: Callable, session: Any = None, args: dict = None, timings: bool = False):
        """
        :param run: backend <map> function, called as run(func, items).
        :param session: backend session.
        :param args: common budget and tolerance arguments.
        :param timings: record wall clock timings in reports.
        """
        self.run = run
        self.session = session
        self.args = args or {}
        self.timings = timings
        self.started = None

    def prepare(self, source: dict, exclude: list) -> dict:
        """Prepare inputs echo.

        :param source: source dictionary.
        :param exclude: list of keys to exclude.
        :return: processed inputs.
        """
        result = {}
        convert = {"lam": "lambda", "g": "domain_metric", "h": "target_metric", "f": "map", "cond": "condition"}
        exclude = ["self", "args", "output", "writer"] + exclude
        for key, value in source.items():
            if key in exclude or value is None:
                continue
            if isinstance(value, (metric.MetricSpec, schwarz.MapSpec)):
                value = value.describe()
            result[convert.get(key, key)] = value
        self.started = time.perf_counter()
        return result

    def merge(self, defaults: dict, args: Optional[dict]) -> dict:
        """Per call arguments over common arguments over defaults."""
        return {**defaults, **self.args, **(args or {})}

    def build(self, command: str, inputs: dict, results: dict, seed: Optional[int] = None,
              table: list = None) -> dict:
        """Assemble a report, with timings only when enabled."""
        timings = None
        if self.timings and self.started is not None:
            timings = {"total_seconds": time.perf_counter() - self.started}
        return report.build(command, inputs, results, seed, table, timings)

    # pylint: disable=too-many-branches
    def process(
        self, data: dict, output: str = "content", writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """Process report data.

        :param data: report dictionary.
        :param output: output format and optionally file location, format: "<type>[:path]"
            types:

              - "content": report dictionary
              - "json": serialized report
              - "pandas": pandas dataframe of the report table

            path: additionally save report to file

              - for "content" and "json" will save serialized report atomically
              - for "pandas" will save in format specified by extension:
                parquet, pickle, csv, hdf, xlsx, json, html, feather, tex, dta, md

        :param writer: pandas writer parameters, see original to_<format> methods for more details.
            note that some formats may require 3rd-party libraries.
            additionally writer can be provided with:

              - change:columns - dict to rename DataFrame columns
              - change:reorder - bool to use columns dict for DataFrame columns order
              - change:reindex - str or list to set DataFrame columns as index

        :return: data in requested output format.
        """
        result = None
        output = output.split(":", 1)
        extensions = {
            ".parquet": "parquet", ".pickle": "pickle", ".csv": "csv", ".hdf": "hdf",
            ".xlsx": "excel", ".json": "json", ".html": "html", ".feather": "feather",
            ".tex": "latex", ".dta": "stata", ".md": "markdown"
        }
        if output[0] not in ["content", "json", "pandas"]:
            raise exceptions.UnsupportedOutput(f"Unsupported output '{output[0]}'")

        if output[0] == "content":
            result = data

        if output[0] == "json" or (output[0] == "content" and len(output) == 2):
            text = report.dumps(data)
            if output[0] == "json":
                result = text
            if len(output) == 2:
                report.write_atomic(text, output[1])

        if output[0] == "pandas":
            try:
                result = pd.DataFrame([report.flat_row(row) for row in data.get("table", [])])
                if writer:
                    writer = dict(writer)
                    columns = writer.pop("change:columns", None)
                    reorder = writer.pop("change:reorder", None)
                    reindex = writer.pop("change:reindex", None)
                    if columns:
                        result.rename(columns=columns, inplace=True)
                    if reorder:
                        result = result[list(columns.values())]
                    if reindex:
                        result.set_index(reindex, inplace=True)
                if len(output) == 2:
                    extension = pathlib.Path(output[1]).suffix
                    if extension not in extensions:
                        raise exceptions.UnsupportedExtension(f"Unsupported extension '{extension}'")
                    getattr(result, f"to_{extensions[extension]}")(output[1], **(writer or {}))
            except exceptions.UnsupportedExtension:
                raise
            except OSError as ex:
                raise exceptions.FileIOError(str(ex)) from None
            except Exception as ex:
                raise exceptions.PandasRuntimeError(ex, str(ex))

        return result
