# -*- coding: utf-8 -*-
# pylint: disable=unused-argument,too-many-arguments,too-many-locals
from typing import Sequence, Union
import numpy as np
import pandas as pd
from hermrbc import curvature, exceptions, metric, numerics, report, sampling
from hermrbc.base import BaseGroup


class MonteCarloGroup(BaseGroup):
    """Unit sphere moments and Berger averaging."""

    def fs_moment(
        self, n: int, indices: Sequence[Sequence[int]], unitary: bool = False, args: dict = None,
        output: str = "content", writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """Estimate moments E[w_i conj(w_j) w_k conj(w_l)] against their closed form.

        :param n: dimension.
        :param indices: 1-based index quadruples.
        :param unitary: also estimate after a fixed random unitary, seeded by "seed".
        :param args: additional / override arguments, "samples" and "seed".
        :param output: output format for 'process' method.
        :param writer: pandas writer parameters.
        :return: data in requested output format.
        """
        inputs = self.prepare(locals(), [])
        args = self.merge({"samples": 100000, "seed": 0}, args)
        count, seed = int(args["samples"]), int(args["seed"])
        rows = sampling.moment_table(n, indices, count, seed, self.run)
        if unitary:
            U = numerics.random_unitary(n, seed)
            for row in rows:
                rotated = sampling.fs_moment(n, row["idx"], count, seed, U)
                row["rotated_estimate"] = rotated.value
                row["rotated_pass"] = rotated.within(row["target"])
        results = {
            "moments": report.entry(
                "sampling.fs_moment", "statistical", sigmas=sampling.SIGMAS, floor=sampling.FLOOR,
                estimates=rows, passed=all(row["pass"] for row in rows)
            ),
            "status": "pass" if all(row["pass"] for row in rows) else "fail"
        }
        return self.process(self.build("mc fs-moment", inputs, results, seed, rows), output, writer)

    def berger(
        self, metric_ref: Union[str, metric.MetricSpec] = None, point: Sequence[complex] = None,
        b: Union[str, Sequence[float]] = "uniform", params: dict = None, synthetic: int = 0, n: int = 2,
        args: dict = None, output: str = "content", writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """Compare Berger averaging by Monte Carlo with its closed form.

        :param metric_ref: catalog name, metric file or metric spec; the tensor is taken in the
            g-unitary frame at the point.
        :param point: point, the origin when missing.
        :param b: "uniform" or nonnegative weights.
        :param params: metric parameters.
        :param synthetic: number of random pair-symmetric tensors of dimension n with random weights
            checked in addition or instead of a metric.
        :param n: dimension of synthetic tensors.
        :param args: additional / override arguments, "samples" and "seed".
        :param output: output format for 'process' method.
        :param writer: pandas writer parameters.
        :return: data in requested output format.
        """
        inputs = self.prepare(locals(), ["metric_ref"])
        args = self.merge({"samples": 100000, "seed": 0}, args)
        count, seed = int(args["samples"]), int(args["seed"])
        if metric_ref is None and not synthetic:
            raise exceptions.ConfigError("Berger check needs a metric or synthetic tensors")
        rows, results = [], {}
        if metric_ref is not None:
            spec = metric.resolve(metric_ref, params)
            inputs["metric"] = spec.describe()
            p = np.zeros(spec.n, dtype=complex) if point is None else point
            t = curvature.unitary_tensor(metric.jet(spec, p))
            weights = np.full(spec.n, 1 / np.sqrt(spec.n)) if b == "uniform" else np.asarray(b, dtype=float)
            check = sampling.berger_check(t, weights, count, seed)
            frame = curvature.FrameWeights.normalized(t.frame, np.ones(spec.n))
            results["metric"] = report.entry(
                "sampling.berger_check", "statistical", **check,
                pair_sum=curvature.h_positive_pairsum(t, weights),
                rbc_uniform=curvature.rbc_value(t, frame)
            )
            rows.append({"tensor": spec.name, **check})
        if synthetic:
            rng = np.random.default_rng([seed, 3])
            gate = sampling.SIGMAS + np.sqrt(2 * np.log(synthetic))
            checks = []
            for index in range(synthetic):
                t = curvature.ChernTensor(
                    sampling.synthetic_tensor(n, rng), np.eye(n), numerics.UnitaryFrame(np.eye(n), f"synthetic{index}"),
                    f"synthetic{index}"
                )
                check = sampling.berger_check(t, rng.random(n), count, seed + index + 1)
                check["agree"] = check["sigmas"] <= gate
                checks.append(check)
                rows.append({"tensor": f"synthetic{index}", **check})
            results["synthetic"] = report.entry(
                "sampling.berger_check", "statistical", count=synthetic, gate_sigmas=gate,
                agree=all(check["agree"] for check in checks),
                max_sigmas=max(check["sigmas"] for check in checks)
            )
        agree = all(row["agree"] for row in rows)
        results["status"] = "pass" if agree else "fail"
        return self.process(self.build("mc berger", inputs, results, seed, rows), output, writer)
