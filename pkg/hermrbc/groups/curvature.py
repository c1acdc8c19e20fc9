# -*- coding: utf-8 -*-
# pylint: disable=unused-argument,too-many-arguments,too-many-locals
from typing import Sequence, Union
import numpy as np
import pandas as pd
from hermrbc import curvature, exceptions, metric, numerics, report
from hermrbc.base import BaseGroup


class CurvatureGroup(BaseGroup):
    """Chern connection, curvature, Ricci tensors and torsion at a point."""

    def evaluate(
        self, metric_ref: Union[str, metric.MetricSpec], point: Sequence[complex], params: dict = None,
        directions: int = 0, vectors: Sequence[Sequence[complex]] = None, args: dict = None,
        output: str = "content", writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """Evaluate curvature data at a point.

        :param metric_ref: catalog name, metric file or metric spec.
        :param point: point in C^n.
        :param params: metric parameters.
        :param directions: number of random holomorphic sectional curvature directions.
        :param vectors: explicit holomorphic sectional curvature directions.
        :param args: additional / override arguments, "seed" and "tol_*".
        :param output: output format for 'process' method.
        :param writer: pandas writer parameters.
        :return: data in requested output format.
        """
        if directions < 0:
            raise exceptions.ConfigError(f"Direction count must be nonnegative, got {directions}")
        inputs = self.prepare(locals(), ["metric_ref"])
        args = self.merge({"seed": 0, "tol_exact": numerics.TOLERANCES["exact"]}, args)
        spec = metric.resolve(metric_ref, params)
        inputs["metric"] = spec.describe()
        j = metric.jet(spec, point, float(args["tol_exact"]))
        t = curvature.chern_tensor(j)
        unitary = curvature.unitary_tensor(j)
        triple = curvature.ricci(t)
        torsion = curvature.torsion_eta(j)
        einstein = {}
        for name, value in triple.as_dict().items():
            c, residual = curvature.einstein_constant(value, j.g)
            einstein[name] = {"c": c, "residual": residual}

        rows = []
        V = np.empty((0, spec.n), dtype=complex)
        if vectors is not None:
            V = np.asarray(vectors, dtype=complex).reshape(-1, spec.n)
        if directions:
            rng = np.random.default_rng([int(args["seed"]), 2])
            V = np.vstack([V, rng.standard_normal((directions, spec.n)) + 1j * rng.standard_normal((directions, spec.n))])
        values = curvature.hsc_batch(t, V) if V.shape[0] else np.empty(0)
        for index, (v, value) in enumerate(zip(V, values)):
            rows.append({"index": index, "direction": v, "hsc": float(value)})

        results = {
            "metric_jet": report.entry(
                "metric.jet", "exact", point=j.p, g=j.g, g_inv=j.g_inv, residuals=j.residuals()
            ),
            "curvature": report.entry(
                "curvature.chern_tensor", "exact", frame="coordinate", R=t.R,
                max_abs=float(np.max(np.abs(t.R))), unitary_frame=unitary.frame.E, R_unitary=unitary.R,
                symmetry=curvature.symmetry_report(unitary)
            ),
            "ricci": report.entry("curvature.ricci", "exact", **triple.as_dict(), einstein=einstein),
            "torsion": report.entry(
                "curvature.torsion_eta", "exact", factor=curvature.TORSION_FACTOR, gamma=torsion.gamma,
                torsion_norm=float(np.linalg.norm(torsion.torsion)), eta=torsion.eta,
                eta_norm=float(np.linalg.norm(torsion.eta)), eta_trace=curvature.eta_trace(j)
            ),
            "gauduchon": report.entry(
                "curvature.gauduchon_identity_residual", "symmetry",
                residual=curvature.gauduchon_identity_residual(spec, j.p)
            ),
            "hsc": report.entry(
                "curvature.hsc", "symmetry", count=len(rows),
                min=float(values.min()) if len(rows) else None, max=float(values.max()) if len(rows) else None,
                spread=float(values.max() - values.min()) if len(rows) else None
            )
        }
        return self.process(self.build("eval", inputs, results, int(args["seed"]), rows), output, writer)

    def rbc(
        self, metric_ref: Union[str, metric.MetricSpec], point: Sequence[complex], weights: Sequence[float] = None,
        xi: Sequence[Sequence[complex]] = None, params: dict = None, args: dict = None, output: str = "content",
        writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """Real bisectional curvature for frame weights or a PSD direction in the g-unitary frame at the point.

        :param metric_ref: catalog name, metric file or metric spec.
        :param point: point in C^n.
        :param weights: nonnegative frame weights, normalized to unit length.
        :param xi: Hermitian positive semidefinite direction, normalized to tr(xi^2) = 1.
        :param params: metric parameters.
        :param args: additional / override arguments.
        :param output: output format for 'process' method.
        :param writer: pandas writer parameters.
        :return: data in requested output format.
        """
        inputs = self.prepare(locals(), ["metric_ref"])
        spec = metric.resolve(metric_ref, params)
        inputs["metric"] = spec.describe()
        j = metric.jet(spec, point)
        t = curvature.unitary_tensor(j)
        results = {}
        if weights is not None:
            w = curvature.FrameWeights.normalized(t.frame, weights)
            value, residual = curvature.rbc_value(t, w, residual=True)
            results["rbc"] = report.entry(
                "curvature.rbc_value", "decomposition", weights=w.a, value=value, imaginary_residual=residual,
                h_positive_pairsum=curvature.h_positive_pairsum(t, w.a)
            )
        if xi is not None:
            direction = curvature.PsdDirection.from_matrix(np.asarray(xi, dtype=complex))
            value, residual = curvature.quad_form(t, direction, residual=True)
            results["quad_form"] = report.entry(
                "curvature.quad_form", "decomposition", xi=direction, value=value, imaginary_residual=residual
            )
        return self.process(self.build("rbc", inputs, results), output, writer)

    def identities(
        self, metric_ref: Union[str, metric.MetricSpec], points: Sequence[Sequence[complex]], params: dict = None,
        args: dict = None, output: str = "content", writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """Torsion and Gauduchon identities, first Ricci against -dd log det g, exact against finite
        difference jets.

        :param metric_ref: catalog name, metric file or metric spec.
        :param points: evaluation points.
        :param params: metric parameters.
        :param args: additional / override arguments, "fd_step".
        :param output: output format for 'process' method.
        :param writer: pandas writer parameters.
        :return: data in requested output format.
        """
        inputs = self.prepare(locals(), ["metric_ref"])
        args = self.merge({"fd_step": 1e-4}, args)
        spec = metric.resolve(metric_ref, params)
        inputs["metric"] = spec.describe()
        rows = []
        for index, p in enumerate(points):
            j = metric.jet(spec, p)
            fd = metric.fd_jet(spec, j.p, float(args["fd_step"]))
            ric1 = curvature.ricci(curvature.chern_tensor(j)).ric1
            rows.append({
                "index": index, "point": j.p,
                "torsion_identity": curvature.torsion_identity_residual(spec, j.p),
                "gauduchon_identity": curvature.gauduchon_identity_residual(spec, j.p),
                "ricci_form": float(np.max(np.abs(ric1 - curvature.ricci_form_fd(spec, j.p, float(args["fd_step"]))))),
                "jet_first": float(np.max(np.abs(j.dg_hol - fd.dg_hol))),
                "jet_second": float(np.max(np.abs(j.ddg - fd.ddg)))
            })
        summary = {key: max((row[key] for row in rows), default=None) for key in (
            "torsion_identity", "gauduchon_identity", "ricci_form", "jet_first", "jet_second"
        )}
        results = {
            "identities": report.entry("curvature.torsion_identity_residual", "symmetry", **{
                key: summary[key] for key in ("torsion_identity", "gauduchon_identity")
            }),
            "finite_differences": report.entry("metric.fd_jet", "fd", **{
                key: summary[key] for key in ("ricci_form", "jet_first", "jet_second")
            })
        }
        return self.process(self.build("identities", inputs, results, table=rows), output, writer)

    def calibrate(
        self, points: Sequence[Sequence[complex]] = None, eps: float = 0.3, args: dict = None,
        output: str = "content", writer: dict = None
    ) -> Union[dict, str, pd.DataFrame]:
        """Calibrate the torsion normalization.

        :param points: evaluation points, default random points of radius 0.1.
        :param eps: example_2_2 parameter.
        :param args: additional / override arguments, "seed".
        :param output: output format for 'process' method.
        :param writer: pandas writer parameters.
        :return: data in requested output format.
        """
        inputs = self.prepare(locals(), [])
        args = self.merge({"seed": 0}, args)
        best, residuals = curvature.calibrate_torsion_factor(points, eps, int(args["seed"]))
        rows = [{"factor": factor, "residual": value} for factor, value in sorted(residuals.items())]
        results = {
            "calibration": report.entry(
                "curvature.calibrate_torsion_factor", "symmetry", best=best, frozen=curvature.TORSION_FACTOR,
                agrees=best == curvature.TORSION_FACTOR
            )
        }
        return self.process(self.build("calibrate", inputs, results, int(args["seed"]), rows), output, writer)
