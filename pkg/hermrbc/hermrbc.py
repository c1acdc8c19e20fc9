# -*- coding: utf-8 -*-
# pylint: disable=too-few-public-methods
from typing import Union
from types import ModuleType
import functools
import importlib
import logging
from hermrbc import groups, exceptions

LEVELS = {1: logging.DEBUG, 2: logging.INFO}


class HermRBC:
    """Curvature evaluation, certification and verification facade."""

    def __init__(self, backend: Union[str, ModuleType] = "serial", args: dict = None, log: int = None,
                 timings: bool = False, backend_args: dict = None):
        """
        :param backend: execution backend name or module.
        :param args: common budget and tolerance arguments.
        :param log: logging verbosity, 1 - debug, 2 - info, otherwise warning.
        :param timings: record wall clock timings in reports.
        :param backend_args: backend <map> arguments.
        """
        self.args = args or {}
        self.session = None
        logging.getLogger("hermrbc").setLevel(LEVELS.get(log, logging.WARNING))

        if isinstance(backend, str):
            try:
                self.backend = importlib.import_module(f"hermrbc.backends.{backend}")
            except ImportError:
                raise exceptions.UnknownBackend(f"Unknown backend '{backend}'") from None
        else:
            self.backend = backend

        if not getattr(self.backend, "map", None):
            raise exceptions.ImproperBackend(f"Backend '{backend}' doesn't have <map> method")
        if hasattr(self.backend, "create"):
            self.session = self.backend.create()

        run = functools.partial(self.backend.map, **(backend_args or {}))
        if self.session is not None:
            run = functools.partial(self.backend.map, session=self.session, **(backend_args or {}))

        self.catalog = groups.CatalogGroup(run, self.session, self.args, timings)
        self.curvature = groups.CurvatureGroup(run, self.session, self.args, timings)
        self.certify = groups.CertifyGroup(run, self.session, self.args, timings)
        self.schwarz = groups.SchwarzGroup(run, self.session, self.args, timings)
        self.montecarlo = groups.MonteCarloGroup(run, self.session, self.args, timings)

    def destroy(self):
        """Manually release backend session."""
        if self.session is not None and hasattr(self.backend, "destroy"):
            self.backend.destroy(self.session)
            self.session = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.destroy()
