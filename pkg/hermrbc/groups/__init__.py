# -*- coding: utf-8 -*-
from hermrbc.groups.catalog import CatalogGroup
from hermrbc.groups.curvature import CurvatureGroup
from hermrbc.groups.certify import CertifyGroup
from hermrbc.groups.schwarz import SchwarzGroup
from hermrbc.groups.montecarlo import MonteCarloGroup

__all__ = [
    "CatalogGroup", "CurvatureGroup", "CertifyGroup",
    "SchwarzGroup", "MonteCarloGroup"
]
