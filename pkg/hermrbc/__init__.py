# -*- coding: utf-8 -*-
from hermrbc.hermrbc import HermRBC

__all__ = ["HermRBC"]
