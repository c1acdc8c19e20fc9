# -*- coding: utf-8 -*-
# pylint: disable=redefined-builtin
from typing import Any, Callable, Iterable, List
import joblib


def map(func: Callable, items: Iterable[tuple], n_jobs: int = -1, prefer: str = "processes",
        **kwargs) -> List[Any]:
    """Evaluate with joblib workers.

    :param func: function to apply, must be importable for process workers.
    :param items: argument tuples.
    :param n_jobs: number of workers, -1 for all cores.
    :param prefer: "processes" or "threads".
    :param kwargs: backend arguments, unused.
    :return: results in item order.
    """
    return joblib.Parallel(n_jobs=n_jobs, prefer=prefer)(joblib.delayed(func)(*item) for item in items)
