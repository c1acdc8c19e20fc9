# -*- coding: utf-8 -*-
# pylint: disable=redefined-builtin
from typing import Any, Callable, Iterable, List
from concurrent.futures import ThreadPoolExecutor


def create(workers: int = None) -> ThreadPoolExecutor:
    """Create shared thread pool."""
    return ThreadPoolExecutor(max_workers=workers, thread_name_prefix="hermrbc")


def map(func: Callable, items: Iterable[tuple], session: ThreadPoolExecutor = None,
        workers: int = None, **kwargs) -> List[Any]:
    """Evaluate in a thread pool, numpy releases the GIL in the dense kernels.

    :param func: function to apply.
    :param items: argument tuples.
    :param session: shared pool, a temporary one is used when missing.
    :param workers: temporary pool size.
    :param kwargs: backend arguments, unused.
    :return: results in item order.
    """
    items = list(items)
    if session is not None:
        return list(session.map(lambda item: func(*item), items))
    with create(workers) as pool:
        return list(pool.map(lambda item: func(*item), items))


def destroy(session: ThreadPoolExecutor):
    """Shutdown shared thread pool."""
    session.shutdown(wait=True)
