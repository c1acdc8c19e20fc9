# -*- coding: utf-8 -*-
from typing import Any, Callable, Iterable, List


def map(func: Callable, items: Iterable[tuple], **kwargs) -> List[Any]:  # pylint: disable=redefined-builtin
    """Evaluate in the calling thread.

    :param func: function to apply.
    :param items: argument tuples.
    :param kwargs: backend arguments, unused.
    :return: results in item order.
    """
    return [func(*item) for item in items]
