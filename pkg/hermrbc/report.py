# -*- coding: utf-8 -*-
"""Report assembly and deterministic JSON serialization."""
from typing import Any, Dict, List, Optional
import dataclasses
import json
import math
import os
import pathlib
import tempfile
import numpy as np
from hermrbc import curvature, exceptions, numerics

TOOL = "hermrbc"
VERSION = "0.1.0"
FS_HSC_CONSTANT = 2.0


def convention_block() -> dict:
    """Conventions every numeric result depends on."""
    return {
        "index_pair": curvature.INDEX_CONVENTION,
        "cometric": "g^{p qbar} = inverse(g)[q, p]",
        "torsion_factor": curvature.TORSION_FACTOR,
        "torsion": "T^k_{ij} = factor * (Gamma^k_{ij} - Gamma^k_{ji}), Gamma^k_{ij} = g^{k qbar} d_i g_{j qbar}",
        "fubini_study": {"potential": "log(1 + |z|^2)", "hsc_constant": FS_HSC_CONSTANT},
        "rbc_normalization": "tr(xi^2) = 1",
        "tolerances": dict(numerics.TOLERANCES)
    }


def entry(operation: str, tolerance_class: str, **values) -> dict:
    """Result block naming the operation and the tolerance class that produced it."""
    return {"operation": operation, "tolerance_class": tolerance_class, **values}


def build(command: str, inputs: dict, results: dict, seed: Optional[int] = None,
          table: List[dict] = None, timings: Optional[dict] = None) -> dict:
    """Top level report.

    :param command: producing command.
    :param inputs: echoed inputs.
    :param results: result blocks.
    :param seed: seed of the run.
    :param table: row table for tabular outputs.
    :param timings: wall clock timings, only when requested.
    :return: report dictionary.
    """
    result = {
        "tool": TOOL, "tool_version": VERSION, "command": command, "convention_block": convention_block(),
        "inputs": inputs, "results": results, "seed": seed, "table": table or []
    }
    if timings is not None:
        result["timings"] = timings
    return result


def _number(value: float) -> Any:
    if math.isfinite(value):
        return value
    return repr(value)


def jsonable(obj: Any) -> Any:
    """Convert to plain JSON types: complex as [re, im], arrays as nested lists in index order."""
    if isinstance(obj, dict):
        return {str(key): jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _number(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return [_number(float(obj.real)), _number(float(obj.imag))]
    if isinstance(obj, curvature.PsdDirection):
        return jsonable(obj.xi)
    if hasattr(obj, "as_dict"):
        return jsonable(obj.as_dict())
    if dataclasses.is_dataclass(obj):
        return jsonable(dataclasses.asdict(obj))
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, pathlib.PurePath):
        return str(obj)
    raise exceptions.JSONEncodeError(TypeError(type(obj)), f"Cannot serialize object of type '{type(obj).__name__}'")


def dumps(report: dict) -> str:
    """Sorted, two-space indented JSON text with a trailing newline."""
    try:
        return json.dumps(jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"
    except (TypeError, ValueError) as ex:
        raise exceptions.JSONEncodeError(ex, str(ex)) from None


def write_atomic(text: str, path: str):
    """Write to a temporary file next to the target, then rename over it."""
    target = pathlib.Path(path)
    temporary = None
    try:
        with tempfile.NamedTemporaryFile(
            "w", encoding="utf-8", dir=target.parent if str(target.parent) else ".",
            prefix=f".{target.name}.", suffix=".tmp", delete=False
        ) as handle:
            temporary = handle.name
            handle.write(text)
        os.replace(temporary, target)
    except OSError as ex:
        if temporary is not None:
            pathlib.Path(temporary).unlink(missing_ok=True)
        raise exceptions.FileIOError(str(ex)) from None


def flat_row(row: Dict[str, Any]) -> Dict[str, Any]:
    """Scalar-only row for tabular output: complex stays complex, containers become JSON text."""
    result = {}
    for key, value in row.items():
        if isinstance(value, (np.ndarray, list, tuple, dict, curvature.PsdDirection)):
            result[key] = json.dumps(jsonable(value), sort_keys=True)
        elif isinstance(value, np.generic):
            result[key] = value.item()
        else:
            result[key] = value
    return result
