"""Tuple file format shared by the CLI and the library.

A tuple file is a JSON object

    {"n": int, "d": int, "matrices": [M_1, ..., M_n]}

where each M_i is a d x d array of [re, im] pairs.  Readers reject
files whose matrix count or row shapes disagree with the declared
(n, d); writers emit exactly this shape.
"""

from __future__ import annotations

import json
from typing import IO

import numpy as np

from .core import RowContraction
from .errors import DimensionMismatch

__all__ = ["tuple_to_dict", "tuple_from_dict", "write_tuple", "read_tuple"]


def _matrix_to_pairs(m: np.ndarray) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _matrix_from_pairs(rows, d: int) -> np.ndarray:
    if len(rows) != d:
        raise DimensionMismatch(f"matrix has {len(rows)} rows, expected {d}")
    out = np.zeros((d, d), dtype=complex)
    for i, row in enumerate(rows):
        if len(row) != d:
            raise DimensionMismatch(f"row {i} has {len(row)} entries, expected {d}")
        for j, pair in enumerate(row):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise DimensionMismatch(f"entry ({i},{j}) is not a [re, im] pair")
            out[i, j] = complex(float(pair[0]), float(pair[1]))
    return out


def tuple_to_dict(t: RowContraction) -> dict:
    return {
        "n": t.n,
        "d": t.d,
        "matrices": [_matrix_to_pairs(a) for a in t.matrices],
    }


def tuple_from_dict(data: dict) -> RowContraction:
    try:
        n = int(data["n"])
        d = int(data["d"])
        matrices = data["matrices"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DimensionMismatch(f"malformed tuple object: {exc}") from exc
    if not isinstance(matrices, list) or len(matrices) != n:
        raise DimensionMismatch(
            f"expected exactly {n} matrices, got "
            f"{len(matrices) if isinstance(matrices, list) else type(matrices)}"
        )
    return RowContraction([_matrix_from_pairs(rows, d) for rows in matrices])


def write_tuple(t: RowContraction, fp: IO[str]) -> None:
    json.dump(tuple_to_dict(t), fp, indent=1)
    fp.write("\n")


def read_tuple(fp: IO[str]) -> RowContraction:
    return tuple_from_dict(json.load(fp))
