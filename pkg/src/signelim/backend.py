"""Array kernels for sign-vector tables and elimination scans.

Two interchangeable implementations of the hot scans are provided: loops
compiled with numba, and a vectorized pure-numpy fallback. Selection happens
once at import time through the ``SIGNELIM_BACKEND`` environment variable
("numba", "numpy", or the default "auto", which uses numba when it imports).
Both paths return bit-identical results; ``tests/test_kernels.py`` checks
parity and ``benchmarks/bench_kernels.py`` compares throughput.

Encoding: sign entries are int8 values -1, 0, +1. Total-sign rows may also
contain UNDETERMINED (2), the "u" entry that forbids any nonzero coordinate
in an eliminated vector.
"""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

ENV_BACKEND = "SIGNELIM_BACKEND"

#: int8 code for the undetermined total-sign entry, serialized as "u".
UNDETERMINED = 2

# The numpy fallback materializes (rows x n) temporaries per eliminator;
# chunking keeps peak memory bounded on large tables.
_NUMPY_CHUNK = 1 << 18


def _requested_backend() -> str:
    value = os.environ.get(ENV_BACKEND, "auto").strip().lower()
    if value not in ("auto", "numba", "numpy"):
        raise RuntimeError(
            f"{ENV_BACKEND} must be 'numba', 'numpy', or 'auto', got {value!r}"
        )
    return value


_requested = _requested_backend()
if _requested in ("auto", "numba"):
    try:
        from numba import njit
    except ImportError:
        if _requested == "numba":
            raise
        njit = None
else:
    njit = None

USING_NUMBA = njit is not None


def backend_name() -> str:
    """Name of the active scan implementation: "numba" or "numpy"."""
    return "numba" if USING_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# table generation (shared by both backends; plain numpy, allocation-exact)
# ---------------------------------------------------------------------------


def _build_table(n: int) -> np.ndarray:
    """All canonical sign vectors of length n as an int8 array, fixed order.

    A vector is canonical when it is nonzero and its first nonzero entry is
    +1. Rows are ordered entrywise by 0 < +1 < -1 with the leading coordinate
    most significant, which is the base-3 counting order under the digit map
    0 -> 0, 1 -> +1, 2 -> -1 restricted to first-nonzero-digit-one numbers.
    The block of vectors whose first nonzero sits at position p is contiguous,
    so the table is assembled block-wise without filtering a 3**n buffer.
    """
    blocks = []
    for p in range(n - 1, -1, -1):
        width = n - p - 1
        count = 3**width
        block = np.zeros((count, n), dtype=np.int8)
        block[:, p] = 1
        if width:
            suffix = np.arange(count)
            for q in range(width):
                digits = (suffix // 3 ** (width - 1 - q)) % 3
                block[:, p + 1 + q] = np.where(digits == 2, -1, digits).astype(
                    np.int8
                )
        blocks.append(block)
    return np.concatenate(blocks, axis=0)


@lru_cache(maxsize=16)
def _cached_table(n: int) -> np.ndarray:
    table = _build_table(n)
    table.setflags(write=False)
    return table


def sign_vector_table(n: int) -> np.ndarray:
    """Canonical sign vectors of length n, shape ((3**n - 1) // 2, n), int8.

    Cached (read-only view) for small n; built fresh above n = 12 so huge
    tables are not pinned in memory.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n <= 12:
        return _cached_table(n)
    return _build_table(n)


# ---------------------------------------------------------------------------
# elimination scans
# ---------------------------------------------------------------------------
#
# Row s of `table` is eliminated by eliminator row t when:
#   * no index has t == u and s != 0,
#   * among indices with t in {-1, +1} and s != 0, the products t*s are all
#     +1 or all -1, and at least one such index exists.


def _scan_any(table, elim, out):  # pragma: no cover - compiled or shadowed
    rows, n = table.shape
    m = elim.shape[0]
    for r in range(rows):
        hit = False
        for e in range(m):
            pos = False
            neg = False
            ok = True
            for i in range(n):
                t = elim[e, i]
                s = table[r, i]
                if t == 2:
                    if s != 0:
                        ok = False
                        break
                elif t != 0 and s != 0:
                    if t == s:
                        pos = True
                    else:
                        neg = True
            if ok and (pos != neg):
                hit = True
                break
        out[r] = hit


def _scan_all(table, elim, out):  # pragma: no cover - compiled or shadowed
    rows, n = table.shape
    m = elim.shape[0]
    for r in range(rows):
        hit = True
        for e in range(m):
            pos = False
            neg = False
            ok = True
            for i in range(n):
                t = elim[e, i]
                s = table[r, i]
                if t == 2:
                    if s != 0:
                        ok = False
                        break
                elif t != 0 and s != 0:
                    if t == s:
                        pos = True
                    else:
                        neg = True
            if not (ok and (pos != neg)):
                hit = False
                break
        out[r] = hit


if USING_NUMBA:
    _scan_any_numba = njit(cache=True)(_scan_any)
    _scan_all_numba = njit(cache=True)(_scan_all)
else:
    _scan_any_numba = None
    _scan_all_numba = None


def _single_mask_numpy(table: np.ndarray, row: np.ndarray) -> np.ndarray:
    undet_bad = ((row == UNDETERMINED) & (table != 0)).any(axis=1)
    shared = (row != 0) & (row != UNDETERMINED) & (table != 0)
    prod = table * row
    pos = (shared & (prod > 0)).any(axis=1)
    neg = (shared & (prod < 0)).any(axis=1)
    return ~undet_bad & (pos ^ neg)


def eliminated_any_numpy(table: np.ndarray, elim: np.ndarray) -> np.ndarray:
    out = np.zeros(table.shape[0], dtype=bool)
    for start in range(0, table.shape[0], _NUMPY_CHUNK):
        chunk = table[start : start + _NUMPY_CHUNK]
        acc = np.zeros(chunk.shape[0], dtype=bool)
        for row in elim:
            acc |= _single_mask_numpy(chunk, row)
        out[start : start + _NUMPY_CHUNK] = acc
    return out


def eliminated_all_numpy(table: np.ndarray, elim: np.ndarray) -> np.ndarray:
    out = np.zeros(table.shape[0], dtype=bool)
    for start in range(0, table.shape[0], _NUMPY_CHUNK):
        chunk = table[start : start + _NUMPY_CHUNK]
        acc = np.ones(chunk.shape[0], dtype=bool)
        for row in elim:
            acc &= _single_mask_numpy(chunk, row)
        out[start : start + _NUMPY_CHUNK] = acc
    return out


def eliminated_any_numba(table: np.ndarray, elim: np.ndarray) -> np.ndarray:
    if _scan_any_numba is None:
        raise RuntimeError("numba backend is not available")
    out = np.empty(table.shape[0], dtype=np.bool_)
    _scan_any_numba(table, elim, out)
    return out


def eliminated_all_numba(table: np.ndarray, elim: np.ndarray) -> np.ndarray:
    if _scan_all_numba is None:
        raise RuntimeError("numba backend is not available")
    out = np.empty(table.shape[0], dtype=np.bool_)
    _scan_all_numba(table, elim, out)
    return out


def eliminated_any_mask(table: np.ndarray, elim: np.ndarray) -> np.ndarray:
    """Mask over table rows eliminated by at least one eliminator row."""
    if elim.shape[0] == 0:
        return np.zeros(table.shape[0], dtype=bool)
    if USING_NUMBA:
        return eliminated_any_numba(table, elim)
    return eliminated_any_numpy(table, elim)


def eliminated_all_mask(table: np.ndarray, elim: np.ndarray) -> np.ndarray:
    """Mask over table rows eliminated by every eliminator row."""
    if elim.shape[0] == 0:
        raise ValueError("eliminator matrix must have at least one row")
    if USING_NUMBA:
        return eliminated_all_numba(table, elim)
    return eliminated_all_numpy(table, elim)
