"""Dense pivot primitives, numpy implementation.

This module mirrors the compiled extension ``_pivot_cy`` operation for
operation; :mod:`robustkit.kernel.backend` picks whichever is available at
import time.  The simplex driver only ever talks to these five functions,
so the two backends stay interchangeable.

Array convention: the constraint matrix is stored transposed (``AT`` has
one contiguous row per column of the LP) so both pricing and column
extraction touch contiguous memory.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def price(AT: np.ndarray, y: np.ndarray, c: np.ndarray, out: np.ndarray) -> np.ndarray:
    """Reduced costs ``out = c - A^T y`` for every column at once."""
    np.dot(AT, y, out=out)
    np.subtract(c, out, out=out)
    return out


def ftran(Binv: np.ndarray, col: np.ndarray, out: np.ndarray) -> np.ndarray:
    """Forward transformation ``out = Binv @ col``."""
    np.dot(Binv, col, out=out)
    return out


def btran(Binv: np.ndarray, cB: np.ndarray, out: np.ndarray) -> np.ndarray:
    """Backward transformation ``out = cB @ Binv`` (row-vector product)."""
    np.dot(cB, Binv, out=out)
    return out


def update_inverse(Binv: np.ndarray, w: np.ndarray, r: int) -> None:
    """Product-form update of the explicit basis inverse after a pivot.

    ``w`` is the ftran'd entering column; row ``r`` leaves the basis.
    """
    piv = w[r]
    Binv[r, :] /= piv
    pivot_row = Binv[r, :].copy()
    scale = w.copy()
    scale[r] = 0.0
    Binv -= np.outer(scale, pivot_row)
    Binv[r, :] = pivot_row


def ratio_test(
    xB: np.ndarray,
    lB: np.ndarray,
    uB: np.ndarray,
    w: np.ndarray,
    dirsign: float,
    cap: float,
    piv_tol: float,
) -> tuple[float, int, int]:
    """Smallest blocking step along the entering edge.

    Returns ``(step, pos, kind)`` where ``kind`` is 0 for a bound flip of
    the entering variable (``pos == -1``), 1 when basic ``pos`` leaves at
    its lower bound and 2 when it leaves at its upper bound.  Ties resolve
    to the smallest basis position; a flip wins over an equal row limit.
    """
    m = xB.shape[0]
    if m == 0:
        return (cap, -1, 0)
    eff = dirsign * w
    limits = np.full(m, np.inf)
    dec = eff > piv_tol
    inc = eff < -piv_tol
    if dec.any():
        limits[dec] = (xB[dec] - lB[dec]) / eff[dec]
    if inc.any():
        limits[inc] = (uB[inc] - xB[inc]) / (-eff[inc])
    np.maximum(limits, 0.0, out=limits)
    pos = int(np.argmin(limits))
    best = float(limits[pos])
    if cap <= best:
        return (cap, -1, 0)
    kind = 1 if eff[pos] > 0.0 else 2
    return (best, pos, kind)
