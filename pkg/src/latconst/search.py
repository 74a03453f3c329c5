"""Pair scans over nets and derivative-free local refinement.

The division of labor is fixed: certified lower/upper bounds come from the
net scan alone (net extremum -/+ Lipschitz * mesh), while refinement only
polishes the witness, improving the attainable side of the interval.  The
objectives are max-type norms (Lipschitz, not smooth), so refinement is a
projected coordinate search with step halving.  Single-coordinate moves can
stall at edges of polyhedral objectives, so every sweep also tries all
two-coordinate sign combinations across both arguments; the whole sweep is
evaluated in one vectorized batch.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable

import numpy as np

from .core import LatticeSpace

__all__ = ["scan_pairs", "refine_pair_on_sphere", "refine_vector_on_sphere"]

_EPS_IMPROVE = 1e-15
_MAX_SWEEPS = 3000


def scan_pairs(
    space: LatticeSpace,
    xs: np.ndarray,
    ys: np.ndarray,
    values: Callable[[np.ndarray, np.ndarray], np.ndarray],
    maximize: bool = False,
    top_k: int = 1,
) -> tuple[float, list[tuple[float, int, int]]]:
    """Extremum of ``values(X_block, Y)`` over all net pairs, plus top-k seeds.

    ``values`` maps a block of rows (b, n) and the full ``ys`` (m, n) to a
    (b, m) matrix.  Blocks are visited in row order and ties are broken by
    first occurrence, so with lexicographically sorted nets the reported
    witness pair is the lexicographically smallest optimizer.
    """
    m = ys.shape[0]
    sign = -1.0 if maximize else 1.0
    best = np.inf
    candidates: list[tuple[float, int, int]] = []
    block = max(1, min(256, int(5_000_000 // max(m, 1)) or 1))
    for i0 in range(0, xs.shape[0], block):
        vals = sign * np.asarray(values(xs[i0 : i0 + block], ys))
        flat = vals.ravel()
        k = min(top_k, flat.size)
        idx = np.argpartition(flat, k - 1)[:k] if k < flat.size else np.arange(flat.size)
        for j in idx:
            v = float(flat[j])
            candidates.append((v, i0 + int(j) // m, int(j) % m))
            if v < best:
                best = v
    candidates.sort()
    seen: set[tuple[int, int]] = set()
    top: list[tuple[float, int, int]] = []
    for v, i, j in candidates:
        if (i, j) not in seen:
            seen.add((i, j))
            top.append((sign * v, i, j))
        if len(top) >= top_k:
            break
    return sign * best, top


def _move_directions(
    dim: int, coords_x: list[int], coords_y: list[int] | None
) -> tuple[np.ndarray, np.ndarray]:
    """Unit move directions (DX, DY): all signed single-coordinate moves plus
    all signed two-coordinate combinations (within and across arguments)."""
    singles: list[tuple[int, int, float]] = []  # (side, coord, sign)
    for i in coords_x:
        singles.append((0, i, 1.0))
        singles.append((0, i, -1.0))
    if coords_y is not None:
        for i in coords_y:
            singles.append((1, i, 1.0))
            singles.append((1, i, -1.0))
    moves: list[list[tuple[int, int, float]]] = [[s] for s in singles]
    for a, b in combinations(singles, 2):
        if a[0] == b[0] and a[1] == b[1]:
            continue  # +/- of the same coordinate cancel
        moves.append([a, b])
    dx = np.zeros((len(moves), dim))
    dy = np.zeros((len(moves), dim))
    for k, mv in enumerate(moves):
        for side, coord, sgn in mv:
            (dx if side == 0 else dy)[k, coord] += sgn
    return dx, dy


def refine_pair_on_sphere(
    space: LatticeSpace,
    batch_values: Callable[[np.ndarray, np.ndarray], np.ndarray],
    x0: np.ndarray,
    y0: np.ndarray,
    positive: bool,
    step0: float,
    step_min: float = 1e-11,
    maximize: bool = False,
    support_x: tuple[int, ...] | None = None,
    support_y: tuple[int, ...] | None = None,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Projected coordinate search over (positive or full) unit-sphere pairs.

    ``batch_values(X, Y)`` maps row-aligned candidate pairs to their
    objective values.  ``support_*`` restricts the moving coordinates, which
    preserves zero patterns in disjoint-support problems.
    """
    sign = -1.0 if maximize else 1.0
    coords_x = list(support_x) if support_x is not None else list(range(space.dim))
    coords_y = list(support_y) if support_y is not None else list(range(space.dim))
    dx, dy = _move_directions(space.dim, coords_x, coords_y)
    x = x0.copy()
    y = y0.copy()
    fbest = sign * float(np.asarray(batch_values(x[None, :], y[None, :]))[0])
    step = float(step0)
    for _ in range(_MAX_SWEEPS):
        if step < step_min:
            break
        xc = x[None, :] + step * dx
        yc = y[None, :] + step * dy
        if positive:
            np.maximum(xc, 0.0, out=xc)
            np.maximum(yc, 0.0, out=yc)
        nx = space.norm_values(xc)
        ny = space.norm_values(yc)
        valid = (nx > 1e-12) & (ny > 1e-12)
        if not np.any(valid):
            step *= 0.5
            continue
        np.place(nx, ~valid, 1.0)
        np.place(ny, ~valid, 1.0)
        xu = xc / nx[:, None]
        yu = yc / ny[:, None]
        vals = sign * np.asarray(batch_values(xu, yu))
        vals[~valid] = np.inf
        k = int(np.argmin(vals))
        if vals[k] < fbest - _EPS_IMPROVE:
            fbest = float(vals[k])
            x = xu[k]
            y = yu[k]
        else:
            step *= 0.5
    return sign * fbest, x, y


def refine_vector_on_sphere(
    space: LatticeSpace,
    batch_values: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    positive: bool,
    step0: float,
    step_min: float = 1e-11,
    maximize: bool = False,
) -> tuple[float, np.ndarray]:
    """Single-vector variant of ``refine_pair_on_sphere``."""
    sign = -1.0 if maximize else 1.0
    dx, _ = _move_directions(space.dim, list(range(space.dim)), None)
    x = x0.copy()
    fbest = sign * float(np.asarray(batch_values(x[None, :]))[0])
    step = float(step0)
    for _ in range(_MAX_SWEEPS):
        if step < step_min:
            break
        xc = x[None, :] + step * dx
        if positive:
            np.maximum(xc, 0.0, out=xc)
        nx = space.norm_values(xc)
        valid = nx > 1e-12
        if not np.any(valid):
            step *= 0.5
            continue
        np.place(nx, ~valid, 1.0)
        xu = xc / nx[:, None]
        vals = sign * np.asarray(batch_values(xu))
        vals[~valid] = np.inf
        k = int(np.argmin(vals))
        if vals[k] < fbest - _EPS_IMPROVE:
            fbest = float(vals[k])
            x = xu[k]
        else:
            step *= 0.5
    return sign * fbest, x
