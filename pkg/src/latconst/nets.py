"""Certified nets on positive and full unit spheres of a lattice norm.

Mesh certificate.  Write b_i = ||e_i|| and F = (sum_i b_i) / (min_i b_i).
Every unit vector u >= 0 equals v / ||v|| for v = u / max_i u_i, a point of
the cube [0, 1]^n with some coordinate equal to 1.  Round each coordinate of
v to the nearest value of the grid G = {0, h, 2h, ...} u {1}; the rounded
point g keeps the unit coordinate, moves by at most h/2 per coordinate, and
therefore by at most (h/2) sum_i b_i in norm, while ||v|| >= min_i b_i.
Renormalizing g to the sphere at most doubles the relative error:

    || v/||v|| - g/||g|| ||  <=  2 ||v - g|| / ||v||  <=  h * F.

Hence the normalized points of the cube's "top faces" {max_i g_i = 1} form a
net of S+ with certified mesh h * F.  The same bound covers the full sphere
orthant by orthant because lattice norms ignore coordinate signs.  The
full-grid variant (all nonzero grid points, deduplicated by ray) contains
the face net and carries the same certificate.

Dimension 1 is exact: S+ is the single point e_1 / b_1 and the mesh is 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import BudgetExceededError, LatticeSpace, UnsupportedDimensionError

__all__ = [
    "SphereNet",
    "DEFAULT_POINT_CAP",
    "DEFAULT_PAIR_BUDGET",
    "default_resolution",
    "grid_values",
    "positive_sphere_net",
    "positive_face_net",
    "half_sphere_net",
    "box_grid",
    "support_pairs",
    "face_point_count",
    "fit_face_resolution",
    "fit_half_sphere_resolution",
    "fit_box_pair_resolution",
]

DEFAULT_POINT_CAP = 2_000_000
DEFAULT_PAIR_BUDGET = 10_000_000

MAX_SUPPORT_DIM = 12


@dataclass(frozen=True, eq=False)
class SphereNet:
    """A finite set of unit vectors together with its covering certificate.

    Every point of the covered sphere region lies within ``mesh_norm`` (in
    the space's own norm) of some row of ``points``.
    """

    points: np.ndarray
    mesh_norm: float
    resolution: float
    kind: str

    def __len__(self) -> int:
        return self.points.shape[0]


def default_resolution(dim: int) -> float:
    """Default coordinate grid step by dimension."""
    if dim <= 3:
        return 0.02
    if dim <= 6:
        return 0.1
    return 0.25


def grid_values(resolution: float) -> np.ndarray:
    """The grid {0, h, 2h, ...} u {1} on [0, 1]."""
    h = float(resolution)
    if not (0.0 < h <= 1.0):
        raise ValueError(f"resolution must lie in (0, 1], got {h}")
    k = int(np.floor(1.0 / h + 1e-12))
    vals = np.arange(k + 1) * h
    if vals[-1] < 1.0 - 1e-12:
        vals = np.append(vals, 1.0)
    else:
        vals[-1] = 1.0
    return vals


def _cube_grid(dim: int, resolution: float, max_points: int) -> np.ndarray:
    g = grid_values(resolution)
    total = len(g) ** dim
    if total > max_points:
        need = _coarsest_fitting(lambda n: (n + 1) ** dim, max_points)
        raise BudgetExceededError(
            f"grid {len(g)}^{dim} = {total} points exceeds the cap {max_points}; "
            f"use resolution >= {1.0 / need if need else 1.0:.6g}",
            required_resolution=1.0 / need if need else 1.0,
        )
    pts = np.stack(np.meshgrid(*([g] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    return pts


def _coarsest_fitting(count_of_n, cap: int) -> int | None:
    # largest N with count_of_n(N) <= cap, scanning down from a generous start
    for n in range(512, 0, -1):
        if count_of_n(n) <= cap:
            return n
    return None


def positive_sphere_net(
    space: LatticeSpace, resolution: float, max_points: int = DEFAULT_POINT_CAP
) -> SphereNet:
    """Net of S+ from all nonzero grid points of [0,1]^n, deduplicated by ray.

    Exceeding ``max_points`` raises ``BudgetExceededError`` with the coarsest
    resolution that fits; the grid is never silently truncated.
    """
    if space.dim == 1:
        pts = np.array([[1.0]]) / space.basis_norms[0]
        return SphereNet(pts, 0.0, float(resolution), "positive")
    pts = _cube_grid(space.dim, resolution, max_points)
    pts = pts[np.max(pts, axis=1) > 0.0]
    reps = pts / np.max(pts, axis=1, keepdims=True)
    reps = np.unique(np.round(reps, 9), axis=0)
    units = reps / space.norm_values(reps)[:, None]
    units.setflags(write=False)
    mesh = float(resolution) * space.mesh_factor
    return SphereNet(units, mesh, float(resolution), "positive")


def positive_face_net(
    space: LatticeSpace, resolution: float, max_points: int = DEFAULT_POINT_CAP
) -> SphereNet:
    """Net of S+ from the grid points with max coordinate exactly 1.

    A subset of ``positive_sphere_net`` carrying the identical mesh
    certificate (the covering argument only ever rounds points of the top
    faces), at ~n/(grid size) of the cost; the optimizers use this one.
    """
    if space.dim == 1:
        pts = np.array([[1.0]]) / space.basis_norms[0]
        return SphereNet(pts, 0.0, float(resolution), "positive-faces")
    pts = _cube_grid(space.dim, resolution, max_points)
    pts = pts[np.max(pts, axis=1) == 1.0]
    units = pts / space.norm_values(pts)[:, None]
    units = np.unique(units, axis=0)
    units.setflags(write=False)
    mesh = float(resolution) * space.mesh_factor
    return SphereNet(units, mesh, float(resolution), "positive-faces")


def half_sphere_net(
    space: LatticeSpace, resolution: float, max_points: int = DEFAULT_POINT_CAP
) -> SphereNet:
    """Net of half the unit sphere: sign orbits of the face net, first nonzero > 0.

    Objectives built from ||x - y|| and ||x + y|| are invariant under
    x -> -x and y -> -y separately, so optimizing over half-sphere pairs
    covers the full sphere at a quarter of the pair count.
    """
    if space.dim == 1:
        pts = np.array([[1.0]]) / space.basis_norms[0]
        return SphereNet(pts, 0.0, float(resolution), "half-sphere")
    base = positive_face_net(space, resolution, max_points=max_points).points
    n = space.dim
    total = base.shape[0] * 2 ** n
    if total > max_points:
        need = _coarsest_fitting(
            lambda m: ((m + 1) ** n - m**n) * 2 ** n, max_points
        )
        raise BudgetExceededError(
            f"signed net would have {total} points, exceeding the cap {max_points}; "
            f"use resolution >= {1.0 / need if need else 1.0:.6g}",
            required_resolution=1.0 / need if need else 1.0,
        )
    signed = []
    for signs in itertools.product((1.0, -1.0), repeat=n):
        signed.append(base * np.array(signs))
    allpts = np.vstack(signed)
    # canonical representative of {v, -v}: first nonzero coordinate positive
    firstnz = allpts[np.arange(len(allpts)), np.argmax(allpts != 0.0, axis=1)]
    allpts = np.where(firstnz[:, None] < 0.0, -allpts, allpts)
    units = np.unique(allpts, axis=0)
    units.setflags(write=False)
    mesh = float(resolution) * space.mesh_factor
    return SphereNet(units, mesh, float(resolution), "half-sphere")


def box_grid(dim: int, resolution: float, max_points: int = DEFAULT_POINT_CAP) -> np.ndarray:
    """Full grid of [0,1]^dim (multipliers t for points 0 <= y = t*x <= x)."""
    return _cube_grid(dim, resolution, max_points)


def support_pairs(dim: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All ordered pairs (A, B) of disjoint nonempty coordinate supports.

    In the coordinatewise order x ^ y = 0 iff the supports are disjoint, so
    disjointness constraints reduce to this exact enumeration
    (3^n - 2*2^n + 1 ordered pairs).  Capped at dim <= 12.
    """
    if dim < 2:
        raise UnsupportedDimensionError("disjoint supports need dimension >= 2")
    if dim > MAX_SUPPORT_DIM:
        raise UnsupportedDimensionError(
            f"support-pair enumeration is capped at dimension {MAX_SUPPORT_DIM}, got {dim}"
        )
    coords = range(dim)
    out: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for labels in itertools.product((0, 1, 2), repeat=dim):
        a = tuple(i for i in coords if labels[i] == 1)
        b = tuple(i for i in coords if labels[i] == 2)
        if a and b:
            out.append((a, b))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# budget-aware resolution selection
# ---------------------------------------------------------------------------


def face_point_count(dim: int, n_steps: int) -> int:
    """Points of the step-1/n face grid: (n+1)^dim - n^dim."""
    return (n_steps + 1) ** dim - n_steps**dim


def fit_face_resolution(dim: int, pair_budget: int) -> float:
    """Finest step h = 1/N, no finer than the dimension default, with
    face(N)^2 <= pair_budget (pair optimization over S+ x S+)."""
    n0 = int(round(1.0 / default_resolution(dim)))
    for n in range(n0, 0, -1):
        if face_point_count(dim, n) ** 2 <= pair_budget:
            return 1.0 / n
    return 1.0


def fit_half_sphere_resolution(dim: int, pair_budget: int) -> float:
    """Like ``fit_face_resolution`` for half-sphere pairs (2^(dim-1) orbits)."""
    n0 = int(round(1.0 / default_resolution(dim)))
    orbit = 2 ** (dim - 1)
    for n in range(n0, 0, -1):
        if (orbit * face_point_count(dim, n)) ** 2 <= pair_budget:
            return 1.0 / n
    return 1.0


def fit_box_pair_resolution(dim: int, pair_budget: int) -> float:
    """Finest h = 1/N with face(N) * (N+1)^dim <= pair_budget (sphere x box)."""
    n0 = int(round(1.0 / default_resolution(dim)))
    for n in range(n0, 0, -1):
        if face_point_count(dim, n) * (n + 1) ** dim <= pair_budget:
            return 1.0 / n
    return 1.0
