"""Catalog of built-in lattice norms used by the verification suite."""

from __future__ import annotations

import math

import numpy as np

from .core import FormMax, LatticeSpace, MaxOf, Scale, WeightedP, lp

__all__ = [
    "lp_space",
    "linf_space",
    "beta_gap_space",
    "max_linf_l1_space",
    "max_l2_linf_space",
    "random_polyhedral2_space",
    "builtin_space",
    "BUILTIN_NAMES",
]


def lp_space(dim: int, p, weights=None) -> LatticeSpace:
    """l_p on R^dim, optionally with positive coordinate weights."""
    expr = lp(dim, p) if weights is None else WeightedP(p, weights)
    return LatticeSpace(dim, expr)


def linf_space(dim: int) -> LatticeSpace:
    return lp_space(dim, math.inf)


def beta_gap_space() -> LatticeSpace:
    """3-D polyhedral norm whose disjoint-pair infimum (15/11) strictly
    exceeds its positive-pair infimum (<= 4/3): the max of four forms

        (|x| + |z|/2) v (|y| + |z|/2) v (2|x|/3 + 2|y|/3 + |z|/3) v 5(|x|+|y|)/6.
    """
    rows = [
        [1.0, 0.0, 0.5],
        [0.0, 1.0, 0.5],
        [2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0],
        [5.0 / 6.0, 5.0 / 6.0, 0.0],
    ]
    return LatticeSpace(3, FormMax(rows))


def max_linf_l1_space() -> LatticeSpace:
    """2-D norm max{ ||.||_inf, ||.||_1 / sqrt(2) }: non-Euclidean with the
    full-sphere infimum constant equal to sqrt(2)."""
    expr = MaxOf([lp(2, math.inf), Scale(1.0 / math.sqrt(2.0), lp(2, 1))])
    return LatticeSpace(2, expr)


def max_l2_linf_space(a: float) -> LatticeSpace:
    """2-D norm max{ ||.||_2, a ||.||_inf } for 1 <= a < sqrt(2); its
    positive-pair and disjoint-pair infima both equal sqrt(2)/a."""
    if not (1.0 <= a < math.sqrt(2.0)):
        raise ValueError(f"parameter a must lie in [1, sqrt(2)), got {a}")
    expr = MaxOf([lp(2, 2), Scale(a, lp(2, math.inf))])
    return LatticeSpace(2, expr)


def random_polyhedral2_space(rng: np.random.Generator, n_rows: int = 3) -> LatticeSpace:
    """Random 2-D FormMax norm normalized so that ||e_1|| = ||e_2|| = 1."""
    while True:
        rows = rng.uniform(0.05, 1.0, size=(n_rows, 2))
        col_max = rows.max(axis=0)
        if np.all(col_max > 0):
            rows = rows / col_max  # basis norms become exactly 1
            return LatticeSpace(2, FormMax(rows))


def _builtins() -> dict:
    reg: dict = {}
    for p, tag in ((1, "1"), (1.5, "15"), (2, "2"), (3, "3")):
        for n in (2, 3):
            reg[f"l{tag}_{n}"] = lambda n=n, p=p: lp_space(n, p)
    for n in (2, 3):
        reg[f"linf_{n}"] = lambda n=n: linf_space(n)
    reg["beta_gap"] = beta_gap_space
    reg["max_linf_l1"] = max_linf_l1_space
    for a in (1.0, 1.2, 1.4):
        reg[f"max_l2_linf_{a}"] = lambda a=a: max_l2_linf_space(a)
    return reg


_REGISTRY = _builtins()
BUILTIN_NAMES = sorted(_REGISTRY)


def builtin_space(name: str) -> LatticeSpace:
    """Construct a catalog space by name (see ``BUILTIN_NAMES``)."""
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise KeyError(f"unknown builtin space {name!r}; known: {BUILTIN_NAMES}") from None
