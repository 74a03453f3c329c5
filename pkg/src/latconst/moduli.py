"""Monotonicity moduli of a lattice norm and the identities that tie them
to the positive-pair sphere constant.

sigma(eps) = inf{ ||x + eps*y|| - 1 : x, y in S+ }
delta(eps) = inf{ 1 - ||x - y||  : 0 <= y <= x, ||x|| <= 1, ||y|| >= eps }

For delta the feasible set is reparametrized: scaling x up to the sphere
only increases ||x - y|| for 0 <= y <= x (monotonicity), so x ranges over
S+, and the order interval {y : 0 <= y <= x} is exactly the box
{t * x : t in [0,1]^n} in the coordinatewise order.  The net stage scans
sphere-net x against a box grid of multipliers t; the lower certificate
relaxes the norm constraint by the combined mesh, because a feasible point
of the true problem may round to a net point that just misses it:

    lower = (net min over ||t*x|| >= eps - relax) - relax,
    relax = mesh_x + mesh_t.

sigma is 1-Lipschitz in x and eps-Lipschitz in y, so its certificate slack
is (1 + eps) * mesh.  Both moduli take values in [0, 1] and certificates
are clamped to that range.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .constants import ConstantEstimate, lambda_plus
from .core import LatticeSpace
from .nets import (
    DEFAULT_POINT_CAP,
    box_grid,
    default_resolution,
    face_point_count,
    fit_face_resolution,
    grid_values,
    positive_face_net,
)
from .core import BudgetExceededError
from .search import refine_pair_on_sphere, scan_pairs

__all__ = [
    "DEFAULT_MODULI_BUDGET",
    "ModulusCurve",
    "Characteristic",
    "CheckResult",
    "IdentityReport",
    "BridgeReport",
    "sigma",
    "delta_m",
    "sigma_curve",
    "delta_curve",
    "characteristic",
    "identity_battery",
    "sigma_lambda_bridge",
]

# Moduli are evaluated at many grid points per report, so their default
# per-point pair budget is leaner than the constants'; certificates simply
# reflect the coarser net.
DEFAULT_MODULI_BUDGET = 2_000_000

_STEP_MIN = 1e-11
_FEAS_TOL = 1e-15
_TOP_K = 4


@dataclass
class ModulusCurve:
    """Modulus estimates over an increasing eps grid."""

    which: str  # "sigma" | "delta"
    eps_grid: list[float]
    values: list[ConstantEstimate]

    def rows(self) -> list[tuple[float, float, float, float]]:
        return [
            (e, v.lower, v.estimate, v.upper)
            for e, v in zip(self.eps_grid, self.values)
        ]

    def to_dict(self) -> dict:
        return {
            "which": self.which,
            "eps_grid": self.eps_grid,
            "values": [v.to_dict() for v in self.values],
        }


@dataclass
class Characteristic:
    """Largest eps in [0, 1) at which the (monotone) modulus stays below
    the zero threshold, located by bisection on refined estimates."""

    which: str  # "delta" -> eps_0m, "sigma" -> tilde eps_0m
    value: float
    threshold: float
    eps_resolution: float

    def to_dict(self) -> dict:
        return {
            "which": self.which,
            "value": self.value,
            "threshold": self.threshold,
            "eps_resolution": self.eps_resolution,
        }


@dataclass
class CheckResult:
    """One named verification outcome with its measured numbers."""

    name: str
    passed: bool
    informational: bool = False
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "informational": self.informational,
            "details": self.details,
        }


@dataclass
class IdentityReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


@dataclass
class BridgeReport:
    """sigma(1) + 1 and the positive-pair constant are the same infimum;
    this report compares the two independently run optimizations."""

    sigma_one: ConstantEstimate
    lam_plus: ConstantEstimate
    difference: float
    combined_slack: float
    consistent: bool

    def to_dict(self) -> dict:
        return {
            "sigma_one": self.sigma_one.to_dict(),
            "lambda_plus": self.lam_plus.to_dict(),
            "difference": self.difference,
            "combined_slack": self.combined_slack,
            "consistent": self.consistent,
        }


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not (0.0 <= eps <= 1.0):
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    return eps


def _exact_zero(kind: str, space: LatticeSpace, witnesses) -> ConstantEstimate:
    return ConstantEstimate(kind, 0.0, 0.0, 0.0, witnesses, 0.0, {"resolution": None})


def sigma(
    space: LatticeSpace,
    eps: float,
    resolution: float | None = None,
    pair_budget: int = DEFAULT_MODULI_BUDGET,
    max_points: int = DEFAULT_POINT_CAP,
) -> ConstantEstimate:
    """Upper modulus of monotonicity at eps, with certificate slack (1+eps)*mesh."""
    eps = _check_eps(eps)
    e1 = np.zeros(space.dim)
    e1[0] = 1.0 / space.basis_norms[0]
    if eps == 0.0:
        # ||x + 0*y|| - 1 = 0 on the sphere, exactly
        return _exact_zero("sigma", space, (e1, e1))
    if resolution is None:
        resolution = fit_face_resolution(space.dim, pair_budget)
    else:
        cnt = face_point_count(space.dim, len(grid_values(resolution)) - 1)
        if cnt * cnt > pair_budget:
            need = fit_face_resolution(space.dim, pair_budget)
            raise BudgetExceededError(
                f"sigma: resolution {resolution} exceeds pair budget {pair_budget}; "
                f"use resolution >= {need:.6g}",
                required_resolution=need,
            )
    net = positive_face_net(space, resolution, max_points=max_points)
    pts = net.points

    def values(xb: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return space.norm_values(xb[:, None, :] + eps * ys[None, :, :]) - 1.0

    net_min, seeds = scan_pairs(space, pts, pts, values, top_k=_TOP_K)
    objective = lambda X, Y: space.norm_values(X + eps * Y) - 1.0
    best = math.inf
    wx = wy = None
    for _, i, j in seeds:
        val, rx, ry = refine_pair_on_sphere(
            space, objective, pts[i], pts[j], positive=True,
            step0=2 * resolution, step_min=_STEP_MIN,
        )
        if val < best:
            best, wx, wy = val, rx, ry
    est = max(0.0, min(best, net_min))
    slack = (1.0 + eps) * net.mesh_norm
    lower = min(max(0.0, net_min - slack), est)
    info = {"eps": eps, "resolution": resolution, "net_points": len(net),
            "pairs_scanned": len(net) ** 2}
    return ConstantEstimate("sigma", lower, est, est, (wx, wy), net.mesh_norm, info)


# ---------------------------------------------------------------------------
# delta
# ---------------------------------------------------------------------------


def _fit_delta_resolution(dim: int, pair_budget: int) -> float:
    n0 = int(round(1.0 / default_resolution(dim)))
    for n in range(n0, 0, -1):
        if face_point_count(dim, n) * (n + 1) ** dim <= pair_budget:
            return 1.0 / n
    return 1.0


def _repair_multiplier(space: LatticeSpace, x: np.ndarray, t: np.ndarray, eps: float):
    """Move t to the cheapest feasible multiplier on the ray: scale down onto
    the constraint surface ||t*x|| = eps (always beneficial: shrinking y
    grows x - y coordinatewise), or scale up and clamp when infeasible."""
    nv = float(space.norm_values(t * x))
    if nv >= eps > 0.0:
        return t * (eps / nv)
    if eps == 0.0:
        return np.zeros_like(t)
    if nv < _FEAS_TOL:
        return None
    t2 = np.minimum(t * (eps / nv), 1.0)
    if float(space.norm_values(t2 * x)) >= eps - _FEAS_TOL:
        return t2
    return None


def _refine_delta(
    space: LatticeSpace,
    eps: float,
    x0: np.ndarray,
    t0: np.ndarray,
    step0: float,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Batched coordinate search over (x on S+, t in the box), keeping the
    constraint active: every candidate multiplier is rescaled onto
    ||t * x|| = eps, which never hurts the objective (shrinking y grows
    x - y coordinatewise)."""
    from .search import _move_directions

    dx, dt = _move_directions(space.dim, list(range(space.dim)), list(range(space.dim)))
    x = x0.copy()
    t = _repair_multiplier(space, x, t0.copy(), eps)
    assert t is not None, "refinement must start from a feasible point"
    fbest = 1.0 - float(space.norm_values((1.0 - t) * x))
    step = float(step0)
    for _ in range(3000):
        if step < _STEP_MIN:
            break
        xc = np.maximum(x[None, :] + step * dx, 0.0)
        tc = np.clip(t[None, :] + step * dt, 0.0, 1.0)
        nx = space.norm_values(xc)
        valid = nx > 1e-12
        np.place(nx, ~valid, 1.0)
        xu = xc / nx[:, None]
        nv = space.norm_values(tc * xu)
        # rescale onto the constraint surface; clamping can break feasibility
        # only when scaling up, so recheck
        scale = np.where(nv > _FEAS_TOL, eps / np.maximum(nv, _FEAS_TOL), 0.0)
        tr = np.minimum(tc * scale[:, None], 1.0)
        feas = valid & (space.norm_values(tr * xu) >= eps - _FEAS_TOL) & (nv > _FEAS_TOL)
        vals = 1.0 - space.norm_values((1.0 - tr) * xu)
        vals[~feas] = np.inf
        k = int(np.argmin(vals))
        if vals[k] < fbest - 1e-15:
            fbest = float(vals[k])
            x = xu[k]
            t = tr[k]
        else:
            step *= 0.5
    # the search tolerates ~1e-12 constraint slack, which (through square-root
    # geometry) can admit points ~1e-6 outside the true feasible set; push the
    # final multiplier back to strict feasibility along the segment toward 1
    if float(space.norm_values(t * x)) < eps - 1e-14:
        lo, hi = 0.0, 1.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if float(space.norm_values((t + mid * (1.0 - t)) * x)) >= eps - 1e-14:
                hi = mid
            else:
                lo = mid
        t = t + hi * (1.0 - t)
        fbest = 1.0 - float(space.norm_values((1.0 - t) * x))
    return fbest, x, t


def delta_m(
    space: LatticeSpace,
    eps: float,
    resolution: float | None = None,
    pair_budget: int = DEFAULT_MODULI_BUDGET,
    max_points: int = DEFAULT_POINT_CAP,
) -> ConstantEstimate:
    """Lower modulus of uniform monotonicity at eps (see module docs)."""
    eps = _check_eps(eps)
    e1 = np.zeros(space.dim)
    e1[0] = 1.0 / space.basis_norms[0]
    if eps == 0.0:
        # y = 0 is feasible and gives 1 - ||x|| = 0, exactly
        return _exact_zero("delta", space, (e1, np.zeros(space.dim)))
    if resolution is None:
        resolution = _fit_delta_resolution(space.dim, pair_budget)
    else:
        n = len(grid_values(resolution)) - 1
        if face_point_count(space.dim, n) * (n + 1) ** space.dim > pair_budget:
            need = _fit_delta_resolution(space.dim, pair_budget)
            raise BudgetExceededError(
                f"delta: resolution {resolution} exceeds pair budget {pair_budget}; "
                f"use resolution >= {need:.6g}",
                required_resolution=need,
            )
    net = positive_face_net(space, resolution, max_points=max_points)
    tgrid = box_grid(space.dim, resolution, max_points=max_points)
    mesh_t = 0.5 * float(resolution)
    relax = net.mesh_norm + mesh_t

    pts = net.points
    m = tgrid.shape[0]
    relaxed_min = math.inf
    strict_candidates: list[tuple[float, int, int]] = []
    strict_min = math.inf
    block = max(1, int(2_000_000 // max(m, 1)) or 1)
    one_minus_t = 1.0 - tgrid
    for i0 in range(0, pts.shape[0], block):
        xb = pts[i0 : i0 + block]
        ynorm = space.norm_values(xb[:, None, :] * tgrid[None, :, :])
        obj = 1.0 - space.norm_values(xb[:, None, :] * one_minus_t[None, :, :])
        rel = obj[ynorm >= eps - relax]
        if rel.size:
            relaxed_min = min(relaxed_min, float(np.min(rel)))
        feas = ynorm >= eps - _FEAS_TOL
        if np.any(feas):
            masked = np.where(feas, obj, np.inf)
            flat = masked.ravel()
            k = min(_TOP_K, flat.size)
            idx = np.argpartition(flat, k - 1)[:k]
            for j in idx:
                v = float(flat[j])
                if math.isfinite(v):
                    strict_candidates.append((v, i0 + int(j) // m, int(j) % m))
                    strict_min = min(strict_min, v)
    strict_candidates.sort()
    seeds: list[tuple[float, np.ndarray, np.ndarray]] = [
        (v, pts[i], tgrid[j]) for v, i, j in strict_candidates[:_TOP_K]
    ]
    # component seeds: the extreme points of the order interval [0, x] are the
    # coordinate sections of x, so also try y = (section of x) rescaled onto
    # the constraint surface, for every support pattern
    for labels in itertools.product((0.0, 1.0), repeat=space.dim):
        mask = np.asarray(labels)
        if not mask.any():
            continue
        sec_norm = space.norm_values(pts * mask[None, :])
        ok = sec_norm >= eps
        if not np.any(ok):
            continue
        scale = eps / sec_norm[ok]
        ys = pts[ok] * mask[None, :] * scale[:, None]
        vals = 1.0 - space.norm_values(pts[ok] - ys)
        k = int(np.argmin(vals))
        xk = pts[ok][k]
        strict_min = min(strict_min, float(vals[k]))
        seeds.append((float(vals[k]), xk, mask * scale[k]))
    seeds.sort(key=lambda s: s[0])
    best = math.inf
    wx = wt = None
    for v, x_seed, t_seed in seeds[: 2 * _TOP_K]:
        val, rx, rt = _refine_delta(space, eps, x_seed, t_seed, step0=2 * resolution)
        if val < best:
            best, wx, wt = val, rx, rt
    # only refined witnesses count: raw net candidates may sit a hair outside
    # the feasible set (the scan mask carries the same 1e-12 slack)
    est = max(0.0, min(best, 1.0))
    lower = min(max(0.0, relaxed_min - relax), est)
    info = {"eps": eps, "resolution": resolution, "net_points": len(net),
            "pairs_scanned": len(net) * m}
    witnesses = (wx, wt * wx)
    return ConstantEstimate("delta", lower, est, est, witnesses, net.mesh_norm, info)


def sigma_curve(space, eps_grid, resolution=None, pair_budget=DEFAULT_MODULI_BUDGET) -> ModulusCurve:
    vals = [sigma(space, e, resolution, pair_budget) for e in eps_grid]
    return ModulusCurve("sigma", [float(e) for e in eps_grid], vals)


def delta_curve(space, eps_grid, resolution=None, pair_budget=DEFAULT_MODULI_BUDGET) -> ModulusCurve:
    vals = [delta_m(space, e, resolution, pair_budget) for e in eps_grid]
    return ModulusCurve("delta", [float(e) for e in eps_grid], vals)


# ---------------------------------------------------------------------------
# characteristics
# ---------------------------------------------------------------------------


def characteristic(
    space: LatticeSpace,
    which: str,
    resolution: float | None = None,
    threshold: float = 1e-3,
    eps_resolution: float = 1e-3,
    pair_budget: int = DEFAULT_MODULI_BUDGET,
) -> Characteristic:
    """Bisection for the largest eps with modulus estimate <= threshold.

    Both moduli are non-decreasing in eps (for sigma because ||x + eps*y||
    is non-decreasing in eps on the positive cone), so the zero set is an
    interval [0, e0] and bisection applies.  The threshold separates
    "numerically zero" from "small positive" on refined estimates, whose
    accuracy is set by the refinement step, not by the net mesh.
    """
    if which not in ("delta", "sigma"):
        raise ValueError("which must be 'delta' or 'sigma'")
    fn = delta_m if which == "delta" else sigma

    def g(e: float) -> float:
        return fn(space, e, resolution, pair_budget).estimate

    hi_probe = 1.0 - eps_resolution
    if g(hi_probe) <= threshold:
        return Characteristic(which, 1.0, threshold, eps_resolution)
    lo, hi = 0.0, hi_probe
    while hi - lo > eps_resolution:
        mid = 0.5 * (lo + hi)
        if g(mid) <= threshold:
            lo = mid
        else:
            hi = mid
    return Characteristic(which, lo, threshold, eps_resolution)


# ---------------------------------------------------------------------------
# identity battery
# ---------------------------------------------------------------------------

_TOL_IDENTITY = 1e-2
_TOL_SHAPE = 1e-3


class _ModulusCache:
    def __init__(self, space, resolution, pair_budget):
        self.space = space
        self.resolution = resolution
        self.pair_budget = pair_budget
        self._sigma: dict[float, ConstantEstimate] = {}
        self._delta: dict[float, ConstantEstimate] = {}

    def sigma(self, e: float) -> ConstantEstimate:
        e = float(e)
        if e not in self._sigma:
            self._sigma[e] = sigma(self.space, e, self.resolution, self.pair_budget)
        return self._sigma[e]

    def delta(self, e: float) -> ConstantEstimate:
        e = float(e)
        if e not in self._delta:
            self._delta[e] = delta_m(self.space, e, self.resolution, self.pair_budget)
        return self._delta[e]


def _ratio(d: float) -> float:
    return d / (1.0 - d) if d < 1.0 - 1e-12 else math.inf


def identity_battery(
    space: LatticeSpace,
    eps_grid=None,
    resolution: float | None = None,
    pair_budget: int = DEFAULT_MODULI_BUDGET,
) -> IdentityReport:
    """Verify every modulus identity/inequality on a grid, by certified
    estimates with tolerance 1e-2 (nothing is interpolated: identities with
    shifted arguments trigger fresh modulus computations at those points)."""
    if eps_grid is None:
        eps_grid = [k * 0.05 for k in range(21)]
    eps_grid = sorted(float(e) for e in eps_grid)
    if any(e < 0.0 or e > 1.0 for e in eps_grid):
        raise ValueError("eps grid must lie inside [0, 1]")
    cache = _ModulusCache(space, resolution, pair_budget)
    sig = {e: cache.sigma(e).estimate for e in eps_grid}
    dlt = {e: cache.delta(e).estimate for e in eps_grid}
    lam = lambda_plus(space).estimate
    checks: list[CheckResult] = []

    checks.append(CheckResult(
        "sigma_zero_at_zero", cache.sigma(0.0).estimate == 0.0,
        details={"value": cache.sigma(0.0).estimate}))
    checks.append(CheckResult(
        "delta_zero_at_zero", cache.delta(0.0).estimate == 0.0,
        details={"value": cache.delta(0.0).estimate}))

    diffs_s = [sig[b] - sig[a] for a, b in zip(eps_grid, eps_grid[1:])]
    checks.append(CheckResult(
        "sigma_nondecreasing", all(d >= -_TOL_SHAPE for d in diffs_s),
        details={"min_step": min(diffs_s) if diffs_s else 0.0}))
    lip = [sig[b] - sig[a] - (b - a) for a, b in zip(eps_grid, eps_grid[1:])]
    checks.append(CheckResult(
        "sigma_one_lipschitz", all(d <= _TOL_SHAPE for d in lip),
        details={"max_excess": max(lip) if lip else 0.0}))
    diffs_d = [dlt[b] - dlt[a] for a, b in zip(eps_grid, eps_grid[1:])]
    checks.append(CheckResult(
        "delta_nondecreasing", all(d >= -_TOL_SHAPE for d in diffs_d),
        details={"min_step": min(diffs_d) if diffs_d else 0.0}))

    # two-sided ratio bounds, interior grid points only
    worst_lo = worst_hi = -math.inf
    for e in eps_grid:
        if not (0.0 < e < 1.0):
            continue
        lo = _ratio(cache.delta(e / (1.0 + e)).estimate)
        hi = _ratio(dlt[e])
        worst_lo = max(worst_lo, lo - sig[e])
        worst_hi = max(worst_hi, sig[e] - hi)
    checks.append(CheckResult(
        "two_sided_ratio_bounds",
        worst_lo <= _TOL_IDENTITY and worst_hi <= _TOL_IDENTITY,
        details={"max_lower_excess": worst_lo, "max_upper_excess": worst_hi}))

    # exact ratio identity with a freshly shifted argument
    worst = 0.0
    for e in eps_grid:
        s = sig[e]
        d = cache.delta(e / (1.0 + s)).estimate
        worst = max(worst, abs(d - s / (1.0 + s)))
    checks.append(CheckResult(
        "shifted_ratio_identity", worst <= _TOL_IDENTITY, details={"max_abs_dev": worst}))

    # lambda_plus <= sigma(eps) + 2 - eps on the whole grid
    worst = max(lam - (sig[e] + 2.0 - e) for e in eps_grid)
    checks.append(CheckResult(
        "lambda_plus_sigma_bound", worst <= _TOL_IDENTITY, details={"max_excess": worst}))

    # delta at 1/lambda_plus equals (lambda_plus - 1)/lambda_plus
    d_at = cache.delta(1.0 / lam).estimate
    dev = abs(d_at - (lam - 1.0) / lam)
    checks.append(CheckResult(
        "delta_at_inverse_lambda_plus", dev <= _TOL_IDENTITY,
        details={"delta": d_at, "expected": (lam - 1.0) / lam, "abs_dev": dev}))

    # 1/(1 - delta(1/2)) <= lambda_plus
    lhs = 1.0 / (1.0 - min(cache.delta(0.5).estimate, 1.0 - 1e-12))
    checks.append(CheckResult(
        "lambda_plus_lower_from_delta_half", lhs <= lam + _TOL_IDENTITY,
        details={"lhs": lhs, "lambda_plus": lam}))

    # characteristics: sandwich and vanishing of sigma at its characteristic
    char_d = characteristic(space, "delta", resolution, pair_budget=pair_budget)
    char_s = characteristic(space, "sigma", resolution, pair_budget=pair_budget)
    ctol = _TOL_IDENTITY
    checks.append(CheckResult(
        "characteristic_sandwich",
        char_d.value <= char_s.value + ctol and char_s.value <= 2.0 * char_d.value + ctol,
        details={"eps0": char_d.value, "tilde_eps0": char_s.value}))
    s_at = cache.sigma(min(char_s.value, 1.0)).estimate
    checks.append(CheckResult(
        "sigma_vanishes_at_characteristic", s_at <= char_s.threshold + ctol,
        details={"sigma_at_characteristic": s_at, "threshold": char_s.threshold}))

    # uniform monotonicity link: lambda_plus > 1 iff both characteristics < 1
    gap = 0.05
    lam_gt = lam > 1.0 + gap
    checks.append(CheckResult(
        "uniform_monotonicity_link",
        lam_gt == (char_d.value < 1.0 - gap) and lam_gt == (char_s.value < 1.0 - gap),
        details={"lambda_plus": lam, "eps0": char_d.value, "tilde_eps0": char_s.value}))

    # the claimed pointwise formula delta(e) = sigma(e)/(1+sigma(e)) need not
    # hold; evaluate it and list where it fails (informational per space)
    falsa = {e: abs(dlt[e] - sig[e] / (1.0 + sig[e])) for e in eps_grid}
    false_points = [e for e, d in falsa.items() if d > _TOL_IDENTITY]
    checks.append(CheckResult(
        "pointwise_ratio_formula", True, informational=True,
        details={"false_points": false_points,
                 "max_abs_dev": max(falsa.values()) if falsa else 0.0}))

    return IdentityReport(checks)


def sigma_lambda_bridge(
    space: LatticeSpace,
    resolution: float | None = None,
    pair_budget: int = DEFAULT_MODULI_BUDGET,
) -> BridgeReport:
    """Check sigma(1) + 1 against the positive-pair constant: both are
    inf ||x + y|| over S+ x S+, computed through independent code paths."""
    s1 = sigma(space, 1.0, resolution, pair_budget)
    lp_est = lambda_plus(space, resolution)
    diff = abs(s1.estimate + 1.0 - lp_est.estimate)
    slack = s1.width + lp_est.width
    return BridgeReport(s1, lp_est, diff, slack, diff <= max(slack, 5e-3))
