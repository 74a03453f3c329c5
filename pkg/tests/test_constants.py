"""Sphere constants: published values, certificates, and invariances."""

import math

import numpy as np
import pytest

from latconst import (
    LatticeSpace,
    Scale,
    UnsupportedDimensionError,
    alpha,
    beta,
    beta_gap_space,
    constant_battery,
    james,
    lambda_plus,
    lambda_schaffer,
    linf_space,
    lp_space,
    max_l2_linf_space,
    max_linf_l1_space,
    meet,
    permute_norm,
    random_polyhedral2_space,
)

from oracles import angle_sphere, james_combine, lp_norm, pair_extremum, schaffer_combine

TOL = 5e-3
ROOT2 = math.sqrt(2.0)


# -- positive-pair infimum ---------------------------------------------------

@pytest.mark.parametrize("p", [1, 1.5, 2, 3])
def test_lambda_plus_lp_dim2(p):
    est = lambda_plus(lp_space(2, p))
    assert est.estimate == pytest.approx(2.0 ** (1.0 / p), abs=TOL)


def test_lambda_plus_lp_dim3():
    est = lambda_plus(lp_space(3, 1.5))
    assert est.estimate == pytest.approx(2.0 ** (1.0 / 1.5), abs=TOL)


def test_lambda_plus_linf2_is_one():
    assert lambda_plus(linf_space(2)).estimate == pytest.approx(1.0, abs=TOL)


def test_lambda_plus_mixed_norm():
    est = lambda_plus(max_l2_linf_space(1.2))
    assert est.estimate == pytest.approx(ROOT2 / 1.2, abs=TOL)


def test_lambda_plus_dim1_exact():
    est = lambda_plus(lp_space(1, 2))
    assert est.lower == est.upper == est.estimate == 2.0


def test_certificate_structure_and_witnesses():
    space = lp_space(3, 2)
    est = lambda_plus(space)
    assert est.lower <= est.estimate <= est.upper
    for w in est.witnesses:
        assert np.all(w >= -1e-12)
        assert space.norm_value(w) == pytest.approx(1.0, abs=1e-9)
    assert est.upper - est.lower <= 2.0 * est.mesh_norm + 1e-12


def test_certified_containment_at_double_resolution():
    for space, fn in ((lp_space(2, 1.5), lambda_plus), (beta_gap_space(), beta)):
        coarse = fn(space, resolution=1.0 / 10.0)
        fine = fn(space, resolution=1.0 / 20.0)
        assert coarse.lower - 1e-9 <= fine.estimate <= coarse.upper + 1e-9


# -- disjoint-pair constants --------------------------------------------------

def test_beta_gap3_value():
    est = beta(beta_gap_space())
    assert est.estimate == pytest.approx(15.0 / 11.0, abs=TOL)
    wx, wy = est.witnesses
    assert np.array_equal(meet(wx, wy), np.zeros(3))


@pytest.mark.parametrize("p,n", [(1, 2), (2, 3), (3, 2)])
def test_beta_lp(p, n):
    assert beta(lp_space(n, p)).estimate == pytest.approx(2.0 ** (1.0 / p), abs=TOL)


def test_beta_linf2_is_one():
    assert beta(linf_space(2)).estimate == pytest.approx(1.0, abs=TOL)


def test_beta_rejects_dim1():
    with pytest.raises(UnsupportedDimensionError):
        beta(lp_space(1, 1))


@pytest.mark.parametrize("p,n,want", [(1, 2, 2.0), (2, 3, ROOT2), (1, 3, 2.0)])
def test_alpha_lp(p, n, want):
    assert alpha(lp_space(n, p)).estimate == pytest.approx(want, abs=TOL)


def test_alpha_linf_is_one():
    assert alpha(linf_space(3)).estimate == pytest.approx(1.0, abs=TOL)


def test_alpha_dim1_special_case():
    est = alpha(lp_space(1, 2))
    assert est.lower == est.upper == est.estimate == 1.0


def test_alpha_cross_check_agrees():
    for space in (lp_space(2, 1.5), beta_gap_space()):
        est = alpha(space)
        assert est.info["cross_check_estimate"] == pytest.approx(est.estimate, abs=2e-2)


# -- full-sphere constants ----------------------------------------------------

def test_lambda_james_l2_square():
    # independent oracle: angle-parametrized sphere, no cube grid involved
    pts = angle_sphere(lp_norm(2), 720)
    oracle_lambda = pair_extremum(lp_norm(2), pts, pts, schaffer_combine, maximize=False)
    oracle_james = pair_extremum(lp_norm(2), pts, pts, james_combine, maximize=True)
    assert oracle_lambda == pytest.approx(ROOT2, abs=2e-3)
    assert oracle_james == pytest.approx(ROOT2, abs=2e-3)
    space = lp_space(2, 2)
    assert lambda_schaffer(space).estimate == pytest.approx(ROOT2, abs=TOL)
    assert james(space).estimate == pytest.approx(ROOT2, abs=TOL)


def test_lambda_mixed_sqrt2_norm():
    assert lambda_schaffer(max_linf_l1_space()).estimate == pytest.approx(ROOT2, abs=TOL)


@pytest.mark.parametrize("p", [1, 1.5, 2, 4])
def test_schaffer_james_product_is_two(p):
    space = lp_space(2, p)
    product = lambda_schaffer(space).estimate * james(space).estimate
    assert product == pytest.approx(2.0, abs=2e-2)


def test_dim1_conventions():
    assert lambda_schaffer(lp_space(1, 1)).estimate == 2.0
    # on the line every unit pair has x = +/- y, so the sup-min value is 0
    assert james(lp_space(1, 1)).estimate == 0.0


# -- battery -------------------------------------------------------------------

def test_battery_l1_cube():
    battery = constant_battery(lp_space(3, 1))
    for kind in ("lambda_plus", "beta", "alpha"):
        assert battery.constants[kind].estimate == pytest.approx(2.0, abs=TOL)
    assert battery.chain_ok
    assert battery.product == pytest.approx(2.0, abs=2e-2)


def test_battery_linf3():
    battery = constant_battery(linf_space(3))
    for kind, want in (("lambda", 1.0), ("lambda_plus", 1.0), ("beta", 1.0),
                       ("alpha", 1.0), ("james", 2.0)):
        assert battery.constants[kind].estimate == pytest.approx(want, abs=TOL)
    assert battery.chain_ok


def test_battery_gap_space_flags_strict_gap():
    battery = constant_battery(beta_gap_space())
    gap = battery.constants["beta"].estimate - battery.constants["lambda_plus"].estimate
    assert gap >= 0.02
    assert battery.chain_ok


def test_battery_rejects_dim1():
    with pytest.raises(UnsupportedDimensionError):
        constant_battery(lp_space(1, 2))


# -- invariances ----------------------------------------------------------------

def test_two_dim_collapse_random_polyhedral():
    rng = np.random.default_rng(23)
    for _ in range(5):
        space = random_polyhedral2_space(rng)
        lam = lambda_plus(space).estimate
        bet = beta(space).estimate
        assert abs(lam - bet) <= 1e-2
        assert abs(bet - space.norm_value([1.0, 1.0])) <= 1e-2


def test_scale_invariance():
    space = lp_space(2, 1.5)
    scaled = LatticeSpace(2, Scale(2.0, space.norm))
    assert abs(lambda_plus(scaled).estimate - lambda_plus(space).estimate) <= 1e-9
    assert abs(beta(scaled).estimate - beta(space).estimate) <= 1e-9


def test_permutation_invariance():
    space = beta_gap_space()
    permuted = LatticeSpace(3, permute_norm(space.norm, (2, 0, 1)))
    assert abs(beta(permuted).estimate - beta(space).estimate) <= 1e-9
    assert abs(lambda_plus(permuted).estimate - lambda_plus(space).estimate) <= 1e-9


def test_refinement_monotonicity():
    space = lp_space(2, 2)
    coarse = lambda_plus(space, resolution=1.0 / 10.0)
    fine = lambda_plus(space, resolution=1.0 / 20.0)
    assert fine.lower >= coarse.lower - 1e-12
    assert fine.upper <= coarse.upper + 1e-12
