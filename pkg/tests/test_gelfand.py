import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from htype.biradial import bump, dilate_fn, gaussian, integral, l1_norm
from htype.gelfand import (
    SpectrumPoint,
    gelfand_transform,
    parse_grid,
    spherical_factors,
    spherical_fn,
    spherical_profile,
)
from htype.group import GroupElement
from htype.special import bessel_gen, laguerre


def test_spectrum_point_validation():
    with pytest.raises(ValueError):
        SpectrumPoint.laguerre(0.0, 1)
    with pytest.raises(ValueError):
        SpectrumPoint("laguerre", nu=1.0, l=-1)
    with pytest.raises(ValueError):
        SpectrumPoint.bessel(-0.1)
    with pytest.raises(ValueError):
        SpectrumPoint("fourier")
    assert str(SpectrumPoint.laguerre(2, 3)) == "laguerre(nu=2, l=3)"
    assert SpectrumPoint.bessel(1.5).parameter == 1.5


@pytest.mark.parametrize("p", [SpectrumPoint.laguerre(0.7, 0), SpectrumPoint.laguerre(3.0, 4),
                               SpectrumPoint.bessel(2.0)])
def test_spherical_at_identity(h1, quat1, p):
    assert spherical_fn(h1, p, h1.identity()) == pytest.approx(1.0)
    assert spherical_fn(quat1, p, quat1.identity()) == pytest.approx(1.0)


def test_h1_explicit_form(h1):
    nu, l = 1.3, 2
    n = GroupElement([0.8, -0.5], [0.9])
    r2 = 0.8**2 + 0.5**2
    expected = math.exp(-nu * r2 / 4) * laguerre(l, 0, nu * r2 / 2) * math.cos(nu * 0.9)
    assert spherical_fn(h1, SpectrumPoint.laguerre(nu, l), n) == pytest.approx(expected)


def test_trivial_character(h1, quat1, rng):
    for g in (h1, quat1):
        r, rho = rng.uniform(0, 10, 50), rng.uniform(0, 10, 50)
        np.testing.assert_allclose(spherical_profile(g, SpectrumPoint.bessel(0.0), r, rho), 1.0)


@pytest.mark.parametrize("branch", ["laguerre", "bessel"])
def test_spherical_bounded(h1, quat1, rng, branch):
    for g in (h1, quat1):
        r, rho = rng.uniform(0, 20, 10_000), rng.uniform(0, 20, 10_000)
        if branch == "laguerre":
            p = SpectrumPoint.laguerre(rng.uniform(0.1, 5), int(rng.integers(0, 8)))
        else:
            p = SpectrumPoint.bessel(rng.uniform(0, 5))
        assert np.abs(spherical_profile(g, p, r, rho)).max() <= 1 + 1e-12


def test_bessel_branch_is_limit_of_laguerre_branch(h1, quat1):
    # nu -> 0 with nu (2l + m) = mu^2 fixed; the Z factor tends to 1 on compacts
    r = np.linspace(0, 6, 61)
    for g in (h1, quat1):
        errs = []
        for nu in (1e-2, 1e-3, 1e-4):
            l = int(round((1 / nu - g.m) / 2))
            mu = math.sqrt(nu * (2 * l + g.m))
            phi_x, _ = spherical_factors(g, SpectrumPoint.laguerre(nu, l))
            errs.append(np.abs(phi_x(r) - bessel_gen(g.m - 1, mu * r)).max())
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 1e-7


def test_transform_at_trivial_character_is_integral(h1, quat1):
    for g in (h1, quat1):
        f = gaussian(g)
        assert gelfand_transform(f, SpectrumPoint.bessel(0.0)).value == pytest.approx(
            integral(f).value, rel=1e-10)


def test_gaussian_transform_closed_form(h1):
    # H_1, exp(-r^2 - rho^2), Laguerre l = 0: 4 pi * int e^{-r^2(1+nu/4)} r dr * int e^{-rho^2} cos(nu rho)
    nu = 1.7
    expected = 4 * math.pi * (1 / (2 * (1 + nu / 4))) * (math.sqrt(math.pi) / 2) * math.exp(-nu**2 / 4)
    res = gelfand_transform(gaussian(h1), SpectrumPoint.laguerre(nu, 0))
    assert res.value == pytest.approx(expected, rel=1e-10)


@given(st.one_of(
    st.builds(SpectrumPoint.laguerre, st.floats(0.05, 5), st.integers(0, 6)),
    st.builds(SpectrumPoint.bessel, st.floats(0, 5)),
))
def test_transform_bounded_by_l1(p):
    from htype.group import make_heisenberg

    f = bump(make_heisenberg(1), radius=1.3, height=-2.0)
    assert abs(gelfand_transform(f, p, tol=1e-9).value) <= l1_norm(f) * (1 + 1e-9)


@pytest.mark.parametrize("a", [0.5, 2.0])
@pytest.mark.parametrize("nu,l", [(1, 0), (1, 1), (2, 0), (2, 1)])
def test_dilation_covariance_laguerre(h1, a, nu, l):
    f = gaussian(h1)
    lhs = gelfand_transform(dilate_fn(a, f), SpectrumPoint.laguerre(nu, l)).value
    rhs = gelfand_transform(f, SpectrumPoint.laguerre(nu / a, l)).value
    assert lhs == pytest.approx(rhs, rel=1e-6, abs=1e-12)


@pytest.mark.parametrize("a", [0.5, 2.0, 5.0])
@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
def test_dilation_covariance_bessel(h1, quat1, a, mu):
    # derived numerically: (delta_a f)^(mu) = f^(mu / sqrt(a))
    for g in (h1, quat1):
        f = gaussian(g)
        lhs = gelfand_transform(dilate_fn(a, f), SpectrumPoint.bessel(mu)).value
        rhs = gelfand_transform(f, SpectrumPoint.bessel(mu / math.sqrt(a))).value
        assert lhs == pytest.approx(rhs, rel=1e-6)
        wrong = gelfand_transform(f, SpectrumPoint.bessel(mu / a)).value
        assert abs(lhs - wrong) > 1e-3 * abs(lhs)


def test_parse_grid():
    pts = parse_grid("nu=0.5,1;l=0..2;mu=0,1")
    assert len(pts) == 8
    assert pts[0] == SpectrumPoint.laguerre(0.5, 0)
    assert pts[-1] == SpectrumPoint.bessel(1.0)
    assert len(parse_grid("mu=0:4:5")) == 5
    with pytest.raises(ValueError):
        parse_grid("xi=1")
    with pytest.raises(ValueError):
        parse_grid("")
