import math

import numpy as np
import pytest
from scipy import special

from sl_iosp.core import DomainError
from sl_iosp.elliptic import e1, e2, jacobi
from sl_iosp.quadrature import integrate_adaptive


def test_e1_examples():
    assert e1(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    # raw integrand in v = 1 - t, truncated at v = d, plus the tail sqrt(2 d / (1 - s))
    d = 1e-12
    body = integrate_adaptive(lambda v: 1 / np.sqrt(v * (2 - v) * (1 - 0.5 * (1 - v) ** 2)), d, 1.0, 1e-10)
    assert e1(0.5) == pytest.approx(1.85407467730137, abs=1e-13)
    assert e1(0.5) == pytest.approx(body + math.sqrt(2 * d / 0.5), abs=1e-9)
    assert e1(-1.0) == pytest.approx(1.3110287771461, abs=1e-12)


def test_e2_examples():
    assert e2(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert e2(1 - 1e-12) == pytest.approx(1.0, abs=1e-5)
    assert e2(-0.25) > math.pi / 2


@pytest.mark.parametrize("s", [-5.0, -1.0, -0.25, 0.0, 0.3, 0.9, 0.999])
def test_agm_against_scipy(s):
    assert e1(s) == pytest.approx(special.ellipk(s), rel=1e-14)
    assert e2(s) == pytest.approx(special.ellipe(s), rel=1e-14)


@pytest.mark.parametrize("s", np.round(np.arange(0.1, 1.0, 0.1), 1))
def test_agm_and_quadrature_agree(s):
    assert e1(s) == pytest.approx(e1(s, method="quadrature"), abs=1e-10)
    assert e2(s) == pytest.approx(e2(s, method="quadrature"), abs=1e-10)


@pytest.mark.parametrize("s", [-20.0, -3.0, -0.5])
def test_negative_parameter_paths_agree(s):
    assert e1(s) == pytest.approx(e1(s, method="quadrature"), abs=1e-11)
    assert e2(s) == pytest.approx(e2(s, method="quadrature"), abs=1e-11)


def test_monotone_in_parameter():
    s = np.linspace(-10, 0.99, 60)
    k = [e1(v) for v in s]
    e = [e2(v) for v in s]
    assert np.all(np.diff(k) > 0)
    assert np.all(np.diff(e) < 0)


def test_parameter_domain():
    for bad in (1.0, 1.5, math.nan):
        with pytest.raises(DomainError):
            e1(bad)
        with pytest.raises(DomainError):
            e2(bad)


def test_jacobi_examples():
    assert jacobi(0.0, 0.7) == (0.0, 1.0, 1.0)
    sn, cn, dn = jacobi(e1(0.25), 0.5)
    assert sn == pytest.approx(1.0, abs=1e-14)
    assert cn == pytest.approx(0.0, abs=1e-14)
    assert dn == pytest.approx(math.sqrt(0.75), abs=1e-14)
    sn, cn, dn = jacobi(0.7, 0.0)
    assert (sn, cn, dn) == pytest.approx((math.sin(0.7), math.cos(0.7), 1.0), abs=1e-15)


def test_jacobi_identities_random():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        z = rng.uniform(-30, 30)
        k = rng.uniform(0, 0.999)
        sn, cn, dn = jacobi(z, k)
        assert abs(sn * sn + cn * cn - 1) <= 1e-12
        assert abs(k * k * sn * sn + dn * dn - 1) <= 1e-12


def test_jacobi_against_scipy():
    z = np.linspace(-12, 12, 97)
    for k in (0.1, 0.5, 1 / math.sqrt(2), 0.95):
        ours = np.array(jacobi(z, k))
        ref = np.array(special.ellipj(z, k * k)[:3])
        assert np.max(np.abs(ours - ref)) < 1e-13


def test_sn_derivative_is_cn_dn():
    h = 1e-6
    for k in (0.2, 0.6, 0.9):
        for z in np.linspace(-4, 4, 17):
            deriv = (jacobi(z + h, k)[0] - jacobi(z - h, k)[0]) / (2 * h)
            _, cn, dn = jacobi(z, k)
            assert deriv == pytest.approx(cn * dn, abs=1e-6)


def test_period_is_four_quarter_periods():
    k = 0.8
    quarter = e1(k * k)
    z = np.linspace(0, 3, 11)
    assert np.allclose(np.array(jacobi(z + 4 * quarter, k)), np.array(jacobi(z, k)), atol=1e-12)
    assert np.allclose(jacobi(z + 2 * quarter, k)[0], -jacobi(z, k)[0], atol=1e-12)


def test_modulus_domain():
    with pytest.raises(DomainError):
        jacobi(0.3, 1.0)
    with pytest.raises(DomainError):
        jacobi(0.3, -0.1)
