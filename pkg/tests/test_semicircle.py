import math

import numpy as np
import pytest
from scipy import integrate

from skewspec.semicircle import (
    catalan,
    cdf,
    empirical_moment,
    ks_distance,
    moment,
    pdf,
)
from skewspec.spectral import ESD

# independent arbitrary-precision evaluations (mpmath, 40 digits)
PDF_AT_1 = 0.27566444771089604  # sqrt(3)/(2*pi)
CDF_AT_1 = 0.80449889052211468  # 1/2 + sqrt(3)/(4*pi) + asin(1/2)/pi


def test_pdf_values():
    assert abs(pdf(0.0) - 1.0 / math.pi) <= 1e-15
    assert pdf(2.0) == 0.0
    assert pdf(-2.0) == 0.0
    assert pdf(2.5) == 0.0
    assert abs(pdf(1.0) - PDF_AT_1) <= 1e-15


def test_pdf_integrates_to_one():
    total, err = integrate.quad(pdf, -2.0, 2.0, limit=200)
    assert abs(total - 1.0) <= 1e-10


def test_cdf_values():
    assert cdf(0.0) == 0.5
    assert cdf(2.0) == 1.0
    assert cdf(-2.0) == 0.0
    assert cdf(5.0) == 1.0
    assert cdf(-5.0) == 0.0
    assert abs(cdf(1.0) - CDF_AT_1) <= 1e-12


def test_cdf_matches_quadrature():
    for x in (-1.9, -1.2, -0.3, 0.4, 1.0, 1.7, 1.99):
        q, _ = integrate.quad(pdf, -2.0, x, limit=200)
        assert abs(cdf(x) - q) <= 1e-10


def test_cdf_monotone_and_derivative():
    xs = np.linspace(-2.2, 2.2, 10_000)
    vals = cdf(xs)
    assert np.all(np.diff(vals) >= 0.0)
    h = 1e-6
    xs = np.linspace(-1.9, 1.9, 2_000)
    deriv = (cdf(xs + h) - cdf(xs - h)) / (2 * h)
    assert np.max(np.abs(deriv - pdf(xs))) <= 1e-6


def test_catalan_sequence():
    assert [catalan(t) for t in range(7)] == [1, 1, 2, 5, 14, 42, 132]
    with pytest.raises(ValueError):
        catalan(-1)


def test_moment_values():
    assert moment(0) == 1.0
    assert moment(2) == 1.0
    assert moment(4) == 2.0
    assert moment(6) == 5.0
    assert moment(1) == 0.0
    assert moment(7) == 0.0
    with pytest.raises(ValueError):
        moment(-2)


def test_moments_match_quadrature():
    for k in range(13):
        q, _ = integrate.quad(lambda x: x**k * pdf(x), -2.0, 2.0, limit=400)
        assert abs(moment(k) - q) <= 1e-9


def test_catalan_recurrence():
    # (t+2) * C_{t+1} = 2 * (2t+1) * C_t, exactly in integers
    for t in range(11):
        assert catalan(t + 1) * (t + 2) == catalan(t) * 2 * (2 * t + 1)


def test_ks_single_atom():
    assert abs(ks_distance(ESD([0.0])) - 0.5) <= 1e-15


def test_ks_edge_atoms():
    assert abs(ks_distance(ESD([-2.0, 2.0])) - 0.5) <= 1e-15


def test_ks_bounded():
    rng = np.random.default_rng(5)
    for _ in range(20):
        pts = rng.uniform(-4, 4, size=rng.integers(1, 50))
        d = ks_distance(ESD(pts))
        assert 0.0 <= d <= 1.0


def test_ks_inverse_cdf_sample():
    # 1e6 draws by inverse-CDF sampling: Dvoretzky-Kiefer-Wolfowitz puts
    # P(KS > 0.002) below 7e-4; observed value with this seed is 7.1e-4
    grid = np.linspace(-2.0, 2.0, 200_001)
    cvals = cdf(grid)
    rng = np.random.default_rng(20240817)
    u = rng.random(1_000_000)
    draws = np.interp(u, cvals, grid)
    d = ks_distance(ESD(draws))
    assert d <= 0.002


def test_empirical_moments():
    e = ESD([-1.0, 1.0])
    assert empirical_moment(e, 2) == 1.0
    assert empirical_moment(e, 3) == 0.0
    assert empirical_moment(e, 0) == 1.0
    with pytest.raises(ValueError):
        empirical_moment(e, -1)


def test_vectorized_pdf_cdf():
    xs = np.array([-3.0, -2.0, 0.0, 2.0, 3.0])
    assert pdf(xs).shape == xs.shape
    assert cdf(xs).tolist() == [0.0, 0.0, 0.5, 1.0, 1.0]
