import math

import numpy as np
import pytest
from scipy.special import sici

from canonsys.quadrature import QuadratureError, gauss_legendre, quadrature


def test_polynomials_exact():
    assert quadrature(lambda x: x ** 5 - 3 * x ** 2, -1.0, 2.0) == pytest.approx(10.5 - 9.0, rel=1e-14)


def test_examples():
    assert quadrature(lambda x: np.cos(x) * (1 + np.cos(x)), -math.pi, math.pi, 1) == pytest.approx(math.pi, rel=1e-12)
    assert abs(quadrature(lambda x: np.cos(2 * x), -math.pi, math.pi, 2)) < 1e-13


def test_sinc_against_riemann_sum():
    f = lambda x: 1 + np.sinc(x / math.pi)  # 1 + sin(x)/x
    value = quadrature(f, -math.pi, math.pi)
    m = 2_000_000
    x = -math.pi + (np.arange(m) + 0.5) * (2 * math.pi / m)
    riemann = f(x).sum() * (2 * math.pi / m)
    assert value == pytest.approx(riemann, abs=1e-9)
    assert value == pytest.approx(2 * math.pi + 2 * sici(math.pi)[0], rel=1e-12)
    assert value == pytest.approx(9.9868, abs=5e-4)  # the quoted value has four decimals


def test_oscillatory():
    n = 200
    value = quadrature(lambda x: np.cos(n * x) * np.exp(-x * x), -10.0, 10.0, n)
    assert value == pytest.approx(math.sqrt(math.pi) * math.exp(-n * n / 4), abs=1e-11)


def test_reversed_and_empty():
    assert quadrature(np.exp, 1.0, 0.0) == pytest.approx(1 - math.e)
    assert quadrature(np.exp, 1.0, 1.0) == 0.0


def test_errors():
    with pytest.raises(QuadratureError):
        quadrature(lambda x: 1 / x, 0.0, 1.0)
    with pytest.raises(QuadratureError):
        quadrature(lambda x: np.abs(x - 0.3) ** -0.9, 0.0, 1.0, max_levels=3)


def test_nodes_cached_and_readonly():
    nodes, _ = gauss_legendre(16)
    assert gauss_legendre(16)[0] is nodes
    assert not nodes.flags.writeable
