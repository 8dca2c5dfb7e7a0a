"""
Tests for Taylor jets against closed-form derivatives.
"""

import math
import os
import sys
import unittest

import numpy as np
from numpy.polynomial import Polynomial

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src import jets
from src.errors import OrderExhaustedError
from src.jets import Jet

XS = np.array([0.3, 0.7, 1.1, 2.0])


class TestArithmetic(unittest.TestCase):

    def setUp(self):
        self.x = Jet.variable(XS, 4)

    def test_variable(self):
        np.testing.assert_allclose(self.x[0], XS)
        np.testing.assert_allclose(self.x[1], 1.0)
        np.testing.assert_allclose(self.x[2], 0.0)
        self.assertEqual(self.x.order, 4)

    def test_product(self):
        cube = self.x * self.x * self.x
        np.testing.assert_allclose(cube[1], 3 * XS ** 2)
        np.testing.assert_allclose(cube[2], 6 * XS)
        np.testing.assert_allclose(cube[3], 6.0)
        np.testing.assert_allclose(cube[4], 0.0, atol=1e-12)

    def test_quotient(self):
        inv = 1.0 / self.x
        np.testing.assert_allclose(inv[1], -1.0 / XS ** 2)
        np.testing.assert_allclose(inv[2], 2.0 / XS ** 3)
        np.testing.assert_allclose(inv[3], -6.0 / XS ** 4)
        ratio = (self.x + 1.0) / self.x
        np.testing.assert_allclose(ratio[1], -1.0 / XS ** 2)

    def test_scalar_mixing(self):
        u = 3.0 - self.x * 2.0
        np.testing.assert_allclose(u[0], 3.0 - 2.0 * XS)
        np.testing.assert_allclose(u[1], -2.0)
        np.testing.assert_allclose((-u)[1], 2.0)

    def test_power(self):
        p = jets.power(self.x, 2.5)
        np.testing.assert_allclose(p[0], XS ** 2.5)
        np.testing.assert_allclose(p[2], 2.5 * 1.5 * XS ** 0.5)
        np.testing.assert_allclose((self.x ** -1.0)[1], -1.0 / XS ** 2)


class TestElementary(unittest.TestCase):

    def setUp(self):
        self.x = Jet.variable(XS, 4)

    def test_exp_chain(self):
        e = jets.exp(self.x * 2.0)
        for k in range(5):
            np.testing.assert_allclose(e[k], 2.0 ** k * np.exp(2.0 * XS))

    def test_sin_cos_cycle(self):
        s = jets.sin(self.x)
        expected = [np.sin(XS), np.cos(XS), -np.sin(XS), -np.cos(XS), np.sin(XS)]
        for k in range(5):
            np.testing.assert_allclose(s[k], expected[k], atol=1e-12)
        np.testing.assert_allclose(jets.cos(self.x)[1], -np.sin(XS))

    def test_hyperbolic(self):
        np.testing.assert_allclose(jets.sinh(self.x)[1], np.cosh(XS))
        np.testing.assert_allclose(jets.cosh(self.x)[3], np.sinh(XS))
        t = jets.tanh(self.x)
        np.testing.assert_allclose(t[1], 1.0 - np.tanh(XS) ** 2)
        np.testing.assert_allclose(t[2], -2.0 * np.tanh(XS) * (1.0 - np.tanh(XS) ** 2))

    def test_cot_and_coth(self):
        np.testing.assert_allclose(jets.cot(self.x)[1], -1.0 / np.sin(XS) ** 2)
        np.testing.assert_allclose(jets.coth(self.x)[1], -1.0 / np.sinh(XS) ** 2)

    def test_reciprocal(self):
        r = jets.reciprocal(jets.cosh(self.x))
        np.testing.assert_allclose(r[1], -np.sinh(XS) / np.cosh(XS) ** 2)


class TestOrders(unittest.TestCase):

    def test_derivative_lowers_order(self):
        x = Jet.variable(XS, 2)
        d = jets.exp(x).derivative()
        self.assertEqual(d.order, 1)
        np.testing.assert_allclose(d[1], np.exp(XS))

    def test_exhaustion(self):
        x = Jet.variable(XS, 1)
        with self.assertRaises(OrderExhaustedError):
            x.derivative().derivative()
        with self.assertRaises(OrderExhaustedError):
            x.truncate(3)

    def test_scalar_point(self):
        x = Jet.variable(0.5, 3)
        np.testing.assert_allclose(jets.exp(x)[3], np.exp(0.5))


class TestOrderSix(unittest.TestCase):
    """Derivatives up to order 6 at 100 random points against closed forms."""

    ORDER = 6

    def setUp(self):
        self.rng = np.random.default_rng(20240611)

    def points(self, low, high):
        return self.rng.uniform(low, high, 100)

    def assertDerivatives(self, jet, expected):
        for k in range(self.ORDER + 1):
            scale = max(1.0, float(np.max(np.abs(expected[k]))))
            np.testing.assert_allclose(jet[k], expected[k], rtol=1e-10, atol=1e-12 * scale,
                                       err_msg=f"derivative {k}")

    def assertPolynomialTower(self, jet, t, factor):
        # d^k f = P_k(t) with P_{k+1} = P_k' * factor
        p = Polynomial([0.0, 1.0])
        expected = []
        for _ in range(self.ORDER + 1):
            expected.append(p(t))
            p = p.deriv() * factor
        self.assertDerivatives(jet, expected)

    def test_exp(self):
        xs = self.points(-2.0, 2.0)
        self.assertDerivatives(jets.exp(Jet.variable(xs, self.ORDER)),
                               [np.exp(xs)] * (self.ORDER + 1))

    def test_sin_and_cos(self):
        xs = self.points(-3.0, 3.0)
        x = Jet.variable(xs, self.ORDER)
        shifts = [k * np.pi / 2.0 for k in range(self.ORDER + 1)]
        self.assertDerivatives(jets.sin(x), [np.sin(xs + s) for s in shifts])
        self.assertDerivatives(jets.cos(x), [np.cos(xs + s) for s in shifts])

    def test_sinh_and_cosh(self):
        xs = self.points(-2.0, 2.0)
        x = Jet.variable(xs, self.ORDER)
        orders = range(self.ORDER + 1)
        self.assertDerivatives(jets.sinh(x),
                               [np.sinh(xs) if k % 2 == 0 else np.cosh(xs) for k in orders])
        self.assertDerivatives(jets.cosh(x),
                               [np.cosh(xs) if k % 2 == 0 else np.sinh(xs) for k in orders])

    def test_power(self):
        xs = self.points(0.2, 3.0)
        a = 2.5
        expected = []
        falling = 1.0
        for k in range(self.ORDER + 1):
            expected.append(falling * xs ** (a - k))
            falling *= a - k
        self.assertDerivatives(jets.power(Jet.variable(xs, self.ORDER), a), expected)

    def test_reciprocal(self):
        xs = self.points(0.5, 3.0)
        expected = [(-1.0) ** k * math.factorial(k) / xs ** (k + 1)
                    for k in range(self.ORDER + 1)]
        self.assertDerivatives(jets.reciprocal(Jet.variable(xs, self.ORDER)), expected)

    def test_tanh(self):
        xs = self.points(-2.0, 2.0)
        self.assertPolynomialTower(jets.tanh(Jet.variable(xs, self.ORDER)), np.tanh(xs),
                                   Polynomial([1.0, 0.0, -1.0]))

    def test_cot(self):
        xs = self.points(0.3, np.pi - 0.3)
        self.assertPolynomialTower(jets.cot(Jet.variable(xs, self.ORDER)), 1.0 / np.tan(xs),
                                   Polynomial([-1.0, 0.0, -1.0]))

    def test_coth(self):
        xs = self.points(0.3, 3.0)
        self.assertPolynomialTower(jets.coth(Jet.variable(xs, self.ORDER)), 1.0 / np.tanh(xs),
                                   Polynomial([1.0, 0.0, -1.0]))


def run_tests():
    """Run all tests."""
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()

    suite.addTests(loader.loadTestsFromTestCase(TestArithmetic))
    suite.addTests(loader.loadTestsFromTestCase(TestElementary))
    suite.addTests(loader.loadTestsFromTestCase(TestOrderSix))
    suite.addTests(loader.loadTestsFromTestCase(TestOrders))

    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(suite)

    return 0 if result.wasSuccessful() else 1


if __name__ == '__main__':
    sys.exit(run_tests())
