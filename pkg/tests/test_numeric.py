"""Cross-checks between the exact pipeline and the complex128 one."""

import unittest

import numpy as np

from tools.klinvariants.fixture_registry import registry
from tools.klinvariants.kirby import evaluate_closed
from tools.klinvariants.numeric import NumericUq, agrees, float_value, numeric_uq
from tools.klinvariants.uqsl2 import hopf_coefficient, make_uq, stabilization_coefficient


class TestNumericAlgebra(unittest.TestCase):
    """The float model of u_q(sl2) on its own."""

    def test_rejects_small_r(self):
        """r below 3 is rejected."""
        with self.assertRaises(ValueError):
            NumericUq(2)

    def test_commutator(self):
        """[E, F] = (K - K^-1) / (q - q^-1) as left-multiplication matrices."""
        nu = numeric_uq(5)
        lhs = nu.left_E @ nu.left_F - nu.left_F @ nu.left_E
        rhs = (nu.left_K - nu.left_Kinv) / nu.brace(1)
        np.testing.assert_allclose(lhs, rhs, atol=1e-10)

    def test_k_inverse(self):
        """K K^-1 is the identity."""
        nu = numeric_uq(4)
        np.testing.assert_allclose(nu.left_K @ nu.left_Kinv, np.eye(nu.dim), atol=1e-12)

    def test_ribbon_inverse(self):
        """v+ v- = 1."""
        nu = numeric_uq(3)
        vp, vm = nu.ribbon(), nu.ribbon_inv()
        # left multiplication by v+ as a combination of PBW monomials
        product = np.zeros(nu.dim, dtype=np.complex128)
        n = nu.n
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    coeff = vp[nu.index(a, b, c)]
                    if coeff == 0:
                        continue
                    w = vm.copy()
                    for _ in range(c):
                        w = nu.left_K @ w
                    for _ in range(b):
                        w = nu.left_F @ w
                    for _ in range(a):
                        w = nu.left_E @ w
                    product += coeff * w
        np.testing.assert_allclose(product, nu.unit(), atol=1e-10)

    def test_cointegral_normalized(self):
        """lambda(Lambda) = 1."""
        nu = numeric_uq(6)
        self.assertAlmostEqual(nu.integral(nu.cointegral()), 1.0, places=10)

    def test_unknown_name(self):
        """Only named scalars have a float pipeline."""
        with self.assertRaises(KeyError):
            float_value("trefoil", 3)


class TestAgreement(unittest.TestCase):
    """Exact values embed onto the float values."""

    def test_stabilization(self):
        """lambda(v+) agrees on every residue class mod 8."""
        for r in range(3, 11):
            with self.subTest(r=r):
                exact = stabilization_coefficient(make_uq(r))
                self.assertTrue(agrees(exact, float_value("stabilization", r)))

    def test_hopf_coefficient(self):
        """(lambda (x) lambda)(M) agrees."""
        for r in (3, 4, 5, 6):
            with self.subTest(r=r):
                exact = hopf_coefficient(make_uq(r))
                self.assertTrue(agrees(exact, float_value("hopf", r)))

    def test_fixtures(self):
        """Fixture diagrams agree with their float counterparts."""
        for r in (3, 4, 5):
            ctx = make_uq(r)
            for name in ("unknot+1", "unknot-1", "unknot0", "clasp0"):
                with self.subTest(r=r, name=name):
                    exact = evaluate_closed(registry.get_fixture(name), ctx)
                    self.assertTrue(agrees(exact, float_value(name, r)))

    def test_disagreement_detected(self):
        """A wrong float value is not accepted."""
        exact = stabilization_coefficient(make_uq(3))
        self.assertFalse(agrees(exact, 1.0 + 0j))


if __name__ == "__main__":
    unittest.main()
