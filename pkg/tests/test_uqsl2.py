"""Tests for exact u_q(sl2): relations, Hopf structure, R-matrix, integrals."""

import unittest

from tools.klinvariants.cyclo import CycloScalar, imag_unit
from tools.klinvariants.uqsl2 import (
    AlgebraElement,
    TensorElement,
    TwistDegenerateError,
    antipode,
    antipode_inv,
    cointegral,
    counit,
    coproduct,
    drinfeld_u,
    drinfeld_u_inv,
    factorizable_expected,
    gen_E,
    gen_F,
    gen_K,
    hopf_closed_form,
    hopf_coefficient,
    integral,
    is_factorizable,
    make_uq,
    multiply,
    product,
    r_matrix,
    ribbon,
    ribbon_closed_form,
    ribbon_inv,
    signed_normalization,
    stabilization_closed_form,
    stabilization_coefficient,
    twist_nondegenerate_expected,
    verify_closed_forms,
    verify_hopf_axioms,
    verify_integral_laws,
    verify_quasitriangular,
)


class TestRelations(unittest.TestCase):
    """Defining relations in the PBW normal form."""

    def setUp(self):
        self.ctx = make_uq(5)
        self.E, self.F, self.K = gen_E(self.ctx), gen_F(self.ctx), gen_K(self.ctx)

    def test_dimension(self):
        """dim = r'^3."""
        self.assertEqual(make_uq(3).dim, 27)
        self.assertEqual(make_uq(4).dim, 8)
        self.assertEqual(make_uq(6).dim, 27)

    def test_k_conjugates_e_and_f(self):
        """K E K^-1 = q^2 E and K F K^-1 = q^-2 F."""
        Kinv = gen_K(self.ctx, -1)
        self.assertEqual(product([self.K, self.E, Kinv]), self.E.scale(self.ctx.q(2)))
        self.assertEqual(product([self.K, self.F, Kinv]), self.F.scale(self.ctx.q(-2)))

    def test_commutator(self):
        """[E, F] = (K - K^-1) / (q - q^-1)."""
        lhs = multiply(self.E, self.F) - multiply(self.F, self.E)
        brace = self.ctx.q(1) - self.ctx.q(-1)
        rhs = (self.K - gen_K(self.ctx, -1)).scale(brace.inv())
        self.assertEqual(lhs, rhs)

    def test_nilpotency_and_cyclicity(self):
        """E^r' = F^r' = 0 and K^r' = 1."""
        n = self.ctx.rprime
        self.assertTrue(product([self.E] * n).is_zero())
        self.assertTrue(product([self.F] * n).is_zero())
        self.assertEqual(gen_K(self.ctx, n), AlgebraElement.one(self.ctx))

    def test_even_r_halves_the_order(self):
        """At r = 4 the nilpotency order is r' = 2."""
        ctx = make_uq(4)
        E = gen_E(ctx)
        self.assertFalse(E.is_zero())
        self.assertTrue(multiply(E, E).is_zero())


class TestHopfStructure(unittest.TestCase):
    """Coproduct, counit, antipode."""

    def test_counit_on_generators(self):
        """eps(E) = eps(F) = 0 and eps(K) = 1."""
        ctx = make_uq(3)
        self.assertEqual(counit(gen_E(ctx)), 0)
        self.assertEqual(counit(gen_F(ctx)), 0)
        self.assertEqual(counit(gen_K(ctx)), 1)

    def test_coproduct_of_e(self):
        """Delta(E) = E (x) K + 1 (x) E."""
        ctx = make_uq(3)
        E, K, one = gen_E(ctx), gen_K(ctx), AlgebraElement.one(ctx)
        expected = TensorElement.pure([E, K]) + TensorElement.pure([one, E])
        self.assertEqual(coproduct(E), expected)

    def test_antipode_inverse(self):
        """S and S^-1 undo each other on E F K."""
        ctx = make_uq(4)
        x = product([gen_E(ctx), gen_F(ctx), gen_K(ctx)])
        self.assertEqual(antipode(antipode_inv(x)), x)
        self.assertEqual(antipode_inv(antipode(x)), x)

    def test_antipode_inverse_of_e(self):
        """S^-1(E) = -K^-1 E."""
        ctx = make_uq(5)
        expected = -multiply(gen_K(ctx, -1), gen_E(ctx))
        self.assertEqual(antipode_inv(gen_E(ctx)), expected)

    def test_hopf_axioms_small_r(self):
        """The sampled Hopf suite passes at r = 3 and r = 4."""
        for r in (3, 4):
            with self.subTest(r=r):
                report = verify_hopf_axioms(make_uq(r), sample_size=40, seed=1)
                self.assertTrue(report.passed, report.to_dict())


class TestBraiding(unittest.TestCase):
    """R-matrix, Drinfeld element and ribbon element."""

    def test_quasitriangular_suite(self):
        """R-matrix axioms and ribbon laws hold exactly."""
        for r in (3, 4):
            with self.subTest(r=r):
                report = verify_quasitriangular(make_uq(r))
                self.assertTrue(report.passed, report.to_dict())

    def test_r_matrix_counit(self):
        """(eps (x) eps)(R) = 1."""
        ctx = make_uq(3)
        R = r_matrix(ctx)
        total = CycloScalar.zero(ctx.cyclo)
        for (m1, m2), v in R.terms.items():
            total = total + v * counit(AlgebraElement.monomial(ctx, m1)) * counit(
                AlgebraElement.monomial(ctx, m2)
            )
        self.assertEqual(total, 1)

    def test_drinfeld_element_inverse(self):
        """u u^-1 = 1."""
        ctx = make_uq(5)
        self.assertEqual(
            multiply(drinfeld_u(ctx), drinfeld_u_inv(ctx)), AlgebraElement.one(ctx),
        )

    def test_ribbon_is_central(self):
        """v+ commutes with the generators and v+ v- = 1."""
        ctx = make_uq(5)
        vp = ribbon(ctx)
        for g in (gen_E(ctx), gen_F(ctx), gen_K(ctx)):
            self.assertEqual(multiply(vp, g), multiply(g, vp))
        self.assertEqual(multiply(vp, ribbon_inv(ctx)), AlgebraElement.one(ctx))

    def test_closed_forms(self):
        """Definitional v+, v- and M equal their closed forms."""
        for r in (3, 4, 5, 6, 8, 12):
            with self.subTest(r=r):
                report = verify_closed_forms(make_uq(r))
                self.assertTrue(report.passed, report.to_dict())

    def test_ribbon_closed_form_at_large_r(self):
        """v+ and v- match their closed forms at r = 12 and r = 16."""
        for r in (12, 16):
            with self.subTest(r=r):
                ctx = make_uq(r)
                self.assertEqual(ribbon(ctx), ribbon_closed_form(ctx))
                self.assertEqual(ribbon_inv(ctx), ribbon_closed_form(ctx, inverse=True))


class TestIntegrals(unittest.TestCase):
    """Integral and cointegral."""

    def test_normalization(self):
        """lambda(Lambda) = 1."""
        for r in (3, 4, 6, 8):
            with self.subTest(r=r):
                self.assertEqual(integral(cointegral(make_uq(r))), 1)

    def test_cointegral_counit(self):
        """eps(Lambda) = 0 for every r."""
        for r in (3, 4, 5):
            with self.subTest(r=r):
                self.assertEqual(counit(cointegral(make_uq(r))), 0)

    def test_integral_laws(self):
        """Left integral, unibalance, two-sided cointegral, trace law."""
        for r in (3, 4):
            with self.subTest(r=r):
                report = verify_integral_laws(make_uq(r))
                self.assertTrue(report.passed, report.to_dict())


class TestCoefficients(unittest.TestCase):
    """Stabilization and Hopf-link coefficients."""

    def test_stabilization_at_three(self):
        """lambda(v+) = i at r = 3."""
        ctx = make_uq(3)
        self.assertEqual(stabilization_coefficient(ctx), imag_unit(ctx.cyclo))

    def test_stabilization_matches_closed_form(self):
        """Definitional and closed-form lambda(v+) agree on every residue class."""
        for r in (*range(3, 9), 12, 16):
            with self.subTest(r=r):
                ctx = make_uq(r)
                self.assertEqual(stabilization_coefficient(ctx), stabilization_closed_form(ctx))

    def test_twist_degeneracy(self):
        """lambda(v+) vanishes exactly at r = 0 mod 8."""
        for r in (3, 4, 6, 8):
            with self.subTest(r=r):
                ctx = make_uq(r)
                self.assertEqual(
                    not stabilization_coefficient(ctx).is_zero(),
                    twist_nondegenerate_expected(r),
                )

    def test_hopf_coefficient(self):
        """(lambda (x) lambda)(M) = (-1)^{r'-1}."""
        for r in (3, 4, 5, 6, 8, 12):
            with self.subTest(r=r):
                ctx = make_uq(r)
                self.assertEqual(hopf_coefficient(ctx), hopf_closed_form(ctx))
                self.assertEqual(hopf_coefficient(ctx), (-1) ** (ctx.rprime - 1))

    def test_factorizability(self):
        """The Drinfeld map is bijective exactly when r != 0 mod 4."""
        for r in (3, 4, 6, 8):
            with self.subTest(r=r):
                self.assertEqual(is_factorizable(make_uq(r)), factorizable_expected(r))

    def test_classification_at_multiples_of_four(self):
        """r = 8, 12, 16 are all non-factorizable; only r = 12 keeps lambda(v+) != 0."""
        for r, twist in ((8, False), (12, True), (16, False)):
            with self.subTest(r=r):
                self.assertFalse(factorizable_expected(r))
                self.assertEqual(twist_nondegenerate_expected(r), twist)
                self.assertEqual(
                    not stabilization_closed_form(make_uq(r)).is_zero(), twist,
                )

    def test_signed_normalization(self):
        """lambda(v+)^-n, refused when lambda(v+) = 0."""
        ctx = make_uq(3)
        i = imag_unit(ctx.cyclo)
        self.assertEqual(signed_normalization(ctx, 0), 1)
        self.assertEqual(signed_normalization(ctx, 1), -i)
        self.assertEqual(signed_normalization(ctx, -2), -1)
        with self.assertRaises(TwistDegenerateError):
            signed_normalization(make_uq(8), 0)


if __name__ == "__main__":
    unittest.main()
