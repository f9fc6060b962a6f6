"""Tests for the braided Hopf algebra on the adjoint module."""

import unittest

from tools.klinvariants.transmute import (
    GEN_ARITIES,
    ArityError,
    GenMap,
    add_copairing_laws,
    adjoint_act,
    apply_named,
    copairing_matrix_rank,
    expected_failures,
    gen_apply,
    t_antipode,
    t_antipode_inv,
    t_copairing,
    t_copairing_neg,
    verify_anomaly_free,
    verify_bp_ribbon,
    verify_bp_unimodular,
    verify_braided_hopf,
    verify_modular,
)
from tools.klinvariants.uqsl2 import (
    AlgebraElement,
    TensorElement,
    VerificationReport,
    antipode_monomial,
    basis_pairs,
    coproduct,
    counit,
    gen_E,
    gen_F,
    gen_K,
    make_uq,
    product,
    ribbon,
    ribbon_inv,
)


def _failed(report):
    return {c.name for c in report.checks if not c.passed}


class TestGenerators(unittest.TestCase):
    """Arity table and generic application."""

    def test_arities(self):
        """mu is (2, 1), the copairings are (0, 2), the braidings (2, 2)."""
        self.assertEqual(GEN_ARITIES["mu"], (2, 1))
        self.assertEqual(GEN_ARITIES["wplus"], (0, 2))
        self.assertEqual(GEN_ARITIES["braid_inv"], (2, 2))
        self.assertEqual(len(GEN_ARITIES), 14)

    def test_unknown_generator(self):
        """An unknown name is rejected."""
        with self.assertRaises(ValueError):
            GenMap.named("nu")

    def test_arity_error(self):
        """Applying mu to a rank-1 vector raises ArityError."""
        ctx = make_uq(3)
        v = TensorElement.from_algebra(gen_E(ctx))
        with self.assertRaises(ArityError):
            gen_apply(GenMap.named("mu"), v)
        with self.assertRaises(ArityError):
            apply_named("eps", v, start=1)

    def test_nullary_application_inserts_slots(self):
        """eta at slot 1 of a rank-1 vector yields rank 2."""
        ctx = make_uq(3)
        v = TensorElement.from_algebra(gen_F(ctx))
        out = apply_named("eta", v, start=1)
        self.assertEqual(out.rank, 2)
        self.assertEqual(out, TensorElement.pure([gen_F(ctx), AlgebraElement.one(ctx)]))

    def test_adjoint_action_of_unit_and_k(self):
        """1 |> x = x and K |> E = q^2 E."""
        ctx = make_uq(3)
        E = gen_E(ctx)
        self.assertEqual(adjoint_act(AlgebraElement.one(ctx), E), E)
        self.assertEqual(adjoint_act(gen_K(ctx), E), E.scale(ctx.q(2)))

    def test_antipode_pair(self):
        """S^-1 inverts the braided antipode on a mixed element."""
        ctx = make_uq(3)
        x = product([gen_E(ctx), gen_F(ctx)]) + gen_K(ctx)
        self.assertEqual(t_antipode_inv(t_antipode(x)), x)
        self.assertEqual(t_antipode(t_antipode_inv(x)), x)

    def test_counit_of_braided_coproduct(self):
        """(eps (x) id) Delta(E) = E."""
        ctx = make_uq(4)
        v = TensorElement.from_algebra(gen_E(ctx))
        out = apply_named("eps", apply_named("delta", v), 0)
        self.assertEqual(out.to_algebra(), gen_E(ctx))
        self.assertEqual(counit(gen_E(ctx)), 0)


class TestCopairings(unittest.TestCase):
    """The copairings against the ribbon structure."""

    def test_positive_copairing_from_ribbon(self):
        """w+ = (S (x) id)(Delta(v-) (v+ (x) v+))."""
        ctx = make_uq(3)
        vp, vm = ribbon(ctx), ribbon_inv(ctx)
        monodromy = coproduct(vm) * TensorElement.pure([vp, vp])
        expected = monodromy.apply_algebra(0, lambda m: antipode_monomial(ctx, m))
        self.assertEqual(t_copairing(ctx), expected)

    def test_copairing_counit(self):
        """(eps (x) id)(w-) = 1."""
        ctx = make_uq(4)
        out = apply_named("eps", t_copairing_neg(ctx), 0)
        self.assertEqual(out.to_algebra(), AlgebraElement.one(ctx))


class TestSuites(unittest.TestCase):
    """Axiom suites against the classification."""

    def test_braided_hopf(self):
        """The braided Hopf axioms hold on every basis pair."""
        for r in (3, 4):
            with self.subTest(r=r):
                report = verify_braided_hopf(make_uq(r), sample_size=15, seed=2)
                self.assertTrue(report.passed, report.to_dict())

    def test_pairs_cover_the_basis(self):
        """Two-input laws see every pair unless a pair sample is requested."""
        ctx = make_uq(3)
        self.assertEqual(len(basis_pairs(ctx)), 729)
        self.assertEqual(len(basis_pairs(ctx, pair_sample=5)), 16 + 5)

    def test_braided_hopf_sampled_pairs(self):
        """A positive pair sample is accepted and still passes."""
        report = verify_braided_hopf(make_uq(4), sample_size=5, seed=1, pair_sample=20)
        self.assertTrue(report.passed, report.to_dict())

    def test_bp_ribbon(self):
        """Ribbon checks pass with the braided coproduct and braiding."""
        for r in (3, 4):
            with self.subTest(r=r):
                report = verify_bp_ribbon(make_uq(r))
                self.assertTrue(report.passed, report.to_dict())
        names = {c.name for c in report.checks}
        self.assertTrue(
            {"copairing-coproduct-left", "copairing-coproduct-right", "copairing-braiding"}
            <= names,
        )
        self.assertIsNone(report.check("ribbon-coproduct").note)
        self.assertIsNone(report.check("copairing-counit").note)
        self.assertEqual(report.check("copairing-braiding").note, "reformulation-based")

    def test_copairing_laws_reject_rescaled_copairing(self):
        """2 w+ satisfies neither copairing law."""
        ctx = make_uq(4)
        report = VerificationReport("bp-ribbon", 4)
        add_copairing_laws(report, t_copairing(ctx).scale(2))
        self.assertEqual(
            _failed(report), {"copairing-coproduct-left", "copairing-coproduct-right"},
        )

    def test_copairing_laws_need_rank_two(self):
        """A rank-1 vector is not a copairing."""
        ctx = make_uq(4)
        with self.assertRaises(ArityError):
            vplus = apply_named("vplus", TensorElement.one(ctx, 0))
            add_copairing_laws(VerificationReport("bp-ribbon", 4), vplus)

    def test_bp_unimodular(self):
        """Integral axioms pass exactly."""
        for r in (3, 4):
            with self.subTest(r=r):
                report = verify_bp_unimodular(make_uq(r))
                self.assertTrue(report.passed, report.to_dict())

    def test_modular_factorizable(self):
        """At r = 3 the copairing is non-degenerate."""
        report = verify_modular(make_uq(3))
        self.assertTrue(report.passed, report.to_dict())
        self.assertEqual(copairing_matrix_rank(make_uq(3)), 27)

    def test_modular_degenerate(self):
        """At r = 4 the copairing degenerates exactly as predicted."""
        report = verify_modular(make_uq(4))
        self.assertEqual(_failed(report), expected_failures("modular", 4))
        self.assertIn("copairing-nondegenerate", _failed(report))
        self.assertTrue(report.check("agrees-with-drinfeld-map").passed)

    def test_modular_prediction_at_eight(self):
        """At r = 8 both the copairing and the twist degenerate."""
        report = verify_modular(make_uq(8))
        self.assertEqual(_failed(report), expected_failures("modular", 8))
        self.assertTrue(report.check("agrees-with-drinfeld-map").passed)

    def test_modular_predictions_at_multiples_of_four(self):
        """r = 12 keeps a non-degenerate twist, r = 16 does not."""
        self.assertEqual(expected_failures("modular", 12), {"copairing-nondegenerate"})
        self.assertEqual(
            expected_failures("modular", 16), {"copairing-nondegenerate", "twist-nondegenerate"},
        )

    def test_anomaly_free(self):
        """lambda(v+) = 1 only in the favourable residue classes."""
        self.assertEqual(
            _failed(verify_anomaly_free(make_uq(3))), expected_failures("anomaly-free", 3),
        )
        self.assertEqual(_failed(verify_anomaly_free(make_uq(4))), set())

    def test_expected_failures_other_suites(self):
        """Suites without predictions expect no failures."""
        self.assertEqual(expected_failures("braided-hopf", 8), set())
        self.assertEqual(
            expected_failures("modular", 8), {"copairing-nondegenerate", "twist-nondegenerate"},
        )


if __name__ == "__main__":
    unittest.main()
