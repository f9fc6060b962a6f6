"""Tests for bead tracing and closed-diagram evaluation."""

import unittest

from tools.klinvariants.algdsl import evaluate_scalar, parse
from tools.klinvariants.diagram_schema import DiagramValidationError, SliceDiagram
from tools.klinvariants.kirby import (
    PIVOTAL,
    Bead,
    Census,
    SignedDiagram,
    bead,
    disjoint_union,
    evaluate_closed,
    evaluate_signed_closed,
    fixtures,
    validate,
)
from tools.klinvariants.uqsl2 import (
    AlgebraElement,
    TwistDegenerateError,
    antipode_inv_monomial,
    cointegral,
    coproduct,
    integral,
    make_uq,
    multiply,
    ribbon_inv,
    stabilization_coefficient,
)

UNKNOT_PLUS = SliceDiagram.of("cup", "xpos", "cap")
UNKNOT_MINUS = SliceDiagram.of("cup", "xneg", "cap")
HOPF = SliceDiagram.of(
    "cup cup", "vert xpos vert", "vert xpos vert", "cap cap",
)


class TestTracing(unittest.TestCase):
    """Component tracing and bead placement."""

    def test_fixture_names(self):
        """All built-in fixtures are discovered."""
        self.assertEqual(
            sorted(fixtures()),
            [
                "cancel-pair", "cancel-pair+1", "clasp0", "hopf", "hopf-slid",
                "unknot+1", "unknot-1", "unknot0",
            ],
        )

    def test_census(self):
        """Undotted components, dotted circles and crossings."""
        fx = fixtures()
        self.assertEqual(validate(fx["hopf"]), Census(2, 0, 2))
        self.assertEqual(validate(fx["unknot0"]), Census(1, 0, 0))
        self.assertEqual(validate(fx["clasp0"]), Census(0, 1, 0))
        self.assertEqual(validate(fx["cancel-pair"]), Census(1, 1, 0))
        self.assertEqual(validate(fx["hopf-slid"]).to_dict(),
                         {"undotted": 2, "dotted": 0, "crossings": 4})

    def test_kink_beads(self):
        """A positive kink reads R' upward, then S(R'') downward."""
        beaded = bead(UNKNOT_PLUS)
        self.assertEqual(
            beaded.components, [[Bead(0, 0), Bead(0, 1, downward=True)]],
        )

    def test_plain_circle_carries_pivotal(self):
        """Passing the cap left to right inserts g."""
        beaded = bead(SliceDiagram.of("cup", "cap"))
        self.assertEqual(beaded.components, [[Bead(PIVOTAL, 1)]])

    def test_open_diagram_rejected(self):
        """Open endpoints and width mismatches raise."""
        with self.assertRaises(DiagramValidationError):
            validate(SliceDiagram.of("cup"))
        with self.assertRaises(DiagramValidationError):
            validate(SliceDiagram.of("cup", "xpos vert", "cap"))


class TestEvaluation(unittest.TestCase):
    """Closed-diagram scalars."""

    def test_kinks_give_ribbon_coefficients(self):
        """The +1 and -1 framed unknots give lambda(v+) and lambda(v-)."""
        for r in (3, 4, 5):
            with self.subTest(r=r):
                ctx = make_uq(r)
                self.assertEqual(
                    evaluate_closed(UNKNOT_PLUS, ctx), stabilization_coefficient(ctx),
                )
                self.assertEqual(
                    evaluate_closed(UNKNOT_MINUS, ctx), integral(ribbon_inv(ctx)),
                )

    def test_vanishing_diagrams(self):
        """0-framed unknot, empty clasp and a doubly clasped unknot give 0."""
        ctx = make_uq(3)
        fx = fixtures()
        self.assertEqual(evaluate_closed(fx["unknot0"], ctx), 0)
        self.assertEqual(evaluate_closed(fx["clasp0"], ctx), 0)
        self.assertEqual(evaluate_closed(SliceDiagram.of("cup", "clasp2", "cap"), ctx), 0)

    def test_hopf_link(self):
        """The 0-framed Hopf link gives (-1)^{r'-1}."""
        for r in (3, 4, 5):
            with self.subTest(r=r):
                ctx = make_uq(r)
                self.assertEqual(evaluate_closed(HOPF, ctx), (-1) ** (ctx.rprime - 1))

    def test_hopf_link_matches_word(self):
        """Diagram and morphism word agree."""
        ctx = make_uq(3)
        self.assertEqual(
            evaluate_closed(fixtures()["hopf"], ctx),
            evaluate_scalar(parse("wplus ; (lambda * lambda)"), ctx),
        )

    def test_cancelling_pairs(self):
        """A 1-handle with its cancelling 2-handle gives 1."""
        fx = fixtures()
        for r in (3, 4, 5):
            with self.subTest(r=r):
                ctx = make_uq(r)
                self.assertEqual(evaluate_closed(fx["cancel-pair"], ctx), 1)
                self.assertEqual(evaluate_closed(fx["cancel-pair+1"], ctx), 1)

    def test_handle_slide_invariance(self):
        """Hopf link framings (0, 2) give the same scalar as (0, 0)."""
        fx = fixtures()
        for r in (3, 4):
            with self.subTest(r=r):
                ctx = make_uq(r)
                self.assertEqual(
                    evaluate_closed(fx["hopf-slid"], ctx), evaluate_closed(fx["hopf"], ctx),
                )

    def test_handle_slide_as_words(self):
        """Twisting one Hopf component by v+^2 leaves the scalar unchanged."""
        slid = parse(
            "wplus ; (lambda * ((id_1 * vplus) ; mu ; (id_1 * vplus) ; mu ; lambda))"
        )
        plain = parse("wplus ; (lambda * lambda)")
        for r in (3, 4, 5):
            with self.subTest(r=r):
                ctx = make_uq(r)
                self.assertEqual(evaluate_scalar(slid, ctx), evaluate_scalar(plain, ctx))

    def test_clasp_cancels_through_cointegral(self):
        """lambda(S^-1(Lambda_(1)) x) Lambda_(2) = x on every basis element."""
        for r in (3, 4):
            with self.subTest(r=r):
                ctx = make_uq(r)
                split = coproduct(cointegral(ctx)).terms.items()
                for m in ctx.basis():
                    x = AlgebraElement.monomial(ctx, m)
                    recovered = AlgebraElement.combine(
                        ctx,
                        (
                            (
                                AlgebraElement.monomial(ctx, m2),
                                v * integral(multiply(antipode_inv_monomial(ctx, m1), x)),
                            )
                            for (m1, m2), v in split
                        ),
                    )
                    self.assertEqual(recovered, x, m)

    def test_disjoint_union_is_multiplicative(self):
        """Stacked diagrams multiply."""
        ctx = make_uq(3)
        stab = stabilization_coefficient(ctx)
        self.assertEqual(evaluate_closed(disjoint_union(UNKNOT_PLUS, UNKNOT_PLUS), ctx), stab**2)
        self.assertEqual(
            evaluate_closed(disjoint_union(HOPF, UNKNOT_MINUS), ctx),
            evaluate_closed(HOPF, ctx) * evaluate_closed(UNKNOT_MINUS, ctx),
        )


class TestSignedEvaluation(unittest.TestCase):
    """Signature-normalized scalars."""

    def test_framed_unknots_normalize_to_one(self):
        """(unknot+1, 1) and (unknot-1, -1) both give 1."""
        ctx = make_uq(3)
        self.assertEqual(evaluate_signed_closed(SignedDiagram(UNKNOT_PLUS, 1), ctx), 1)
        self.assertEqual(evaluate_signed_closed(SignedDiagram(UNKNOT_MINUS, -1), ctx), 1)

    def test_stabilization_shifts_defect(self):
        """Adding a +1 unknot and raising n by one leaves the value unchanged."""
        for r in (3, 5):
            for name, d in (("hopf", HOPF), ("unknot+1", UNKNOT_PLUS)):
                with self.subTest(r=r, diagram=name):
                    ctx = make_uq(r)
                    base = evaluate_signed_closed(SignedDiagram(d, 0), ctx)
                    stabilized = evaluate_signed_closed(
                        SignedDiagram(disjoint_union(d, UNKNOT_PLUS), 1), ctx,
                    )
                    self.assertEqual(stabilized, base)

    def test_degenerate_twist(self):
        """At r = 8 the signed invariant is refused."""
        with self.assertRaises(TwistDegenerateError):
            evaluate_signed_closed(SignedDiagram(UNKNOT_PLUS, 1), make_uq(8))


if __name__ == "__main__":
    unittest.main()
