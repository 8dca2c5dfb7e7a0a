"""
Tests for representation classification, ladder norms and algebraic spectra.
"""

import math
import os
import sys
import unittest
from fractions import Fraction

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.errors import (
    InvalidInputError, NoBoundStateError, NonNormalizableError, QuantizationError,
)
from src.ladder import base_state
from src.models import (
    Direction, Family, HalfInteger, Mode, ModelParams, RepKind, Truncation,
)
from src.representation import (
    bound_state_window, canonical_representations, classify, excluded_bands,
    is_special_root, ladder_norm_sq, nu_max, one_dim_special_root, spectrum,
)


class TestNuMax(unittest.TestCase):

    def test_values(self):
        self.assertEqual(nu_max(9), HalfInteger(5))
        self.assertEqual(nu_max(1), HalfInteger(1))
        self.assertEqual(nu_max(Fraction(4)), HalfInteger(3))

    def test_boundary_is_exclusive(self):
        # sqrt(9/4) = 3/2 is not below sqrt(g)
        self.assertEqual(nu_max(Fraction(9, 4)), HalfInteger(1))
        self.assertIsNone(nu_max(Fraction(1, 4)))
        self.assertIsNone(nu_max(0.1))


class TestSpecialRoot(unittest.TestCase):

    def test_root_and_mirror(self):
        root, mirror = one_dim_special_root(0.16)
        self.assertAlmostEqual(root, 0.2)
        self.assertAlmostEqual(mirror, 0.8)
        self.assertTrue(is_special_root(root, 0.16))
        self.assertFalse(is_special_root(mirror, 0.16))

    def test_outside_range(self):
        self.assertIsNone(one_dim_special_root(0.25))
        self.assertIsNone(one_dim_special_root(0.0))
        self.assertFalse(is_special_root(0.5, 9.0))

    def test_excluded_bands(self):
        self.assertEqual(excluded_bands(9.0), ((-3.0, -2.0), (3.0, 4.0)))


class TestClassify(unittest.TestCase):

    def setUp(self):
        self.hyperbolic = ModelParams.create("hyperbolic", "1/2", "9")

    def test_finite(self):
        rep = classify(self.hyperbolic, HalfInteger(3))
        self.assertIs(rep.kind, RepKind.FINITE_DIM)
        self.assertEqual(rep.dim, 3)
        self.assertEqual(rep.orbit, (1.5, 0.5, -0.5))
        self.assertAlmostEqual(rep.energy, -38.25)

    def test_infinite_raising(self):
        rep = classify(self.hyperbolic, 5.0)
        self.assertIs(rep.kind, RepKind.INFINITE_RAISING)
        self.assertIsNone(rep.dim)
        self.assertEqual(rep.orbit_unbounded, "above")
        self.assertAlmostEqual(rep.energy, -16.0 - 81.0 / 16.0)
        self.assertEqual(rep.to_dict()['dim'], "infinite")

    def test_infinite_lowering(self):
        rep = classify(self.hyperbolic, -4.0)
        self.assertIs(rep.kind, RepKind.INFINITE_LOWERING)
        self.assertEqual(rep.orbit[:2], (-4.0, -5.0))
        self.assertEqual(rep.orbit_unbounded, "below")

    def test_excluded_band(self):
        rep = classify(self.hyperbolic, 3.5)
        self.assertIs(rep.kind, RepKind.EXCLUDED)
        self.assertEqual(rep.dim, 0)
        self.assertIn("no bound state", rep.reason)

    def test_window_needs_half_odd(self):
        self.assertIs(classify(self.hyperbolic, 1.0).kind, RepKind.EXCLUDED)
        self.assertIs(classify(self.hyperbolic, HalfInteger(-1)).kind, RepKind.EXCLUDED)

    def test_band_edges_are_closed(self):
        # nu = sqrt(g) and nu - 1 = sqrt(g) both sit in the excluded bands
        self.assertIs(classify(self.hyperbolic, 3.0).kind, RepKind.EXCLUDED)
        self.assertIs(classify(self.hyperbolic, 4.0).kind, RepKind.EXCLUDED)
        self.assertIs(classify(self.hyperbolic, 4.5).kind, RepKind.INFINITE_RAISING)

    def test_one_dim_special(self):
        params = ModelParams.create("hyperbolic", "1/2", "4/25")
        root, _ = one_dim_special_root(0.16)
        rep = classify(params, root)
        self.assertIs(rep.kind, RepKind.ONE_DIM_SPECIAL)
        self.assertEqual(rep.dim, 1)
        self.assertAlmostEqual(rep.energy, -0.68)

    def test_flat_rules(self):
        flat = ModelParams.create("flat", "1/2", "1")
        self.assertIs(classify(flat, HalfInteger(5)).kind, RepKind.FINITE_DIM)
        self.assertEqual(classify(flat, HalfInteger(5)).dim, 5)
        integer = classify(flat, 1.0)
        self.assertIs(integer.kind, RepKind.EXCLUDED)
        self.assertIn("j=0", integer.reason)
        self.assertIs(classify(flat, 0.3).kind, RepKind.EXCLUDED)

    def test_requires_positive_coupling(self):
        with self.assertRaises(InvalidInputError):
            classify(ModelParams.create("hyperbolic", "1/2", "0"), HalfInteger(1))


class TestExcludedBands(unittest.TestCase):

    def setUp(self):
        self.params = ModelParams.create("hyperbolic", "1/2", "9")

    def test_upper_band_has_no_highest_weight_state(self):
        for i in range(40):
            nu = 3.0 + (i + 0.5) / 40.0
            with self.subTest(nu=nu):
                self.assertIs(classify(self.params, nu).kind, RepKind.EXCLUDED)
                with self.assertRaises(NonNormalizableError):
                    base_state(Family.HYPERBOLIC, nu, 9.0)

    def test_lower_band_has_no_lowest_weight_state(self):
        # the lowest state at nu is killed by A+(1 - nu)
        for i in range(40):
            nu = -3.0 + (i + 0.5) / 40.0
            with self.subTest(nu=nu):
                self.assertIs(classify(self.params, nu).kind, RepKind.EXCLUDED)
                with self.assertRaises(NonNormalizableError):
                    base_state(Family.HYPERBOLIC, 1.0 - nu, 9.0)

    def test_closed_endpoints(self):
        for nu in ("3", "4", "-3", "-2"):
            with self.subTest(nu=nu):
                self.assertIs(classify(self.params, Fraction(nu)).kind, RepKind.EXCLUDED)

    def test_window_states_are_normalizable(self):
        for twice in (1, 3, 5):
            rep = classify(self.params, HalfInteger(twice))
            self.assertIs(rep.kind, RepKind.FINITE_DIM)
            base_state(Family.HYPERBOLIC, rep.nu, 9.0)


class TestCanonical(unittest.TestCase):

    def test_hyperbolic_listing(self):
        reps = canonical_representations(Family.HYPERBOLIC, 9.0)
        self.assertEqual([r.nu for r in reps], [0.5, 1.5, 2.5])
        self.assertTrue(all(r.kind is RepKind.FINITE_DIM for r in reps))

    def test_special_only(self):
        reps = canonical_representations(Family.ROSEN_MORSE, 0.16)
        self.assertEqual(len(reps), 1)
        self.assertIs(reps[0].kind, RepKind.ONE_DIM_SPECIAL)

    def test_flat_count(self):
        reps = canonical_representations(Family.FLAT, 1.0, count=4)
        self.assertEqual([r.dim for r in reps], [1, 3, 5, 7])


class TestLadderNorms(unittest.TestCase):

    def test_norms_vanish_at_orbit_ends(self):
        top = ModelParams.create("hyperbolic", "5/2", "9")
        energy = -6.25 - 81.0 / 6.25
        self.assertAlmostEqual(ladder_norm_sq(top, energy, Direction.UP), 0.0)
        bottom = top.with_j(1.0 - 2.5)
        self.assertAlmostEqual(ladder_norm_sq(bottom, energy, Direction.DOWN), 0.0)

    def test_interior_norms_positive(self):
        params = ModelParams.create("hyperbolic", "1/2", "9")
        energy = -6.25 - 81.0 / 6.25
        self.assertGreater(ladder_norm_sq(params, energy, Direction.UP), 0.0)
        self.assertGreater(ladder_norm_sq(params, energy, Direction.DOWN), 0.0)


class TestWindow(unittest.TestCase):

    def test_hyperbolic(self):
        window = bound_state_window(ModelParams.create("hyperbolic", "3/2", "9"))
        self.assertAlmostEqual(window.lower, 0.5 - math.sqrt(9.25))
        self.assertAlmostEqual(window.upper, 0.5 + math.sqrt(9.25))
        self.assertAlmostEqual(window.lower, -2.5414, places=4)

    def test_rosen_morse(self):
        window = bound_state_window(ModelParams.create("rosen-morse", "4", "1"))
        self.assertAlmostEqual(window.lower, 1.6180, places=4)
        self.assertEqual(window.upper, math.inf)


class TestSpectrum(unittest.TestCase):

    def test_flat(self):
        report = spectrum(ModelParams.create("flat", "1/2", "1"), n_max=2)
        for got, want in zip(report.energies, (-4.0, -4.0 / 9.0, -4.0 / 25.0)):
            self.assertAlmostEqual(got, want)
        self.assertIs(report.truncation, Truncation.CAPPED)
        self.assertEqual([line.j_end for line in report.lines], [0.5, 1.5, 2.5])

    def test_flat_needs_cap(self):
        with self.assertRaises(InvalidInputError):
            spectrum(ModelParams.create("flat", "1/2", "1"))

    def test_spherical(self):
        report = spectrum(ModelParams.create("spherical", "1/2", "1"), n_max=1)
        self.assertAlmostEqual(report.energies[0], -3.75)
        self.assertAlmostEqual(report.energies[1], 2.25 - 1.0 / 2.25)

    def test_hyperbolic(self):
        report = spectrum(ModelParams.create("hyperbolic", "3/2", "9"))
        self.assertEqual(len(report.lines), 2)
        self.assertAlmostEqual(report.energies[0], -38.25)
        self.assertAlmostEqual(report.energies[1], -19.21)
        self.assertIs(report.truncation, Truncation.FINITE)
        self.assertEqual(report.n_top, 1)
        self.assertFalse(report.extension)

    def test_hyperbolic_cap(self):
        report = spectrum(ModelParams.create("hyperbolic", "1/2", "9"), n_max=1)
        self.assertEqual(len(report.lines), 2)
        self.assertIs(report.truncation, Truncation.CAPPED)

    def test_rosen_morse(self):
        report = spectrum(ModelParams.create("rosen-morse", "4", "1"))
        self.assertAlmostEqual(report.energies[0], -9.0 - 1.0 / 9.0)
        self.assertAlmostEqual(report.energies[1], -4.25)
        self.assertEqual([line.j_end for line in report.lines], [4.0, 3.0])

    def test_rosen_morse_accepts_any_real_j(self):
        report = spectrum(ModelParams.create("rosen-morse", 3.3, 1.0))
        self.assertEqual(len(report.lines), 2)
        self.assertAlmostEqual(report.energies[1], -1.3 ** 2 - 1.0 / 1.3 ** 2)
        self.assertFalse(report.extension)

    def test_rosen_morse_window(self):
        with self.assertRaises(NoBoundStateError) as ctx:
            spectrum(ModelParams.create("rosen-morse", "3/2", "1"))
        self.assertTrue(ctx.exception.window)

    def test_strict_needs_exact_half_odd(self):
        with self.assertRaises(QuantizationError):
            spectrum(ModelParams.create("hyperbolic", 1.5, 9.0))
        with self.assertRaises(QuantizationError):
            spectrum(ModelParams.create("hyperbolic", "2", "9"))

    def test_hyperbolic_outside_window(self):
        with self.assertRaises(NoBoundStateError):
            spectrum(ModelParams.create("hyperbolic", "7/2", "9"))
        with self.assertRaises(NoBoundStateError):
            spectrum(ModelParams.create("hyperbolic", "1/2", "1/5"))

    def test_special_root(self):
        root, _ = one_dim_special_root(0.16)
        report = spectrum(ModelParams.create("hyperbolic", root, "4/25"))
        self.assertEqual(len(report.lines), 1)
        self.assertAlmostEqual(report.energies[0], -0.68)
        self.assertTrue(report.warnings)

    def test_extended_mode(self):
        params = ModelParams.create("hyperbolic", 1.7, 9.0)
        report = spectrum(params, mode=Mode.EXTENDED)
        self.assertEqual(len(report.lines), 2)
        self.assertTrue(report.extension)
        self.assertTrue(any("extension" in w for w in report.warnings))
        self.assertAlmostEqual(report.energies[0], -1.7 ** 2 - 81.0 / 1.7 ** 2)

    def test_negative_cap(self):
        with self.assertRaises(InvalidInputError):
            spectrum(ModelParams.create("flat", "1/2", "1"), n_max=-1)

    def test_energies_increase_with_n(self):
        reports = (
            spectrum(ModelParams.create("flat", "1/2", "1"), n_max=10),
            spectrum(ModelParams.create("spherical", "1/2", "1"), n_max=10),
            spectrum(ModelParams.create("hyperbolic", "1/2", "100")),
            spectrum(ModelParams.create("rosen-morse", "10", "1")),
        )
        for report in reports:
            energies = list(report.energies)
            with self.subTest(family=report.params.family.value):
                self.assertGreater(len(energies), 5)
                for lower, upper in zip(energies, energies[1:]):
                    self.assertLess(lower, upper)


def run_tests():
    """Run all tests."""
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()

    for case in (TestNuMax, TestSpecialRoot, TestClassify, TestExcludedBands,
                 TestCanonical, TestLadderNorms, TestWindow, TestSpectrum):
        suite.addTests(loader.loadTestsFromTestCase(case))

    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(suite)

    return 0 if result.wasSuccessful() else 1


if __name__ == '__main__':
    sys.exit(run_tests())
