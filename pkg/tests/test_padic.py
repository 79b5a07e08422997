"""
Unit tests for truncated p-adic arithmetic, Hensel lifting and the unit
characterization by roots.
"""

from __future__ import annotations

import importlib
import math
import sys
from fractions import Fraction
from pathlib import Path
import unittest

from hypothesis import given, settings, strategies as st

SRC_DIR = Path(__file__).resolve().parents[1] / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

padic = importlib.import_module("sd-toolkit.padic")
utils_mod = importlib.import_module("sd-toolkit.utils")

PadicNumber = padic.PadicNumber
ZpPoly = padic.ZpPoly

SMALL_PRIMES = st.sampled_from([2, 3, 5, 7, 11, 13])
NONZERO_RATIONALS = st.builds(
    Fraction,
    st.integers(min_value=-1000, max_value=1000).filter(lambda n: n != 0),
    st.integers(min_value=1, max_value=1000),
)


class PadicNumberTests(unittest.TestCase):
    def test_digits_of_small_values(self) -> None:
        x = padic.from_rational(108, 7, 3)
        self.assertEqual(x.digits, (3, 1, 2))
        self.assertEqual(padic.format_digits(x), "valuation=0 digits=3,1,2")
        self.assertEqual(str(padic.from_rational(49, 7, 2)), "valuation=2 digits=1,0")
        self.assertEqual(padic.from_rational(-1, 5, 4).digits, (4, 4, 4, 4))

    def test_zero_marker(self) -> None:
        zero = padic.from_rational(0, 5)
        self.assertTrue(zero.is_zero)
        self.assertEqual(padic.valuation(zero), math.inf)
        self.assertEqual(padic.padic_norm(zero), 0)
        self.assertEqual(padic.format_digits(zero), "valuation=inf digits=")
        self.assertEqual(padic.from_residue(343, 7, 3), PadicNumber.zero(7))

    def test_inverse_of_two_agrees_with_one_half(self) -> None:
        half = padic.from_rational(Fraction(1, 2), 5)
        self.assertTrue(half.is_unit)
        self.assertTrue(half.agrees_with(Fraction(1, 2)))
        self.assertFalse(half.agrees_with(Fraction(1, 3)))
        self.assertTrue(padic.mul(half, padic.from_rational(2, 5)).agrees_with(1))

    def test_norm_and_valuation(self) -> None:
        x = padic.from_rational(Fraction(1, 25), 5)
        self.assertEqual(padic.valuation(x), -2)
        self.assertEqual(padic.padic_norm(x), 25)
        self.assertEqual(padic.padic_norm(padic.from_rational(50, 5)), Fraction(1, 25))

    def test_invalid_construction(self) -> None:
        with self.assertRaises(utils_mod.ContractError):
            PadicNumber(5, 0, 10, 3)
        with self.assertRaises(utils_mod.PrecisionError):
            PadicNumber(5, 0, 1, 0)
        with self.assertRaises(utils_mod.UserError):
            padic.from_rational(1, 6)
        with self.assertRaises(utils_mod.UserError):
            padic.from_rational(1, 5, 0)

    def test_mixed_primes_rejected(self) -> None:
        with self.assertRaises(utils_mod.ContractError):
            padic.add(padic.from_rational(1, 5), padic.from_rational(1, 7))

    def test_total_cancellation_raises(self) -> None:
        x = padic.from_rational(1, 7, 4)
        with self.assertRaises(utils_mod.PrecisionError):
            padic.sub(x, x)

    def test_cancellation_loses_precision(self) -> None:
        x = padic.from_rational(1, 7, 4)
        y = padic.from_rational(1 + 7**2, 7, 4)
        diff = padic.sub(y, x)
        self.assertEqual(diff.valuation, 2)
        self.assertEqual(diff.absolute_precision, 4)

    def test_inverse_of_zero(self) -> None:
        with self.assertRaises(utils_mod.FieldZeroDivisionError):
            padic.inv(PadicNumber.zero(5))

    def test_to_dict(self) -> None:
        self.assertEqual(
            padic.from_rational(14, 7, 2).to_dict(),
            {"p": 7, "valuation": 1, "digits": [2, 0], "precision": 2},
        )

    @settings(max_examples=60, deadline=None)
    @given(SMALL_PRIMES, NONZERO_RATIONALS, NONZERO_RATIONALS)
    def test_sum_and_product_agree_with_rationals(self, p: int, a: Fraction, b: Fraction) -> None:
        x = padic.from_rational(a, p)
        y = padic.from_rational(b, p)
        self.assertTrue(padic.mul(x, y).agrees_with(a * b))
        self.assertTrue(padic.div(x, y).agrees_with(a / b))
        if a + b != 0:
            self.assertTrue(padic.add(x, y).agrees_with(a + b))

    @settings(max_examples=60, deadline=None)
    @given(SMALL_PRIMES, NONZERO_RATIONALS, NONZERO_RATIONALS)
    def test_ultrametric_and_multiplicative_norm(self, p: int, a: Fraction, b: Fraction) -> None:
        x = padic.from_rational(a, p)
        y = padic.from_rational(b, p)
        self.assertEqual(padic.padic_norm(x * y), padic.padic_norm(x) * padic.padic_norm(y))
        if a + b != 0:
            self.assertGreaterEqual(
                padic.valuation(x + y), min(padic.valuation(x), padic.valuation(y))
            )
            self.assertLessEqual(
                padic.padic_norm(x + y), max(padic.padic_norm(x), padic.padic_norm(y))
            )

    def test_powers(self) -> None:
        x = padic.from_rational(3, 5)
        self.assertTrue(padic.power(x, 4).agrees_with(81))
        self.assertTrue(padic.power(x, -2).agrees_with(Fraction(1, 9)))
        self.assertTrue(padic.power(x, 0).agrees_with(1))


class HenselTests(unittest.TestCase):
    def test_square_root_of_two_in_z7(self) -> None:
        f = ZpPoly.from_ints([-2, 0, 1], 7)
        root = padic.hensel_lift(f, 3, 3)
        self.assertEqual(root.digits, (3, 1, 2))
        brute = [x for x in range(343) if (x * x - 2) % 343 == 0 and x % 7 == 3]
        self.assertEqual(brute, [int(root.to_fraction())])

    def test_residual_at_full_precision(self) -> None:
        f = ZpPoly.from_ints([-2, 0, 1], 7)
        root = padic.hensel_lift(f, 3, 32)
        self.assertEqual(root.precision, 32)
        self.assertGreaterEqual(padic.residual_valuation(f, root), 32)

    def test_other_square_root(self) -> None:
        f = ZpPoly.from_ints([-2, 0, 1], 7)
        plus = padic.hensel_lift(f, 3, 16)
        minus = padic.hensel_lift(f, 4, 16)
        with self.assertRaises(utils_mod.PrecisionError):
            padic.add(plus, minus)
        self.assertEqual((int(plus.to_fraction()) + int(minus.to_fraction())) % 7**16, 0)

    def test_digitwise_matches_newton(self) -> None:
        for p, coeffs, x0 in ((7, [-2, 0, 1], 3), (5, [-6, 0, 0, 1], 1), (11, [-3, 0, 1], 5)):
            f = ZpPoly.from_ints(coeffs, p)
            with self.subTest(p=p, coeffs=coeffs):
                self.assertEqual(padic.hensel_lift(f, x0, 20), padic.hensel_lift_digitwise(f, x0, 20))

    @settings(max_examples=40, deadline=None)
    @given(
        st.sampled_from([3, 5, 7, 11, 13]),
        st.integers(min_value=0, max_value=200),
        st.integers(min_value=1, max_value=12),
    )
    def test_integer_roots_lift_to_themselves(self, p: int, r: int, offset: int) -> None:
        s = r + offset if offset % p else r + offset + 1
        f = ZpPoly.from_ints([r * s, -(r + s), 1], p)
        root = padic.hensel_lift(f, r % p, 12)
        self.assertTrue(root.agrees_with(r))
        self.assertGreaterEqual(padic.residual_valuation(f, root), 12)

    def test_not_a_root(self) -> None:
        f = ZpPoly.from_ints([-2, 0, 1], 7)
        with self.assertRaisesRegex(utils_mod.NotSimpleRootError, "not 0 mod 7"):
            padic.hensel_lift(f, 1, 8)

    def test_double_root_rejected(self) -> None:
        f = ZpPoly.from_ints([0, 0, 1], 5)
        with self.assertRaisesRegex(utils_mod.NotSimpleRootError, "not a simple root"):
            padic.hensel_lift(f, 0, 8)

    def test_precision_beyond_coefficients(self) -> None:
        f = ZpPoly.from_ints([-2, 0, 1], 7, precision=4)
        with self.assertRaises(utils_mod.PrecisionError):
            padic.hensel_lift(f, 3, 8)

    def test_non_integral_coefficient_rejected(self) -> None:
        with self.assertRaises(utils_mod.ContractError):
            ZpPoly(5, (padic.from_rational(Fraction(1, 5), 5),))

    def test_newton_steps_are_logged(self) -> None:
        f = ZpPoly.from_ints([-2, 0, 1], 7)
        with self.assertLogs("sd-toolkit.padic", level="DEBUG") as captured:
            padic.hensel_lift(f, 3, 8)
        self.assertTrue(any("hensel step" in line for line in captured.output))

    def test_lift_is_the_only_root_mod_p_cubed(self) -> None:
        quadratics = ([-2, 0, 1], [1, 0, 1], [-1, -1, 1], [1, 1, 1], [-5, 3, 2], [6, -5, 1])
        lifted = 0
        for p in (3, 5, 7):
            modulus = p**3
            for coeffs in quadratics:
                f = ZpPoly.from_ints(coeffs, p)
                c0, c1, c2 = coeffs
                for x0 in range(p):
                    if (c0 + c1 * x0 + c2 * x0 * x0) % p or (c1 + 2 * c2 * x0) % p == 0:
                        continue
                    with self.subTest(p=p, coeffs=coeffs, x0=x0):
                        brute = [
                            x
                            for x in range(x0, modulus, p)
                            if (c0 + c1 * x + c2 * x * x) % modulus == 0
                        ]
                        root = padic.hensel_lift(f, x0, 3)
                        self.assertEqual(brute, [int(root.to_fraction())])
                        lifted += 1
        self.assertGreater(lifted, 10)

    def test_square_root_of_minus_one_in_z5(self) -> None:
        root = padic.hensel_lift(ZpPoly.from_ints([1, 0, 1], 5), 2, 3)
        self.assertEqual(root.digits, (2, 1, 2))
        self.assertEqual(int(root.to_fraction()), 57)


class RootTests(unittest.TestCase):
    def test_square_root_with_valuation(self) -> None:
        root = padic.nth_root(padic.from_rational(98, 7), 2)
        self.assertIsNotNone(root)
        self.assertEqual(root.valuation, 1)
        self.assertTrue(padic.mul(root, root).agrees_with(98))

    def test_missing_roots(self) -> None:
        self.assertIsNone(padic.nth_root(padic.from_rational(7, 7), 2))
        # cubes mod 7 are 1 and 6
        self.assertIsNone(padic.nth_root(padic.from_rational(2, 7), 3))

    def test_twenty_first_root_of_two_in_z5(self) -> None:
        # r^21 = r mod 5, so the leading digit is 2 itself
        root = padic.nth_root(padic.from_rational(2, 5, 16), 21)
        self.assertIsNotNone(root)
        self.assertEqual(root.digits[0], 2)
        self.assertTrue(padic.power(root, 21).agrees_with(2))

    def test_root_of_zero(self) -> None:
        self.assertTrue(padic.nth_root(PadicNumber.zero(5), 3).is_zero)

    def test_p_dividing_n_unsupported(self) -> None:
        with self.assertRaises(utils_mod.UnsupportedCaseError):
            padic.nth_root(padic.from_rational(2, 5), 5)

    def test_requested_precision_above_input(self) -> None:
        with self.assertRaises(utils_mod.PrecisionError):
            padic.nth_root(padic.from_rational(2, 7, 4), 3, precision=8)

    def test_unit_exponents(self) -> None:
        self.assertEqual(padic.unit_exponents(5, 2), [21, 41])
        for n in padic.unit_exponents(7, 4):
            self.assertEqual(n % 7, 1)
            self.assertEqual(n % 6, 1)

    def test_units_have_every_root(self) -> None:
        for p in (5, 7):
            for value in (2, 3, Fraction(1, 2)):
                with self.subTest(p=p, value=value):
                    report = padic.unit_characterization_check(padic.from_rational(value, p), 5)
                    self.assertTrue(report.is_unit)
                    self.assertTrue(all(report.roots_found))
                    self.assertTrue(report.ok)

    def test_non_units_have_no_large_roots(self) -> None:
        for value in (5, Fraction(1, 5), 50):
            with self.subTest(value=value):
                report = padic.unit_characterization_check(padic.from_rational(value, 5), 5)
                self.assertFalse(report.is_unit)
                self.assertFalse(any(report.roots_found))
                self.assertTrue(report.ok)
                self.assertEqual(report.to_dict()["exponents"], padic.unit_exponents(5, 5))

    def test_unit_check_inputs(self) -> None:
        with self.assertRaises(utils_mod.ContractError):
            padic.unit_characterization_check(PadicNumber.zero(5), 3)
        with self.assertRaises(utils_mod.UserError):
            padic.unit_characterization_check(padic.from_rational(2, 5), 0)


if __name__ == "__main__":
    unittest.main()
