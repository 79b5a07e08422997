"""
Unit tests for SD-group computation, the power-map classifier and the
F_5 / root-of-unity characterizations.
"""

from __future__ import annotations

import importlib
import math
import sys
from pathlib import Path
import unittest

import sympy

SRC_DIR = Path(__file__).resolve().parents[1] / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

ff = importlib.import_module("sd-toolkit.finite_field")
sd_maps = importlib.import_module("sd-toolkit.sd_maps")
sdc = importlib.import_module("sd-toolkit.sd_classify")
utils_mod = importlib.import_module("sd-toolkit.utils")
ContractError = utils_mod.ContractError
UserError = utils_mod.UserError


def _prime_powers(limit: int) -> list[int]:
    return [q for q in range(2, limit + 1) if len(sympy.factorint(q)) == 1]


class SdGroupTests(unittest.TestCase):
    def test_f5_is_exceptional(self) -> None:
        result = sdc.compute_sd_group(ff.field_of_order(5))
        self.assertEqual(result.exponents, (1, 3))
        self.assertEqual(result.aut_exponents, (1,))
        self.assertTrue(result.is_exceptional)
        self.assertEqual(result.size, 2)

    def test_small_odd_fields_match_automorphisms(self) -> None:
        self.assertEqual(sdc.compute_sd_group(ff.field_of_order(3)).exponents, (1,))
        f9 = sdc.compute_sd_group(ff.field_of_order(9))
        self.assertEqual(f9.exponents, (1, 3))
        self.assertFalse(f9.is_exceptional)
        f27 = sdc.compute_sd_group(ff.field_of_order(27))
        self.assertEqual(f27.exponents, (1, 3, 9))

    def test_characteristic_two_census(self) -> None:
        f4 = sdc.compute_sd_group(ff.field_of_order(4))
        self.assertEqual(f4.census, 6)
        self.assertFalse(f4.power_map_regime)
        self.assertTrue(f4.is_exceptional)
        f2 = sdc.compute_sd_group(ff.field_of_order(2))
        self.assertEqual(f2.census, 1)
        self.assertFalse(f2.is_exceptional)
        self.assertEqual(sdc.compute_sd_group(ff.field_of_order(8)).census, math.factorial(7))

    def test_classification_dict_round_trip(self) -> None:
        result = sdc.compute_sd_group(ff.field_of_order(4))
        self.assertEqual(sdc.SdClassification.from_dict(result.to_dict()), result)

    def test_sweep_finds_only_f5(self) -> None:
        orders = sdc.odd_prime_powers(200)
        self.assertEqual(orders[:6], [3, 5, 7, 9, 11, 13])
        self.assertNotIn(15, orders)
        summary = sdc.sweep_summary(sdc.classify_fields(orders))
        self.assertEqual(summary["exceptional_qs"], [5])
        self.assertTrue(summary["ok"])
        self.assertEqual(summary["max_q"], 199)

    def test_sweep_of_three(self) -> None:
        rows = sdc.classify_fields(sdc.odd_prime_powers(3))
        self.assertEqual([(row.q, row.exponents) for row in rows], [(3, (1,))])
        self.assertTrue(sdc.sweep_summary(rows)["ok"])

    def test_parallel_sweep_matches_serial(self) -> None:
        orders = [13, 3, 9, 5, 7, 11]
        self.assertEqual(sdc.classify_fields(orders, jobs=2), sdc.classify_fields(orders, jobs=1))

    def test_summary_flags_unexpected_exceptional(self) -> None:
        fake = sdc.SdClassification(7, 7, 1, (1, 5), (1,), True)
        self.assertFalse(sdc.sweep_summary([fake])["ok"])


class EratioTests(unittest.TestCase):
    def test_case_analysis_for_odd_q(self) -> None:
        for q in _prime_powers(200):
            if q % 2 == 0:
                continue
            spec = ff.field_of_order(q)
            p = spec.p
            half = (q + 1) // 2
            for k in range(1, q - 1):
                if math.gcd(k, q - 1) != 1:
                    continue
                holds = sdc.eratio_holds(k, spec)
                if k < half:
                    self.assertEqual(holds, sdc.is_p_power_by_binomials(k, p), (q, k))
                elif k == half:
                    self.assertEqual(holds, q == 5, (q, k))
                else:
                    self.assertFalse(holds, (q, k))

    def test_eratio_contract(self) -> None:
        with self.assertRaises(ContractError):
            sdc.eratio_holds(1, ff.field_of_order(4))
        with self.assertRaises(ContractError):
            sdc.eratio_holds(0, ff.field_of_order(5))
        self.assertTrue(sdc.eratio_holds(7, ff.field_of_order(5)))


class LucasTests(unittest.TestCase):
    def test_lucas_matches_big_binomials(self) -> None:
        for p in (3, 5, 7, 13):
            for n in range(201):
                for k in range(201):
                    expected = int(sympy.binomial(n, k)) % p
                    self.assertEqual(sdc.lucas_binomial(n, k, p), expected, (n, k, p))

    def test_p_power_detection(self) -> None:
        self.assertEqual(
            [k for k in range(1, 100) if sdc.is_p_power_by_binomials(k, 3)],
            [1, 3, 9, 27, 81],
        )
        with self.assertRaises(ContractError):
            sdc.lucas_binomial(5, 2, 4)


class PowerClassificationTests(unittest.TestCase):
    def test_classifier_agrees_with_direct_check(self) -> None:
        for q in _prime_powers(128):
            spec = ff.field_of_order(q)
            descriptor = sdc.finite(q)
            for m in range(1, 51):
                direct = sd_maps.is_sd_map(sd_maps.power_map(spec, m)).holds
                self.assertEqual(sdc.classify_power(m, descriptor).is_sd, direct, (q, m))

    def test_case_labels(self) -> None:
        self.assertEqual(sdc.classify_power(1, sdc.rationals()).case_label, 1)
        self.assertEqual(sdc.classify_power(3, sdc.finite(9)).case_label, 2)
        self.assertEqual(sdc.classify_power(5, sdc.finite(8)).case_label, 3)
        self.assertEqual(sdc.classify_power(3, sdc.rational_function_field(2)).case_label, 4)
        self.assertEqual(sdc.classify_power(9, sdc.algebraic_closure(3)).case_label, 5)
        self.assertEqual(sdc.classify_power(7, sdc.finite(5)).case_label, 6)
        self.assertIsNone(sdc.classify_power(2, sdc.rationals()).case_label)

    def test_infinite_characteristic_two(self) -> None:
        self.assertTrue(sdc.classify_power(6, sdc.custom(2, [5])).is_sd)
        self.assertFalse(sdc.classify_power(6, sdc.custom(2, [3])).is_sd)
        self.assertFalse(sdc.classify_power(3, sdc.algebraic_closure(2)).is_sd)
        self.assertTrue(sdc.classify_power(4, sdc.algebraic_closure(2)).is_sd)
        with self.assertRaises(utils_mod.OracleRequiredError):
            sdc.classify_power(3, sdc.opaque(2))
        self.assertTrue(sdc.classify_power(9, sdc.opaque(3)).is_sd)

    def test_cube_map_in_characteristic_two(self) -> None:
        for ell in range(1, 11):
            spec = ff.make_field(2, ell)
            self.assertEqual(sdc.cube_map_char2(spec), ell % 2 == 1)
            self.assertEqual(sdc.cube_map_is_sd(sdc.finite(2**ell)), ell % 2 == 1)
        with self.assertRaises(ContractError):
            sdc.cube_map_char2(ff.field_of_order(9))

    def test_cube_map_facts(self) -> None:
        self.assertTrue(sdc.cube_map_is_sd(sdc.rational_function_field(3)))
        self.assertFalse(sdc.cube_map_is_sd(sdc.rationals()))
        outside = [q for q in _prime_powers(50) if q % 2 and sdc.cube_map_outside_aut(ff.field_of_order(q))]
        self.assertEqual(outside, [5])

    def test_descriptor_parsing(self) -> None:
        d = sdc.descriptor_from_dict({"kind": "custom", "p": 2, "root_orders": [5, 3]})
        self.assertEqual(d.to_dict(), {"kind": "custom", "p": 2, "root_orders": [3, 5]})
        self.assertEqual(sdc.descriptor_from_dict({"kind": "finite", "q": 25}).name, "F_25")
        self.assertEqual(sdc.descriptor_from_dict({"kind": "rationals"}).name, "Q")
        for bad in ({"kind": "weird", "p": 2}, {"p": 2}, {"kind": "finite"}, {"kind": "custom", "p": 2}):
            with self.assertRaises(UserError):
                sdc.descriptor_from_dict(bad)
        with self.assertRaises(UserError):
            sdc.algebraic_closure(4)

    def test_exponent_contract(self) -> None:
        with self.assertRaises(ContractError):
            sdc.classify_power(0, sdc.finite(5))


class CharacterizationTests(unittest.TestCase):
    def test_f5_characterizations(self) -> None:
        f5 = sdc.f5_characterizations(ff.field_of_order(5))
        self.assertTrue(f5.aut_strictly_smaller)
        self.assertTrue(f5.squares_map_is_sd)
        self.assertTrue(f5.sqrt_minus1_generates)
        for q in (3, 7, 9, 11, 13, 25, 27):
            result = sdc.f5_characterizations(ff.field_of_order(q))
            self.assertTrue(result.agrees, q)
            self.assertFalse(result.squares_map_is_sd, q)
        with self.assertRaises(ContractError):
            sdc.f5_characterizations(ff.field_of_order(4))

    def test_root_of_unity_equivalences(self) -> None:
        record = sdc.root_of_unity_equivalences(3, ff.field_of_order(16))
        self.assertTrue(record.non_injective)
        self.assertTrue(record.contains_subfield)
        self.assertEqual(record.subfield_degree, 2)
        self.assertTrue(record.equivalent)

        record = sdc.root_of_unity_equivalences(3, ff.field_of_order(8))
        self.assertFalse(record.non_injective)
        self.assertFalse(record.contains_subfield)
        self.assertTrue(record.equivalent)

        record = sdc.root_of_unity_equivalences(4, ff.field_of_order(8))
        self.assertEqual((record.a, record.m_prime), (2, 1))
        self.assertIsNone(record.subfield_degree)
        self.assertTrue(record.equivalent)

    def test_equivalences_over_a_grid(self) -> None:
        for q in _prime_powers(128):
            spec = ff.field_of_order(q)
            for m in range(2, 30):
                record = sdc.root_of_unity_equivalences(m, spec)
                self.assertTrue(record.equivalent, (m, q))
        with self.assertRaises(ContractError):
            sdc.root_of_unity_equivalences(1, ff.field_of_order(5))


class SameCharacteristicTests(unittest.TestCase):
    def test_maps_land_on_subfields(self) -> None:
        f3, f9 = ff.field_of_order(3), ff.field_of_order(9)
        maps = sdc.same_characteristic_sd_maps(f3, f9)
        self.assertEqual(maps, [sd_maps.prime_field_inclusion(f9)])

        f5, f25 = ff.field_of_order(5), ff.field_of_order(25)
        maps = sdc.same_characteristic_sd_maps(f5, f25)
        self.assertEqual(len(maps), 2)
        self.assertTrue(all(sd_maps.image_is_subfield(table) for table in maps))

        with self.assertRaises(ContractError):
            sdc.same_characteristic_sd_maps(f5, ff.field_of_order(7))


if __name__ == "__main__":
    unittest.main()
