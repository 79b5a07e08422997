"""
Unit tests for map tables, the SD verdict and the brute-force oracles.
"""

from __future__ import annotations

import importlib
import sys
from pathlib import Path
import unittest

SRC_DIR = Path(__file__).resolve().parents[1] / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

ff = importlib.import_module("sd-toolkit.finite_field")
sd_maps = importlib.import_module("sd-toolkit.sd_maps")
sd_classify = importlib.import_module("sd-toolkit.sd_classify")
utils_mod = importlib.import_module("sd-toolkit.utils")
ContractError = utils_mod.ContractError
UserError = utils_mod.UserError

F5 = ff.field_of_order(5)


class MapTableTests(unittest.TestCase):
    def test_rejects_wrong_length_and_foreign_images(self) -> None:
        with self.assertRaises(ContractError):
            sd_maps.MapTable(F5, F5, (0, 1, 2))
        with self.assertRaises(ContractError):
            sd_maps.MapTable(F5, F5, (0, 1, 2, 3, 5))

    def test_call_and_mismatch(self) -> None:
        cube = sd_maps.power_map(F5, 3)
        self.assertEqual(cube(F5.element(2)), F5.element(3))
        with self.assertRaises(utils_mod.FieldMismatchError):
            cube(ff.field_of_order(7).one())

    def test_from_dict_accepts_bare_ints_and_lists(self) -> None:
        field = F5.to_dict()
        bare = sd_maps.MapTable.from_dict(
            {"domain": field, "codomain": field, "images": [0, 1, 3, 2, 4]}
        )
        listed = sd_maps.MapTable.from_dict(
            {"domain": field, "codomain": field, "images": [[0], [1], [3], [2], [4]]}
        )
        self.assertEqual(bare, listed)
        self.assertEqual(bare, sd_maps.power_map(F5, 3))

    def test_from_dict_errors(self) -> None:
        field = F5.to_dict()
        with self.assertRaises(UserError):
            sd_maps.MapTable.from_dict({"domain": field, "images": [0]})
        with self.assertRaises(UserError):
            sd_maps.MapTable.from_dict({"domain": field, "codomain": field, "images": [0, 1, 7, 2, 4]})
        with self.assertRaises(UserError):
            sd_maps.MapTable.from_dict({"domain": field, "codomain": field, "images": "0,1"})

    def test_compose_power_maps(self) -> None:
        cube = sd_maps.power_map(F5, 3)
        self.assertEqual(sd_maps.compose(cube, cube), sd_maps.identity_map(F5))
        with self.assertRaises(utils_mod.FieldMismatchError):
            sd_maps.compose(cube, sd_maps.identity_map(ff.field_of_order(7)))


class SdVerdictTests(unittest.TestCase):
    def test_identity_and_cube_on_f5(self) -> None:
        self.assertTrue(sd_maps.is_sd_map(sd_maps.identity_map(F5)).holds)
        verdict = sd_maps.is_sd_map(sd_maps.power_map(F5, 3))
        self.assertTrue(verdict)
        self.assertIsNone(verdict.witness)

    def test_square_map_reports_collision_witness(self) -> None:
        verdict = sd_maps.is_sd_map(sd_maps.power_map(F5, 2))
        self.assertFalse(verdict.holds)
        self.assertEqual(verdict.reason, "not injective")
        self.assertEqual([w.value for w in verdict.witness], [1, 4])
        self.assertEqual(verdict.to_dict()["witness"], [[1], [4]])

    def test_collision_wins_over_an_earlier_equation_failure(self) -> None:
        # (0, 1) already breaks the equation; the later collision 3, 4 is still reported
        table = sd_maps.MapTable(F5, F5, (1, 0, 2, 3, 3))
        verdict = sd_maps.is_sd_map(table)
        self.assertEqual(verdict.reason, "not injective")
        self.assertEqual([w.value for w in verdict.witness], [3, 4])

    def test_inverse_map_fails_the_equation(self) -> None:
        verdict = sd_maps.is_sd_map(sd_maps.power_map(ff.field_of_order(7), 5))
        self.assertFalse(verdict.holds)
        self.assertEqual(verdict.reason, "equation fails")

    def test_frobenius_is_sd_and_an_automorphism(self) -> None:
        f9 = ff.field_of_order(9)
        frob = sd_maps.power_map(f9, 3)
        self.assertTrue(sd_maps.is_sd_map(frob).holds)
        self.assertTrue(sd_maps.is_automorphism(frob))

    def test_cube_on_f5_is_structural_but_not_additive(self) -> None:
        cube = sd_maps.power_map(F5, 3)
        report = sd_maps.structural_report(cube)
        self.assertTrue(report.all_hold)
        self.assertFalse(report.additive)
        self.assertIsNone(report.first_violation)
        self.assertFalse(sd_maps.is_automorphism(cube))

    def test_structural_report_names_first_violation(self) -> None:
        report = sd_maps.structural_report(sd_maps.power_map(F5, 2))
        self.assertFalse(report.injective)
        self.assertFalse(report.all_hold)
        self.assertEqual(report.to_dict()["first_violation"]["flag"], "injective")

    def test_squares_sign_map(self) -> None:
        self.assertEqual(sd_maps.squares_sign_map(F5), sd_maps.power_map(F5, 3))
        self.assertTrue(sd_maps.is_sd_map(sd_maps.squares_sign_map(F5)).holds)
        for q in (7, 9, 11, 13):
            table = sd_maps.squares_sign_map(ff.field_of_order(q))
            self.assertFalse(sd_maps.is_sd_map(table).holds, q)
        with self.assertRaises(ContractError):
            sd_maps.squares_sign_map(ff.field_of_order(8))

    def test_prime_field_inclusion_is_sd_into_odd_fields(self) -> None:
        for q in (3, 5, 7, 9, 25, 27):
            table = sd_maps.prime_field_inclusion(ff.field_of_order(q))
            self.assertTrue(sd_maps.is_sd_map(table).holds, q)

    def test_characteristic_two_needs_only_injective_and_one_fixed(self) -> None:
        f4 = ff.field_of_order(4)
        one = f4.index(f4.one())
        others = [i for i in range(4) if i != one]
        images = [0] * 4
        images[one] = one
        # Send 0 somewhere other than 0: still SD in characteristic 2.
        zero_target = others[-1]
        images[0] = zero_target
        rest = [i for i in range(4) if i not in (0, one)]
        free = [i for i in others if i != zero_target]
        for element, target in zip(rest, free):
            images[element] = target
        table = sd_maps.MapTable(f4, f4, tuple(images))
        self.assertTrue(sd_maps.is_sd_map(table).holds)


class SubfieldAndEmbeddingTests(unittest.TestCase):
    def test_fourth_root_embeddings(self) -> None:
        self.assertEqual(len(sd_maps.find_fourth_root_embeddings(ff.field_of_order(13))), 2)
        self.assertEqual(sd_maps.find_fourth_root_embeddings(ff.field_of_order(11)), [])
        self.assertEqual(sd_maps.find_fourth_root_embeddings(ff.field_of_order(8)), [])

    def test_fourth_root_embedding_requires_square_root_of_minus_one(self) -> None:
        f13 = ff.field_of_order(13)
        with self.assertRaises(ContractError):
            sd_maps.fourth_root_embedding(f13, f13.element(2))
        table = sd_maps.fourth_root_embedding(f13, f13.element(5))
        self.assertEqual([v.value for v in table.image_elements()], [0, 1, 5, 8, 12])

    def test_image_is_subfield(self) -> None:
        inclusion = sd_maps.prime_field_inclusion(ff.field_of_order(9))
        self.assertTrue(sd_maps.image_is_subfield(inclusion))
        with self.assertRaises(ContractError):
            sd_maps.image_is_subfield(sd_maps.power_map(F5, 2))
        self.assertFalse(sd_maps.image_is_subfield(sd_maps.power_map(F5, 2), require_sd=False))
        with self.assertRaises(ContractError):
            sd_maps.image_is_subfield(sd_maps.prime_field_inclusion(ff.field_of_order(7)))


class OracleTests(unittest.TestCase):
    def _exponents(self, maps):
        return sorted(sd_maps.power_exponent_of(table) for table in maps)

    def test_oracle_matches_exponent_scan(self) -> None:
        for q in (3, 5, 7, 9, 11):
            spec = ff.field_of_order(q)
            maps = sd_maps.brute_force_sd_maps(spec, spec, mode="oracle")
            expected = list(sd_classify.compute_sd_group(spec).exponents)
            self.assertEqual(self._exponents(maps), expected, q)

    def test_pruned_matches_exponent_scan(self) -> None:
        for q in (11, 13, 25):
            spec = ff.field_of_order(q)
            maps = sd_maps.brute_force_sd_maps(spec, spec, mode="pruned")
            expected = list(sd_classify.compute_sd_group(spec).exponents)
            self.assertEqual(self._exponents(maps), expected, q)

    def test_characteristic_two_census(self) -> None:
        for q, count in ((2, 1), (4, 6), (8, 5040)):
            spec = ff.field_of_order(q)
            self.assertEqual(len(sd_maps.brute_force_sd_maps(spec, spec)), count, q)

    def test_cross_field_rigidity(self) -> None:
        f5, f7 = ff.field_of_order(5), ff.field_of_order(7)
        for q in (11, 13):
            self.assertEqual(sd_maps.brute_force_sd_maps(f7, ff.field_of_order(q), "pruned"), [])
        self.assertEqual(len(sd_maps.brute_force_sd_maps(f5, ff.field_of_order(13), "pruned")), 2)
        self.assertEqual(sd_maps.brute_force_sd_maps(f5, ff.field_of_order(11), "pruned"), [])
        self.assertEqual(len(sd_maps.brute_force_sd_maps(f5, ff.field_of_order(13), "oracle")), 2)

    def test_oracle_and_pruned_agree_on_small_fields(self) -> None:
        for q in (3, 5, 7, 9):
            spec = ff.field_of_order(q)
            with self.subTest(q=q):
                self.assertEqual(
                    sd_maps.brute_force_sd_maps(spec, spec, mode="oracle"),
                    sd_maps.brute_force_sd_maps(spec, spec, mode="pruned"),
                )

    def test_oracle_on_larger_odd_fields(self) -> None:
        for q in (13, 27):
            spec = ff.field_of_order(q)
            with self.subTest(q=q):
                maps = sd_maps.brute_force_sd_maps(spec, spec, mode="oracle")
                expected = list(sd_classify.compute_sd_group(spec).exponents)
                self.assertEqual(self._exponents(maps), expected)
                self.assertEqual(maps, sd_maps.brute_force_sd_maps(spec, spec, mode="pruned"))

    def test_found_maps_are_structural(self) -> None:
        cases = [(q, q) for q in (3, 5, 7, 9, 11, 13)] + [(5, 13), (3, 9), (5, 25)]
        for source, target in cases:
            domain, codomain = ff.field_of_order(source), ff.field_of_order(target)
            with self.subTest(domain=source, codomain=target):
                maps = sd_maps.brute_force_sd_maps(domain, codomain, mode="oracle")
                self.assertTrue(maps)
                for table in maps:
                    self.assertTrue(sd_maps.structural_report(table).all_hold, table.images)
                    self.assertTrue(sd_maps.is_sd_map(table).holds)

    def test_f5_maps_are_closed_under_composition(self) -> None:
        own = sd_maps.brute_force_sd_maps(F5, F5)
        self.assertEqual(len(own), 2)
        for outer in own:
            for inner in own:
                self.assertIn(sd_maps.compose(outer, inner), own)

        f13 = ff.field_of_order(13)
        into_f13 = sd_maps.brute_force_sd_maps(F5, f13)
        for embedding in into_f13:
            for automorphism in own:
                self.assertIn(sd_maps.compose(embedding, automorphism), into_f13)
            for automorphism in sd_maps.brute_force_sd_maps(f13, f13, mode="pruned"):
                self.assertIn(sd_maps.compose(automorphism, embedding), into_f13)

    def test_rigidity_between_primes_from_seven_to_thirteen(self) -> None:
        primes = (7, 11, 13)
        for p in primes:
            for r in primes:
                domain, codomain = ff.field_of_order(p), ff.field_of_order(r)
                with self.subTest(p=p, r=r):
                    maps = sd_maps.brute_force_sd_maps(domain, codomain, mode="oracle")
                    if p == r:
                        self.assertEqual(maps, [sd_maps.identity_map(domain)])
                    else:
                        self.assertEqual(maps, [])

    def test_pruned_results_match_fourth_root_embeddings(self) -> None:
        f13 = ff.field_of_order(13)
        pruned = sd_maps.brute_force_sd_maps(F5, f13, "pruned")
        self.assertEqual(pruned, sd_maps.find_fourth_root_embeddings(f13))

    def test_budget_is_enforced(self) -> None:
        f8 = ff.field_of_order(8)
        with self.assertRaisesRegex(utils_mod.BudgetExceededError, "budget of 10"):
            sd_maps.brute_force_sd_maps(f8, f8, budget=10)

    def test_unknown_mode_and_char_two_pruned(self) -> None:
        with self.assertRaises(UserError):
            sd_maps.brute_force_sd_maps(F5, F5, mode="fast")
        f4 = ff.field_of_order(4)
        with self.assertRaises(ContractError):
            sd_maps.brute_force_sd_maps(f4, f4, mode="pruned")

    def test_power_exponent_of(self) -> None:
        self.assertEqual(sd_maps.power_exponent_of(sd_maps.power_map(F5, 7)), 3)
        self.assertIsNone(sd_maps.power_exponent_of(sd_maps.prime_field_inclusion(F5)))


if __name__ == "__main__":
    unittest.main()
