import json
import os

import pytest

from src.algebra.coxeter import build_system
from src.algebra.hecke import HeckeAlgebra, KLExpansion
from src.algebra.laurent import V, V_INV
from src.pcanon.engine import (
    _check_positive, compute_pcan, compute_tables, expand_in_pcan, format_pcan_row,
)
from src.pcanon.properties import PROPERTIES, verify_properties
from src.pcanon.tilting import (
    a1_tilting_pcan, compare_with_tilting, is_affine_a1, tilting_digits, tilting_multiplicities,
    tilting_support,
)
from src.utils.cache import DiskCache
from src.utils.errors import PositivityError, RealizationError

S, T = 0, 1


def kl(system, *words):
    return KLExpansion({system.element(w): 1 for w in words})


@pytest.fixture(scope="module")
def b2_tables():
    return compute_tables(build_system("B2"), [0, 2, 3], 4)


def test_b2_in_characteristic_two(b2_tables):
    table = b2_tables[2]
    b2 = table.system
    sts, tst = b2.element((S, T, S)), b2.element((T, S, T))
    assert table.kl_expansion[sts] == kl(b2, (S, T, S), (S,))
    assert table.kl_expansion[tst] == kl(b2, (T, S, T))
    assert sts in table.differences()
    assert format_pcan_row(table, sts) == "2 b_sts = kl_sts + kl_s"


def test_b2_odd_characteristic_is_kl(b2_tables):
    assert b2_tables[3].differences() == []
    assert b2_tables[0].differences() == []


def test_pcan_standard_expansion_is_self_dual(b2_tables):
    table = b2_tables[2]
    hecke = HeckeAlgebra(table.system)
    sts = table.system.element((S, T, S))
    assert hecke.bar(table.pcan(sts)) == table.pcan(sts)
    assert hecke.to_kl(table.pcan(sts)) == table.kl_expansion[sts]


@pytest.mark.parametrize("p", [0, 2, 3])
def test_b2_properties_pass(b2_tables, p):
    report = verify_properties(b2_tables[p])
    assert report.passed, report.violations
    assert report.checked == list(PROPERTIES)


def test_descent_containment_b2(b2_tables):
    b2 = b2_tables[2].system
    sts, s = b2.element((S, T, S)), b2.generator(S)
    assert b2.descents(sts, "left") == frozenset({S})
    assert b2.descents(sts, "left") <= b2.descents(s, "left")


def test_property_report_flags_a_bad_table(b2_tables):
    table = b2_tables[2]
    b2 = table.system
    broken = compute_pcan(b2, 2, 3)
    sts = b2.element((S, T, S))
    broken.kl_expansion[sts] = kl(b2, (S, T, S), (T,))
    broken.std_expansion[sts] = HeckeAlgebra(b2).from_kl(broken.kl_expansion[sts])
    report = verify_properties(broken)
    assert not report.passed
    assert "descent_support" in {name for name, _, _ in report.violations}
    assert "descent_support" in report.to_text()


def test_g2_in_characteristic_three():
    g2 = build_system("G2")
    table = compute_pcan(g2, 3, 6)
    assert table.kl_expansion[g2.element((S, T, S))] == kl(g2, (S, T, S), (S,))
    assert table.kl_expansion[g2.element((S, T, S, T, S))] == kl(g2, (S, T, S, T, S), (S, T, S))
    assert [table.system.label(x) for x in table.differences()] == ["sts", "ststs"]


def test_expand_in_pcan(b2_tables):
    table = b2_tables[2]
    b2 = table.system
    sts = b2.element((S, T, S))
    coeffs = expand_in_pcan(table, table.pcan(sts))
    assert coeffs == {sts: 1}
    hecke = HeckeAlgebra(b2)
    product = hecke.bs_character((S, T, S))
    coeffs = expand_in_pcan(table, product)
    # b_s b_t b_s is indecomposable at p = 2
    assert coeffs == {sts: 1}
    short = compute_pcan(b2, 2, 2)
    with pytest.raises(KeyError):
        expand_in_pcan(short, product)


def test_multiplication_by_descent(b2_tables):
    table = b2_tables[2]
    hecke = HeckeAlgebra(table.system)
    sts = table.system.element((S, T, S))
    pb = table.pcan(sts)
    b_s = hecke.kl_basis(table.system.generator(S))
    assert hecke.std_mult(b_s, pb) == pb.scale(V + V_INV)
    assert hecke.std_mult(pb, b_s) == pb.scale(V + V_INV)


def test_positivity_check():
    b2 = build_system("B2")
    sts = b2.element((S, T, S))
    with pytest.raises(PositivityError):
        _check_positive(b2, 2, sts, KLExpansion({sts: 1, b2.generator(S): -1}))
    with pytest.raises(PositivityError):
        _check_positive(b2, 2, sts, KLExpansion({sts: 2}))


def test_bad_characteristic_is_rejected():
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    a1 = build_system(os.path.join(root, "systems", "A1.json"))
    with pytest.raises(RealizationError):
        compute_pcan(a1, 2, 1)
    table = compute_pcan(a1, 5, 1)
    assert [x.word for x in table.elements] == [(), (0,)]
    assert table.differences() == []


def test_table_serialization(b2_tables):
    table = b2_tables[2]
    data = json.loads(table.to_json())
    assert data["prime"] == 2 and data["maxlen"] == 4
    entry = next(e for e in data["entries"] if e["word"] == "sts")
    assert entry["kl"] == {"sts": [[0, 1]], "s": [[0, 1]]}
    assert data["provenance"]["reduced_words"]["sts"] == "sts"
    assert data["system"]["name"] == "B2"
    text = table.to_text(only_differences=True)
    assert "2 b_sts = kl_sts + kl_s" in text
    assert "tst" not in text


def test_alternative_target_words_give_same_table(b2_tables):
    b2 = b2_tables[2].system
    alt = compute_tables(b2, [2], 4, target_policy="alternative")[2]
    for x in b2_tables[2].elements:
        assert alt.kl_expansion[x] == b2_tables[2].kl_expansion[x]


def test_kl_cache_entries_are_per_realization(tmp_path):
    # one directory and key for two systems: only the payload tells them apart
    cache = DiskCache(str(tmp_path), "shared")
    b2, g2 = build_system("B2"), build_system("G2")
    compute_tables(b2, [0], 4, cache)
    table = compute_tables(g2, [2], 4, cache)[2]
    stst = g2.element((S, T, S, T))
    assert table.kl_expansion[stst] == kl(g2, (S, T, S, T), (S, T))
    hecke = HeckeAlgebra(g2)
    assert table.pcan(stst) == hecke.kl_basis(stst) + hecke.kl_basis(g2.element((S, T)))


@pytest.mark.slow
@pytest.mark.parametrize("name,maxlen", [("G2", 6), ("D4", 7)])
def test_alternative_target_words_larger_types(name, maxlen):
    system = build_system(name)
    primes = [2, 3]
    canonical = compute_tables(system, primes, maxlen)
    alternative = compute_tables(system, primes, maxlen, target_policy="alternative")
    for p in primes:
        for x in canonical[p].elements:
            assert alternative[p].kl_expansion[x] == canonical[p].kl_expansion[x]


def test_tilting_digits():
    assert tilting_digits(15, 3) == [3, 4, 0]
    assert tilting_digits(2, 3) == [2]
    assert tilting_digits(0, 5) == [0]
    with pytest.raises(ValueError):
        tilting_digits(-1, 3)


def test_tilting_support():
    assert tilting_support(15, 3) == [1, 3, 13, 15]
    assert tilting_support(3, 3) == [1, 3]
    assert tilting_support(0, 7) == [0]
    assert tilting_support(4, 5) == [4]
    assert tilting_support(12, 3) == [4, 6, 10, 12]
    assert tilting_support(40, 3) == [12, 16, 18, 22, 30, 34, 36, 40]
    grid = tilting_multiplicities(2, 4)
    assert grid[2] == [0, 2]
    assert all(n in grid[n] for n in grid)


def test_a1_tilting_pcan(affine_a1):
    assert is_affine_a1(affine_a1)
    expected = kl(affine_a1, (S, T), (S, T, S, T))
    assert a1_tilting_pcan(affine_a1, 3, 3, first=S) == expected
    assert a1_tilting_pcan(affine_a1, 0, 3, first=T) == kl(affine_a1, (T,))
    with pytest.raises(RealizationError):
        a1_tilting_pcan(build_system("B2"), 1, 3)


@pytest.mark.slow
def test_affine_a1_matches_tilting_characters(affine_a1):
    for p in (2, 3):
        table = compute_pcan(affine_a1, p, 8)
        assert compare_with_tilting(table, range(8)) == []
