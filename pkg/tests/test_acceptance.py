"""Worked examples at full size; run with ``pytest -m slow``."""

import numpy as np
import pytest

from src.algebra.coxeter import build_system
from src.algebra.hecke import HeckeAlgebra, KLExpansion
from src.algebra.laurent import LaurentPoly, V, V_INV
from src.pcanon.engine import compute_pcan, compute_tables
from src.pcanon.properties import verify_properties
from src.pcanon.tilting import compare_with_tilting
from src.soergel.lightleaves import GramEngine, rank_mod

pytestmark = pytest.mark.slow

# Lower KL terms of every element whose 2-canonical element is not its KL element
B3_CORRECTIONS = {
    "121": {"1": 1},
    "1321": {"13": 1},
    "1213": {"13": 1},
    "21321": {"213": 1},
    "12132": {"132": 1},
    "121321": {"1212": 1, "1321": 1, "1213": 1, "13": 1},
    "1212321": {"12123": 1},
    "1213212": {"13212": 1},
    "12123212": {"1212": 1},
    "12132123": {"132123": 1},
}

C3_CORRECTIONS = {
    "212": {"2": 1},
    "3212": {"32": 1},
    "2123": {"23": 1},
    "32123": {"232": 1, "3": 1},
    "21232": {"232": 1},
    "23212": {"232": 1},
    "232123": {"232": V + V_INV},
    "212321": {"2321": 1},
    "123212": {"1232": 1},
    "2123212": {"21232": 1, "23212": 1, "232": 1},
    "21232123": {"232123": 1},
}

# 3-canonical elements of affine A1 starting with s
AFFINE_A1_P3 = {
    "s": {},
    "st": {},
    "sts": {},
    "stst": {"st": 1},
    "ststs": {"s": 1},
    "ststst": {},
    "stststs": {"ststs": 1},
    "stststst": {"stst": 1},
}


def expansion(system, terms):
    return KLExpansion({system.element_from_text(w): c for w, c in terms.items()})


def assert_table(table, corrections):
    system = table.system
    assert set(table.differences()) == {system.element_from_text(w) for w in corrections}
    for word, lower in corrections.items():
        x = system.element_from_text(word)
        assert table.kl_expansion[x] == expansion(system, {word: 1, **lower}), word
    assert verify_properties(table).passed


def test_affine_a1_up_to_length_eleven(affine_a1):
    for p in (2, 3, 5):
        table = compute_pcan(affine_a1, p, 11)
        assert compare_with_tilting(table, range(11)) == []
        assert verify_properties(table).passed


def test_affine_a1_in_characteristic_three(affine_a1):
    table = compute_pcan(affine_a1, 3, 8)
    for word, lower in AFFINE_A1_P3.items():
        x = affine_a1.element_from_text(word)
        assert table.kl_expansion[x] == expansion(affine_a1, {word: 1, **lower}), word


def test_b2_in_characteristic_five(b2):
    table = compute_pcan(b2, 5, 4)
    assert table.differences() == []
    assert verify_properties(table).passed


def test_g2_small_primes(g2):
    tables = compute_tables(g2, [2, 3, 5, 7], 6)
    two, three = tables[2], tables[3]
    assert two.kl_expansion[g2.element_from_text("stst")] == expansion(g2, {"stst": 1, "st": 1})
    assert two.kl_expansion[g2.element_from_text("tsts")] == expansion(g2, {"tsts": 1, "ts": 1})
    assert two.kl_expansion[g2.element_from_text("ststs")] == expansion(g2, {"ststs": 1, "s": 1})
    assert two.kl_expansion[g2.element_from_text("tstst")] == expansion(g2, {"tstst": 1, "t": 1})
    assert three.kl_expansion[g2.element_from_text("ststs")] == expansion(g2, {"ststs": 1, "sts": 1})
    assert tables[5].differences() == []
    assert tables[7].differences() == []
    for table in tables.values():
        assert verify_properties(table).passed


@pytest.fixture(scope="module")
def c3_table():
    return compute_pcan(build_system("C3"), 2, 9)


@pytest.fixture(scope="module")
def b3_table():
    return compute_pcan(build_system("B3"), 2, 9)


def test_c3_in_characteristic_two(c3_table):
    c3 = c3_table.system
    x = c3.element_from_text("232123")
    assert c3_table.kl_expansion[x] == expansion(c3, {"232123": 1, "232": V + V_INV})
    assert_table(c3_table, C3_CORRECTIONS)


def test_b3_in_characteristic_two(b3_table):
    b3 = b3_table.system
    x = b3.element_from_text("121321")
    assert b3_table.kl_expansion[x] == expansion(
        b3, {"121321": 1, "1212": 1, "1321": 1, "1213": 1, "13": 1})
    assert_table(b3_table, B3_CORRECTIONS)


def test_d4_intersection_form_at_suv(d4):
    word = d4.parse_word("suvtsuv")
    suv = d4.element_from_text("suv")
    family = GramEngine(d4).gram(word, suv, primes=(2,))
    block = family.block(0)
    assert block.tolist() == [[0, -1, -1], [-1, 0, -1], [-1, -1, 0]]
    assert round(np.linalg.det(block)) == -2
    assert rank_mod(block, 2) == 2
    for d in (2, -2):
        side = family.block(d)
        assert sorted(side.shape) == [1, 3]
        assert (side == -1).all()

    character = HeckeAlgebra(d4).to_kl(HeckeAlgebra(d4).bs_character(word))
    assert character.coeff(d4.element(word)) == 1
    assert character.coeff(suv) == LaurentPoly({-2: 1, 0: 3, 2: 1})


def test_d4_cluster(d4):
    tables = compute_tables(d4, [2, 3], 9)
    cluster = {}
    for t1 in ("", "t"):
        for t2 in ("", "t"):
            cluster[t1 + "suvtsuv" + t2] = t1 + "suv" + t2
    two = tables[2]
    assert set(two.differences()) == {d4.element_from_text(w) for w in cluster}
    for word, lower in cluster.items():
        assert two.kl_expansion[d4.element_from_text(word)] == expansion(d4, {word: 1, lower: 1})
    assert tables[3].differences() == []
    for table in tables.values():
        assert verify_properties(table).passed
