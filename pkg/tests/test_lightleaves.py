import json

import numpy as np
import pytest

from src.soergel.backends import ModularBackend, SymbolicBackend
from src.soergel.lightleaves import (
    GenSeq, GramEngine, build_light_leaf, evaluate, export_json, rank_mod, target_word, top_row,
)
from src.soergel.localize import GeneratorTag, LocalizationModel
from src.utils.cache import DiskCache
from src.utils.errors import AlgebraError

S, T = 0, 1


def test_light_leaf_layers_b2(b2):
    word = (S, T, S)
    l1 = build_light_leaf(b2, b2.decorate(word, (1, 0, 0)))
    assert l1.describe() == ["dot_out(t)@1", "merge(s)@0"]
    assert l1.codomain == (S,)
    assert l1.degree == 0
    l2 = build_light_leaf(b2, b2.decorate(word, (0, 0, 1)))
    assert l2.describe() == ["dot_out(s)@0", "dot_out(t)@0"]
    assert l2.degree == 2


def test_reduced_word_leaf_is_identity(b2):
    word = (S, T, S, T)
    leaf = build_light_leaf(b2, b2.decorate(word, (1, 1, 1, 1)))
    assert leaf.layers == []
    model = LocalizationModel(b2)
    assert evaluate(leaf, model) == model.identity(word)


def test_light_leaf_ends_on_target_word(b2):
    # (t, s, t, s) with all ones ends on the canonical word of its endpoint
    leaf = build_light_leaf(b2, b2.decorate((T, S, T, S), (1, 1, 1, 1)))
    assert leaf.codomain == (S, T, S, T)
    assert leaf.describe() == ["braid(ts)@0"]
    alt = build_light_leaf(b2, b2.decorate((S, T, S, T), (1, 1, 1, 1)), target_policy="alternative")
    assert alt.codomain == (T, S, T, S)
    assert target_word(b2, b2.longest_element(), "alternative") == (T, S, T, S)


@pytest.mark.parametrize("name,word", [("B2", (0, 1, 0, 1, 0)), ("G2", (0, 1, 0, 1, 0)),
                                       ("A2", (0, 1, 0, 1))])
def test_light_leaf_degree_is_defect(name, word):
    from src.algebra.coxeter import build_system
    system = build_system(name)
    engine = GramEngine(system)
    for x in system.endpoints(word):
        for e in system.subexpressions_for(word, x):
            assert engine.light_leaf(e).degree == e.defect


def test_genseq_rejects_mismatched_layers(b2):
    seq = GenSeq(b2, (S, T))
    with pytest.raises(AlgebraError):
        seq.append(GeneratorTag("merge", S, position=0))
    seq.append(GeneratorTag("dot_out", T, position=1))
    assert seq.codomain == (S,)
    assert seq.flipped().codomain == (S, T)


def test_top_row_matches_full_evaluation(b2):
    word = (S, T, S)
    model = LocalizationModel(b2)
    leaf = build_light_leaf(b2, b2.decorate(word, (1, 0, 0)))
    full = evaluate(leaf, model)
    row = top_row(leaf, SymbolicBackend(model))
    assert row == full.rows[(1,)]


def test_intersection_form_b2(b2):
    engine = GramEngine(b2)
    family = engine.gram((S, T, S), b2.generator(S), primes=(0, 2))
    assert family.block(0).tolist() == [[-2]]
    assert family.graded_rank(0) == 1
    assert not family.graded_rank(2)
    assert family.paths["nilhecke"] == 1


def test_polynomial_pairing_b2(b2):
    engine = GramEngine(b2, verify=True)
    pairing = engine.full_form((S, T, S), b2.generator(S))
    R = engine.R
    assert pairing[1][1] == -2
    assert pairing[0][0] == R.fraction(R.root(S) * R.root(T))
    assert pairing[0][1] == R.fraction(R.root(T))
    assert pairing[1][0] == pairing[0][1]


def test_intersection_form_g2(g2):
    engine = GramEngine(g2)
    family = engine.gram((S, T, S, T), g2.element((S, T)), primes=(2, 3))
    block = family.block(0)
    assert block.tolist() == [[-3, 1], [1, -1]]
    assert round(np.linalg.det(block)) == 2
    assert rank_mod(block, 2) == 1
    assert rank_mod(block, 3) == 2


def test_localization_agrees_with_nil_hecke(b2, g2):
    for system, word in ((b2, (S, T, S, T)), (g2, (S, T, S, T))):
        engine = GramEngine(system, verify=True)
        for x in system.endpoints(word):
            family = engine.gram(word, x)
            assert family.cross_checked == family.paths["nilhecke"]


def test_localization_engine_alone(g2):
    fast = GramEngine(g2).gram((S, T, S, T), g2.element((S, T)))
    slow = GramEngine(g2, engine="localization").gram((S, T, S, T), g2.element((S, T)))
    assert slow.paths["nilhecke"] == 0
    assert np.array_equal(fast.block(0), slow.block(0))


def test_d1_pairs_use_localization(g2):
    engine = GramEngine(g2)
    family = engine.gram((S, T, S, T, S), g2.generator(S), primes=(2, 3))
    assert family.paths["localization"] > 0
    assert family.block(0).shape[0] == len(family.by_defect(0))


def test_rex_policy_does_not_change_ranks(g2):
    word, x = (S, T, S, T, S), g2.generator(S)
    lex = GramEngine(g2, rex_policy="lex").gram(word, x, primes=(2, 3))
    colex = GramEngine(g2, rex_policy="colex").gram(word, x, primes=(2, 3))
    for p in (2, 3):
        assert lex.graded_rank(p) == colex.graded_rank(p)


def test_rank_mod():
    assert rank_mod(np.array([[2]]), 2) == 0
    assert rank_mod(np.array([[2]]), 0) == 1
    assert rank_mod(np.zeros((0, 0), dtype=np.int64), 5) == 0
    assert rank_mod(np.array([[0, -1, -1], [-1, 0, -1], [-1, -1, 0]]), 2) == 2


def test_modular_backend_symmetric_residue(b2):
    backend = ModularBackend(LocalizationModel(b2))
    assert backend.finish(-5 % backend.q) == -5
    assert backend.finish(7) == 7
    backend.redraw()
    assert backend.attempt == 1


def test_gram_export_and_disk_cache(b2, tmp_path):
    cache = DiskCache(str(tmp_path), b2.realization_key)
    engine = GramEngine(b2, cache)
    family = engine.gram((S, T, S), b2.generator(S), primes=(2,))
    data = json.loads(export_json(family, b2))
    assert data["blocks"]["0"] == [[-2]]
    assert data["word"] == "sts" and data["target"] == "s"

    again = GramEngine(b2, cache).gram((S, T, S), b2.generator(S))
    assert cache.hits >= 1
    assert again.block(0).tolist() == [[-2]]


def test_verify_evaluates_pairings_at_a_second_point(b2, monkeypatch):
    word, s = (S, T, S), b2.generator(S)
    honest = GramEngine(b2, engine="localization", verify=True)
    assert honest.gram(word, s).block(0).tolist() == [[-2]]

    engine = GramEngine(b2, engine="localization", verify=True)
    original = engine.model.euler_forms
    extra = tuple(int(a) for a in b2.roots[S])

    def corrupted(w, bits):
        forms = list(original(w, bits))
        return forms + [extra] if len(w) == len(word) else forms

    monkeypatch.setattr(engine.model, "euler_forms", corrupted)
    with pytest.raises(AlgebraError, match="two evaluation points"):
        engine.gram(word, s)

    # without verification the bad factor goes unnoticed
    unchecked = GramEngine(b2, engine="localization")
    monkeypatch.setattr(unchecked.model, "euler_forms", corrupted)
    assert unchecked.modular_check is None
    unchecked.gram(word, s)
