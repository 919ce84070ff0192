import pytest

from src.algebra.nilhecke import NilHeckeElt, NilHeckeRing
from src.utils.errors import AlgebraError, NotApplicable

S, T = 0, 1


@pytest.fixture
def ring(g2):
    return NilHeckeRing(g2)


def test_right_multiplication_by_d(g2, ring):
    s = g2.generator(S)
    st = g2.element((S, T))
    assert not ring.rmul_D(ring.D(s), S)
    assert ring.rmul_D(ring.one(), S) == ring.D(s)
    assert ring.rmul_D(ring.D(st), S) == ring.D(g2.element((S, T, S)))


def test_commutation_rule(g2, ring):
    R = ring.R
    s = g2.generator(S)
    pushed = ring.rmul_poly(ring.D(s), R.root(T))
    expected = NilHeckeElt({s: R.act(s, R.root(T)), g2.identity: R.coerce(-3)})
    assert pushed == expected


def test_polynomial_passes_through_identity(g2, ring):
    f = ring.R.root(S) * ring.R.root(T)
    assert ring.rmul_poly(ring.one(), f) == NilHeckeElt({g2.identity: f})
    assert ring.lmul_poly(f, ring.one()) == NilHeckeElt({g2.identity: f})


def test_length_two_push_keeps_twisted_leading_term(g2, ring):
    R = ring.R
    st = g2.element((S, T))
    pushed = ring.rmul_poly(ring.D(st), R.root(S))
    assert pushed.coeff(st) == R.act(st, R.root(S))


def test_intersection_form_entries_g2(g2, ring):
    word = (S, T, S, T)
    e1 = g2.decorate(word, (1, 0, 0, 1))
    e2 = g2.decorate(word, (1, 1, 0, 0))
    assert ring.d_pair(e1, e1) == -3
    assert ring.d_pair(e1, e2) == 1
    assert ring.d_pair(e2, e1) == 1
    assert ring.d_pair(e2, e2) == -1


def test_intersection_form_entry_b2(b2):
    ring = NilHeckeRing(b2)
    word = (S, T, S)
    e = b2.decorate(word, (1, 0, 0))
    f = b2.decorate(word, (0, 0, 1))
    assert ring.d_pair(e, e) == -2
    assert ring.d_pair(f, f) == ring.R.root(S) * ring.R.root(T)


def test_d1_steps_are_not_applicable(g2, ring):
    e = g2.decorate((S, T, S, T, S), (1, 1, 0, 1, 0))
    assert e.labels == ("U1", "U1", "U0", "D1", "D0")
    with pytest.raises(NotApplicable):
        ring.d_pair(e, e)


def test_mismatched_subexpressions(g2, ring):
    e = g2.decorate((S, T, S, T), (1, 0, 0, 1))
    f = g2.decorate((S, T, S, T), (0, 0, 1, 1))
    g = g2.decorate((S, T, S, T), (1, 1, 1, 1))
    with pytest.raises(AlgebraError):
        ring.d_pair(e, g)
    with pytest.raises(AlgebraError):
        ring.d_pair(e, g2.decorate((S, T, S), (1, 0, 0)))
    assert f.endpoint == e.endpoint
