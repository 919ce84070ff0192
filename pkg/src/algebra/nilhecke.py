"""Nil Hecke ring: the R-span of the Demazure elements D_y.

Elements are kept in left-coefficient normal form sum_y c_y D_y. The two
rules used everywhere are

    D_s f = s(f) D_s + d_s(f)
    D_y D_s = D_{ys} if l(ys) > l(y), else 0
"""

import logging
from typing import Dict, Iterable, Optional, Tuple, Union

from sympy.polys.rings import PolyElement

from ..utils.errors import AlgebraError, NotApplicable
from .coxeter import CoxeterSystem, DecoratedSubexpr, WElem
from .polyring import PolynomialRing

logger = logging.getLogger(__name__)

Factor = Union[int, PolyElement, Tuple[str, int]]


class NilHeckeElt:
    """Sparse map WElem -> polynomial coefficient of D_y."""

    def __init__(self, terms: Optional[Dict[WElem, PolyElement]] = None):
        self.terms: Dict[WElem, PolyElement] = {y: c for y, c in (terms or {}).items() if c}

    def coeff(self, y: WElem):
        return self.terms.get(y)

    def __add__(self, other: "NilHeckeElt") -> "NilHeckeElt":
        out = dict(self.terms)
        for y, c in other.terms.items():
            out[y] = out[y] + c if y in out else c
        return NilHeckeElt(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NilHeckeElt):
            return NotImplemented
        return self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        inner = " + ".join(f"({c})D{y.word}" for y, c in sorted(self.terms.items()))
        return f"NilHeckeElt({inner or '0'})"


class NilHeckeRing:
    def __init__(self, system: CoxeterSystem, R: Optional[PolynomialRing] = None):
        self.system = system
        self.R = R or PolynomialRing(system)
        self._push_cache: Dict[Tuple[Tuple[int, ...], PolyElement], NilHeckeElt] = {}

    def D(self, y: WElem, coeff=1) -> NilHeckeElt:
        return NilHeckeElt({y: self.R.coerce(coeff)})

    def one(self) -> NilHeckeElt:
        return self.D(self.system.identity)

    def rmul_D(self, X: NilHeckeElt, s: int) -> NilHeckeElt:
        out: Dict[WElem, PolyElement] = {}
        for y, c in X.terms.items():
            if self.system.descent(y, s, "right"):
                continue
            ys = self.system.rmul(y, s)
            out[ys] = out[ys] + c if ys in out else c
        return NilHeckeElt(out)

    def _push(self, y: WElem, f: PolyElement) -> NilHeckeElt:
        """D_y * f in normal form, along the canonical reduced word of y."""
        if y.length == 0 or f.is_ground:
            return NilHeckeElt({y: f})
        key = (y.word, f)
        cached = self._push_cache.get(key)
        if cached is not None:
            return cached
        s = y.word[-1]
        prefix = self.system.element(y.word[:-1])
        s_elem = self.system.generator(s)
        # D_{y'} D_s f = (D_{y'} s(f)) D_s + D_{y'} d_s(f)
        result = self.rmul_D(self._push(prefix, self.R.act(s_elem, f)), s)
        derivative = self.R.demazure(s, f)
        if derivative:
            result = result + self._push(prefix, derivative)
        self._push_cache[key] = result
        return result

    def rmul_poly(self, X: NilHeckeElt, f) -> NilHeckeElt:
        f = self.R.coerce(f)
        out = NilHeckeElt()
        for y, c in X.terms.items():
            pushed = self._push(y, f)
            out = out + NilHeckeElt({z: c * d for z, d in pushed.terms.items()})
        return out

    def lmul_poly(self, f, X: NilHeckeElt) -> NilHeckeElt:
        f = self.R.coerce(f)
        return NilHeckeElt({y: f * c for y, c in X.terms.items()})

    def product(self, factors: Iterable[Factor]) -> NilHeckeElt:
        """Left-to-right product; a factor is a polynomial or ("D", s)."""
        X = self.one()
        for factor in factors:
            if isinstance(factor, tuple):
                X = self.rmul_D(X, factor[1])
            else:
                X = self.rmul_poly(X, factor)
            if not X:
                break
        return X

    def pair_factors(self, e1: DecoratedSubexpr, e2: DecoratedSubexpr) -> list:
        factors = []
        for s, a, b in zip(e1.word, e1.labels, e2.labels):
            if a == "U0" and b == "U0":
                factors.append(self.R.root(s))
            elif (a == "U0") != (b == "U0"):
                factors.append(1)
            else:
                factors.append(("D", s))
        return factors

    def d_pair(self, e1: DecoratedSubexpr, e2: DecoratedSubexpr) -> PolyElement:
        """Coefficient of D_x in f_1 ... f_m; the intersection form entry of a D1-free pair."""
        if e1.word != e2.word:
            raise AlgebraError("subexpressions of different words")
        if e1.endpoint != e2.endpoint:
            raise AlgebraError("subexpressions with different endpoints")
        if e1.has_d1 or e2.has_d1:
            raise NotApplicable(f"D1 step in {e1.labels} or {e2.labels}")
        X = self.product(self.pair_factors(e1, e2))
        return X.terms.get(e1.endpoint, self.R.ring.zero)
