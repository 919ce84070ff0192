"""Hecke algebra over Z[v, v^-1]: standard basis, bar involution, Kazhdan-Lusztig basis.

Conventions: H_s^2 = (v^{-1} - v) H_s + 1 and b_s = H_s + v, so that
b_x lies in H_x + sum_{y < x} v Z[v] H_y. Products are computed by right
(or left) multiplication with one generator at a time:

    H_x H_s = H_{xs}                          if xs > x
    H_x H_s = H_{xs} + (v^{-1} - v) H_x       if xs < x
"""

import logging
from typing import Dict, Iterable, List, Optional, Tuple

from .coxeter import CoxeterSystem, WElem
from .laurent import LaurentPoly, ONE, V, V_INV, ZERO

logger = logging.getLogger(__name__)

QUADRATIC = V_INV - V   # v^{-1} - v


class HeckeElt:
    """Sparse map WElem -> LaurentPoly in the standard basis {H_x}."""

    symbol = "H"

    def __init__(self, terms: Optional[Dict[WElem, LaurentPoly]] = None):
        self.terms: Dict[WElem, LaurentPoly] = {
            x: LaurentPoly.coerce(c) for x, c in (terms or {}).items() if c
        }

    @classmethod
    def basis(cls, x: WElem, coeff=ONE) -> "HeckeElt":
        return cls({x: LaurentPoly.coerce(coeff)})

    def _combine(self, other: "HeckeElt", sign: int) -> "HeckeElt":
        out = dict(self.terms)
        for x, c in other.terms.items():
            out[x] = out.get(x, ZERO) + (c if sign > 0 else -c)
        return type(self)(out)

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        return self._combine(other, 1)

    def __sub__(self, other: "HeckeElt") -> "HeckeElt":
        return self._combine(other, -1)

    def __neg__(self) -> "HeckeElt":
        return type(self)({x: -c for x, c in self.terms.items()})

    def scale(self, c) -> "HeckeElt":
        c = LaurentPoly.coerce(c)
        return type(self)({x: c * a for x, a in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElt):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coeff(self, x: WElem) -> LaurentPoly:
        return self.terms.get(x, ZERO)

    def support(self) -> List[WElem]:
        return sorted(self.terms)

    def items(self) -> List[Tuple[WElem, LaurentPoly]]:
        return [(x, self.terms[x]) for x in self.support()]

    def format(self, system: CoxeterSystem) -> str:
        """Highest terms first, e.g. ``H_sts + vH_st``."""
        if not self.terms:
            return "0"
        parts = []
        for x in sorted(self.terms, reverse=True):
            c = self.terms[x]
            name = f"{self.symbol}_{system.label(x)}"
            if c == ONE:
                parts.append(name)
            elif len(c.items()) == 1 and (c.items()[0][1] == 1 or c.items()[0][0] == 0):
                parts.append(f"{c}{name}" if c != V else f"v{name}")
            else:
                parts.append(f"({c}){name}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        inner = ", ".join(f"{x.word}: {c}" for x, c in self.items())
        return f"{type(self).__name__}({{{inner}}})"


class KLExpansion(HeckeElt):
    """Sparse map WElem -> LaurentPoly in the Kazhdan-Lusztig basis {b_x}."""

    symbol = "kl"


class HeckeAlgebra:
    """Hecke algebra of a Coxeter system with memoized KL basis."""

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self._bar_cache: Dict[WElem, HeckeElt] = {system.identity: HeckeElt.basis(system.identity)}
        self._kl_cache: Dict[WElem, HeckeElt] = {system.identity: HeckeElt.basis(system.identity)}
        self._bs_cache: Dict[Tuple[int, ...], HeckeElt] = {(): HeckeElt.basis(system.identity)}

    # --- standard basis ---
    def H(self, x: WElem) -> HeckeElt:
        return HeckeElt.basis(x)

    def right_mult_s(self, a: HeckeElt, s: int) -> HeckeElt:
        out: Dict[WElem, LaurentPoly] = {}
        for x, c in a.terms.items():
            xs = self.system.rmul(x, s)
            out[xs] = out.get(xs, ZERO) + c
            if xs.length < x.length:
                out[x] = out.get(x, ZERO) + c * QUADRATIC
        return HeckeElt(out)

    def left_mult_s(self, s: int, a: HeckeElt) -> HeckeElt:
        out: Dict[WElem, LaurentPoly] = {}
        for x, c in a.terms.items():
            sx = self.system.lmul(s, x)
            out[sx] = out.get(sx, ZERO) + c
            if sx.length < x.length:
                out[x] = out.get(x, ZERO) + c * QUADRATIC
        return HeckeElt(out)

    def std_mult(self, a: HeckeElt, b: HeckeElt) -> HeckeElt:
        """Bilinear product in the standard basis."""
        out = HeckeElt()
        for y, c in b.terms.items():
            partial = a
            for s in y.word:
                partial = self.right_mult_s(partial, s)
            out = out + partial.scale(c)
        return out

    # --- bar involution ---
    def _bar_H(self, x: WElem) -> HeckeElt:
        cached = self._bar_cache.get(x)
        if cached is not None:
            return cached
        # bar(H_x) = bar(H_{x'}) (H_s + v - v^{-1}) with x = x's
        prefix = self._bar_H(self.system.element(x.word[:-1]))
        s = x.word[-1]
        result = self.right_mult_s(prefix, s) + prefix.scale(V - V_INV)
        self._bar_cache[x] = result
        return result

    def bar(self, a: HeckeElt) -> HeckeElt:
        """v -> v^{-1}, H_x -> (H_{x^{-1}})^{-1}."""
        out = HeckeElt()
        for x, c in a.terms.items():
            out = out + self._bar_H(x).scale(c.bar())
        return out

    # --- Kazhdan-Lusztig basis ---
    def kl_basis(self, x: WElem) -> HeckeElt:
        """b_x in the standard basis: b_s b_{sx} minus mu-corrections."""
        cached = self._kl_cache.get(x)
        if cached is not None:
            return cached
        s = x.word[0]
        sx = self.system.element(x.word[1:])
        b_sx = self.kl_basis(sx)
        result = self.left_mult_s(s, b_sx) + b_sx.scale(V)
        for y, h in b_sx.items():
            if y == sx or not self.system.descent(y, s, "left"):
                continue
            mu = h.coeff(1)
            if mu:
                result = result - self.kl_basis(y).scale(mu)
        self._kl_cache[x] = result
        return result

    def kl(self, x: WElem) -> HeckeElt:
        return self.kl_basis(x)

    def kl_polynomial(self, y: WElem, x: WElem) -> LaurentPoly:
        """h_{y,x}: coefficient of H_y in b_x."""
        return self.kl_basis(x).coeff(y)

    def mu(self, y: WElem, x: WElem) -> int:
        """Coefficient of v in h_{y,x}."""
        return self.kl_polynomial(y, x).coeff(1)

    def to_kl(self, a: HeckeElt) -> KLExpansion:
        """Invert the unitriangular base change, peeling maximal-length terms."""
        remainder = HeckeElt(dict(a.terms))
        out: Dict[WElem, LaurentPoly] = {}
        while remainder.terms:
            x = max(remainder.terms)
            c = remainder.terms[x]
            out[x] = c
            remainder = remainder - self.kl_basis(x).scale(c)
        return KLExpansion(out)

    def from_kl(self, expansion: HeckeElt) -> HeckeElt:
        out = HeckeElt()
        for x, c in expansion.terms.items():
            out = out + self.kl_basis(x).scale(c)
        return out

    def bs_character(self, word: Iterable[int]) -> HeckeElt:
        """b_{s_1} b_{s_2} ... b_{s_n} in the standard basis (memoized by prefix)."""
        word = tuple(word)
        cached = self._bs_cache.get(word)
        if cached is not None:
            return cached
        prefix = self.bs_character(word[:-1])
        result = self.right_mult_s(prefix, word[-1]) + prefix.scale(V)
        self._bs_cache[word] = result
        return result

    # --- persistence of the KL table ---
    def export_kl(self) -> List[list]:
        return [
            [list(x.word), [[list(y.word), c.to_pairs()] for y, c in b.items()]]
            for x, b in sorted(self._kl_cache.items())
        ]

    def import_kl(self, data: List[list]) -> None:
        for word, terms in data:
            x = self.system.element(word)
            self._kl_cache[x] = HeckeElt({
                self.system.element(yw): LaurentPoly.from_pairs(pairs) for yw, pairs in terms
            })
        logger.debug("Imported %d KL elements for %s", len(data), self.system.name)
