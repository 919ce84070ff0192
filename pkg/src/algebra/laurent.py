"""Laurent polynomials in one variable v over the integers."""

from typing import Dict, Iterable, List, Tuple, Union

Scalar = Union[int, "LaurentPoly"]


class LaurentPoly:
    """Sparse {exponent: coefficient} map with no stored zeros."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Dict[int, int] = None):
        self._c = {int(e): int(c) for e, c in (coeffs or {}).items() if c != 0}
        self._hash = None

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, int]]) -> "LaurentPoly":
        out: Dict[int, int] = {}
        for e, c in pairs:
            out[int(e)] = out.get(int(e), 0) + int(c)
        return cls(out)

    @staticmethod
    def coerce(value: Scalar) -> "LaurentPoly":
        if isinstance(value, LaurentPoly):
            return value
        return LaurentPoly({0: int(value)})

    # --- arithmetic ---
    def __add__(self, other: Scalar) -> "LaurentPoly":
        other = LaurentPoly.coerce(other)
        out = dict(self._c)
        for e, c in other._c.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._c.items()})

    def __sub__(self, other: Scalar) -> "LaurentPoly":
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other: Scalar) -> "LaurentPoly":
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other: Scalar) -> "LaurentPoly":
        other = LaurentPoly.coerce(other)
        out: Dict[int, int] = {}
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    # --- comparison ---
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._c)

    # --- queries ---
    def coeff(self, exponent: int) -> int:
        return self._c.get(exponent, 0)

    def items(self) -> List[Tuple[int, int]]:
        return sorted(self._c.items())

    def bar(self) -> "LaurentPoly":
        """v -> v^{-1}."""
        return LaurentPoly({-e: c for e, c in self._c.items()})

    def is_self_dual(self) -> bool:
        return self == self.bar()

    def is_nonnegative(self) -> bool:
        return all(c > 0 for c in self._c.values())

    def at_one(self) -> int:
        """Value at v = 1."""
        return sum(self._c.values())

    def degree(self) -> int:
        return max(self._c) if self._c else 0

    def valuation(self) -> int:
        return min(self._c) if self._c else 0

    def to_pairs(self) -> List[List[int]]:
        """Serialization: [[exponent, coefficient], ...], exponents increasing."""
        return [[e, c] for e, c in self.items()]

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e, c in sorted(self._c.items()):
            if e == 0:
                mono = ""
            elif e == 1:
                mono = "v"
            else:
                mono = f"v^{e}"
            if mono and abs(c) == 1:
                term = mono
            elif mono:
                term = f"{abs(c)}{mono}"
            else:
                term = str(abs(c))
            sign = "-" if c < 0 else "+"
            parts.append((sign, term))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, term in parts[1:]:
            out += f" {sign} {term}"
        return out


ZERO = LaurentPoly()
ONE = LaurentPoly.monomial(0)
V = LaurentPoly.monomial(1)
V_INV = LaurentPoly.monomial(-1)
