"""The graded polynomial ring R of a realization, its W-action and Demazure operators.

Variables ``x0 .. x{r-1}`` are coordinates on the realization lattice, so a
root is a linear form with integer coefficients. Linear forms have degree 2
in the grading of the Hecke category; polynomial degrees reported here follow
that convention.
"""

from collections import Counter
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy.core.intfunc import igcdex
from sympy.polys.domains import QQ, ZZ
from sympy.polys.rings import PolyElement, xring

from ..utils.errors import AlgebraError, RealizationError, SpecializationError
from .coxeter import CoxeterSystem, WElem

Form = Tuple[int, ...]


def total_degree(f: PolyElement) -> Optional[int]:
    """Polynomial degree in the variables (not the doubled grading); None for 0."""
    if not f:
        return None
    return max(sum(m) for m in f.monoms())


def is_homogeneous(f: PolyElement) -> bool:
    return len({sum(m) for m in f.monoms()}) <= 1


def normalize_form(vec: Sequence) -> Tuple[Fraction, Form]:
    """Write a rational linear form as scale * key, key primitive integral with positive lead."""
    fracs = [Fraction(a) for a in vec]
    if not any(fracs):
        raise AlgebraError("zero linear form cannot be a denominator")
    den = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fracs), 1)
    ints = [int(f * den) for f in fracs]
    content = reduce(gcd, ints)
    lead = next(a for a in ints if a)
    if lead < 0:
        content = -content
    key = tuple(a // content for a in ints)
    return Fraction(content, den), key


class PolynomialRing:
    """R = Z[x0, ..., x{r-1}] with the contragredient W-action of a CoxeterSystem."""

    def __init__(self, system: CoxeterSystem):
        self.system = system
        self.rank = system.realization_rank
        names = [f"x{i}" for i in range(self.rank)]
        self.ring, self.gens = xring(names, ZZ)
        self.qring, self.qgens = xring(names, QQ)
        self._images: Dict[Tuple[Tuple[int, ...], bool], list] = {}
        self._delta: Dict[int, PolyElement] = {}

    # --- construction ---
    def linear_form(self, vec: Sequence[int], field: bool = False) -> PolyElement:
        gens = self.qgens if field else self.gens
        base = self.qring if field else self.ring
        return sum((int(a) * g for a, g in zip(vec, gens) if a), base.zero)

    def root(self, s: int, field: bool = False) -> PolyElement:
        return self.linear_form(self.system.roots[s], field)

    def coerce(self, value) -> PolyElement:
        if isinstance(value, PolyElement):
            return value.set_ring(self.ring)
        return self.ring(int(value))

    def to_field(self, f: PolyElement) -> PolyElement:
        return f.set_ring(self.qring)

    # --- W-action ---
    def _gen_images(self, x: WElem, field: bool) -> list:
        key = (x.word, field)
        images = self._images.get(key)
        if images is None:
            m = x.dual_matrix
            images = [self.linear_form(m[:, j], field) for j in range(self.rank)]
            self._images[key] = images
        return images

    def act(self, x: WElem, f: PolyElement) -> PolyElement:
        """x(f); the image of x_j is column j of x's dual matrix."""
        if x.length == 0 or not f:
            return f
        field = f.ring == self.qring
        gens = self.qgens if field else self.gens
        return f.compose(list(zip(gens, self._gen_images(x, field))))

    def act_form(self, x: WElem, vec: Sequence[int]) -> Form:
        return tuple(int(a) for a in x.dual_matrix @ np.asarray(vec, dtype=np.int64))

    def twisted_root(self, x: WElem, s: int) -> Form:
        """Coefficient vector of x(alpha_s)."""
        return self.act_form(x, self.system.roots[s])

    # --- Demazure operators ---
    def demazure(self, s: int, f: PolyElement) -> PolyElement:
        """(f - s(f)) / alpha_s by exact division."""
        if not f:
            return f
        diff = f - self.act(self.system.generator(s), f)
        if not diff:
            return f.ring.zero
        alpha = self.root(s, field=f.ring == self.qring)
        q, r = diff.div(alpha)
        if r:
            raise AlgebraError(f"{diff} is not divisible by alpha_{self.system.generators[s]}")
        return q

    def delta(self, s: int) -> PolyElement:
        """An integral linear form with demazure(s, delta) = 1."""
        found = self._delta.get(s)
        if found is not None:
            return found
        coroot = [int(a) for a in self.system.coroots[s]]
        coeffs = [0] * self.rank
        g = 0
        for j, c in enumerate(coroot):
            if c == 0:
                continue
            if g == 0:
                coeffs[j], g = (1, c) if c > 0 else (-1, -c)
                continue
            u, v, g_new = igcdex(g, c)
            coeffs = [int(u) * a for a in coeffs]
            coeffs[j] = int(v)
            g = int(g_new)
        if g != 1:
            raise RealizationError(
                f"coroot of {self.system.generators[s]} is not primitive; no integral delta exists"
            )
        found = self.linear_form(coeffs)
        self._delta[s] = found
        return found

    # --- fraction entries ---
    def fraction(self, num, den: Iterable[Sequence] = ()) -> "RationalEntry":
        if not isinstance(num, PolyElement):
            num = self.qring(QQ(Fraction(num).numerator, Fraction(num).denominator))
        return RationalEntry(self, num.set_ring(self.qring), den)

    def const(self, c) -> "RationalEntry":
        return self.fraction(c)

    def root_entry(self, s: int) -> "RationalEntry":
        return RationalEntry(self, self.root(s, field=True), ())

    def inverse_root_entry(self, s: int) -> "RationalEntry":
        return RationalEntry(self, self.qring.one, (tuple(int(a) for a in self.system.roots[s]),))

    def random_poly(self, degree: int, rng: np.random.Generator, terms: int = 4) -> PolyElement:
        """Random homogeneous polynomial of the given variable degree (tests and tooling)."""
        out = self.ring.zero
        for _ in range(terms):
            exps = rng.multinomial(degree, [1.0 / self.rank] * self.rank)
            out += int(rng.integers(-3, 4)) * self.ring.term_new(tuple(int(e) for e in exps), ZZ(1))
        return out


def _qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


class RationalEntry:
    """num / prod(den), den a sorted multiset of primitive linear forms.

    Entries are reduced: no denominator form divides the numerator.
    """

    __slots__ = ("R", "num", "den", "_hash")

    def __init__(self, R: PolynomialRing, num: PolyElement, den: Iterable[Sequence] = ()):
        self.R = R
        keys: List[Form] = []
        for vec in den:
            scale, key = normalize_form(vec)
            num = num * _qq(1 / scale)
            keys.append(key)
        self.num, self.den = self._cancel(num, sorted(keys))
        self._hash = None

    def _cancel(self, num: PolyElement, keys: List[Form]) -> Tuple[PolyElement, Tuple[Form, ...]]:
        if not num:
            return num, ()
        kept = []
        for key in keys:
            q, r = num.div(self.R.linear_form(key, field=True))
            if r:
                kept.append(key)
            else:
                num = q
        return num, tuple(kept)

    def _new(self, num: PolyElement, den: Iterable[Form]) -> "RationalEntry":
        return RationalEntry(self.R, num, den)

    # --- arithmetic ---
    def __add__(self, other) -> "RationalEntry":
        if not isinstance(other, RationalEntry):
            other = self.R.fraction(other)
        ca, cb = Counter(self.den), Counter(other.den)
        common = ca | cb
        num_a = self.num
        for key, k in (common - ca).items():
            num_a = num_a * self.R.linear_form(key, field=True) ** k
        num_b = other.num
        for key, k in (common - cb).items():
            num_b = num_b * self.R.linear_form(key, field=True) ** k
        return self._new(num_a + num_b, common.elements())

    __radd__ = __add__

    def __neg__(self) -> "RationalEntry":
        return self._new(-self.num, self.den)

    def __sub__(self, other) -> "RationalEntry":
        if not isinstance(other, RationalEntry):
            other = self.R.fraction(other)
        return self + (-other)

    def __rsub__(self, other) -> "RationalEntry":
        return (-self) + other

    def __mul__(self, other) -> "RationalEntry":
        if not isinstance(other, RationalEntry):
            other = self.R.fraction(other)
        return self._new(self.num * other.num, self.den + other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalEntry":
        """1 / self; the numerator must factor into linear forms."""
        if not self.num:
            raise AlgebraError("division by zero entry")
        coeff, factors = self.num.factor_list()
        scale = Fraction(int(coeff.numerator), int(coeff.denominator))
        den: List[Form] = []
        for factor, k in factors:
            if total_degree(factor) != 1 or not is_homogeneous(factor):
                raise AlgebraError(f"cannot invert non-linear factor {factor}")
            vec = [Fraction(0)] * self.R.rank
            for monom, c in factor.items():
                vec[monom.index(1)] = Fraction(int(c.numerator), int(c.denominator))
            fscale, key = normalize_form(vec)
            scale *= fscale ** k
            den.extend([key] * k)
        num = self.R.qring(_qq(1 / scale))
        for key in self.den:
            num = num * self.R.linear_form(key, field=True)
        return self._new(num, den)

    def __truediv__(self, other) -> "RationalEntry":
        if not isinstance(other, RationalEntry):
            other = self.R.fraction(other)
        return self * other.inverse()

    def act(self, x: WElem) -> "RationalEntry":
        if x.length == 0:
            return self
        return self._new(self.R.act(x, self.num), [self.R.act_form(x, key) for key in self.den])

    # --- queries ---
    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalEntry):
            if isinstance(other, (int, Fraction)):
                other = self.R.fraction(other)
            else:
                return NotImplemented
        return self.den == other.den and self.num == other.num

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), self.den))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return not self.den

    def is_homogeneous(self) -> bool:
        return is_homogeneous(self.num)

    def to_poly(self) -> PolyElement:
        """The entry as an element of R; AlgebraError if it is not one."""
        if self.den:
            raise AlgebraError(f"{self} is not a polynomial")
        terms = {}
        for monom, c in self.num.items():
            if c.denominator != 1:
                raise AlgebraError(f"{self} has non-integral coefficients")
            terms[monom] = int(c.numerator)
        return self.R.ring.from_dict(terms)

    def constant(self) -> Fraction:
        """Degree-zero coefficient of the numerator (the entry must be a polynomial)."""
        if self.den:
            raise AlgebraError(f"{self} is not a polynomial")
        c = self.num.get((0,) * self.R.rank)
        if not c:
            return Fraction(0)
        return Fraction(int(c.numerator), int(c.denominator))

    def degree(self) -> Optional[int]:
        """Degree in the doubled grading; None for zero."""
        d = total_degree(self.num)
        return None if d is None else 2 * (d - len(self.den))

    def evaluate_mod(self, point: Sequence[int], q: int) -> int:
        """Value at an integer point modulo the prime q."""
        value = 0
        for monom, c in self.num.items():
            term = int(c.numerator) * pow(int(c.denominator), -1, q)
            for base, e in zip(point, monom):
                if e:
                    term = term * pow(base, e, q)
            value = (value + term) % q
        den = 1
        for key in self.den:
            den = den * (sum(a * b for a, b in zip(key, point)) % q) % q
        if den == 0:
            raise SpecializationError("denominator vanishes at the evaluation point")
        return value * pow(den, -1, q) % q

    # --- serialization ---
    def to_data(self) -> dict:
        num = sorted(
            [list(m), f"{int(c.numerator)}/{int(c.denominator)}"] for m, c in self.num.items()
        )
        return {"num": num, "den": [list(k) for k in self.den]}

    @classmethod
    def from_data(cls, R: PolynomialRing, data: dict) -> "RationalEntry":
        num = R.qring.from_dict({
            tuple(m): _qq(Fraction(c)) for m, c in data["num"]
        })
        return cls(R, num, [tuple(k) for k in data["den"]])

    def __repr__(self) -> str:
        return f"RationalEntry({self})"

    def __str__(self) -> str:
        if not self.den:
            return str(self.num)
        den = "*".join(f"({self.R.linear_form(k)})" for k in self.den)
        return f"({self.num})/{den}"
