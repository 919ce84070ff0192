"""Localization matrices of Bott-Samelson morphisms.

A Bott-Samelson object on a word w embeds into sum_g Q, one copy per 01-sequence
g on w, through the coordinates

    pi_g(f_0 (x) f_1 (x) ... (x) f_n) = f_0 * x_1(f_1) * ... * x_n(f_n)

where x_i is the endpoint of the first i letters of g. A morphism is then a
matrix of fractions with rows indexed by sequences on the codomain and
columns by sequences on the domain. Subexpressions are always enumerated
lexicographically in their bits.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix

import config as constants
from ..algebra.coxeter import CoxeterSystem, WElem, Word
from ..algebra.polyring import PolynomialRing, RationalEntry
from ..utils.cache import NullCache
from ..utils.errors import AlgebraError, RealizationError, RelationError

logger = logging.getLogger(__name__)

Bits = Tuple[int, ...]

KINDS = ("dot_in", "dot_out", "merge", "split", "braid")
FLIP_PARTNER = {"dot_in": "dot_out", "dot_out": "dot_in", "merge": "split", "split": "merge"}
GENERATOR_DEGREE = {"dot_in": 1, "dot_out": 1, "merge": -1, "split": -1, "braid": 0}


def subexpressions(word: Sequence[int]) -> List[Bits]:
    return list(product((0, 1), repeat=len(word)))


@dataclass(frozen=True)
class GeneratorTag:
    """One generating morphism placed after ``position`` identity strands."""
    kind: str
    s: int
    t: Optional[int] = None
    position: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind '{self.kind}'")
        if (self.kind == "braid") != (self.t is not None):
            raise ValueError("exactly the braid generator carries a second colour")

    @property
    def degree(self) -> int:
        return GENERATOR_DEGREE[self.kind]

    def words(self, system: CoxeterSystem) -> Tuple[Word, Word]:
        """(domain, codomain) of the generator on its own."""
        s = self.s
        if self.kind == "dot_in":
            return (), (s,)
        if self.kind == "dot_out":
            return (s,), ()
        if self.kind == "merge":
            return (s, s), (s,)
        if self.kind == "split":
            return (s,), (s, s)
        m = system.m(s, self.t)
        if m == constants.INFINITY:
            raise RealizationError(
                f"no braid vertex for {system.generators[s]}, {system.generators[self.t]} (m = infinity)"
            )
        return system.alternating(s, self.t, m), system.alternating(self.t, s, m)

    def flipped(self) -> "GeneratorTag":
        if self.kind == "braid":
            return GeneratorTag("braid", self.t, self.s, self.position)
        return GeneratorTag(FLIP_PARTNER[self.kind], self.s, None, self.position)

    def at(self, position: int) -> "GeneratorTag":
        return GeneratorTag(self.kind, self.s, self.t, position)


class StdMatrix:
    """Sparse localization matrix of a morphism domain -> codomain."""

    def __init__(self, model: "LocalizationModel", domain: Word, codomain: Word,
                 rows: Optional[Dict[Bits, Dict[Bits, RationalEntry]]] = None):
        self.model = model
        self.domain = tuple(domain)
        self.codomain = tuple(codomain)
        self.rows: Dict[Bits, Dict[Bits, RationalEntry]] = {}
        for h, row in (rows or {}).items():
            kept = {g: v for g, v in row.items() if v}
            if kept:
                self.rows[h] = kept

    # --- basic access ---
    def entry(self, row: Bits, col: Bits) -> RationalEntry:
        return self.rows.get(tuple(row), {}).get(tuple(col), self.model.zero)

    def as_lists(self) -> List[List[RationalEntry]]:
        return [[self.entry(h, g) for g in subexpressions(self.domain)]
                for h in subexpressions(self.codomain)]

    def is_zero(self) -> bool:
        return not self.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, StdMatrix):
            return NotImplemented
        return (self.domain, self.codomain, self.rows) == (other.domain, other.codomain, other.rows)

    def __repr__(self) -> str:
        fmt = self.model.system.format_word
        return f"StdMatrix({fmt(self.domain)} -> {fmt(self.codomain)}, {sum(map(len, self.rows.values()))} entries)"

    # --- linear structure ---
    def _same_shape(self, other: "StdMatrix") -> None:
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise AlgebraError("matrices of different shapes")

    def __add__(self, other: "StdMatrix") -> "StdMatrix":
        self._same_shape(other)
        rows = {h: dict(r) for h, r in self.rows.items()}
        for h, row in other.rows.items():
            out = rows.setdefault(h, {})
            for g, v in row.items():
                out[g] = out[g] + v if g in out else v
        return StdMatrix(self.model, self.domain, self.codomain, rows)

    def scale(self, c) -> "StdMatrix":
        rows = {h: {g: v * c for g, v in row.items()} for h, row in self.rows.items()}
        return StdMatrix(self.model, self.domain, self.codomain, rows)

    def __neg__(self) -> "StdMatrix":
        return self.scale(-1)

    def __sub__(self, other: "StdMatrix") -> "StdMatrix":
        return self + (-other)

    def apply(self, vec: Dict[Bits, RationalEntry]) -> Dict[Bits, RationalEntry]:
        out: Dict[Bits, RationalEntry] = {}
        for h, row in self.rows.items():
            acc = None
            for g, v in row.items():
                if g in vec and vec[g]:
                    term = v * vec[g]
                    acc = term if acc is None else acc + term
            if acc:
                out[h] = acc
        return out

    # --- degree ---
    def entry_degree_offset(self) -> int:
        return len(self.codomain) - len(self.domain)

    def infer_degree(self) -> Optional[int]:
        for row in self.rows.values():
            for v in row.values():
                return v.degree() - self.entry_degree_offset()
        return None

    def check_homogeneous(self, degree: int) -> None:
        """Every entry must have degree ``degree + len(codomain) - len(domain)``."""
        expected = degree + self.entry_degree_offset()
        for h, row in self.rows.items():
            for g, v in row.items():
                if not v.is_homogeneous() or v.degree() != expected:
                    raise AlgebraError(
                        f"entry ({h}, {g}) = {v} is not homogeneous of degree {expected}"
                    )


def compose(g: StdMatrix, f: StdMatrix) -> StdMatrix:
    """g o f."""
    if f.codomain != g.domain:
        raise AlgebraError(
            f"cannot compose: codomain {f.codomain} differs from domain {g.domain}"
        )
    rows: Dict[Bits, Dict[Bits, RationalEntry]] = {}
    for h, grow in g.rows.items():
        out: Dict[Bits, RationalEntry] = {}
        for k, a in grow.items():
            frow = f.rows.get(k)
            if not frow:
                continue
            for j, b in frow.items():
                term = a * b
                out[j] = out[j] + term if j in out else term
        rows[h] = out
    return StdMatrix(g.model, f.domain, g.codomain, rows)


def compose_all(*mats: StdMatrix) -> StdMatrix:
    """compose_all(a, b, c) = a o b o c."""
    result = mats[-1]
    for m in reversed(mats[:-1]):
        result = compose(m, result)
    return result


def htensor(left: Sequence[int], M: StdMatrix, right: Sequence[int]) -> StdMatrix:
    """id_left (x) M (x) id_right; entries are twisted by the endpoint on the left."""
    model = M.model
    left, right = tuple(left), tuple(right)
    rows: Dict[Bits, Dict[Bits, RationalEntry]] = {}
    rights = subexpressions(right)
    for a in subexpressions(left):
        x = model.endpoint(left, a)
        twisted = {h: {g: v.act(x) for g, v in row.items()} for h, row in M.rows.items()}
        for c in rights:
            for h, row in twisted.items():
                rows[a + h + c] = {a + g + c: v for g, v in row.items()}
    return StdMatrix(model, left + M.domain + right, left + M.codomain + right, rows)


def flip(M: StdMatrix) -> StdMatrix:
    """Upside-down morphism: D_dom M^T D_cod^{-1} with D the diagonal of Euler factors."""
    model = M.model
    p_dom = model.euler_factors(M.domain)
    p_cod_inv = {h: model.inverse_euler_factor(M.codomain, h) for h in subexpressions(M.codomain)}
    rows: Dict[Bits, Dict[Bits, RationalEntry]] = {}
    for h, row in M.rows.items():
        for g, v in row.items():
            rows.setdefault(g, {})[h] = p_dom[g] * v * p_cod_inv[h]
    return StdMatrix(model, M.codomain, M.domain, rows)


class LocalizationModel:
    """Generator matrices, Euler factors and lattice tests for one realization."""

    def __init__(self, system: CoxeterSystem, R: Optional[PolynomialRing] = None, cache=None):
        self.system = system
        self.R = R or PolynomialRing(system)
        self.cache = cache or NullCache()
        self.zero = self.R.const(0)
        self.one = self.R.const(1)
        self._generators: Dict[Tuple[str, int, Optional[int]], StdMatrix] = {}
        self._euler: Dict[Word, Dict[Bits, RationalEntry]] = {}

    def endpoint(self, word: Sequence[int], bits: Sequence[int]) -> WElem:
        return self.system.element(tuple(s for s, b in zip(word, bits) if b))

    # --- Euler factors ---
    def euler_forms(self, word: Sequence[int], bits: Sequence[int]) -> List[Tuple[int, ...]]:
        """The linear forms x_i(alpha_{s_i}), x_i the endpoint through letter i."""
        x = self.system.identity
        forms = []
        for s, b in zip(word, bits):
            if b:
                x = self.system.rmul(x, s)
            forms.append(self.R.twisted_root(x, s))
        return forms

    def euler_factor(self, word: Sequence[int], bits: Sequence[int]) -> RationalEntry:
        """P_g, the product of the Euler forms."""
        value = self.R.qring.one
        for form in self.euler_forms(word, bits):
            value = value * self.R.linear_form(form, field=True)
        return self.R.fraction(value)

    def inverse_euler_factor(self, word: Sequence[int], bits: Sequence[int]) -> RationalEntry:
        return RationalEntry(self.R, self.R.qring.one, self.euler_forms(word, bits))

    def euler_factors(self, word: Sequence[int]) -> Dict[Bits, RationalEntry]:
        word = tuple(word)
        found = self._euler.get(word)
        if found is None:
            found = {g: self.euler_factor(word, g) for g in subexpressions(word)}
            self._euler[word] = found
        return found

    # --- generators ---
    def identity(self, word: Sequence[int]) -> StdMatrix:
        word = tuple(word)
        return StdMatrix(self, word, word, {g: {g: self.one} for g in subexpressions(word)})

    def polynomial_matrix(self, left: Sequence[int], f, right: Sequence[int]) -> StdMatrix:
        """Multiplication by f in the region between ``left`` and ``right``."""
        if not isinstance(f, RationalEntry):
            f = self.R.fraction(f)
        return htensor(left, StdMatrix(self, (), (), {(): {(): f}}), right)

    def generator_matrix(self, tag: GeneratorTag) -> StdMatrix:
        key = (tag.kind, tag.s, tag.t)
        found = self._generators.get(key)
        if found is not None:
            return found
        s = tag.s
        if tag.kind == "dot_out":
            rows = {(): {(0,): self.one}}
        elif tag.kind == "dot_in":
            rows = {(0,): {(): self.R.root_entry(s)}}
        elif tag.kind == "split":
            rows = {(0, 0): {(0,): self.one}, (0, 1): {(1,): self.one},
                    (1, 0): {(1,): self.one}, (1, 1): {(0,): self.one}}
        elif tag.kind == "merge":
            inv = self.R.inverse_root_entry(s)
            rows = {(0,): {(0, 0): inv, (1, 1): -inv}, (1,): {(0, 1): inv, (1, 0): -inv}}
        else:
            found = self._braid(s, tag.t)
            self._generators[key] = found
            return found
        domain, codomain = tag.words(self.system)
        found = StdMatrix(self, domain, codomain, rows)
        self._generators[key] = found
        return found

    def dot_in(self, s: int) -> StdMatrix:
        return self.generator_matrix(GeneratorTag("dot_in", s))

    def dot_out(self, s: int) -> StdMatrix:
        return self.generator_matrix(GeneratorTag("dot_out", s))

    def merge(self, s: int) -> StdMatrix:
        return self.generator_matrix(GeneratorTag("merge", s))

    def split(self, s: int) -> StdMatrix:
        return self.generator_matrix(GeneratorTag("split", s))

    def braid(self, s: int, t: int) -> StdMatrix:
        return self.generator_matrix(GeneratorTag("braid", s, t))

    def layer_matrix(self, tag: GeneratorTag, word_after: Sequence[int]) -> StdMatrix:
        """The generator tensored with identities; ``word_after`` is the full codomain."""
        domain, codomain = tag.words(self.system)
        left = tuple(word_after[:tag.position])
        right = tuple(word_after[tag.position + len(codomain):])
        return htensor(left, self.generator_matrix(tag), right)

    def _braid(self, s: int, t: int) -> StdMatrix:
        """Projection through the indecomposable of the longest dihedral element.

        Within the block of endpoint x every row equals (1/P_g) / c_x, where
        c_x = sum of 1/P_g' over sequences g' on the source word ending in x.
        """
        tag = GeneratorTag("braid", s, t)
        source, target = tag.words(self.system)

        def build() -> list:
            inverse_p: Dict[Bits, Tuple[WElem, RationalEntry]] = {}
            totals: Dict[WElem, RationalEntry] = {}
            for g in subexpressions(source):
                x = self.endpoint(source, g)
                inv = self.inverse_euler_factor(source, g)
                inverse_p[g] = (x, inv)
                totals[x] = totals[x] + inv if x in totals else inv
            scale = {x: c.inverse() for x, c in totals.items()}
            by_end: Dict[WElem, List[Bits]] = {}
            for h in subexpressions(target):
                by_end.setdefault(self.endpoint(target, h), []).append(h)
            data = []
            for g, (x, inv) in inverse_p.items():
                value = (inv * scale[x]).to_data()
                for h in by_end.get(x, []):
                    data.append([list(h), list(g), value])
            return data

        data = self.cache.get_or_compute(
            "braid", [self.system.realization_key, list(source), list(target)], build)
        rows: Dict[Bits, Dict[Bits, RationalEntry]] = {}
        for h, g, value in data:
            rows.setdefault(tuple(h), {})[tuple(g)] = RationalEntry.from_data(self.R, value)
        logger.debug("Braid matrix %s -> %s ready", self.system.format_word(source),
                     self.system.format_word(target))
        return StdMatrix(self, source, target, rows)

    # --- integral lattice ---
    def lattice_vector(self, word: Sequence[int], eps: Sequence[int]) -> Dict[Bits, RationalEntry]:
        """Coordinates of 1 (x) delta^{eps_1} (x) ... (x) delta^{eps_n}."""
        word = tuple(word)
        out = {}
        for g in subexpressions(word):
            x = self.system.identity
            value = self.one
            for s, b, e in zip(word, g, eps):
                if b:
                    x = self.system.rmul(x, s)
                if e:
                    value = value * self.R.fraction(self.R.act(x, self.R.delta(s)))
            out[g] = value
        return out

    def lattice_basis(self, word: Sequence[int]) -> List[Dict[Bits, RationalEntry]]:
        return [self.lattice_vector(word, eps) for eps in subexpressions(word)]

    def in_lattice(self, word: Sequence[int], vec: Dict[Bits, RationalEntry]) -> bool:
        """Whether vec is an R-combination of the lattice basis, peeling the last letter."""
        word = tuple(word)
        if not word:
            value = vec.get((), self.zero)
            try:
                value.to_poly()
            except AlgebraError:
                return False
            return True
        s, prefix = word[-1], word[:-1]
        delta = self.R.fraction(self.R.delta(s))
        alpha = self.R.root_entry(s)
        low: Dict[Bits, RationalEntry] = {}
        high: Dict[Bits, RationalEntry] = {}
        for g in subexpressions(prefix):
            a = vec.get(g + (0,), self.zero)
            b = vec.get(g + (1,), self.zero)
            x = self.endpoint(prefix, g)
            coefficient = (a - b) / alpha.act(x)
            low[g] = a - coefficient * delta.act(x)
            high[g] = coefficient
        return self.in_lattice(prefix, low) and self.in_lattice(prefix, high)

    def preserves_lattice(self, M: StdMatrix) -> bool:
        return all(self.in_lattice(M.codomain, M.apply(vec)) for vec in self.lattice_basis(M.domain))


@dataclass
class RelationReport:
    """Outcome of the relation suite for one generator or one pair."""
    system: str
    colours: Tuple[str, ...]
    results: List[Tuple[str, bool]] = field(default_factory=list)

    def record(self, name: str, passed: bool) -> None:
        self.results.append((name, bool(passed)))

    @property
    def failures(self) -> List[str]:
        return [name for name, ok in self.results if not ok]

    @property
    def passed(self) -> bool:
        return not self.failures

    def raise_on_failure(self) -> None:
        if self.failures:
            raise RelationError(self.failures[0], f"{self.system}, colours {','.join(self.colours)}")


def _check(report: RelationReport, name: str, lhs: StdMatrix, rhs: StdMatrix, strict: bool) -> None:
    ok = lhs == rhs
    report.record(name, ok)
    if not ok:
        logger.warning("Relation %s failed for %s (%s)", name, report.system, ",".join(report.colours))
        if strict:
            raise RelationError(name, f"{report.system}, colours {','.join(report.colours)}")


def _one_colour(model: LocalizationModel, s: int, report: RelationReport, strict: bool) -> None:
    R = model.R
    ids = model.identity((s,))
    split, merge = model.split(s), model.merge(s)
    dot_in, dot_out = model.dot_in(s), model.dot_out(s)

    _check(report, "unit", compose(htensor((s,), dot_out, ()), split), ids, strict)
    _check(report, "unit", compose(htensor((), dot_out, (s,)), split), ids, strict)
    _check(report, "counit", compose(merge, htensor((s,), dot_in, ())), ids, strict)
    _check(report, "counit", compose(merge, htensor((), dot_in, (s,))), ids, strict)
    _check(report, "associativity",
           compose(htensor((s,), merge, ()), htensor((), split, (s,))), compose(split, merge), strict)
    _check(report, "associativity",
           compose(htensor((), merge, (s,)), htensor((s,), split, ())), compose(split, merge), strict)
    _check(report, "associativity",
           compose(merge, htensor((), merge, (s,))), compose(merge, htensor((s,), merge, ())), strict)
    _check(report, "associativity",
           compose(htensor((), split, (s,)), split), compose(htensor((s,), split, ()), split), strict)
    _check(report, "needle", compose(merge, split), StdMatrix(model, (s,), (s,)), strict)
    _check(report, "barbell", compose(dot_out, dot_in), model.polynomial_matrix((), R.root(s), ()), strict)

    broken = compose(dot_in, dot_out)
    s_elem = model.system.generator(s)
    samples = list(R.gens) + [R.root(t) ** 2 for t in range(model.system.rank)]
    for f in samples:
        lhs = model.polynomial_matrix((), f, (s,))
        rhs = (model.polynomial_matrix((s,), R.act(s_elem, f), ())
               + broken.scale(R.fraction(R.demazure(s, f))))
        _check(report, "nil_hecke", lhs, rhs, strict)

    for tag in (GeneratorTag("dot_in", s), GeneratorTag("dot_out", s),
                GeneratorTag("merge", s), GeneratorTag("split", s)):
        M = model.generator_matrix(tag)
        try:
            M.check_homogeneous(tag.degree)
            homogeneous = True
        except AlgebraError:
            homogeneous = False
        report.record(f"degree_{tag.kind}", homogeneous)
        report.record(f"lattice_{tag.kind}", model.preserves_lattice(M))
        report.record(f"flip_{tag.kind}", flip(M) == model.generator_matrix(tag.flipped()))


def _tl_times_cup_cap(diagram: Tuple[int, ...], n: int, i: int) -> Tuple[bool, Tuple[int, ...]]:
    """diagram * e_i; True when a closed loop is removed."""
    a, b = n + i - 1, n + i
    if diagram[a] == b:
        return True, diagram
    new = list(diagram)
    pa, pb = diagram[a], diagram[b]
    new[pa], new[pb] = pb, pa
    new[a], new[b] = b, a
    return False, tuple(new)


def temperley_lieb_basis(n: int) -> Dict[Tuple[int, ...], Tuple[int, ...]]:
    """Crossingless matchings on n strands, each with a loop-free word in the cup-caps.

    A matching is a partner tuple over 2n points: top points 0..n-1, then
    bottom points n..2n-1. The identity comes first.
    """
    identity = tuple(range(n, 2 * n)) + tuple(range(n))
    words = {identity: ()}
    queue = deque([identity])
    while queue:
        diagram = queue.popleft()
        for i in range(1, n):
            loop, nxt = _tl_times_cup_cap(diagram, n, i)
            if not loop and nxt not in words:
                words[nxt] = words[diagram] + (i,)
                queue.append(nxt)
    return words


def jones_wenzl_coefficients(n: int, loops: Dict[int, int]) -> Dict[Tuple[int, ...], Fraction]:
    """Two-colour Jones-Wenzl projector on n strands in the diagram basis.

    ``loops[i]`` is the value of the loop closed by e_i. The projector has
    identity coefficient 1 and is killed by every e_i on the right.
    """
    words = temperley_lieb_basis(n)
    identity = next(iter(words))
    unknowns = [d for d in words if d != identity]
    if not unknowns:
        return {identity: Fraction(1)}
    index = {d: k for k, d in enumerate(unknowns)}
    equations: Dict[Tuple[int, Tuple[int, ...]], Tuple[List[int], List[int]]] = {}
    for diagram in words:
        for i in range(1, n):
            loop, target = _tl_times_cup_cap(diagram, n, i)
            factor = loops[i] if loop else 1
            coeffs, const = equations.setdefault((i, target), ([0] * len(unknowns), [0]))
            if diagram == identity:
                const[0] -= factor
            else:
                coeffs[index[diagram]] += factor
    A = Matrix([coeffs for coeffs, _ in equations.values()])
    b = Matrix([const[0] for _, const in equations.values()])
    try:
        solution, params = A.gauss_jordan_solve(b)
    except ValueError as exc:
        raise AlgebraError(f"no Jones-Wenzl projector on {n} strands for loop values {loops}") from exc
    if params.shape[0]:
        raise AlgebraError(f"Jones-Wenzl projector on {n} strands is not unique for loop values {loops}")
    out = {identity: Fraction(1)}
    for diagram, value in zip(unknowns, solution):
        out[diagram] = Fraction(int(value.p), int(value.q))
    return out


def _cup_cap(model: LocalizationModel, w: Word, i: int) -> StdMatrix:
    """The endomorphism of w pinching off the region between strands i-1 and i."""
    x, y = w[i - 1], w[i]
    return compose_all(htensor(w[:i], model.dot_in(y), w[i + 1:]),
                       htensor(w[:i - 1], model.split(x), w[i + 2:]),
                       htensor(w[:i - 1], model.merge(x), w[i + 2:]),
                       htensor(w[:i], model.dot_out(y), w[i + 1:]))


def jones_wenzl_rhs(model: LocalizationModel, s: int, t: int) -> StdMatrix:
    """Dot on the braid expanded through the two-colour projector, for any finite m."""
    system = model.system
    m = system.m(s, t)
    n = m - 1
    w = system.alternating(t, s, m)
    loops = {i: int(system.cartan[w[i - 1], w[i]]) for i in range(1, n)}
    words = temperley_lieb_basis(n)
    coeffs = jones_wenzl_coefficients(n, loops)
    dot = htensor(w[:n], model.dot_in(w[n]), ())
    total: Optional[StdMatrix] = None
    for diagram, word in words.items():
        c = coeffs[diagram]
        if not c:
            continue
        term = compose_all(*[_cup_cap(model, w, i) for i in word], dot)
        if c != 1:
            term = term.scale(c)
        total = term if total is None else total + term
    return total


def _dot_on_braid(model: LocalizationModel, s: int, t: int) -> StdMatrix:
    m = model.system.m(s, t)
    ws = model.system.alternating(s, t, m)
    return compose(model.braid(s, t), htensor((), model.dot_in(s), ws[1:]))


def _jones_wenzl_by_hand(model: LocalizationModel, s: int, t: int) -> Optional[StdMatrix]:
    """Written-out right-hand side for m = 2, 3, 4; None otherwise."""
    m = model.system.m(s, t)
    cartan = model.system.cartan
    if m == 2:
        rhs = htensor((t,), model.dot_in(s), ())
    elif m == 3:
        rhs = (compose_all(htensor((t,), model.dot_in(s), (t,)), model.split(t),
                           htensor((t,), model.dot_out(s), ()))
               + htensor((t, s), model.dot_in(t), ()))
    elif m == 4:
        t1 = htensor((t, s, t), model.dot_in(s), ())
        t2 = compose_all(htensor((t,), model.dot_in(s), (t, s)),
                         htensor((), model.split(t), (s,)),
                         htensor((t, s), model.dot_out(t), ()))
        sts = compose_all(htensor((s,), model.dot_in(t), (s,)), model.split(s), model.dot_in(s))
        t3 = compose_all(htensor((t,), sts, ()), model.merge(t),
                         htensor((t,), model.dot_out(s), (t,)))
        two_dots = compose(htensor((t, s, t), model.dot_in(s), ()),
                           htensor((t,), model.dot_in(s), (t,)))
        t4 = compose_all(two_dots, model.split(t), model.merge(t),
                         htensor((t,), model.dot_out(s), (t,)))
        t5 = compose_all(htensor((t, s), model.dot_in(t), (s,)),
                         htensor((t,), model.split(s), ()),
                         htensor((t, s), model.dot_out(t), ()))
        rhs = (t1 + t2 + t3
               - t4.scale(int(cartan[s, t]))
               - t5.scale(int(cartan[t, s])))
    else:
        return None
    return rhs


def _two_colour(model: LocalizationModel, s: int, t: int, report: RelationReport, strict: bool) -> None:
    system = model.system
    m = system.m(s, t)
    for a, b in ((s, t), (t, s)):
        wa = system.alternating(a, b, m)
        wb = system.alternating(b, a, m)
        u = wa[-1]
        lhs = compose(htensor(wa[:-1], model.split(u), ()), model.braid(b, a))
        rhs = compose_all(htensor((), model.braid(b, a), (u,)),
                          htensor((b,), model.braid(b, a), ()),
                          htensor((), model.split(b), wb[1:]))
        _check(report, "two_colour_associativity", lhs, rhs, strict)

        projected = jones_wenzl_rhs(model, a, b)
        _check(report, "jones_wenzl", _dot_on_braid(model, a, b), projected, strict)
        by_hand = _jones_wenzl_by_hand(model, a, b)
        if by_hand is not None:
            _check(report, "jones_wenzl_coefficients", projected, by_hand, strict)

        forward, backward = model.braid(a, b), model.braid(b, a)
        projector = compose(backward, forward)
        _check(report, "braid_idempotent", compose(projector, projector), projector, strict)
        _check(report, "braid_flip", flip(forward), backward, strict)
        top_a, top_b = (1,) * m, (1,) * m
        report.record("braid_top", forward.entry(top_b, top_a) == model.one)
        try:
            forward.check_homogeneous(0)
            report.record("degree_braid", True)
        except AlgebraError:
            report.record("degree_braid", False)
        report.record("lattice_braid", model.preserves_lattice(forward))


def verify_relations(model: LocalizationModel, s: int, t: Optional[int] = None,
                     strict: bool = False) -> RelationReport:
    """One-colour relations for s (and t), two-colour relations for the pair."""
    system = model.system
    colours = (system.generators[s],) if t is None else (system.generators[s], system.generators[t])
    report = RelationReport(system.name, colours)
    _one_colour(model, s, report, strict)
    if t is not None:
        _one_colour(model, t, report, strict)
        if system.is_finite_pair(s, t):
            _two_colour(model, s, t, report, strict)
    logger.info("Relations %s on %s: %d checked, %d failed",
                ",".join(colours), system.name, len(report.results), len(report.failures))
    return report


def verify_all_relations(model: LocalizationModel, strict: bool = False) -> List[RelationReport]:
    """Reports for every pair of distinct generators."""
    n = model.system.rank
    if n == 1:
        return [verify_relations(model, 0, strict=strict)]
    return [verify_relations(model, s, t, strict) for s in range(n) for t in range(s + 1, n)]
