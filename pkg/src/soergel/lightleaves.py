"""Light leaves, their localization rows, and local intersection forms."""

import json
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import GF, Matrix
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

import config as constants
from ..algebra.coxeter import CoxeterSystem, DecoratedSubexpr, WElem, Word
from ..algebra.laurent import LaurentPoly
from ..algebra.nilhecke import NilHeckeRing
from ..algebra.polyring import PolynomialRing, RationalEntry
from ..utils.cache import NullCache
from ..utils.errors import AlgebraError, SpecializationError
from .backends import ModularBackend, PairingBackend, SymbolicBackend
from .localize import GeneratorTag, LocalizationModel, StdMatrix, compose

logger = logging.getLogger(__name__)

Bits = Tuple[int, ...]


class GenSeq:
    """Layers of generators from the domain word (bottom) to the codomain (top)."""

    def __init__(self, system: CoxeterSystem, domain: Sequence[int]):
        self.system = system
        self.domain: Word = tuple(domain)
        self.layers: List[GeneratorTag] = []
        self.words: List[Word] = [self.domain]

    @property
    def codomain(self) -> Word:
        return self.words[-1]

    @property
    def degree(self) -> int:
        return sum(tag.degree for tag in self.layers)

    def append(self, tag: GeneratorTag) -> "GenSeq":
        current = self.codomain
        source, target = tag.words(self.system)
        p = tag.position
        if current[p:p + len(source)] != source:
            raise AlgebraError(
                f"{tag.kind} expects {self.system.format_word(source)} at slot {p} of "
                f"{self.system.format_word(current)}"
            )
        self.layers.append(tag)
        self.words.append(current[:p] + target + current[p + len(source):])
        return self

    def extend(self, tags: Iterable[GeneratorTag]) -> "GenSeq":
        for tag in tags:
            self.append(tag)
        return self

    def flipped(self) -> "GenSeq":
        """The upside-down sequence, codomain -> domain."""
        out = GenSeq(self.system, self.codomain)
        return out.extend(tag.flipped() for tag in reversed(self.layers))

    def describe(self) -> List[str]:
        names = self.system.generators
        out = []
        for tag in self.layers:
            colour = names[tag.s] if tag.t is None else f"{names[tag.s]}{names[tag.t]}"
            out.append(f"{tag.kind}({colour})@{tag.position}")
        return out


def _braid_tags(system: CoxeterSystem, source: Word, target: Word, policy: str) -> List[GeneratorTag]:
    return [GeneratorTag("braid", a, b, i) for i, a, b in system.rex_route(source, target, policy)]


def target_word(system: CoxeterSystem, x: WElem, target_policy: str = "canonical") -> Word:
    if target_policy == "alternative":
        return max(system.reduced_words(x))
    return x.word


def build_light_leaf(system: CoxeterSystem, e: DecoratedSubexpr, policy: str = "lex",
                     target_policy: str = "canonical") -> GenSeq:
    """Light leaf of a decorated subexpression, ending on a reduced word of its endpoint."""
    seq = GenSeq(system, e.word)
    current: Word = ()
    for s, label in zip(e.word, e.labels):
        if label == "U1":
            current = current + (s,)
        elif label == "U0":
            seq.append(GeneratorTag("dot_out", s, position=len(current)))
        else:
            moves, ending = system.rex_to_ending(current, s, policy)
            seq.extend(GeneratorTag("braid", a, b, i) for i, a, b in moves)
            current = ending
            seq.append(GeneratorTag("merge", s, position=len(current) - 1))
            if label == "D1":
                seq.append(GeneratorTag("dot_out", s, position=len(current) - 1))
                current = current[:-1]
    seq.extend(_braid_tags(system, current, target_word(system, e.endpoint, target_policy), policy))
    return seq


def evaluate(seq: GenSeq, model: LocalizationModel) -> StdMatrix:
    """Full localization matrix of a generator sequence."""
    M = model.identity(seq.domain)
    for tag, after in zip(seq.layers, seq.words[1:]):
        M = compose(model.layer_matrix(tag, after), M)
    return M


def top_row(seq: GenSeq, backend: PairingBackend) -> Dict[Bits, object]:
    """Row of the top sequence of the codomain, propagated down through the layers."""
    model = backend.model
    system = model.system
    row = {(1,) * len(seq.codomain): backend.one}
    for index in range(len(seq.layers) - 1, -1, -1):
        tag = seq.layers[index]
        upper = seq.words[index + 1]
        G = model.generator_matrix(tag)
        width = len(G.codomain)
        p = tag.position
        left = upper[:p]
        endpoints: Dict[Bits, WElem] = {}
        out: Dict[Bits, object] = {}
        for h, value in row.items():
            g_row = G.rows.get(h[p:p + width])
            if not g_row:
                continue
            a, c = h[:p], h[p + width:]
            x = endpoints.get(a)
            if x is None:
                x = model.endpoint(left, a)
                endpoints[a] = x
            for gm, entry in g_row.items():
                g = a + gm + c
                term = backend.mul(value, backend.twisted(entry, x))
                out[g] = backend.add(out[g], term) if g in out else term
        row = {g: v for g, v in out.items() if not backend.is_zero(v)}
    return row


def rank_mod(block: np.ndarray, p: int) -> int:
    """Rank over F_p, or over Q for p = 0."""
    if block.size == 0:
        return 0
    dm = DomainMatrix.from_Matrix(Matrix(block.tolist()))
    dm = dm.convert_to(QQ) if p == 0 else dm.convert_to(GF(p))
    return int(dm.rank())


@dataclass
class GramFamily:
    """Local intersection form of a word at a target, split by degree."""
    word: Word
    target: WElem
    leaves: List[DecoratedSubexpr]
    blocks: Dict[int, np.ndarray] = field(default_factory=dict)
    pairing: Optional[List[List[RationalEntry]]] = None
    ranks: Dict[int, LaurentPoly] = field(default_factory=dict)
    paths: Dict[str, int] = field(default_factory=lambda: {"nilhecke": 0, "localization": 0})
    cross_checked: int = 0

    def by_defect(self, d: int) -> List[DecoratedSubexpr]:
        return [e for e in self.leaves if e.defect == d]

    def block(self, d: int) -> np.ndarray:
        """Integer form pairing defect -d rows with defect d columns."""
        found = self.blocks.get(d)
        if found is None:
            return np.zeros((len(self.by_defect(-d)), len(self.by_defect(d))), dtype=np.int64)
        return found

    def graded_rank(self, p: int) -> LaurentPoly:
        found = self.ranks.get(p)
        if found is None:
            found = LaurentPoly({d: rank_mod(b, p) for d, b in self.blocks.items()})
            self.ranks[p] = found
        return found

    def to_dict(self, system: CoxeterSystem) -> dict:
        return {
            "word": system.format_word(self.word),
            "target": system.label(self.target),
            "leaves": [
                {"bits": "".join(map(str, e.bits)), "labels": list(e.labels), "defect": e.defect}
                for e in self.leaves
            ],
            "blocks": {str(d): b.tolist() for d, b in sorted(self.blocks.items())},
            "ranks": {str(p): r.to_pairs() for p, r in sorted(self.ranks.items())},
            "paths": dict(self.paths),
        }


def export_json(gram: GramFamily, system: CoxeterSystem) -> str:
    return json.dumps(gram.to_dict(system), sort_keys=True, separators=(",", ":"))


class GramEngine:
    """Builds light leaves and intersection forms for one realization."""

    def __init__(self, system: CoxeterSystem, cache=None, engine: str = "auto",
                 rex_policy: str = "lex", target_policy: str = "canonical", verify: bool = False):
        self.system = system
        self.cache = cache or NullCache()
        self.R = PolynomialRing(system)
        self.model = LocalizationModel(system, self.R, self.cache)
        self.nil_hecke = NilHeckeRing(system, self.R)
        self.engine = engine
        self.rex_policy = rex_policy
        self.target_policy = target_policy
        self.verify = verify
        self.modular = ModularBackend(self.model)
        self.modular_check = ModularBackend(self.model, seed=constants.MODULAR_CHECK_SEED) if verify else None
        self._symbolic: Optional[SymbolicBackend] = None
        self._leaves: Dict[Tuple[Word, Bits], GenSeq] = {}
        self._families: Dict[Tuple[Word, Word], GramFamily] = {}

    @property
    def symbolic(self) -> SymbolicBackend:
        if self._symbolic is None:
            self._symbolic = SymbolicBackend(self.model)
        return self._symbolic

    def light_leaf(self, e: DecoratedSubexpr) -> GenSeq:
        key = (e.word, e.bits)
        found = self._leaves.get(key)
        if found is None:
            found = build_light_leaf(self.system, e, self.rex_policy, self.target_policy)
            if found.degree != e.defect:
                raise AlgebraError(f"light leaf of {e.labels} has degree {found.degree}, defect {e.defect}")
            self._leaves[key] = found
        return found

    def _uses_nil_hecke(self, e: DecoratedSubexpr, f: DecoratedSubexpr) -> bool:
        return self.engine != "localization" and not e.has_d1 and not f.has_d1

    def _nil_hecke_constant(self, e: DecoratedSubexpr, f: DecoratedSubexpr) -> int:
        value = self.nil_hecke.d_pair(e, f)
        if not value:
            return 0
        if not value.is_ground:
            raise AlgebraError(f"degree-zero pairing {value} is not a constant")
        return int(value.coeff(1))

    def _modular_blocks(self, word: Word, x: WElem, pairs: List[Tuple[int, DecoratedSubexpr, DecoratedSubexpr]],
                        backend: Optional[ModularBackend] = None):
        """Integer values of the given pairs through the localization rows."""
        backend = backend or self.modular
        top = target_word(self.system, x, self.target_policy)
        for _ in range(constants.MODULAR_RETRIES):
            try:
                rows: Dict[Bits, Dict[Bits, int]] = {}
                values = []
                for _, e, f in pairs:
                    for leaf in (e, f):
                        if leaf.bits not in rows:
                            rows[leaf.bits] = top_row(self.light_leaf(leaf), backend)
                    values.append(backend.pairing(rows[e.bits], rows[f.bits], word, top))
                return values
            except SpecializationError:
                backend.redraw()
        raise SpecializationError(f"no usable evaluation point after {constants.MODULAR_RETRIES} draws")

    def _compute_blocks(self, word: Word, x: WElem) -> Tuple[Dict[int, np.ndarray], Dict[str, int], int]:
        leaves = self.system.subexpressions_for(word, x)
        defects = sorted({e.defect for e in leaves})
        by_defect = {d: [e for e in leaves if e.defect == d] for d in defects}
        blocks = {d: np.zeros((len(by_defect[-d]), len(by_defect[d])), dtype=np.int64)
                  for d in defects if -d in by_defect}
        paths = {"nilhecke": 0, "localization": 0}
        checked = 0

        fast, slow = [], []
        for d in blocks:
            if d < 0:
                continue
            for i, e in enumerate(by_defect[-d]):
                for j, f in enumerate(by_defect[d]):
                    if d == 0 and j < i:
                        continue
                    item = ((d, i, j), e, f)
                    (fast if self._uses_nil_hecke(e, f) else slow).append(item)

        for (d, i, j), e, f in fast:
            blocks[d][i, j] = self._nil_hecke_constant(e, f)
        paths["nilhecke"] = len(fast)

        to_localize = slow + (fast if self.verify else [])
        values = self._modular_blocks(word, x, to_localize) if to_localize else []
        if self.verify and to_localize:
            again = self._modular_blocks(word, x, to_localize, self.modular_check)
            for (_, e, f), first, second in zip(to_localize, values, again):
                if first != second:
                    raise AlgebraError(
                        f"degree-zero pairing of {e.labels} / {f.labels} is not a constant polynomial: "
                        f"{first} and {second} at two evaluation points"
                    )
        for ((d, i, j), e, f), value in zip(to_localize, values):
            if self._uses_nil_hecke(e, f):
                checked += 1
                if blocks[d][i, j] != value:
                    raise AlgebraError(
                        f"nil Hecke value {blocks[d][i, j]} differs from localization value {value} "
                        f"for {e.labels} / {f.labels}"
                    )
            else:
                blocks[d][i, j] = value
        paths["localization"] = len(slow)

        if 0 in blocks:
            b = blocks[0]
            upper = np.triu(b, 1)
            blocks[0] = np.triu(b) + upper.T
        for d in blocks:
            if d < 0:
                blocks[d] = blocks[-d].T.copy()
        return blocks, paths, checked

    def gram(self, word: Sequence[int], x: WElem, primes: Sequence[int] = (),
             full: bool = False) -> GramFamily:
        """Local intersection form of ``word`` at ``x`` with graded ranks for each prime."""
        word = tuple(word)
        family = self._families.get((word, x.word))
        if family is not None and not full:
            for p in primes:
                family.graded_rank(p)
            return family
        leaves = self.system.subexpressions_for(word, x)
        payload = [self.system.realization_key, list(word), list(x.word), self.engine,
                   self.rex_policy, self.target_policy]
        if self.verify:
            data, paths, checked = self._compute_blocks(word, x)
        else:
            cached = self.cache.get("gram", payload)
            if cached is None:
                cached = self._compute_blocks(word, x)
                self.cache.put("gram", payload, cached)
            data, paths, checked = cached
        family = GramFamily(
            word=word, target=x, leaves=leaves,
            blocks={d: np.array(b, dtype=np.int64) for d, b in data.items()},
            paths=dict(paths), cross_checked=checked,
        )
        for p in primes:
            family.graded_rank(p)
        if full:
            family.pairing = self.full_form(word, x)
        self._families[(word, x.word)] = family
        logger.debug("Gram %s at %s: %d leaves, paths %s", self.system.format_word(word),
                     self.system.label(x), len(leaves), family.paths)
        return family

    def full_form(self, word: Sequence[int], x: WElem) -> List[List[RationalEntry]]:
        """All pairings as polynomials, rows and columns in leaf order."""
        word = tuple(word)
        leaves = self.system.subexpressions_for(word, x)
        top = target_word(self.system, x, self.target_policy)
        rows = {e.bits: top_row(self.light_leaf(e), self.symbolic) for e in leaves}
        out = []
        for e in leaves:
            line = []
            for f in leaves:
                value = self.symbolic.pairing(rows[e.bits], rows[f.bits], word, top)
                if self.verify and self._uses_nil_hecke(e, f):
                    expected = self.R.fraction(self.nil_hecke.d_pair(e, f))
                    if expected != value:
                        raise AlgebraError(f"nil Hecke value {expected} differs from {value}")
                line.append(value)
            out.append(line)
        return out
