"""p-canonical basis by induction on length from graded ranks of intersection forms.

For a reduced word w of x the Bott-Samelson character decomposes as

    kl_{s_1} ... kl_{s_n} = p b_x + sum_{y < x} n_{y,w} p b_y

with n_{y,w} the graded rank over F_p of the local intersection form of w
at y. Targets are visited by decreasing length, and y is skipped whenever
the KL coefficient still left at y is zero.
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import config as constants
from ..algebra.coxeter import CoxeterSystem, WElem
from ..algebra.hecke import HeckeAlgebra, HeckeElt, KLExpansion
from ..algebra.laurent import LaurentPoly, ONE
from ..soergel.lightleaves import GramEngine, target_word
from ..utils.analysis import pcan_frame, render_expansion
from ..utils.cache import NullCache
from ..utils.errors import PositivityError

logger = logging.getLogger(__name__)


@dataclass
class PCanTable:
    """p-canonical basis elements up to a length bound, in KL and standard coordinates."""
    system: CoxeterSystem
    prime: int
    maxlen: int
    elements: List[WElem]
    kl_expansion: Dict[WElem, KLExpansion] = field(default_factory=dict)
    std_expansion: Dict[WElem, HeckeElt] = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def pcan(self, x: WElem) -> HeckeElt:
        """p b_x in the standard basis."""
        return self.std_expansion[x]

    def differs(self, x: WElem) -> bool:
        return self.kl_expansion[x] != KLExpansion.basis(x)

    def differences(self) -> List[WElem]:
        """Elements whose p-canonical element is not the KL element."""
        return [x for x in self.elements if self.differs(x)]

    def to_dict(self) -> dict:
        entries = []
        for x in self.elements:
            entries.append({
                "word": self.system.label(x),
                "kl": {self.system.label(y): c.to_pairs() for y, c in self.kl_expansion[x].items()},
                "std": {self.system.label(y): c.to_pairs() for y, c in self.std_expansion[x].items()},
            })
        return {
            "system": self.system.metadata(),
            "prime": self.prime,
            "maxlen": self.maxlen,
            "entries": entries,
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def to_text(self, only_differences: bool = False) -> str:
        rows = self.differences() if only_differences else self.elements
        header = f"{self.system.name}, p = {self.prime}, elements of length <= {self.maxlen}"
        if not rows:
            return header + "\n(no element differs from its KL element)"
        frame = pcan_frame(self.system, self.prime, [(x, self.kl_expansion[x]) for x in rows])
        return header + "\n" + frame.to_string(index=False)


def compute_pcan(system: CoxeterSystem, p: int, maxlen: int,
                 gram_engine: Optional[GramEngine] = None,
                 hecke: Optional[HeckeAlgebra] = None,
                 target_policy: Optional[str] = None) -> PCanTable:
    """p-canonical table of every element of length <= maxlen; p = 0 gives the KL basis."""
    if p:
        system.check_characteristic(p)
    hecke = hecke or HeckeAlgebra(system)
    elements = system.enumerate_elements(maxlen)
    table = PCanTable(system=system, prime=p, maxlen=maxlen, elements=elements)

    if p == 0:
        for x in elements:
            table.kl_expansion[x] = KLExpansion.basis(x)
            table.std_expansion[x] = hecke.kl_basis(x)
        table.provenance = _provenance(system, p, None, {}, Counter(), 0)
        return table

    engine = gram_engine or GramEngine(system)
    policy = target_policy or engine.target_policy
    words: Dict[str, str] = {}
    paths: Counter = Counter()
    forms = 0
    by_length: Dict[int, List[WElem]] = {}
    for x in elements:
        by_length.setdefault(x.length, []).append(x)

    for length in sorted(by_length):
        changed = 0
        for x in by_length[length]:
            word = target_word(system, x, policy)
            words[system.label(x)] = system.format_word(word)
            remainder = hecke.to_kl(hecke.bs_character(word))
            result: Dict[WElem, LaurentPoly] = dict(remainder.terms)
            for y in sorted(remainder.terms, reverse=True):
                if y == x or not result.get(y):
                    continue
                family = engine.gram(word, y, primes=(p,))
                forms += 1
                paths.update(family.paths)
                n = family.graded_rank(p)
                if not n:
                    continue
                for z, c in table.kl_expansion[y].terms.items():
                    result[z] = result.get(z, LaurentPoly()) - n * c
            expansion = KLExpansion(result)
            _check_positive(system, p, x, expansion)
            table.kl_expansion[x] = expansion
            table.std_expansion[x] = hecke.from_kl(expansion)
            if expansion != KLExpansion.basis(x):
                changed += 1
        logger.info("p=%d length %d: %d elements, %d differ from KL", p, length,
                    len(by_length[length]), changed)

    table.provenance = _provenance(system, p, engine, words, paths, forms)
    logger.info("p=%d: %d of %d elements differ from KL (%s)", p, len(table.differences()),
                len(elements), engine.cache.summary())
    return table


def _check_positive(system: CoxeterSystem, p: int, x: WElem, expansion: KLExpansion) -> None:
    if expansion.coeff(x) != ONE:
        raise PositivityError(
            f"p={p}: coefficient of kl_{system.label(x)} in its own p-canonical element is "
            f"{expansion.coeff(x)}"
        )
    for y, c in expansion.items():
        if not c.is_nonnegative():
            raise PositivityError(
                f"p={p}: coefficient {c} of kl_{system.label(y)} in p b_{system.label(x)} is negative"
            )


def _provenance(system: CoxeterSystem, p: int, engine: Optional[GramEngine],
                words: Dict[str, str], paths: Counter, forms: int) -> dict:
    out = {
        "engine_version": constants.ENGINE_VERSION,
        "realization": system.name,
        "reduced_words": dict(sorted(words.items())),
        "intersection_forms": forms,
    }
    if engine is not None:
        out.update({
            "engine": engine.engine,
            "rex_policy": engine.rex_policy,
            "target_policy": engine.target_policy,
            "pairings": {k: int(v) for k, v in sorted(paths.items())},
        })
    else:
        out["engine"] = "kl"
    return out


def compute_tables(system: CoxeterSystem, primes: Sequence[int], maxlen: int,
                   cache=None, engine: str = "auto", rex_policy: str = "lex",
                   target_policy: str = "canonical", verify: bool = False) -> Dict[int, PCanTable]:
    """One table per prime, all sharing one Gram engine and one Hecke algebra."""
    gram_engine = GramEngine(system, cache or NullCache(), engine=engine, rex_policy=rex_policy,
                             target_policy=target_policy, verify=verify)
    hecke = HeckeAlgebra(system)
    data = gram_engine.cache.get("kl", [system.realization_key, maxlen])
    if data is not None:
        hecke.import_kl(data)
    tables = {p: compute_pcan(system, p, maxlen, gram_engine, hecke) for p in primes}
    if data is None:
        gram_engine.cache.put("kl", [system.realization_key, maxlen], hecke.export_kl())
    return tables


def expand_in_pcan(table: PCanTable, h: HeckeElt) -> Dict[WElem, LaurentPoly]:
    """Coefficients of h in the table's p-canonical basis (unitriangular peeling)."""
    remainder = HeckeElt(dict(h.terms))
    out: Dict[WElem, LaurentPoly] = {}
    while remainder.terms:
        x = max(remainder.terms)
        if x not in table.std_expansion:
            raise KeyError(f"{table.system.label(x)} is beyond the table's length bound")
        c = remainder.terms[x]
        out[x] = c
        remainder = remainder - table.std_expansion[x].scale(c)
    return out


def format_pcan_row(table: PCanTable, x: WElem) -> str:
    """``p b_x = kl_x + (v + v^-1) kl_y`` with the prime as prefix."""
    return f"{table.prime} b_{table.system.label(x)} = " + render_expansion(
        table.system, table.kl_expansion[x])
