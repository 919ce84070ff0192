"""Coxeter systems from integral realizations.

Group elements are stored by their ShortLex-minimal reduced word together
with the matrix of their action on the simple roots. Descents are read off
the sign of ``x(alpha_s)``: for a root-system realization every root is a
non-negative or a non-positive combination of simple roots, and
``l(xs) < l(x)`` exactly when ``x(alpha_s)`` is negative.
"""

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from sympy import Matrix

import config as constants
from ..utils.errors import BudgetExceeded, RealizationError
from .realizations import RealizationData, named_realization, realization_from_dict

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
Move = Tuple[int, int, int]   # (position, first letter before, first letter after)


@dataclass(frozen=True)
class WElem:
    """Group element: canonical reduced word plus cached action matrices."""
    word: Word
    root_matrix: np.ndarray = field(compare=False, repr=False)
    inverse_root_matrix: np.ndarray = field(compare=False, repr=False)
    dual_matrix: np.ndarray = field(compare=False, repr=False)

    @property
    def length(self) -> int:
        return len(self.word)

    def __lt__(self, other: "WElem") -> bool:
        # ShortLex, used only for deterministic ordering
        return (len(self.word), self.word) < (len(other.word), other.word)


@dataclass(frozen=True)
class DecoratedSubexpr:
    """A 01-sequence on a word with its U/D decorations, defect and endpoint."""
    word: Word
    bits: Tuple[int, ...]
    decorations: Tuple[str, ...]
    defect: int
    endpoint: WElem

    @property
    def labels(self) -> Tuple[str, ...]:
        """Decorated letters such as ``("U1", "U0", "D0")``."""
        return tuple(d + str(b) for d, b in zip(self.decorations, self.bits))

    @property
    def has_d1(self) -> bool:
        return "D1" in self.labels


class CoxeterSystem:
    """A crystallographic Coxeter system together with a fixed integral realization."""

    def __init__(self, data: RealizationData):
        self.name = data.name
        self.generators: Tuple[str, ...] = data.generators
        self.coroots = np.array(data.coroots, dtype=np.int64)
        self.roots = np.array(data.roots, dtype=np.int64)
        self.user_supplied = data.user_supplied
        self._validate_shapes()
        self.rank = len(self.generators)
        self.realization_rank = self.roots.shape[1]
        # cartan[i, j] = <alpha_j, alpha_i^vee>
        self.cartan = self.coroots @ self.roots.T
        self.coxeter_matrix = self._coxeter_from_cartan()
        if data.coxeter_matrix is not None:
            given = np.array(data.coxeter_matrix, dtype=np.int64)
            if not np.array_equal(given, self.coxeter_matrix):
                raise RealizationError(
                    f"Cartan data realize Coxeter matrix {self.coxeter_matrix.tolist()}, "
                    f"config declares {given.tolist()}"
                )
        self._validate_realization()
        if self.user_supplied:
            logger.warning(
                "User-supplied realization '%s': the sign descent test is only "
                "guaranteed for root-system realizations", self.name,
            )

        n, r = self.rank, self.realization_rank
        self._simple_root_matrices = []
        self._simple_dual_matrices = []
        for i in range(n):
            m = np.eye(n, dtype=np.int64)
            m[i, :] -= self.cartan[i, :]
            self._simple_root_matrices.append(m)
            self._simple_dual_matrices.append(
                np.eye(r, dtype=np.int64) - np.outer(self.roots[i], self.coroots[i])
            )

        self._by_matrix: Dict[bytes, WElem] = {}
        self._by_word: Dict[Word, WElem] = {}
        self._rmul_cache: Dict[Tuple[Word, int], WElem] = {}
        self._bruhat_cache: Dict[Tuple[Word, Word], bool] = {}
        self._subexpr_tables: Dict[Word, Dict[Word, List[DecoratedSubexpr]]] = {}
        self._rex_graphs: Dict[Word, nx.DiGraph] = {}
        ident = WElem((), np.eye(n, dtype=np.int64), np.eye(n, dtype=np.int64),
                      np.eye(r, dtype=np.int64))
        self._by_matrix[ident.root_matrix.tobytes()] = ident
        self._by_word[()] = ident
        self.identity = ident

    # ------------------------------------------------------------------
    # validation
    # ------------------------------------------------------------------
    def _validate_shapes(self) -> None:
        n = len(self.generators)
        if n == 0:
            raise RealizationError("a Coxeter system needs at least one generator")
        if len(set(self.generators)) != n:
            raise RealizationError(f"duplicate generator labels {self.generators}")
        if self.coroots.shape[0] != n or self.roots.shape[0] != n:
            raise RealizationError("need exactly one root and one coroot per generator")
        if self.coroots.ndim != 2 or self.coroots.shape != self.roots.shape:
            raise RealizationError("roots and coroots must be vectors of one common length")

    def _coxeter_from_cartan(self) -> np.ndarray:
        n = self.rank
        m = np.ones((n, n), dtype=np.int64)
        by_product = {v: k for k, v in constants.CARTAN_PRODUCT.items()}
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                a, b = int(self.cartan[i, j]), int(self.cartan[j, i])
                if a > 0 or b > 0 or (a == 0) != (b == 0):
                    raise RealizationError(
                        f"Cartan entries ({a}, {b}) for {self.generators[i]}, "
                        f"{self.generators[j]} are not those of a root system"
                    )
                prod = a * b
                m[i, j] = by_product.get(prod, constants.INFINITY) if prod < 4 else constants.INFINITY
        return m

    def _validate_realization(self) -> None:
        for i, g in enumerate(self.generators):
            if self.cartan[i, i] != 2:
                raise RealizationError(f"<alpha_{g}, alpha_{g}^vee> = {self.cartan[i, i]}, expected 2")
            for vec, what in ((self.roots[i], "root"), (self.coroots[i], "coroot")):
                if reduce(gcd, (int(a) for a in vec)) == 0:
                    raise RealizationError(f"{what} of {g} is zero")
        if Matrix(self.roots.tolist()).rank() != self.rank:
            raise RealizationError("root covectors must be linearly independent")

    def surjectivity_primes(self) -> List[int]:
        """Primes dividing the content of some root or coroot.

        Demazure surjectivity fails exactly in these characteristics.
        """
        bad = set()
        for vec in list(self.roots) + list(self.coroots):
            c = reduce(gcd, (int(a) for a in vec))
            d = 2
            while c > 1:
                while c % d == 0:
                    bad.add(d)
                    c //= d
                d += 1
        return sorted(bad)

    def check_characteristic(self, p: int) -> None:
        if p in self.surjectivity_primes():
            raise RealizationError(
                f"Demazure surjectivity fails for '{self.name}' in characteristic {p}"
            )

    def m(self, s: int, t: int) -> int:
        """Order of st; 0 encodes infinity."""
        return int(self.coxeter_matrix[s, t])

    def is_finite_pair(self, s: int, t: int) -> bool:
        return self.m(s, t) != constants.INFINITY

    @property
    def is_finite(self) -> bool:
        """Finite type iff every leading principal minor of the Cartan matrix is positive."""
        c = Matrix(self.cartan.tolist())
        return all(c[:k, :k].det() > 0 for k in range(1, self.rank + 1))

    @property
    def realization_key(self) -> str:
        return json.dumps({
            "generators": list(self.generators),
            "coroots": self.coroots.tolist(),
            "roots": self.roots.tolist(),
        }, sort_keys=True, separators=(",", ":"))

    def metadata(self) -> dict:
        return {
            "name": self.name,
            "generators": list(self.generators),
            "coxeter_matrix": [[int(m) if m else "inf" for m in row] for row in self.coxeter_matrix],
            "rank": self.realization_rank,
            "coroots": self.coroots.tolist(),
            "roots": self.roots.tolist(),
        }

    # ------------------------------------------------------------------
    # words
    # ------------------------------------------------------------------
    def parse_word(self, text: str) -> Word:
        """Word from text: letters run together when all labels are single characters."""
        text = text.strip()
        if text in ("", "e"):
            return ()
        index = {g: i for i, g in enumerate(self.generators)}
        if all(len(g) == 1 for g in self.generators):
            tokens = [c for c in text if c not in " ,"]
        else:
            tokens = [t for t in text.replace(",", " ").split() if t]
        try:
            return tuple(index[t] for t in tokens)
        except KeyError as exc:
            raise RealizationError(f"unknown generator {exc} in word '{text}'") from None

    def format_word(self, word: Sequence[int]) -> str:
        if not word:
            return "e"
        sep = "" if all(len(g) == 1 for g in self.generators) else ","
        return sep.join(self.generators[i] for i in word)

    def label(self, x: WElem) -> str:
        return self.format_word(x.word)

    # ------------------------------------------------------------------
    # element arithmetic
    # ------------------------------------------------------------------
    def _from_matrices(self, root_matrix: np.ndarray, inverse_root_matrix: np.ndarray) -> WElem:
        key = root_matrix.tobytes()
        found = self._by_matrix.get(key)
        if found is not None:
            return found
        # Peel the smallest left descent until the identity is reached.
        word: List[int] = []
        r, rinv = root_matrix, inverse_root_matrix
        while True:
            s = next((i for i in range(self.rank) if np.all(rinv[:, i] <= 0)), None)
            if s is None:
                break
            word.append(s)
            r = self._simple_root_matrices[s] @ r
            rinv = rinv @ self._simple_root_matrices[s]
        dual = np.eye(self.realization_rank, dtype=np.int64)
        for s in word:
            dual = dual @ self._simple_dual_matrices[s]
        elem = WElem(tuple(word), root_matrix, inverse_root_matrix, dual)
        self._by_matrix[key] = elem
        self._by_word[elem.word] = elem
        return elem

    def rmul(self, x: WElem, s: int) -> WElem:
        """x * s."""
        key = (x.word, s)
        found = self._rmul_cache.get(key)
        if found is None:
            rs = self._simple_root_matrices[s]
            found = self._from_matrices(x.root_matrix @ rs, rs @ x.inverse_root_matrix)
            self._rmul_cache[key] = found
        return found

    def lmul(self, s: int, x: WElem) -> WElem:
        """s * x."""
        rs = self._simple_root_matrices[s]
        return self._from_matrices(rs @ x.root_matrix, x.inverse_root_matrix @ rs)

    def element(self, word: Iterable[int]) -> WElem:
        """Element represented by an arbitrary (possibly non-reduced) word."""
        word = tuple(word)
        found = self._by_word.get(word)
        if found is not None:
            return found
        x = self.identity
        for s in word:
            x = self.rmul(x, s)
        return x

    def element_from_text(self, text: str) -> WElem:
        return self.element(self.parse_word(text))

    def generator(self, s: int) -> WElem:
        return self.rmul(self.identity, s)

    def mult(self, x: WElem, y: WElem) -> WElem:
        for s in y.word:
            x = self.rmul(x, s)
        return x

    def inverse(self, x: WElem) -> WElem:
        return self.element(reversed(x.word))

    def descent(self, x: WElem, s: int, side: str = "right") -> bool:
        """True iff l(xs) < l(x) (right) or l(sx) < l(x) (left)."""
        if side == "right":
            return bool(np.all(x.root_matrix[:, s] <= 0))
        if side == "left":
            return bool(np.all(x.inverse_root_matrix[:, s] <= 0))
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    def descents(self, x: WElem, side: str = "right") -> frozenset:
        return frozenset(s for s in range(self.rank) if self.descent(x, s, side))

    def bruhat_leq(self, x: WElem, y: WElem) -> bool:
        """Bruhat order by the lifting property along the first letter of y."""
        key = (x.word, y.word)
        cached = self._bruhat_cache.get(key)
        if cached is not None:
            return cached
        if x.length > y.length:
            result = False
        elif y.length == 0:
            result = x.length == 0
        elif x == y:
            result = True
        else:
            s = y.word[0]
            sy = self.element(y.word[1:])
            sx = self.lmul(s, x)
            smaller = sx if sx.length < x.length else x
            result = self.bruhat_leq(smaller, sy)
        self._bruhat_cache[key] = result
        return result

    def enumerate_elements(self, maxlen: int, cap: Optional[int] = None) -> List[WElem]:
        """All elements of length <= maxlen, grouped by length, ShortLex within a length."""
        if maxlen < 0:
            raise ValueError("maxlen must be non-negative")
        cap = constants.ELEMENT_CAP if cap is None else cap
        out = [self.identity]
        level = [self.identity]
        for _ in range(maxlen):
            nxt = set()
            for x in level:
                for s in range(self.rank):
                    if not self.descent(x, s, "right"):
                        nxt.add(self.rmul(x, s))
            if not nxt:
                break
            level = sorted(nxt)
            out.extend(level)
            if len(out) > cap:
                raise BudgetExceeded(f"more than {cap} elements of length <= {maxlen}")
        return out

    def longest_element(self, cap: Optional[int] = None) -> WElem:
        """Longest element of a finite group; BudgetExceeded for infinite ones."""
        x = self.identity
        while True:
            s = next((i for i in range(self.rank) if not self.descent(x, i, "right")), None)
            if s is None:
                return x
            x = self.rmul(x, s)
            if x.length > (cap or constants.ELEMENT_CAP):
                raise BudgetExceeded(f"'{self.name}' has no longest element")

    # ------------------------------------------------------------------
    # subexpressions
    # ------------------------------------------------------------------
    def decorate(self, word: Sequence[int], bits: Sequence[int]) -> DecoratedSubexpr:
        word, bits = tuple(word), tuple(int(b) for b in bits)
        if len(word) != len(bits):
            raise ValueError("word and bits must have the same length")
        x = self.identity
        decorations = []
        defect = 0
        for s, b in zip(word, bits):
            up = not self.descent(x, s, "right")
            decorations.append("U" if up else "D")
            if b == 0:
                defect += 1 if up else -1
            else:
                x = self.rmul(x, s)
        return DecoratedSubexpr(word, bits, tuple(decorations), defect, x)

    def _subexpression_table(self, word: Word) -> Dict[Word, List[DecoratedSubexpr]]:
        table = self._subexpr_tables.get(word)
        if table is not None:
            return table
        # (bits, endpoint, decorations, defect), expanded 0 before 1 so the
        # final list is lexicographic in the bits
        states = [((), self.identity, (), 0)]
        for s in word:
            nxt = []
            for bits, x, decs, defect in states:
                up = not self.descent(x, s, "right")
                d = "U" if up else "D"
                nxt.append((bits + (0,), x, decs + (d,), defect + (1 if up else -1)))
                nxt.append((bits + (1,), self.rmul(x, s), decs + (d,), defect))
            states = nxt
        table = {}
        for bits, x, decs, defect in states:
            table.setdefault(x.word, []).append(DecoratedSubexpr(word, bits, decs, defect, x))
        self._subexpr_tables[word] = table
        return table

    def subexpressions_for(self, word: Sequence[int], target: WElem) -> List[DecoratedSubexpr]:
        """All decorated subexpressions of word with endpoint target, lexicographic in the bits."""
        word = tuple(word)
        if target.length > len(word):
            return []
        return list(self._subexpression_table(word).get(target.word, []))

    def endpoints(self, word: Sequence[int]) -> List[WElem]:
        return sorted(self.element(w) for w in self._subexpression_table(tuple(word)))

    # ------------------------------------------------------------------
    # reduced words and braid moves
    # ------------------------------------------------------------------
    def alternating(self, s: int, t: int, length: int) -> Word:
        return tuple(s if k % 2 == 0 else t for k in range(length))

    def braid_neighbours(self, word: Word) -> List[Tuple[Move, Word]]:
        out = []
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            if a == b or not self.is_finite_pair(a, b):
                continue
            m = self.m(a, b)
            if i + m <= len(word) and word[i:i + m] == self.alternating(a, b, m):
                out.append(((i, a, b), word[:i] + self.alternating(b, a, m) + word[i + m:]))
        return out

    def reduced_word_graph(self, x: WElem) -> nx.DiGraph:
        """Reduced words of x connected by braid moves (edge attribute ``move``)."""
        graph = self._rex_graphs.get(x.word)
        if graph is not None:
            return graph
        graph = nx.DiGraph()
        graph.add_node(x.word)
        queue = deque([x.word])
        while queue:
            w = queue.popleft()
            for move, nbr in self.braid_neighbours(w):
                if nbr not in graph:
                    graph.add_node(nbr)
                    queue.append(nbr)
                graph.add_edge(w, nbr, move=move)
        self._rex_graphs[x.word] = graph
        return graph

    def reduced_words(self, x: WElem) -> List[Word]:
        return sorted(self.reduced_word_graph(x).nodes)

    def rex_route(self, source: Word, target: Word, policy: str = "lex") -> List[Move]:
        """Braid moves turning one reduced word into another along a shortest route."""
        if source == target:
            return []
        graph = self.reduced_word_graph(self.element(source))
        paths = list(nx.all_shortest_paths(graph, source, target))
        path = max(paths) if policy == "colex" else min(paths)
        return [graph.edges[u, v]["move"] for u, v in zip(path, path[1:])]

    def rex_to_ending(self, source: Word, s: int, policy: str = "lex") -> Tuple[List[Move], Word]:
        """Nearest reduced word of the same element that ends in s, and the route to it."""
        if source and source[-1] == s:
            return [], source
        graph = self.reduced_word_graph(self.element(source))
        dist = nx.single_source_shortest_path_length(graph, source)
        candidates = [w for w in dist if w and w[-1] == s]
        if not candidates:
            raise ValueError(f"{self.format_word(source)} has no reduced word ending in {self.generators[s]}")
        best = min(dist[w] for w in candidates)
        closest = [w for w in candidates if dist[w] == best]
        target = max(closest) if policy == "colex" else min(closest)
        return self.rex_route(source, target, policy), target


def build_system(source) -> CoxeterSystem:
    """Coxeter system from a type name, a realization dict, or a JSON file path."""
    if isinstance(source, CoxeterSystem):
        return source
    if isinstance(source, RealizationData):
        return CoxeterSystem(source)
    if isinstance(source, dict):
        return CoxeterSystem(realization_from_dict(source))
    text = str(source)
    if text.endswith(".json"):
        with open(text, "r", encoding="utf-8") as fh:
            return CoxeterSystem(realization_from_dict(json.load(fh)))
    return CoxeterSystem(named_realization(text))
