"""Built-in realizations of the named crystallographic types.

Cartan matrices follow the convention ``cartan[i][j] = <alpha_j, alpha_i^vee>``
so that ``s_i(alpha_j) = alpha_j - cartan[i][j] * alpha_i``.
"""

import re
from dataclasses import dataclass
from math import gcd
from functools import reduce
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..utils.errors import RealizationError


@dataclass(frozen=True)
class RealizationData:
    """Raw realization: generator labels plus integer root and coroot vectors."""
    name: str
    generators: Tuple[str, ...]
    coroots: Tuple[Tuple[int, ...], ...]
    roots: Tuple[Tuple[int, ...], ...]
    coxeter_matrix: Optional[Tuple[Tuple[int, ...], ...]] = None
    user_supplied: bool = False


def _chain(n: int) -> np.ndarray:
    c = 2 * np.eye(n, dtype=np.int64)
    for i in range(n - 1):
        c[i, i + 1] = c[i + 1, i] = -1
    return c


def cartan_matrix(family: str, n: int) -> np.ndarray:
    """Cartan matrix of a finite irreducible type (node 1 first)."""
    if family == "A" and n >= 1:
        return _chain(n)
    if family in ("B", "C") and n >= 2:
        c = _chain(n)
        # B_n: short simple root at node 1; C_n: long simple root at node 1
        if family == "B":
            c[0, 1] = -2
        else:
            c[1, 0] = -2
        return c
    if family == "D" and n >= 4:
        c = _chain(n - 1)
        c = np.pad(c, ((0, 1), (0, 1)))
        c[n - 1, n - 1] = 2
        c[n - 3, n - 1] = c[n - 1, n - 3] = -1
        return c
    if family == "F" and n == 4:
        c = _chain(4)
        c[2, 1] = -2
        return c
    if family == "G" and n == 2:
        c = _chain(2)
        c[0, 1] = -3
        return c
    raise RealizationError(f"unknown finite type {family}{n}")


def realization_from_cartan(cartan: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Root-lattice realization, widened until every root and coroot is primitive.

    Roots start as the standard basis and coroots as the rows of the Cartan
    matrix. A coroot with non-trivial content gets a fresh coordinate shared
    only with its own root, which leaves every pairing unchanged.
    """
    n = cartan.shape[0]
    bad = [i for i in range(n) if reduce(gcd, (int(a) for a in cartan[i])) != 1]
    rank = n + len(bad)
    roots = np.zeros((n, rank), dtype=np.int64)
    coroots = np.zeros((n, rank), dtype=np.int64)
    roots[:, :n] = np.eye(n, dtype=np.int64)
    coroots[:, :n] = cartan
    for k, i in enumerate(bad):
        roots[i, n + k] = 1
        coroots[i, i] -= 1
        coroots[i, n + k] = 1
    return coroots, roots


def _labels(name: str, n: int) -> Tuple[str, ...]:
    if n == 1:
        return ("s",)
    if n == 2:
        return ("s", "t")
    if name == "D4":
        return ("s", "t", "u", "v")
    return tuple(str(i + 1) for i in range(n))


AFFINE_A1 = RealizationData(
    name="A1~",
    generators=("s", "t"),
    coroots=((1, 0, 0), (0, 1, 0)),
    roots=((2, -2, 1), (-2, 2, 1)),
)

_AFFINE_NAMES = {"A1~", "~A1", "AFFINE_A1", "Ã1", "A1_AFFINE"}


def _factor_matrices(token: str) -> Tuple[np.ndarray, np.ndarray]:
    if token.upper() in {a.upper() for a in _AFFINE_NAMES}:
        return np.array(AFFINE_A1.coroots), np.array(AFFINE_A1.roots)
    match = re.fullmatch(r"([A-Ga-g])(\d+)", token)
    if not match:
        raise RealizationError(f"cannot parse type '{token}'")
    family, n = match.group(1).upper(), int(match.group(2))
    return realization_from_cartan(cartan_matrix(family, n))


def named_realization(name: str) -> RealizationData:
    """Realization for a named type such as ``B2``, ``D4``, ``A1~`` or ``A1xA1``."""
    tokens = [t for t in re.split(r"[x×]", name.replace(" ", "")) if t]
    if not tokens:
        raise RealizationError("empty type name")
    blocks: List[Tuple[np.ndarray, np.ndarray]] = [_factor_matrices(t) for t in tokens]
    n = sum(b[0].shape[0] for b in blocks)
    r = sum(b[0].shape[1] for b in blocks)
    coroots = np.zeros((n, r), dtype=np.int64)
    roots = np.zeros((n, r), dtype=np.int64)
    i = j = 0
    for co, ro in blocks:
        coroots[i:i + co.shape[0], j:j + co.shape[1]] = co
        roots[i:i + ro.shape[0], j:j + ro.shape[1]] = ro
        i += co.shape[0]
        j += co.shape[1]
    canonical = "x".join(tokens)
    if canonical.upper() in {a.upper() for a in _AFFINE_NAMES}:
        canonical = AFFINE_A1.name
    return RealizationData(
        name=canonical,
        generators=_labels(canonical, n),
        coroots=_as_tuples(coroots),
        roots=_as_tuples(roots),
    )


def _as_tuples(matrix: np.ndarray) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(int(a) for a in row) for row in matrix)


def realization_from_dict(data: dict) -> RealizationData:
    """Parse the JSON realization format (named or explicit)."""
    if "named" in data:
        return named_realization(str(data["named"]))
    try:
        generators = tuple(str(g) for g in data["generators"])
        coroots = tuple(tuple(int(a) for a in v) for v in data["coroots"])
        roots = tuple(tuple(int(a) for a in v) for v in data["roots"])
    except (KeyError, TypeError, ValueError) as exc:
        raise RealizationError(f"malformed realization config: {exc}") from exc
    rank = data.get("rank")
    if rank is not None and any(len(v) != rank for v in coroots + roots):
        raise RealizationError("vector lengths disagree with the declared rank")
    coxeter = data.get("coxeter_matrix")
    return RealizationData(
        name=str(data.get("name", "custom")),
        generators=generators,
        coroots=coroots,
        roots=roots,
        coxeter_matrix=_as_tuples(parse_coxeter_matrix(coxeter)) if coxeter else None,
        user_supplied=True,
    )


def parse_coxeter_matrix(rows: Sequence[Sequence]) -> np.ndarray:
    """Coxeter matrix from JSON rows; ``"inf"`` (or 0) encodes m = infinity."""
    out = np.zeros((len(rows), len(rows)), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, m in enumerate(row):
            out[i, j] = 0 if str(m).lower() in ("inf", "infinity", "∞", "0") else int(m)
    return out
