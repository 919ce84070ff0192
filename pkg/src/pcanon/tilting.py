"""Tilting characters for SL2 and the p-canonical basis of affine A1.

Weight n corresponds to the alternating word of length n + 1. The
Delta-multiplicities of T(n) are 0 or 1 and follow from a base-p digit rule,
which gives an independent check of the intersection-form computation.
"""

import logging
from itertools import product
from typing import Dict, List, Sequence, Tuple

from ..algebra.coxeter import CoxeterSystem
from ..algebra.hecke import KLExpansion
from ..utils.errors import RealizationError
from .engine import PCanTable

logger = logging.getLogger(__name__)


def tilting_digits(n: int, p: int) -> List[int]:
    """Digits n_0, ..., n_l with p-1 <= n_i <= 2p-2 for i < l and 0 <= n_l <= p-1."""
    if n < 0:
        raise ValueError("weights are non-negative")
    digits = []
    while n > p - 1:
        d = p - 1 + (n - p + 1) % p
        digits.append(d)
        n = (n - d) // p
    digits.append(n)
    return digits


def tilting_support(n: int, p: int) -> List[int]:
    """All m with Delta(m) in a Delta-flag of T(n), increasing."""
    digits = tilting_digits(n, p)
    *lower, top = digits
    choices = [sorted({d, 2 * p - 2 - d}) for d in lower]
    out = set()
    for picked in product(*choices):
        out.add(sum(m * p ** i for i, m in enumerate(picked)) + top * p ** len(lower))
    return sorted(out)


def tilting_multiplicities(p: int, n_max: int) -> Dict[int, List[int]]:
    return {n: tilting_support(n, p) for n in range(n_max + 1)}


def is_affine_a1(system: CoxeterSystem) -> bool:
    return system.rank == 2 and int(system.cartan[0, 1]) * int(system.cartan[1, 0]) == 4


def _affine_pair(system: CoxeterSystem) -> Tuple[int, int]:
    if not is_affine_a1(system):
        raise RealizationError(f"'{system.name}' is not of type affine A1")
    return 0, 1


def a1_tilting_pcan(system: CoxeterSystem, lam: int, p: int, first: int = 0) -> KLExpansion:
    """p b of the alternating word of length lam + 1 starting with ``first``, in KL coordinates."""
    s, t = _affine_pair(system)
    second = t if first == s else s
    return KLExpansion({
        system.element(system.alternating(first, second, m + 1)): 1
        for m in tilting_support(lam, p)
    })


def compare_with_tilting(table: PCanTable, lambdas: Sequence[int]) -> List[str]:
    """Mismatches between the table and the digit rule, for both starting letters."""
    system = table.system
    s, t = _affine_pair(system)
    mismatches = []
    for lam in lambdas:
        for first in (s, t):
            x = system.element(system.alternating(first, t if first == s else s, lam + 1))
            if x not in table.kl_expansion:
                continue
            expected = a1_tilting_pcan(system, lam, table.prime, first)
            if table.kl_expansion[x] != expected:
                mismatches.append(
                    f"lambda={lam} start {system.generators[first]}: table "
                    f"{table.kl_expansion[x].format(system)} vs digit rule {expected.format(system)}"
                )
    logger.info("Tilting comparison at p=%d: %d mismatches", table.prime, len(mismatches))
    return mismatches
