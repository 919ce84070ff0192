"""
Table formatting for p-canonical results, Gram blocks and tilting grids.
Everything returns pandas DataFrames so callers choose how to print them.
"""

from typing import Dict, Iterable, List, Tuple

import numpy as np
import pandas as pd

from ..algebra.coxeter import CoxeterSystem, WElem
from ..algebra.hecke import HeckeElt
from ..algebra.laurent import ONE


def render_expansion(system: CoxeterSystem, expansion: HeckeElt, symbol: str = "kl") -> str:
    """Highest terms first: ``kl_sts + kl_s`` or ``kl_x + (v^-1 + v)kl_y``."""
    if not expansion:
        return "0"
    parts = []
    for y in sorted(expansion.terms, reverse=True):
        c = expansion.terms[y]
        name = f"{symbol}_{system.label(y)}"
        parts.append(name if c == ONE else f"({c}){name}")
    return " + ".join(parts)


def pcan_frame(system: CoxeterSystem, prime: int, rows: Iterable[Tuple[WElem, HeckeElt]]) -> pd.DataFrame:
    """One row per element: its length, its label and the p-canonical expansion."""
    records = []
    for x, expansion in rows:
        records.append({
            "length": x.length,
            "x": system.label(x),
            "p b_x": f"{prime} b_{system.label(x)} = " + render_expansion(system, expansion),
        })
    return pd.DataFrame.from_records(records, columns=["length", "x", "p b_x"])


def block_frame(block: np.ndarray, row_labels: List[str], col_labels: List[str]) -> pd.DataFrame:
    """An integer Gram block labelled by the bit strings of its light leaves."""
    return pd.DataFrame(block, index=row_labels, columns=col_labels)


def rank_frame(ranks: Dict[int, str]) -> pd.DataFrame:
    """Graded ranks keyed by characteristic (0 for the rationals)."""
    return pd.DataFrame(
        [{"characteristic": p, "graded rank": r} for p, r in sorted(ranks.items())],
        columns=["characteristic", "graded rank"],
    )


def tilting_frame(grid: Dict[int, List[int]], n_max: int) -> pd.DataFrame:
    """0/1 grid of [T(n) : Delta(m)] with one row per n."""
    data = np.zeros((n_max + 1, n_max + 1), dtype=np.int64)
    for n, ms in grid.items():
        for m in ms:
            data[n, m] = 1
    return pd.DataFrame(data, index=pd.Index(range(n_max + 1), name="n"),
                        columns=pd.Index(range(n_max + 1), name="m"))


def violations_frame(violations: List[Tuple[str, str, str]]) -> pd.DataFrame:
    return pd.DataFrame(violations, columns=["property", "element", "detail"])
