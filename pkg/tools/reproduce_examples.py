"""Print the worked-example tables: B2, G2, affine A1, C3 and the D4 cluster.
Results go to stdout; the disk cache is used so reruns are fast.
"""
import logging
import os
import sys

# Ensure repo root is on path
root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if root not in sys.path:
    sys.path.insert(0, root)

import config as constants
from src.algebra.coxeter import build_system
from src.pcanon.engine import compute_tables
from src.pcanon.properties import verify_properties
from src.pcanon.tilting import compare_with_tilting
from src.utils.cache import open_cache

RUNS = [
    ("B2", [2, 3], 4),
    ("G2", [2, 3, 5], 6),
    ("A1~", [2, 3], 8),
    ("C3", [2], 9),
    ("D4", [2], 7),
]


def run(name, primes, maxlen):
    system = build_system(name)
    cache = open_cache(constants.DEFAULT_CACHE_DIR, system.realization_key)
    tables = compute_tables(system, primes, maxlen, cache)
    for p in primes:
        table = tables[p]
        print(table.to_text(only_differences=True))
        report = verify_properties(table)
        print(report.to_text())
        if name == "A1~":
            mismatches = compare_with_tilting(table, range(maxlen))
            print(f"tilting comparison: {len(mismatches)} mismatches")
        print()


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format=constants.LOG_FORMAT)
    selected = sys.argv[1:]
    for name, primes, maxlen in RUNS:
        if selected and name not in selected:
            continue
        print(f"--- {name} ---")
        run(name, primes, maxlen)
