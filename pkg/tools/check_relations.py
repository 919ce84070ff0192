"""Run the one- and two-colour relation suite on every shipped rank-2 type
and print one line per relation that fails.
"""
import sys
import os

# ensure project root is on sys.path so imports work when running this script
proj_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
if proj_root not in sys.path:
    sys.path.insert(0, proj_root)

from src.algebra.coxeter import build_system
from src.soergel.localize import LocalizationModel, verify_all_relations

TYPES = ['A1xA1', 'A2', 'B2', 'G2', 'A1~']


def check(name):
    system = build_system(name)
    reports = verify_all_relations(LocalizationModel(system))
    failed = [(r.colours, f) for r in reports for f in r.failures]
    return sum(len(r.results) for r in reports), failed


if __name__ == '__main__':
    status = 0
    for name in TYPES:
        total, failed = check(name)
        print(f"{name}: {total} relations checked, {len(failed)} failed")
        for colours, relation in failed:
            print(f"  {','.join(colours)}: {relation}")
        if failed:
            status = 1
    sys.exit(status)
