"""Command-line interface: compute, form, kl, tilting-a1, relations, entry."""

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import List, Optional, Tuple

import pandas as pd

import config as constants
from .algebra.coxeter import CoxeterSystem, build_system
from .algebra.hecke import HeckeAlgebra
from .algebra.nilhecke import NilHeckeRing
from .pcanon.engine import compute_tables
from .pcanon.properties import verify_properties
from .pcanon.tilting import compare_with_tilting, is_affine_a1, tilting_multiplicities, tilting_support
from .soergel.lightleaves import GramEngine, export_json
from .soergel.localize import LocalizationModel, verify_all_relations
from .utils.analysis import block_frame, rank_frame, tilting_frame
from .utils.cache import open_cache
from .utils.config import RunConfig, run_config
from .utils.errors import PCanonError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFY_FAILED = 2


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--type", dest="system", default=None,
                        help="Named type (B2, G2, A1~, A1xA1, ...) or realization JSON file")
    parser.add_argument("--config", default=None, help="Run file (JSON) with RunConfig fields")
    parser.add_argument("--format", choices=constants.OUTPUT_FORMATS, default=None)
    parser.add_argument("--output", default=None, help="Write the result here instead of stdout")
    parser.add_argument("--no-cache", action="store_true", help="Disable the on-disk cache")
    parser.add_argument("--engine", choices=constants.ENGINES, default=None)
    parser.add_argument("--rex-policy", choices=constants.REX_POLICIES, default=None)
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")
    parser.add_argument("-v", "--verbose", action="store_true", help="Shorthand for --log-level DEBUG")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcanon",
        description="p-canonical bases of Hecke algebras via light-leaf intersection forms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="p-canonical table up to a length bound")
    _common(p)
    p.add_argument("--prime", type=int, action="append", default=None,
                   help="Characteristic (repeatable); 0 gives the KL basis")
    p.add_argument("--max-length", dest="maxlen", type=int, default=None)
    p.add_argument("--only-differences", action="store_true", default=None)
    p.add_argument("--verify", action="store_true", default=None,
                   help="Cross-check the nil Hecke path and run the property suite")
    p.add_argument("--parallelism", type=int, default=None, help="Worker processes, one prime each")
    p.add_argument("--target-policy", choices=("canonical", "alternative"), default="canonical",
                   help="Reduced word used for each element")

    p = sub.add_parser("form", help="Local intersection form of a word at an element")
    _common(p)
    p.add_argument("--word", required=True)
    p.add_argument("--at", required=True)
    p.add_argument("--prime", type=int, action="append", default=None)
    p.add_argument("--full", action="store_true", help="Also print the polynomial pairing")
    p.add_argument("--verify", action="store_true", default=None)

    p = sub.add_parser("kl", help="Kazhdan-Lusztig element in the standard basis")
    _common(p)
    p.add_argument("--element", required=True)

    p = sub.add_parser("tilting-a1", help="Delta-multiplicities of SL2 tilting modules")
    _common(p)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--grid", action="store_true", help="Print the full 0/1 grid up to lambda")

    p = sub.add_parser("relations", help="Check the diagrammatic relations on localization matrices")
    _common(p)
    p.add_argument("--strict", action="store_true", help="Stop at the first failed relation")

    p = sub.add_parser("entry", help="Single nil Hecke intersection-form entry")
    _common(p)
    p.add_argument("--word", required=True)
    p.add_argument("--first", required=True, help="01-string of the first subexpression")
    p.add_argument("--second", required=True, help="01-string of the second subexpression")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Run file (or defaults) overridden by the flags that were given."""
    cfg = RunConfig.from_json(args.config) if args.config else replace(run_config)
    primes = getattr(args, "prime", None)
    if isinstance(primes, int):
        # tilting-a1 takes a single prime
        primes = [primes]
    overrides = {
        "system": args.system,
        "format": args.format,
        "engine": args.engine,
        "rex_policy": args.rex_policy,
        "log_level": "DEBUG" if args.verbose else args.log_level,
        "primes": primes,
        "maxlen": getattr(args, "maxlen", None),
        "verify": getattr(args, "verify", None),
        "parallelism": getattr(args, "parallelism", None),
        "only_differences": getattr(args, "only_differences", None),
    }
    cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    if args.no_cache:
        cfg = replace(cfg, use_cache=False)
    return cfg.validate()


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")
    logger.info("Wrote %s", path)


def _prime_path(path: Optional[str], p: int, many: bool) -> Optional[str]:
    if path is None or not many:
        return path
    stem, ext = os.path.splitext(path)
    return f"{stem}_p{p}{ext}"


def _open_system(cfg: RunConfig) -> Tuple[CoxeterSystem, object]:
    system = build_system(cfg.system)
    cache = open_cache(cfg.resolved_cache_dir(), system.realization_key, cfg.use_cache)
    return system, cache


def _compute_worker(cfg: RunConfig, primes: List[int], target_policy: str) -> List[Tuple[int, str, str, bool]]:
    """Tables for some primes, rendered; runs in-process or in a worker."""
    system, cache = _open_system(cfg)
    tables = compute_tables(system, primes, cfg.maxlen, cache, engine=cfg.engine,
                            rex_policy=cfg.rex_policy, target_policy=target_policy,
                            verify=cfg.verify)
    out = []
    hecke = HeckeAlgebra(system)
    for p in primes:
        table = tables[p]
        passed = True
        notes = ""
        if cfg.verify:
            report = verify_properties(table, hecke)
            passed = report.passed
            notes = report.to_text()
            if is_affine_a1(system) and p:
                mismatches = compare_with_tilting(table, range(cfg.maxlen))
                passed = passed and not mismatches
                notes += "".join("\n" + m for m in mismatches)
        if cfg.format == "json":
            body = table.to_json()
        else:
            body = table.to_text(cfg.only_differences)
            if notes:
                body += "\n" + notes
        logger.info("%s", cache.summary())
        out.append((p, body, notes, passed))
    return out


def cmd_compute(cfg: RunConfig, output: Optional[str], target_policy: str = "canonical") -> int:
    primes = list(cfg.primes)
    if cfg.parallelism > 1 and len(primes) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.parallelism, len(primes))) as pool:
            futures = [pool.submit(_compute_worker, cfg, [p], target_policy) for p in primes]
            results = [item for f in futures for item in f.result()]
    else:
        results = _compute_worker(cfg, primes, target_policy)
    status = EXIT_OK
    for p, body, notes, passed in results:
        _emit(body, _prime_path(output, p, len(primes) > 1))
        if cfg.format == "json" and notes:
            logger.info("%s", notes)
        if not passed:
            logger.error("Verification failed for p=%d", p)
            status = EXIT_VERIFY_FAILED
    return status


def cmd_form(cfg: RunConfig, word_text: str, at: str, output: Optional[str], full: bool = False) -> int:
    system, cache = _open_system(cfg)
    word = system.parse_word(word_text)
    x = system.element_from_text(at)
    primes = sorted({0, *cfg.primes})
    engine = GramEngine(system, cache, engine=cfg.engine, rex_policy=cfg.rex_policy, verify=cfg.verify)
    family = engine.gram(word, x, primes=primes, full=full)
    if cfg.format == "json":
        _emit(export_json(family, system), output)
        return EXIT_OK
    lines = [f"Intersection form of {system.format_word(word)} at {system.label(x)}: "
             f"{len(family.leaves)} light leaves"]
    for d, block in sorted(family.blocks.items()):
        rows = ["".join(map(str, e.bits)) for e in family.by_defect(-d)]
        cols = ["".join(map(str, e.bits)) for e in family.by_defect(d)]
        lines.append(f"\nDegree {d} block (defect {-d} rows, defect {d} columns):")
        lines.append(block_frame(block, rows, cols).to_string())
    lines.append("")
    lines.append(rank_frame({p: str(family.graded_rank(p)) for p in primes}).to_string(index=False))
    if family.pairing is not None:
        labels = ["".join(map(str, e.bits)) for e in family.leaves]
        frame = pd.DataFrame([[str(c) for c in row] for row in family.pairing], index=labels, columns=labels)
        lines.append("\nPolynomial pairing:")
        lines.append(frame.to_string())
    _emit("\n".join(lines), output)
    return EXIT_OK


def cmd_kl(cfg: RunConfig, element: str, output: Optional[str]) -> int:
    system = build_system(cfg.system)
    x = system.element_from_text(element)
    b = HeckeAlgebra(system).kl_basis(x)
    if cfg.format == "json":
        data = {system.label(y): c.to_pairs() for y, c in b.items()}
        _emit(json.dumps({"element": system.label(x), "std": data}, sort_keys=True,
                         separators=(",", ":")), output)
        return EXIT_OK
    lines = [f"kl_{system.label(x)} = {b.format(system)}"]
    lines += [f"h_{system.label(y)},{system.label(x)} = {c}" for y, c in sorted(b.items(), reverse=True)]
    _emit("\n".join(lines), output)
    return EXIT_OK


def cmd_tilting_a1(p: int, lam: int, output: Optional[str], fmt: str = "text", grid: bool = False) -> int:
    support = tilting_support(lam, p)
    if fmt == "json":
        _emit(json.dumps({"prime": p, "lambda": lam, "support": support}, sort_keys=True,
                         separators=(",", ":")), output)
        return EXIT_OK
    text = " ".join(map(str, support))
    if grid:
        text += "\n" + tilting_frame(tilting_multiplicities(p, lam), lam).to_string()
    _emit(text, output)
    return EXIT_OK


def cmd_relations(cfg: RunConfig, output: Optional[str], strict: bool = False) -> int:
    system, cache = _open_system(cfg)
    reports = verify_all_relations(LocalizationModel(system, cache=cache), strict)
    if cfg.format == "json":
        data = [{"colours": list(r.colours), "results": [[n, ok] for n, ok in r.results]} for r in reports]
        _emit(json.dumps({"system": system.name, "reports": data}, sort_keys=True,
                         separators=(",", ":")), output)
    else:
        lines = []
        for r in reports:
            lines.append(f"{system.name} {','.join(r.colours)}: {len(r.results)} relations, "
                         f"{len(r.failures)} failed")
            lines += [f"  FAILED {name}" for name in r.failures]
        _emit("\n".join(lines), output)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED


def cmd_entry(cfg: RunConfig, word_text: str, first: str, second: str, output: Optional[str]) -> int:
    system = build_system(cfg.system)
    word = system.parse_word(word_text)
    e1 = system.decorate(word, [int(c) for c in first])
    e2 = system.decorate(word, [int(c) for c in second])
    value = NilHeckeRing(system).d_pair(e1, e2)
    _emit(f"d({first}, {second}) = {value}", output)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except PCanonError as exc:
        logging.basicConfig(format=constants.LOG_FORMAT)
        logger.error("%s", exc)
        return EXIT_ERROR
    logging.basicConfig(level=cfg.log_level.upper(), format=constants.LOG_FORMAT, stream=sys.stderr)
    try:
        if args.command == "compute":
            return cmd_compute(cfg, args.output, args.target_policy)
        if args.command == "form":
            return cmd_form(cfg, args.word, args.at, args.output, args.full)
        if args.command == "kl":
            return cmd_kl(cfg, args.element, args.output)
        if args.command == "tilting-a1":
            return cmd_tilting_a1(args.prime, args.lam, args.output, cfg.format, args.grid)
        if args.command == "relations":
            return cmd_relations(cfg, args.output, args.strict)
        return cmd_entry(cfg, args.word, args.first, args.second, args.output)
    except PCanonError as exc:
        logger.error("%s", exc)
        return EXIT_ERROR
