"""Command-line front end: ``mt-interleave <subcommand> ...``.

Exit codes
  0  success (check: interleaved)
  1  check: not interleaved
  2  bad input (unreadable file, invalid tree, malformed CSV, bad epsilon)
  3  search budget exceeded
  4  oracle --compare found an engine/oracle mismatch
  5  instance too large for the oracle

stdout stays empty on any non-zero exit except check's ``not-interleaved``.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path
from typing import Optional

from . import __version__
from .engine import SearchConfig, compute_interleaving_distance, generate_candidates, is_eps_interleaved
from .errors import InstanceTooLarge, IngestError, MergeTreeError, SearchBudgetExceeded
from .ingest import load_tree, merge_tree_of_series, read_series_csv, write_tree_document
from .mergetree import MergeTree, format_value, parse_value
from .oracle import oracle_distance
from .report import (
    config_from_dict,
    distance_report_to_dict,
    dumps,
    interleave_result_to_dict,
    manifest,
    witness_to_dict,
)

log = logging.getLogger("mtinterleave")

EXIT_OK = 0
EXIT_NOT_INTERLEAVED = 1
EXIT_BAD_INPUT = 2
EXIT_BUDGET = 3
EXIT_MISMATCH = 4
EXIT_TOO_LARGE = 5


class _InputError(Exception):
    pass


def _load(path: str) -> MergeTree:
    try:
        return load_tree(path)
    except OSError as exc:
        raise _InputError(f"{path}: {exc.strerror or exc}") from None
    except (IngestError, MergeTreeError) as exc:
        raise _InputError(f"{path}: {type(exc).__name__}: {exc}") from None


def _config(args) -> SearchConfig:
    return SearchConfig(
        refinement=not args.no_refine,
        max_maps=args.max_maps,
        parallel=args.parallel,
        deterministic_witness=args.deterministic_witness,
    )


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# run helpers shared by the subcommands and by manifest replay


def run_distance(a: MergeTree, b: MergeTree, cfg: SearchConfig):
    rep = compute_interleaving_distance(a, b, cfg)
    return rep, distance_report_to_dict(rep)


def run_check(a: MergeTree, b: MergeTree, eps, cfg: SearchConfig):
    res = is_eps_interleaved(a, b, eps, cfg)
    return res, interleave_result_to_dict(res)


def run_oracle(a: MergeTree, b: MergeTree, compare: bool, cfg: SearchConfig):
    rep = oracle_distance(a, b, full_scan=True)
    engine = compute_interleaving_distance(a, b, cfg).epsilon_star if compare else None
    payload = {
        "oracle_epsilon_star": format_value(rep.epsilon_star),
        "candidates": [format_value(x) for x in rep.candidates],
        "verdicts": list(rep.verdicts),
        "maps_checked": rep.maps_checked,
        "engine_epsilon_star": None if engine is None else format_value(engine),
    }
    return rep, engine, payload


def replay_manifest(data: dict, base: Optional[Path] = None) -> dict:
    """Re-run a recorded manifest sequentially and return its result payload."""
    base = Path(base) if base is not None else Path.cwd()
    a, b = (_load(str(base / p)) for p in data["inputs"])
    cfg = config_from_dict(data["config"])
    cfg = SearchConfig(
        refinement=cfg.refinement,
        max_maps=cfg.max_maps,
        parallel=False,
        deterministic_witness=True,
    )
    sub = data["subcommand"]
    if sub == "distance":
        return run_distance(a, b, cfg)[1]
    if sub == "check":
        return run_check(a, b, parse_value(data["epsilon"]), cfg)[1]
    if sub == "oracle":
        return run_oracle(a, b, data["result"]["engine_epsilon_star"] is not None, cfg)[2]
    raise ValueError(f"cannot replay subcommand {sub!r}")


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, stdout lines)


def cmd_distance(args):
    a, b = _load(args.tree_a), _load(args.tree_b)
    cfg = _config(args)
    t0 = time.perf_counter()
    rep, payload = run_distance(a, b, cfg)
    elapsed = time.perf_counter() - t0
    if args.witness:
        _write(args.witness, dumps(witness_to_dict(rep.witness)))
    if args.json:
        _write(args.json, dumps(manifest("distance", [args.tree_a, args.tree_b], cfg, payload, elapsed)))
    out = [format_value(rep.epsilon_star)]
    if args.decimal:
        out.append(f"~{float(rep.epsilon_star):.6g} (approximate)")
    return EXIT_OK, out


def cmd_check(args):
    try:
        eps = parse_value(args.epsilon)
    except ValueError:
        raise _InputError(f"--epsilon: not an exact rational: {args.epsilon!r}") from None
    if eps < 0:
        raise _InputError(f"--epsilon: must be non-negative, got {args.epsilon}")
    a, b = _load(args.tree_a), _load(args.tree_b)
    cfg = _config(args)
    t0 = time.perf_counter()
    res, payload = run_check(a, b, eps, cfg)
    elapsed = time.perf_counter() - t0
    if args.witness:
        if res.witness is not None:
            _write(args.witness, dumps(witness_to_dict(res.witness)))
        else:
            log.warning("no witness written: trees are not %s-interleaved", format_value(eps))
    if args.json:
        m = manifest("check", [args.tree_a, args.tree_b], cfg, payload, elapsed,
                     extra={"epsilon": format_value(eps)})
        _write(args.json, dumps(m))
    if res.interleaved:
        return EXIT_OK, ["interleaved"]
    return EXIT_NOT_INTERLEAVED, ["not-interleaved"]


def cmd_ingest(args):
    try:
        data = Path(args.series).read_bytes()
    except OSError as exc:
        raise _InputError(f"{args.series}: {exc.strerror or exc}") from None
    try:
        tree = merge_tree_of_series(read_series_csv(data))
    except (IngestError, MergeTreeError) as exc:
        raise _InputError(f"{args.series}: {type(exc).__name__}: {exc}") from None
    Path(args.out).write_bytes(write_tree_document(tree, args.name))
    return EXIT_OK, []


def cmd_candidates(args):
    a, b = _load(args.tree_a), _load(args.tree_b)
    return EXIT_OK, [format_value(x) for x in generate_candidates(a, b)]


def cmd_oracle(args):
    a, b = _load(args.tree_a), _load(args.tree_b)
    cfg = _config(args)
    try:
        t0 = time.perf_counter()
        rep, engine, payload = run_oracle(a, b, args.compare, cfg)
        elapsed = time.perf_counter() - t0
    except InstanceTooLarge as exc:
        print(f"error: {args.tree_a}, {args.tree_b}: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE, []
    if args.json:
        _write(args.json, dumps(manifest("oracle", [args.tree_a, args.tree_b], cfg, payload, elapsed)))
    if engine is not None and engine != rep.epsilon_star:
        print(
            f"error: mismatch on {args.tree_a}, {args.tree_b}: oracle {format_value(rep.epsilon_star)}"
            f" vs engine {format_value(engine)}",
            file=sys.stderr,
        )
        return EXIT_MISMATCH, []
    return EXIT_OK, [format_value(rep.epsilon_star)]


# ---------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mt-interleave", description="Exact interleaving distance between merge trees.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--no-refine", action="store_true", help="skip target-list refinement")
    search.add_argument("--max-maps", type=_positive_int, default=SearchConfig.max_maps,
                        help="assignment budget per epsilon (default %(default)s)")
    search.add_argument("--parallel", action="store_true", help="split enumeration across processes")
    search.add_argument("--deterministic-witness", action="store_true",
                        help="always report the lexicographically first witness")

    pair = argparse.ArgumentParser(add_help=False)
    pair.add_argument("tree_a")
    pair.add_argument("tree_b")

    d = sub.add_parser("distance", parents=[pair, search], help="compute the interleaving distance")
    d.add_argument("--witness", metavar="PATH", help="write the witness map as JSON")
    d.add_argument("--json", metavar="PATH", help="write a run manifest with the full report")
    d.add_argument("--decimal", action="store_true", help="also print a decimal approximation")
    d.set_defaults(func=cmd_distance)

    c = sub.add_parser("check", parents=[pair, search], help="test one epsilon")
    c.add_argument("--epsilon", required=True, help="exact rational, e.g. 3/2")
    c.add_argument("--witness", metavar="PATH")
    c.add_argument("--json", metavar="PATH")
    c.set_defaults(func=cmd_check)

    i = sub.add_parser("ingest", help="build a merge tree from a position,value CSV")
    i.add_argument("series")
    i.add_argument("out")
    i.add_argument("--name", help="name recorded in the tree file header")
    i.set_defaults(func=cmd_ingest)

    k = sub.add_parser("candidates", parents=[pair], help="list candidate distance values")
    k.set_defaults(func=cmd_candidates)

    o = sub.add_parser("oracle", parents=[pair, search], help="brute-force reference distance")
    o.add_argument("--compare", action="store_true", help="also run the engine and require agreement")
    o.add_argument("--json", metavar="PATH")
    o.set_defaults(func=cmd_oracle)
    return p


def _setup_logging() -> None:
    level = os.environ.get("MT_INTERLEAVE_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[list[str]] = None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        code, lines = args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except SearchBudgetExceeded as exc:
        print(f"error: {args.tree_a}, {args.tree_b}: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if code in (EXIT_OK, EXIT_NOT_INTERLEAVED):
        for line in lines:
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
