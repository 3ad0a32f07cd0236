"""Command-line front end.

    scalescope analyze FILE... [--scale chars --scale words ...]
    scalescope search FILE [--seed N --restarts N --oracle]
    scalescope downgrade PROFILE.json -S N
    scalescope grid GRID [TILING]
    scalescope corpus DIR [--workers N]

Every artifact embeds the run manifest (command, inputs, scales, config,
format, tool version) so a run can be repeated byte for byte.

Exit codes: 0 success, 1 usage error, 2 input error, 3 internal invariant
violation.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .downgrade import downgrade_profile, downgraded_from_dict
from .grid2d import GridFormatError, GridTiling, PartitionError, grid_report, parse_grid, parse_tiling
from .model import (
    Message,
    ProfileError,
    TilingError,
    dumps,
    profile_from_dict,
    profile_to_dict,
    report_from_profile,
    scale_report,
)
from .search import SearchConfig, TIE_EPS, exhaustive_min_entropy, minimize_entropy
from .tokenizers import parse_scale, tokenize

log = logging.getLogger("scalescope")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
TSV_COLUMNS = ("path", "scale", "L_units", "scope_L", "diversity_D", "entropy_h", "specific_d")


class InputError(Exception):
    pass


class InvariantViolation(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- shared helpers -----------------------------------------------------------


def read_message(path, mode: str) -> Message:
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from None
    if not raw:
        raise InputError("empty message")
    if mode == "bytes":
        return Message(raw, "bytes")
    try:
        return Message(raw.decode("utf-8"), "text")
    except UnicodeDecodeError:
        if mode == "auto":
            return Message(raw, "bytes")
        raise InputError(f"{path} is not UTF-8 text; use --mode bytes") from None


def search_config(args) -> SearchConfig:
    return SearchConfig(
        max_passes=args.max_passes,
        restarts=args.restarts,
        rng_seed=args.seed,
        acceptance=args.acceptance,
        candidate_budget=args.budget,
        max_symbol_units=args.max_symbol,
    )


def manifest(args, inputs, scales=None) -> dict:
    m = {
        "command": args.command,
        "inputs": [str(p) for p in inputs],
        "scales": list(scales or []),
        "mode": getattr(args, "mode", None),
        "config": search_config(args).as_dict() if hasattr(args, "seed") else {},
        "format": getattr(args, "format", "json"),
        "tool": f"scalescope {__version__}",
    }
    if getattr(args, "oracle", False):
        m["config"]["oracle_cap"] = args.oracle_cap
    if getattr(args, "S", None) is not None:
        m["config"]["target_S"] = args.S
    if getattr(args, "symmetric", False):
        m["config"]["symmetric"] = True
    return m


def manifest_line(m: dict) -> str:
    return "# manifest\t" + json.dumps(m, sort_keys=True, separators=(",", ":")) + "\n"


def with_manifest(obj: dict, m: dict) -> dict:
    out = dict(obj)
    out["manifest"] = m
    return out


def emit(text: str, out_dir, name: str):
    if out_dir is None:
        sys.stdout.write(text)
        return
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / name).write_text(text, encoding="utf-8")


def tsv_row(path, rep) -> str:
    return (
        f"{path}\t{rep.scale_name}\t{rep.total_units}\t{rep.scope}\t{rep.diversity}\t"
        f"{rep.entropy:.6f}\t{rep.specific_diversity:.6f}"
    )


def analyze_one(msg: Message, selector: str, cfg: SearchConfig):
    """ScaleReport for one scale; the fundamental scale also returns its search result."""
    if parse_scale(selector)[0] == "fundamental":
        res = minimize_entropy(msg, cfg)
        return report_from_profile(res.profile, selector, (len(msg),)), res
    seg = tokenize(msg, selector, cfg.policy)
    rep = scale_report(seg, selector)
    return rep, None


def _check_scales(scales):
    for s in scales:
        try:
            parse_scale(s)
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e)) from None


# -- commands -----------------------------------------------------------------


def cmd_analyze(args) -> int:
    scales = args.scale or ["chars", "words"]
    cfg = search_config(args)
    m = manifest(args, args.paths, scales)
    rows, status = [], EXIT_OK
    for path in args.paths:
        try:
            msg = read_message(path, args.mode)
        except InputError as e:
            log.error("%s: %s", path, e)
            rows.append({"path": str(path), "error": str(e)})
            status = EXIT_INPUT
            continue
        for sel in scales:
            rep, res = analyze_one(msg, sel, cfg)
            rows.append({"path": str(path), "report": rep})
            if res is not None:
                if cfg.max_symbol_units is None and res.entropy > min_initial_entropy(msg, cfg) + TIE_EPS:
                    raise InvariantViolation(f"{path}: search ended above its starting entropy")
                if args.out is not None:
                    side = with_manifest(profile_to_dict(res.profile, sel), m)
                    emit(dumps(side), args.out, f"{Path(path).name}.fundamental.profile.json")

    if args.format == "tsv":
        lines = [manifest_line(m), "\t".join(TSV_COLUMNS) + "\n"]
        for r in rows:
            if "error" in r:
                lines.append(f"{r['path']}\t-\terror\t{r['error']}\n")
            else:
                lines.append(tsv_row(r["path"], r["report"]) + "\n")
        text = "".join(lines)
    else:
        reports = [
            {"path": r["path"], "error": r["error"]} if "error" in r
            else {"path": r["path"], **r["report"].as_dict()}
            for r in rows
        ]
        text = dumps({"manifest": m, "reports": reports})
    emit(text, args.out, f"analyze.{args.format}")
    return status


def min_initial_entropy(msg, cfg: SearchConfig) -> float:
    return min(scale_report(tokenize(msg, s, cfg.policy)).entropy for s in cfg.initializations)


def cmd_search(args) -> int:
    path = args.path
    try:
        msg = read_message(path, args.mode)
    except InputError as e:
        log.error("%s: %s", path, e)
        return EXIT_INPUT
    cfg = search_config(args)
    m = manifest(args, [path], ["fundamental"])
    res = minimize_entropy(msg, cfg)

    trace_h = [row.h_after for row in res.trace]
    if cfg.acceptance == "strict" and any(b >= a for a, b in zip(trace_h, trace_h[1:])):
        raise InvariantViolation("entropy trace is not strictly decreasing")
    if cfg.max_symbol_units is None and res.entropy > min_initial_entropy(msg, cfg) + TIE_EPS:
        raise InvariantViolation("search ended above its starting entropy")

    stem = Path(path).name
    profile_json = dumps(with_manifest(profile_to_dict(res.profile, "fundamental"), m))
    emit(profile_json, args.out, f"{stem}.profile.json")
    if args.out is not None:
        seg = {"boundaries": list(res.segmentation.boundaries), "initialization": res.initialization,
               "restart": res.restart}
        emit(dumps(with_manifest(seg, m)), args.out, f"{stem}.segmentation.json")
        emit(manifest_line(m) + res.trace_tsv(), args.out, f"{stem}.trace.tsv")

    if args.oracle:
        if len(msg) > args.oracle_cap:
            log.warning("%s: %d units exceed the oracle cap %d; oracle skipped", path, len(msg), args.oracle_cap)
        else:
            seg, h_opt = exhaustive_min_entropy(msg, args.oracle_cap, cfg.max_symbol_units)
            log.info("oracle h=%.12g search h=%.12g", h_opt, res.entropy)
            if args.out is not None:
                oracle = {"oracle_h": h_opt, "search_h": res.entropy, "boundaries": list(seg.boundaries)}
                emit(dumps(with_manifest(oracle, m)), args.out, f"{stem}.oracle.json")
            if res.entropy < h_opt - TIE_EPS:
                raise InvariantViolation("search result undercuts the exhaustive optimum")
    return EXIT_OK


def cmd_downgrade(args) -> int:
    try:
        data = json.loads(Path(args.profile).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        log.error("%s: %s", args.profile, e)
        return EXIT_INPUT
    m = manifest(args, [args.profile])
    try:
        if "points" in data:
            source = downgraded_from_dict(data)
        else:
            source = profile_from_dict(data)
        out = downgrade_profile(source, args.S)
    except (KeyError, TypeError, ValueError) as e:
        log.error("%s: not a usable profile: %s", args.profile, e)
        return EXIT_INPUT
    if abs(sum(out.masses) - 1.0) > 1e-9:
        raise InvariantViolation("downgrading lost probability mass")
    stem = Path(args.profile).name.removesuffix(".json")
    emit(dumps(with_manifest(out.as_dict(), m)), args.out, f"{stem}.S{args.S}.json")
    if args.out is not None:
        emit(manifest_line(m) + out.plot_tsv(), args.out, f"{stem}.S{args.S}.tsv")
    return EXIT_OK


def cmd_grid(args) -> int:
    inputs = [args.grid] + ([args.tiling] if args.tiling else [])
    m = manifest(args, inputs)
    try:
        grid = parse_grid(Path(args.grid).read_text(encoding="utf-8"))
        if args.tiling:
            tiling = parse_tiling(Path(args.tiling).read_text(encoding="utf-8"), grid)
        else:
            tiling = GridTiling.single_cells(grid)
        rep = grid_report(grid, tiling, "cells" if not args.tiling else "symbols", args.symmetric)
    except (OSError, GridFormatError, PartitionError) as e:
        log.error("%s", e)
        return EXIT_INPUT
    emit(dumps({"manifest": m, "report": rep.as_dict()}), args.out, f"{Path(args.grid).name}.report.json")
    return EXIT_OK


def _corpus_file(job):
    path, rel, scales, mode, cfg = job
    try:
        msg = read_message(path, mode)
    except InputError as e:
        return rel, [f"{rel}\t-\terror\t{e}"], True
    rows = []
    for sel in scales:
        rep, _ = analyze_one(msg, sel, cfg)
        rows.append(tsv_row(rel, rep))
    return rel, rows, False


def cmd_corpus(args) -> int:
    scales = args.scale or ["chars", "words", "fundamental"]
    root = Path(args.dir)
    if not root.is_dir():
        log.error("%s is not a directory", root)
        return EXIT_INPUT
    files = sorted(p for p in root.rglob("*") if p.is_file() and not p.name.startswith("."))
    cfg = search_config(args)
    rel = [p.relative_to(root).as_posix() for p in files]
    jobs = [(str(p), r, scales, args.mode, cfg) for p, r in zip(files, rel)]
    if args.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_corpus_file, jobs))
    else:
        results = [_corpus_file(j) for j in jobs]
    results.sort(key=lambda r: r[0])

    m = manifest(args, [args.dir], scales)
    m["format"] = "tsv"
    lines = [manifest_line(m), "\t".join(TSV_COLUMNS) + "\n"]
    failed = False
    for _, rows, err in results:
        failed |= err
        lines.extend(r + "\n" for r in rows)
    emit("".join(lines), args.out, "corpus.tsv")
    return EXIT_INPUT if failed else EXIT_OK


# -- argument parsing ---------------------------------------------------------


def _env_seed() -> int:
    raw = os.environ.get("SCALESCOPE_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", metavar="DIR", help="write artifacts here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    searching = _Parser(add_help=False)
    searching.add_argument("--mode", choices=("text", "bytes", "auto"), default="text")
    searching.add_argument("--seed", type=int, default=_env_seed(), help="default: $SCALESCOPE_SEED or 0")
    searching.add_argument("--restarts", type=int, default=SearchConfig.restarts)
    searching.add_argument("--max-passes", type=int, default=SearchConfig.max_passes)
    searching.add_argument("--acceptance", choices=("strict", "non-increasing"), default="strict")
    searching.add_argument("--budget", type=int, default=None, help="candidate moves per pass")
    searching.add_argument("--max-symbol", type=int, default=None, help="longest symbol allowed, in units")

    scaled = _Parser(add_help=False)
    scaled.add_argument("--scale", action="append", help="chars, words, bits, ngram:N or fundamental (repeatable)")

    ap = _Parser(prog="scalescope", description="Symbolic entropy of descriptions at different observation scales.")
    ap.add_argument("--version", action="version", version=f"scalescope {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common, searching, scaled], help="scale reports per file")
    p.add_argument("paths", nargs="+")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("search", parents=[common, searching], help="fundamental-scale search on one file")
    p.add_argument("path")
    p.add_argument("--oracle", action="store_true", help="also solve exactly when the message is short")
    p.add_argument("--oracle-cap", type=int, default=18)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("downgrade", parents=[common], help="collapse a profile JSON to S points")
    p.add_argument("profile")
    p.add_argument("-S", type=int, required=True)
    p.set_defaults(func=cmd_downgrade)

    p = sub.add_parser("grid", parents=[common], help="report for a 2D grid and tiling")
    p.add_argument("grid")
    p.add_argument("tiling", nargs="?")
    p.add_argument("--symmetric", action="store_true", help="class patterns up to rotation and reflection")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("corpus", parents=[common, searching, scaled], help="TSV over every file in a directory")
    p.add_argument("dir")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    try:
        _check_scales(getattr(args, "scale", None) or [])
        if hasattr(args, "seed"):
            search_config(args)
        if getattr(args, "S", None) is not None and args.S < 1:
            raise argparse.ArgumentTypeError("-S must be at least 1")
    except (argparse.ArgumentTypeError, ValueError) as e:
        ap.error(str(e))
    try:
        return args.func(args)
    except InvariantViolation as e:
        log.error("invariant violated: %s", e)
        return EXIT_INTERNAL
    except (TilingError, ProfileError) as e:
        log.error("%s", e)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
