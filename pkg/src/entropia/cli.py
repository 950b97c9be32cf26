"""Command-line entry point.

Exit codes: 0 success, 1 input or parse error, 2 a configured gate was exceeded.

A JSON config file (``--config`` or the ``ENTROPIA_CONFIG`` environment
variable) may set any long option, using underscores for dashes, e.g.
``{"wmc_weight": "cyclomatic", "gate_score": 40}``. Command-line flags win.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from entropia.entropy import (
    NASA_SATC,
    CategoryDistribution,
    EntropyError,
    ThresholdTable,
    degradation_score,
)
from entropia.ingest import (
    MiniOOSyntaxError,
    SchemaError,
    dump_interchange,
    load_interchange,
    parse_paths,
)
from entropia.metrics import WmcWeighting
from entropia.model import ClassModel, ModelError
from entropia.reporting import DegradationReport, analyze, render, render_trend, trend

log = logging.getLogger("entropia")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_GATE = 2

DEFAULTS = {
    "input_kind": "source",
    "wmc_weight": "unit",
    "thresholds": None,
    "format": "text",
    "gate_score": None,
    "gate_entropy": None,
    "strict": False,
    "seed": 0,
    "budget": 1000,
    "out": None,
    "project": None,
    "step": None,
    "total": None,
}


class CliError(Exception):
    pass


def _non_negative(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError("gate values must be >= 0")
    return value


def _add_common(p: argparse.ArgumentParser, *, gates: bool = True) -> None:
    p.add_argument("--config", help="JSON config file (default: $ENTROPIA_CONFIG)")
    p.add_argument("--format", choices=("text", "csv", "json"), default=None)
    p.add_argument("--out", help="write output here instead of stdout")
    if gates:
        p.add_argument("--input-kind", choices=("source", "interchange"), default=None)
        p.add_argument("--wmc-weight", choices=("unit", "cyclomatic"), default=None)
        p.add_argument("--thresholds", help="threshold table JSON file")
        p.add_argument("--gate-score", type=_non_negative, default=None, help="fail (exit 2) if N*H exceeds this")
        p.add_argument("--gate-entropy", type=_non_negative, default=None, help="fail (exit 2) if H exceeds this")
        p.add_argument("--strict", action="store_true", default=None, help="reject WMC values below the table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entropia", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="CK metrics and WMC entropy for one project")
    p.add_argument("paths", nargs="+", help="MiniOO files/directories, or one interchange file")
    p.add_argument("--project", help="project label for the report")
    _add_common(p)

    p = sub.add_parser("entropy", help="entropy and N*H straight from category counts")
    p.add_argument("counts", nargs="+", type=int)
    p.add_argument("--total", type=int, default=None, help="stated class total N to validate against")
    _add_common(p, gates=False)

    p = sub.add_parser("weyuker", help="check Weyuker properties 1-6 for each CK metric")
    p.add_argument("paths", nargs="*", help="extra MiniOO inputs (the bundled corpus is always used)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    _add_common(p, gates=False)

    p = sub.add_parser("trend", help="entropy across ordered versions")
    p.add_argument("paths", nargs="+", help="one input per version, oldest first")
    p.add_argument("--step", type=float, default=None, help="flag versions whose H rises by more than this")
    _add_common(p)

    p = sub.add_parser("dump", help="parse MiniOO sources into an interchange file")
    p.add_argument("paths", nargs="+")
    p.add_argument("--out", required=True)
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags."""
    merged = dict(DEFAULTS)
    path = getattr(args, "config", None) or os.environ.get("ENTROPIA_CONFIG")
    if path:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read config {path}: {exc}") from exc
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise CliError(f"unknown config keys: {sorted(unknown)}")
        merged.update(data)
    for key, value in vars(args).items():
        if value is not None and key in DEFAULTS:
            merged[key] = value
    for gate in ("gate_score", "gate_entropy"):
        if merged[gate] is not None and merged[gate] < 0:
            raise CliError(f"{gate} must be >= 0")
    return merged


def load_model(paths: Sequence[str], kind: str) -> ClassModel:
    if kind == "interchange":
        if len(paths) != 1:
            raise CliError("interchange input takes exactly one file")
        return load_interchange(paths[0])
    missing = [p for p in paths if not Path(p).exists()]
    if missing:
        raise CliError(f"no such file or directory: {', '.join(missing)}")
    return parse_paths(paths)


def _thresholds(cfg: dict) -> ThresholdTable:
    if not cfg["thresholds"]:
        return NASA_SATC
    try:
        return ThresholdTable.load(cfg["thresholds"])
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read thresholds {cfg['thresholds']}: {exc}") from exc


def _emit(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))


def _gate(report: DegradationReport, cfg: dict) -> int:
    breached = []
    if cfg["gate_score"] is not None and report.score > cfg["gate_score"]:
        breached.append(f"N*H {report.score:.6f} exceeds gate {cfg['gate_score']}")
    if cfg["gate_entropy"] is not None and report.entropy > cfg["gate_entropy"]:
        breached.append(f"H {report.entropy:.6f} exceeds gate {cfg['gate_entropy']}")
    for msg in breached:
        print(f"gate breached: {msg}", file=sys.stderr)
    return EXIT_GATE if breached else EXIT_OK


def _analyze_one(paths: Sequence[str], cfg: dict, project: str) -> DegradationReport:
    model = load_model(paths, cfg["input_kind"])
    report = analyze(
        model,
        thresholds=_thresholds(cfg),
        weighting=WmcWeighting(cfg["wmc_weight"]),
        strict=bool(cfg["strict"]),
        project=project,
    )
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return report


def cmd_analyze(args: argparse.Namespace, cfg: dict) -> int:
    project = cfg["project"] or Path(args.paths[0]).stem
    report = _analyze_one(args.paths, cfg, project)
    _emit(render(report, cfg["format"]), cfg["out"])
    return _gate(report, cfg)


def cmd_entropy(args: argparse.Namespace, cfg: dict) -> int:
    if any(c < 0 for c in args.counts):
        raise CliError("category counts must be non-negative")
    dist = CategoryDistribution.from_counts(args.counts)
    warnings = dist.check_total(cfg["total"])
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    h, score = degradation_score(dist)
    if cfg["format"] == "json":
        payload = {
            "counts": list(dist.counts),
            "total": dist.total,
            "stated_total": cfg["total"],
            "entropy": h,
            "score": score,
            "warnings": warnings,
        }
        text = json.dumps(payload, indent=2) + "\n"
    elif cfg["format"] == "csv":
        text = "counts,total,entropy,score\n" + f"{' '.join(map(str, dist.counts))},{dist.total},{h:.6f},{score:.6f}\n"
    else:
        text = (
            f"counts:          {' '.join(map(str, dist.counts))}\n"
            f"N:               {dist.total}\n"
            f"WMC entropy H:   {h:.6f}\n"
            f"N*H:             {score:.6f}\n"
        )
    _emit(text.encode("utf-8"), cfg["out"])
    return EXIT_OK


def cmd_weyuker(args: argparse.Namespace, cfg: dict) -> int:
    from entropia.corpus import load_corpus
    from entropia.weyuker import SuiteConfig, run_weyuker_suite

    models = [load_corpus()]
    if args.paths:
        models.append(load_model(args.paths, "source"))
    verdicts = run_weyuker_suite(models, SuiteConfig(seed=int(cfg["seed"]), budget=int(cfg["budget"])))
    if cfg["format"] == "json":
        text = json.dumps([v.to_dict() for v in verdicts], indent=2) + "\n"
    elif cfg["format"] == "csv":
        rows = ["property,metric,verdict,classes,values,budget_used"]
        for v in verdicts:
            rows.append(
                f"{v.property_id},{v.metric},{v.verdict.value},{' '.join(v.classes)},"
                f"{' '.join(str(x) for x in v.values)},{v.budget_used}"
            )
        text = "\n".join(rows) + "\n"
    else:
        lines = [f"{'prop':<6}{'metric':<8}{'verdict':<24}{'budget':>8}  witness"]
        for v in verdicts:
            if v.property_id == 5 and v.classes:
                (p, q, r), (vp, vq, vpr, vqr) = v.classes, v.values
                witness = f"{p}={vp:g}, {q}={vq:g}; {p}+{r}={vpr:g}, {q}+{r}={vqr:g}"
            else:
                witness = ", ".join(f"{c}={x:g}" for c, x in zip(v.classes, v.values))
            lines.append(f"{v.property_id:<6}{v.metric:<8}{v.verdict.value:<24}{v.budget_used:>8}  {witness}")
        text = "\n".join(lines) + "\n"
    _emit(text.encode("utf-8"), cfg["out"])
    return EXIT_OK


def cmd_trend(args: argparse.Namespace, cfg: dict) -> int:
    reports = [_analyze_one([p], cfg, Path(p).stem or p) for p in args.paths]
    t = trend(reports, cfg["step"])
    _emit(render_trend(t, cfg["format"]), cfg["out"])
    return _gate(reports[-1], cfg)


def cmd_dump(args: argparse.Namespace, cfg: dict) -> int:
    model = load_model(args.paths, "source")
    dump_interchange(model, args.out)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "entropy": cmd_entropy,
    "weyuker": cmd_weyuker,
    "trend": cmd_trend,
    "dump": cmd_dump,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s: %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](args, cfg)
    except MiniOOSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
    except (SchemaError, ModelError, EntropyError, CliError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
