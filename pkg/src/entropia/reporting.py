"""Per-project degradation reports and multi-version trends.

Reports render as TEXT (laid out like the project-metrics and entropy
tables), CSV (one row per class plus fixed summary rows) or JSON (full
numeric precision; schema ``entropia.report/1``, documented in the README).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from entropia.entropy import (
    NASA_SATC,
    CategoryDistribution,
    EmptySystem,
    ThresholdTable,
    categorize,
    degradation_score,
)
from entropia.metrics import MetricVector, WmcWeighting, compute_metrics
from entropia.model import ClassModel, SourceStats

REPORT_SCHEMA = "entropia.report/1"
CSV_COLUMNS = ("class", "wmc", "dit", "noc", "cbo", "rfc", "lcom_components", "lcom_percent", "category")
CSV_SUMMARY_ROWS = 3


@dataclass(frozen=True)
class ClassRow:
    name: str
    metrics: MetricVector
    category: str
    risk: str


@dataclass(frozen=True)
class DegradationReport:
    project: str
    stats: SourceStats | None
    rows: tuple[ClassRow, ...]
    distribution: CategoryDistribution
    entropy: float
    score: float
    thresholds: ThresholdTable
    weighting: WmcWeighting = WmcWeighting.UNIT
    warnings: tuple[str, ...] = ()

    @property
    def n_classes(self) -> int:
        return len(self.rows)

    def to_dict(self) -> dict:
        stats = None
        if self.stats is not None:
            s = self.stats
            stats = {
                "files": s.files,
                "lines": s.lines,
                "blank": s.blank,
                "comment": s.comment,
                "code": s.code,
                "inactive": s.inactive,
                "executable": s.executable,
                "declarative": s.declarative,
                "ratio_comment_code": s.ratio_comment_code,
            }
        return {
            "schema": REPORT_SCHEMA,
            "project": self.project,
            "weighting": self.weighting.value,
            "classes_total": self.n_classes,
            "stats": stats,
            "classes": [
                {"name": r.name, **r.metrics.as_dict(), "category": r.category, "risk": r.risk}
                for r in self.rows
            ],
            "categories": self.thresholds.to_list(),
            "distribution": {
                "labels": list(self.distribution.labels),
                "counts": list(self.distribution.counts),
                "total": self.distribution.total,
                "probabilities": list(self.distribution.probabilities),
            },
            "entropy": self.entropy,
            "score": self.score,
            "warnings": list(self.warnings),
        }


def build_report(
    model: ClassModel,
    metrics: Mapping[str, MetricVector],
    distribution: CategoryDistribution,
    thresholds: ThresholdTable = NASA_SATC,
    project: str = "",
    weighting: WmcWeighting = WmcWeighting.UNIT,
) -> DegradationReport:
    """Assemble a report; raises :class:`EmptySystem` for a model without classes."""
    if len(model) == 0:
        raise EmptySystem("model has no classes")
    h, score = degradation_score(distribution)
    warnings = list(distribution.warnings)
    warnings += distribution.check_total(len(model))

    rows = []
    for c in model.classes:
        mv = metrics[c.name]
        try:
            cat = thresholds.categories[thresholds.index_of(mv.wmc)]
        except ValueError:
            cat = thresholds.categories[0]
        rows.append(ClassRow(c.name, mv, cat.label, cat.risk))
    return DegradationReport(
        project=project,
        stats=model.stats,
        rows=tuple(rows),
        distribution=distribution,
        entropy=h,
        score=score,
        thresholds=thresholds,
        weighting=weighting,
        warnings=tuple(warnings),
    )


def analyze(
    model: ClassModel,
    thresholds: ThresholdTable = NASA_SATC,
    weighting: WmcWeighting = WmcWeighting.UNIT,
    strict: bool = False,
    project: str = "",
) -> DegradationReport:
    """Metrics, categorization and entropy for ``model`` in one call."""
    if len(model) == 0:
        raise EmptySystem("model has no classes")
    metrics = compute_metrics(model, weighting)
    dist = categorize((mv.wmc for mv in metrics.values()), thresholds, strict=strict)
    return build_report(model, metrics, dist, thresholds, project, weighting)


# -- rendering --------------------------------------------------------------


def _f6(x: float) -> str:
    return f"{x:.6f}"


def render_text(report: DegradationReport) -> str:
    out: list[str] = []
    title = report.project or "(unnamed project)"
    out.append(f"Project: {title}")
    out.append("")
    out.append("Project metrics")
    s = report.stats
    rows = [("Classes", str(report.n_classes))]
    if s is not None:
        rows += [
            ("Files", str(s.files)),
            ("Lines", str(s.lines)),
            ("Blank Lines", str(s.blank)),
            ("Code Lines", str(s.code)),
            ("Comment Lines", str(s.comment)),
            ("Inactive Lines", str(s.inactive)),
            ("Executable Statements", str(s.executable)),
            ("Declarative Statements", str(s.declarative)),
            ("Ratio Comment/Code", f"{s.ratio_comment_code:.2f}"),
        ]
    for label, value in rows:
        out.append(f"  {label + ':':<24}{value:>10}")
    out.append("")

    out.append(f"WMC entropy degradation ({report.weighting.value} weighting)")
    labels = report.distribution.labels
    header = ["Total Classes", *labels, "WMC Entropy", "N*(WMC Entropy)"]
    values = [
        str(report.distribution.total),
        *(str(c) for c in report.distribution.counts),
        _f6(report.entropy),
        _f6(report.score),
    ]
    widths = [max(len(h), len(v)) for h, v in zip(header, values)]
    out.append("  " + "  ".join(h.rjust(w) for h, w in zip(header, widths)))
    out.append("  " + "  ".join(v.rjust(w) for v, w in zip(values, widths)))
    out.append("")

    out.append("Categories")
    for i, (cat, count) in enumerate(zip(report.thresholds.categories, report.distribution.counts)):
        out.append(f"  {cat.label:<4}{report.thresholds.describe(i):<20}{count:>6}  {cat.risk}")
    out.append("")

    out.append("Classes")
    name_w = max([len("class")] + [len(r.name) for r in report.rows])
    cols = CSV_COLUMNS[1:]
    out.append("  " + "class".ljust(name_w) + "".join(f"{c:>16}" for c in cols))
    for r in report.rows:
        m = r.metrics
        cells = [m.wmc, m.dit, m.noc, m.cbo, m.rfc, m.lcom_components, _f6(m.lcom_percent), r.category]
        out.append("  " + r.name.ljust(name_w) + "".join(f"{str(c):>16}" for c in cells))

    if report.warnings:
        out.append("")
        out.append("Warnings")
        out.extend(f"  - {w}" for w in report.warnings)
    return "\n".join(out) + "\n"


def render_csv(report: DegradationReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.rows:
        m = r.metrics
        w.writerow([r.name, m.wmc, m.dit, m.noc, m.cbo, m.rfc, m.lcom_components, _f6(m.lcom_percent), r.category])
    w.writerow(["#classes_total", report.n_classes])
    w.writerow(["#wmc_entropy", _f6(report.entropy)])
    w.writerow(["#degradation_score", _f6(report.score)])
    return buf.getvalue()


def render_json(report: DegradationReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


_RENDERERS = {"text": render_text, "csv": render_csv, "json": render_json}


def render(report: DegradationReport, fmt: str = "text") -> bytes:
    try:
        renderer = _RENDERERS[fmt.lower()]
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}; choose from {sorted(_RENDERERS)}") from None
    return renderer(report).encode("utf-8")


def figure_data(reports: Sequence[DegradationReport]) -> str:
    """Plot-ready CSV: per project the class count, category counts, H and N*H."""
    if not reports:
        return ""
    labels = reports[0].distribution.labels
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["project", "classes", *labels, "entropy", "score"])
    for r in reports:
        w.writerow([r.project, r.n_classes, *r.distribution.counts, _f6(r.entropy), _f6(r.score)])
    return buf.getvalue()


# -- trends -----------------------------------------------------------------


@dataclass(frozen=True)
class TrendPoint:
    label: str
    entropy: float
    score: float
    classes: int


@dataclass(frozen=True)
class TrendReport:
    points: tuple[TrendPoint, ...]
    step: float | None = None
    flagged: tuple[str, ...] = field(default=())

    @property
    def deltas(self) -> list[tuple[float, float, int]]:
        """(dH, d(N*H), dN) between consecutive versions."""
        return [
            (b.entropy - a.entropy, b.score - a.score, b.classes - a.classes)
            for a, b in zip(self.points, self.points[1:])
        ]

    def to_dict(self) -> dict:
        return {
            "versions": [
                {"label": p.label, "entropy": p.entropy, "score": p.score, "classes": p.classes}
                for p in self.points
            ],
            "deltas": [
                {"from": a.label, "to": b.label, "entropy": d[0], "score": d[1], "classes": d[2]}
                for (a, b), d in zip(zip(self.points, self.points[1:]), self.deltas)
            ],
            "step": self.step,
            "flagged": list(self.flagged),
        }


def trend(reports: Sequence[DegradationReport], step: float | None = None) -> TrendReport:
    """Entropy and score movement across ordered versions.

    A version is flagged when its entropy rises by more than ``step`` bits
    over the previous one.
    """
    points = tuple(TrendPoint(r.project, r.entropy, r.score, r.n_classes) for r in reports)
    flagged = []
    if step is not None:
        for a, b in zip(points, points[1:]):
            if b.entropy - a.entropy > step:
                flagged.append(b.label)
    return TrendReport(points, step, tuple(flagged))


def render_trend(t: TrendReport, fmt: str = "text") -> bytes:
    if fmt == "json":
        return (json.dumps(t.to_dict(), indent=2) + "\n").encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["version", "classes", "entropy", "score", "d_entropy", "d_score", "flagged"])
        deltas = [(math.nan, math.nan, 0)] + t.deltas
        for p, d in zip(t.points, deltas):
            w.writerow([p.label, p.classes, _f6(p.entropy), _f6(p.score),
                        "" if math.isnan(d[0]) else _f6(d[0]), "" if math.isnan(d[1]) else _f6(d[1]),
                        int(p.label in t.flagged)])
        return buf.getvalue().encode("utf-8")
    lines = [f"{'version':<24}{'N':>6}{'H':>12}{'N*H':>14}{'dH':>12}{'d(N*H)':>14}"]
    prev = None
    for p in t.points:
        dh = "" if prev is None else _f6(p.entropy - prev.entropy)
        ds = "" if prev is None else _f6(p.score - prev.score)
        mark = "  <- entropy step exceeded" if p.label in t.flagged else ""
        lines.append(f"{p.label:<24}{p.classes:>6}{_f6(p.entropy):>12}{_f6(p.score):>14}{dh:>12}{ds:>14}{mark}")
        prev = p
    return ("\n".join(lines) + "\n").encode("utf-8")
