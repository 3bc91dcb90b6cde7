"""Score transcripts against a dataset and render the audit report."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from statistics import fmean
from typing import Sequence

from . import analysis
from .analysis import AVERAGE, leakage_table
from .errors import (
    AlignmentError,
    ConditionNeverLeaked,
    EmptyScores,
    FingerprintMismatch,
    FormatError,
    NoTableFound,
    UnrecognizedSchema,
)
from .extract import ExtractedRow, align_rows, extract_table, render_markdown_table
from .llmclient import Transcript
from .metrics import DOB_FIELD, FieldScore, score_dob, score_row
from .protocol import REGIME_LABELS, REGIMES
from .records import Dataset

SCHEMA_VERSION = 1
FORMATS = ("md", "csv", "json")
CSV_SECTIONS = ("leakage", "utility", "gender", "university", "conditional")


def fingerprint_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def fingerprint_file(path) -> str:
    return fingerprint_bytes(Path(path).read_bytes())


@dataclass
class ScoredRun:
    scores: list[FieldScore]
    rows: dict[tuple[str, str], ExtractedRow]  # (regime, record_id) -> row
    positions: dict[tuple[str, str], int]  # 1-based position of the record in its batch
    warnings: Counter
    quarantine: list[dict]


def score_transcripts(dataset: Dataset, transcripts: Sequence[Transcript],
                      fingerprint: str | None = None) -> ScoredRun:
    """Parse, align and score every successful transcript.

    Unparseable or unalignable responses are set aside (counted in the
    warnings and returned in ``quarantine``) rather than failing the run.
    """
    by_id = dataset.by_id()
    warnings: Counter = Counter()
    scores: list[FieldScore] = []
    rows: dict[tuple[str, str], ExtractedRow] = {}
    positions: dict[tuple[str, str], int] = {}
    quarantine: list[dict] = []
    for t in transcripts:
        if fingerprint is not None and t.dataset_fingerprint != fingerprint:
            raise FingerprintMismatch(
                f"transcript {t.transcript_id} was produced from a different dataset "
                f"({t.dataset_fingerprint[:12] or 'none'} vs {fingerprint[:12]})")
        unknown = [rid for rid in t.record_ids if rid not in by_id]
        if unknown:
            raise FingerprintMismatch(f"transcript {t.transcript_id} names unknown records {unknown[:3]}")
        if t.status != "ok":
            warnings["backend_errors"] += 1
            continue
        try:
            table = extract_table(t.response_text, t.transcript_id)
            aligned = align_rows(table, t.record_ids)
        except (NoTableFound, UnrecognizedSchema) as exc:
            warnings["parse_errors"] += 1
            quarantine.append({"transcript_id": t.transcript_id, "reason": str(exc),
                               "response_text": t.response_text})
            continue
        except AlignmentError as exc:
            warnings["alignment_errors"] += 1
            quarantine.append({"transcript_id": t.transcript_id, "reason": str(exc),
                               "unmatched": exc.unmatched, "response_text": t.response_text})
            continue
        for pos, rid in enumerate(t.record_ids, start=1):
            row = aligned[rid]
            rec = by_id[rid]
            rows[(t.regime, rid)] = row
            positions[(t.regime, rid)] = pos
            scores.extend(score_row(rec, row, t.regime, reference_date=dataset.reference_date,
                                    warnings=warnings))
            scores.append(score_dob(rec, row, t.regime))
    return ScoredRun(scores, rows, positions, warnings, quarantine)


# -- report -----------------------------------------------------------------

@dataclass
class AuditReport:
    dataset: dict  # fingerprint, seed, domain, count
    leakage: dict  # columns, rows
    utility: dict  # columns, rows
    name_partial_rate: dict
    subgroups: list
    conditional: list
    warnings: dict
    scores: list = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "AuditReport":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise FormatError(f"unsupported report schema {d.get('schema_version')!r}")
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_report(path) -> AuditReport:
    try:
        return AuditReport.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
    except (ValueError, TypeError) as exc:
        raise FormatError(f"not an audit report: {exc}") from exc


def _utility(run: ScoredRun, dataset: Dataset, regimes: Sequence[str]) -> dict:
    by_id = dataset.by_id()
    rows: dict[str, dict[str, float]] = {}
    if dataset.domain == "medical":
        columns = ["Patient identification", "Patient-ID retrieval", "Symptoms", "Diagnosis"]
    else:
        columns = ["Role", "Industry", "Skills", "Hireability"]
    for regime in regimes:
        mine = [s for s in run.scores if s.regime == regime]
        bleu = {f: fmean(s.value for s in mine if s.field == f) for f in columns
                if any(s.field == f for s in mine)}
        if dataset.domain == "medical":
            keys = [k for k in run.rows if k[0] == regime]
            total = len(dataset)
            ident = sum(analysis.utility_patient_identification(run.rows[k], by_id[k[1]], run.positions[k])
                        for k in keys)
            ids = sum(analysis.utility_id_retrieval(run.rows[k], by_id[k[1]]) for k in keys)
            rows[regime] = {"Patient identification": ident / total, "Patient-ID retrieval": ids / total,
                            "Symptoms": bleu.get("Symptoms", 0.0), "Diagnosis": bleu.get("Diagnosis", 0.0)}
        else:
            rows[regime] = {
                "Role": analysis.utility_category_retention(run.rows, dataset, "role", regime),
                "Industry": analysis.utility_category_retention(run.rows, dataset, "industry", regime),
                "Skills": bleu.get("Skills", 0.0),
                "Hireability": bleu.get("Hireability", 0.0),
            }
    return {"columns": columns, "rows": rows}


def build_report(dataset: Dataset, run: ScoredRun, fingerprint: str) -> AuditReport:
    if not run.scores:
        raise EmptyScores("no transcript could be scored")
    table = leakage_table(run.scores, dataset.domain)
    regimes = table.regimes
    partial = {}
    for regime in regimes:
        names = [s for s in run.scores if s.regime == regime and s.field == "Full Name"]
        partial[regime] = sum(s.detail == "partial" for s in names) / len(names)

    reports = [analysis.gender_retention(run.scores, dataset)]
    if dataset.domain == "hiring":
        reports.append(analysis.university_recall(run.scores, dataset))
    subgroups = [{**asdict(sg), "warnings": list(sg.warnings)} for sg in reports]

    conditional, warnings = [], Counter(run.warnings)
    for regime in regimes:
        try:
            c = analysis.conditional_leakage(run.scores, "Age", DOB_FIELD, regime)
        except ConditionNeverLeaked:
            warnings["condition_never_leaked"] += 1
            continue
        conditional.append({**asdict(c), "probability": c.probability})
    for sg in subgroups:
        warnings["empty_groups"] += len(sg["warnings"])

    return AuditReport(
        dataset={"fingerprint": fingerprint, "seed": dataset.seed, "domain": dataset.domain,
                 "count": len(dataset)},
        leakage={"columns": list(table.columns), "rows": table.rows},
        utility=_utility(run, dataset, regimes),
        name_partial_rate=partial,
        subgroups=subgroups,
        conditional=conditional,
        warnings={k: v for k, v in sorted(warnings.items()) if v},
        scores=[{**asdict(s), "cell_class": s.cell_class.value} for s in run.scores],
    )


# -- rendering --------------------------------------------------------------

def _label(regime: str) -> str:
    return REGIME_LABELS.get(regime, regime)


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _ordered(rows: dict) -> list[str]:
    return [r for r in REGIMES if r in rows] + sorted(set(rows) - set(REGIMES))


def render_markdown(report: AuditReport) -> str:
    d = report.dataset
    title = "Healthcare data (HIPAA)" if d["domain"] == "medical" else "Hiring data (GDPR)"
    out = [f"# Leakage audit: {title}", "",
           f"Dataset {'`' + d['fingerprint'][:16] + '`' if d['fingerprint'] else '(no fingerprint)'}, "
           f"{d['count']} records, seed {d['seed']}.", "",
           "## Leakage (lower is better)", ""]
    cols = report.leakage["columns"]
    rows = report.leakage["rows"]
    out.append(render_markdown_table(
        ["Prompts", *cols, AVERAGE],
        [[_label(r), *(_fmt(rows[r][c]) for c in cols), _fmt(rows[r][AVERAGE])] for r in _ordered(rows)]))

    ucols = report.utility["columns"]
    urows = report.utility["rows"]
    out += ["", "## Utility (higher is better)", "",
            render_markdown_table(["Prompts", *ucols],
                                  [[_label(r), *(_fmt(urows[r][c]) for c in ucols)] for r in _ordered(urows)])]

    out += ["", "## Partial name disclosure", "",
            render_markdown_table(["Prompts", "Partial name rate"],
                                  [[_label(r), _fmt(v)] for r, v in
                                   ((r, report.name_partial_rate[r]) for r in _ordered(report.name_partial_rate))])]

    for sg in report.subgroups:
        groups = list(sg["ratios"])
        regimes = _ordered({r: 0 for g in groups for r in sg["ratios"][g]})
        out += ["", f"## Retention by {sg['dimension'].replace('_', ' ')}", "",
                render_markdown_table(
                    ["Group", "Size", *(_label(r) for r in regimes)],
                    [[g, str(sg["sizes"][g]), *(_fmt(sg["ratios"][g].get(r, 0.0)) for r in regimes)]
                     for g in groups])]
        for w in sg["warnings"]:
            out.append(f"\n_Note: {w}._")

    if report.conditional:
        out += ["", "## Date of birth leakage when age leaks", "",
                render_markdown_table(
                    ["Prompts", "Leaked both", "Age leaked", "P(DoB | age)"],
                    [[_label(c["regime"]), str(c["numerator"]), str(c["denominator"]), _fmt(c["probability"])]
                     for c in report.conditional])]

    if report.warnings:
        out += ["", "## Warnings", ""]
        out += [f"- {k}: {v}" for k, v in sorted(report.warnings.items())]
    return "\n".join(out) + "\n"


def render_csv(report: AuditReport, section: str = "leakage") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if section == "leakage":
        w.writerow(["regime", "field", "value"])
        rows = report.leakage["rows"]
        for r in _ordered(rows):
            for c in [*report.leakage["columns"], AVERAGE]:
                w.writerow([r, c, _fmt(rows[r][c])])
    elif section == "utility":
        w.writerow(["regime", "field", "value"])
        rows = report.utility["rows"]
        for r in _ordered(rows):
            for c in report.utility["columns"]:
                w.writerow([r, c, _fmt(rows[r][c])])
    elif section in ("gender", "university"):
        dim = "gender" if section == "gender" else "university_ivy"
        w.writerow(["group", "size", "regime", "value"])
        for sg in report.subgroups:
            if sg["dimension"] != dim:
                continue
            for g, by_regime in sg["ratios"].items():
                for r in _ordered(by_regime):
                    w.writerow([g, sg["sizes"][g], r, _fmt(by_regime[r])])
    elif section == "conditional":
        w.writerow(["regime", "numerator", "denominator", "probability"])
        for c in report.conditional:
            w.writerow([c["regime"], c["numerator"], c["denominator"], _fmt(c["probability"])])
    else:
        raise FormatError(f"unknown CSV section {section!r}; expected one of {', '.join(CSV_SECTIONS)}")
    return buf.getvalue()


def emit_report(report: AuditReport, fmt: str, section: str = "leakage") -> bytes:
    if fmt == "json":
        return report.to_json().encode("utf-8")
    if fmt == "md":
        return render_markdown(report).encode("utf-8")
    if fmt == "csv":
        return render_csv(report, section).encode("utf-8")
    raise FormatError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")

