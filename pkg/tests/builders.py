"""Shared fixture builders for the analysis, report and acceptance tests."""

from pathlib import Path

from leakaudit.cli import main
from leakaudit.extract import SentinelClass
from leakaudit.metrics import DOB_FIELD, FieldScore

# Published hiring-table rows (GDPR, 33 candidates). Boolean columns are stored
# as hit counts out of 33; the Jaro/BLEU columns are per-record constants.
TABLE4_N = 33
TABLE4 = {
    "baseline": {"Full Name": 28, "Gender": 27, "SSN": 0.806, "Address": 0.423, "Age": 6, "Visa/Residency Status": 12},
    "p1": {"Full Name": 21, "Gender": 9, "SSN": 0.19, "Address": 0.158, "Age": 6, "Visa/Residency Status": 13},
    "p2": {"Full Name": 2, "Gender": 8, "SSN": 0.694, "Address": 0.102, "Age": 6, "Visa/Residency Status": 14},
    "p3": {"Full Name": 0, "Gender": 8, "SSN": 0.336, "Address": 0.0, "Age": 6, "Visa/Residency Status": 5},
}
TABLE4_PRINTED = {
    "baseline": {"Full Name": 0.848, "Gender": 0.818, "SSN": 0.806, "Address": 0.423, "Age": 0.182,
                 "Visa/Residency Status": 0.363, "Average": 0.574},
    "p1": {"Full Name": 0.636, "Gender": 0.273, "SSN": 0.19, "Address": 0.158, "Age": 0.182,
           "Visa/Residency Status": 0.394, "Average": 0.305},
    "p2": {"Full Name": 0.061, "Gender": 0.242, "SSN": 0.694, "Address": 0.102, "Age": 0.182,
           "Visa/Residency Status": 0.424, "Average": 0.284},
    "p3": {"Full Name": 0.0, "Gender": 0.242, "SSN": 0.336, "Address": 0.0, "Age": 0.182,
           "Visa/Residency Status": 0.151, "Average": 0.152},
}
_KIND = {"SSN": "jaro", "Address": "bleu"}


def table4_scores() -> list[FieldScore]:
    out = []
    for regime, row in TABLE4.items():
        for field, v in row.items():
            kind = _KIND.get(field, "boolean")
            for i in range(TABLE4_N):
                value = v if kind != "boolean" else float(i < v)
                out.append(FieldScore(f"r{i:02d}", field, regime, kind, value, SentinelClass.VERBATIM))
    return out


def conditional_scores(n=20, age_leaks=10, both=6, regime="baseline") -> list[FieldScore]:
    """Age leaked in the first ``age_leaks`` records, DoB in the first ``both`` of those.

    Two extra DoB leaks sit among records whose age did not leak, so they must
    not be counted.
    """
    out = []
    for i in range(n):
        rid = f"c{i:02d}"
        age = float(i < age_leaks)
        dob = float(i < both or i in (n - 1, n - 2))
        out.append(FieldScore(rid, "Age", regime, "boolean", age, SentinelClass.VERBATIM))
        out.append(FieldScore(rid, DOB_FIELD, regime, "boolean", dob, SentinelClass.VERBATIM))
    return out


def pipeline(root: Path, backend: str, domain="hiring", count=100, seed=42, fmt="md") -> dict:
    """gen -> run -> score -> report through the CLI; returns the produced paths."""
    root.mkdir(parents=True, exist_ok=True)
    data, tx, rep, out = root / "data", root / "t.jsonl", root / "report.json", root / f"report.{fmt}"
    for argv in (
        ["gen", "--domain", domain, "--count", str(count), "--seed", str(seed), "--out", str(data)],
        ["run", "--dataset", str(data), "--backend", backend, "--out", str(tx)],
        ["score", "--dataset", str(data), "--transcripts", str(tx), "--out", str(rep)],
        ["report", "--in", str(rep), "--format", fmt, "--out", str(out)],
    ):
        code = main(argv)
        if code != 0:
            raise RuntimeError(f"{argv[0]} exited {code}")
    return {"dataset": data / "dataset.jsonl", "corpus": data / "corpus.jsonl",
            "transcripts": tx, "report_json": rep, "report": out}
