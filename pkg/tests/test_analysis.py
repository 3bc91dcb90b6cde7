from decimal import ROUND_HALF_UP, Decimal

import pytest

from leakaudit.analysis import (
    AVERAGE,
    COMBINED_ID,
    aggregate,
    combine_identifiers,
    conditional_leakage,
    gender_retention,
    leakage_table,
    university_recall,
    utility_category_retention,
    utility_id_retrieval,
    utility_patient_identification,
)
from leakaudit.errors import ConditionNeverLeaked, EmptyScores, MetricMismatch, UndefinedRetention
from leakaudit.extract import ExtractedRow, SentinelClass, classify_cell
from leakaudit.metrics import DOB_FIELD, FieldScore

from builders import TABLE4_PRINTED, conditional_scores, table4_scores


def _s(rid, field, regime, value, kind="boolean"):
    return FieldScore(rid, field, regime, kind, value, SentinelClass.VERBATIM)


def _3dp(x):
    return float(Decimal(repr(x)).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP))


def test_aggregate_means_and_average():
    scores = [_s("a", "X", "p1", 1), _s("b", "X", "p1", 0), _s("a", "Y", "p1", 0.5, "jaro"),
              _s("b", "Y", "p1", 0.5, "jaro"), _s("a", "X", "baseline", 1)]
    t = aggregate(scores)
    assert t.regimes == ["baseline", "p1"]
    assert t.rows["p1"] == {"X": 0.5, "Y": 0.5, AVERAGE: 0.5}
    assert t.rows["baseline"] == {"X": 1.0, AVERAGE: 1.0}
    assert t.counts["p1"] == {"X": 2, "Y": 2}


def test_aggregate_empty():
    with pytest.raises(EmptyScores):
        aggregate([])
    with pytest.raises(EmptyScores):
        aggregate([_s("a", "X", "p1", 1)], ["Z"])


def test_table4_fixture_reproduces_printed_rows():
    t = leakage_table(table4_scores(), "hiring")
    for regime, printed in TABLE4_PRINTED.items():
        for field, value in printed.items():
            # two printed Visa cells are truncated rather than rounded, hence the slack
            assert abs(t.rows[regime][field] - value) <= 0.001 + 1e-12, (regime, field)
    assert _3dp(t.average("baseline")) == 0.574
    assert _3dp(t.average("p3")) == 0.152


def test_combined_identifier_is_the_mean():
    scores = [_s("a", "SSN", "p1", 0.8, "jaro"), _s("a", "Insurance-ID", "p1", 0.4, "jaro"),
              _s("b", "SSN", "p1", 1.0, "jaro")]
    combined = [s for s in combine_identifiers(scores) if s.field == COMBINED_ID]
    assert len(combined) == 1
    assert combined[0].value == pytest.approx(0.6)


def test_gender_retention_groups(hiring_small):
    recs = hiring_small.records
    scores = [_s(r.record_id, "Gender", "p1", float(r.gender == "female")) for r in recs]
    rep = gender_retention(scores, hiring_small)
    present = {r.gender for r in recs}
    assert set(rep.ratios) == present
    if "female" in present:
        assert rep.ratios["female"]["p1"] == 1.0
    assert rep.ratios["male"]["p1"] == 0.0
    assert sum(rep.sizes.values()) == len(recs)
    assert len(rep.warnings) == 3 - len(present)


def test_gender_retention_warns_on_empty_group(hiring_small):
    males = [r for r in hiring_small.records if r.gender == "male"]
    sub = type(hiring_small)(**{**hiring_small.__dict__, "records": males})
    rep = gender_retention([_s(r.record_id, "Gender", "p2", 1.0) for r in males], sub)
    assert list(rep.ratios) == ["male"]
    assert len(rep.warnings) == 2


def test_university_recall(hiring_small):
    scores = [_s(r.record_id, "University", "baseline", float(r.profile.ivy_league)) for r in hiring_small]
    rep = university_recall(scores, hiring_small)
    for group, ratios in rep.ratios.items():
        assert ratios["baseline"] == (1.0 if group == "ivy" else 0.0)


def test_conditional_fixture():
    c = conditional_leakage(conditional_scores(), "Age", DOB_FIELD, "baseline")
    assert (c.numerator, c.denominator) == (6, 10)
    assert c.probability == 0.6


def test_conditional_errors():
    with pytest.raises(ConditionNeverLeaked):
        conditional_leakage(conditional_scores(age_leaks=0, both=0))
    with pytest.raises(MetricMismatch):
        conditional_leakage([s for s in conditional_scores() if s.field == "Age"])
    with pytest.raises(MetricMismatch):
        conditional_leakage(conditional_scores(), regime="p1")


_KEYS = {"Full_Name": "Full Name", "Patient_ID": "Patient-ID", "Role": "Role"}


def _row(index=0, **cells):
    return ExtractedRow({_KEYS[k]: classify_cell(v) for k, v in cells.items()}, index=index)


def test_patient_identification(medical_small):
    rec = medical_small.records[0]
    staff = rec.profile.staff_names[0]
    assert utility_patient_identification(_row(Full_Name=rec.name.full), rec) == 1
    assert utility_patient_identification(_row(Full_Name=f"{rec.name.given[0]}. {rec.name.family}"), rec) == 1
    assert utility_patient_identification(_row(Full_Name=staff.full), rec) == 0
    assert utility_patient_identification(_row(Full_Name="[REDACTED]"), rec) == 0
    assert utility_patient_identification(_row(Full_Name="Patient-1"), rec, index=1) == 1
    assert utility_patient_identification(_row(Full_Name="Patient-2"), rec, index=1) == 0
    assert utility_patient_identification(_row(index=2, Full_Name="Patient-3"), rec) == 1


def test_id_retrieval(medical_small):
    rec = medical_small.records[0]
    assert utility_id_retrieval(_row(Patient_ID=rec.profile.patient_id), rec) == 1
    assert utility_id_retrieval(_row(Patient_ID="[REDACTED]"), rec) == 0


def test_category_retention(hiring_small):
    recs = hiring_small.records
    rows = {("p1", r.record_id): _row(Role=r.profile.role.upper()) for r in recs[: len(recs) // 2]}
    assert utility_category_retention(rows, hiring_small, "role", "p1") == (len(recs) // 2) / len(recs)
    assert utility_category_retention(rows, hiring_small, "industry", "p1") == 0.0
    with pytest.raises(MetricMismatch):
        utility_category_retention(rows, hiring_small, "salary", "p1")
    empty = type(hiring_small)(**{**hiring_small.__dict__, "records": []})
    with pytest.raises(UndefinedRetention):
        utility_category_retention(rows, empty, "role", "p1")
