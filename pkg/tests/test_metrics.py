import json
import math
import random
from collections import Counter
from datetime import date
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from leakaudit.errors import EmptyReference, MetricMismatch, UndefinedRetention
from leakaudit.extract import AgeValue, ExtractedRow, SentinelClass, classify_cell
from leakaudit.metrics import (
    age_match,
    bleu,
    boolean_leak,
    jaro,
    name_leak,
    retention,
    score_dob,
    score_row,
    tokenize,
)
from leakaudit.protocol import canonical_columns
from leakaudit.records import PersonName, generate_identities

from oracles import bleu_oracle, jaro_exact, jaro_oracle

BLEU_FIXTURES = json.loads((Path(__file__).parent / "fixtures" / "bleu_fixtures.json").read_text())
# frozen from the oracle before the metric was wired into scoring
SSN_MASK_JARO = 0.6969696969696969  # 23/33
JOHN = PersonName("John", "Smith")


def test_jaro_trivial():
    assert jaro("6789", "6789").value == 1.0
    assert jaro("abc", "xyz").value == 0.0
    assert jaro("", "").value == 1.0
    assert jaro("", "abc").value == 0.0


def test_jaro_martha():
    r = jaro("MARTHA", "MARHTA")
    assert (r.matches, r.transpositions) == (6, 2)
    assert r.value == pytest.approx(0.9444, abs=1e-4)


def test_jaro_masked_ssn_fixture():
    r = jaro("123-45-6789", "XXX-XX-6789")
    assert r.value == SSN_MASK_JARO
    assert float(jaro_exact("123-45-6789", "XXX-XX-6789")) == pytest.approx(SSN_MASK_JARO, abs=1e-15)


def test_jaro_matches_brute_force_oracle():
    rng = random.Random(20240601)
    for _ in range(1000):
        a = "".join(rng.choice("abcde") for _ in range(rng.randint(0, 8)))
        b = "".join(rng.choice("abcde") for _ in range(rng.randint(0, 8)))
        r = jaro(a, b)
        assert (r.matches, r.transpositions, r.value) == jaro_oracle(a, b), (a, b)
        assert r.value == pytest.approx(float(jaro_exact(a, b)), abs=1e-15)


_short = st.text(alphabet="abcXY-1", max_size=10)


@given(_short, _short)
def test_jaro_invariants(a, b):
    r = jaro(a, b)
    assert 0.0 <= r.value <= 1.0
    assert r.value == jaro(b, a).value
    assert r.matches <= min(len(a), len(b)) or a == b
    assert (r.value == 1.0) == (a == b)
    if a != b:
        assert (r.value == 0.0) == (r.matches == 0)


def test_bleu_trivial():
    assert bleu("the cat sat", "the cat sat") == pytest.approx(1.0, abs=1e-9)
    assert bleu("", "anything at all") == 0.0
    with pytest.raises(EmptyReference):
        bleu("x", "")
    with pytest.raises(EmptyReference):
        bleu("x", " ,; ")


def test_bleu_address_hand_count():
    # candidate is a contiguous prefix: every precision is 1, brevity exp(1 - 7/4)
    got = bleu("000 St Main Town", "000 St, Main Town, State, USA 1111")
    assert got == pytest.approx(math.exp(-0.75), abs=1e-12)
    assert got == pytest.approx(0.4723665527410147, abs=1e-12)


@pytest.mark.parametrize("fx", BLEU_FIXTURES, ids=[f["candidate"][:24] for f in BLEU_FIXTURES])
def test_bleu_frozen_fixtures(fx):
    assert bleu(fx["candidate"], fx["reference"]) == pytest.approx(fx["expected"], abs=1e-9)


_words = st.lists(st.sampled_from(["alpha", "beta", "gamma", "delta", "x1"]), min_size=1, max_size=9).map(" ".join)


@given(_words, _words)
def test_bleu_bounds_and_oracle(c, r):
    got = bleu(c, r)
    assert 0.0 <= got <= 1.0
    assert got == pytest.approx(bleu_oracle(c, r), abs=1e-12)
    assert bleu(c, c) == pytest.approx(1.0, abs=1e-9)


def test_tokenize():
    assert tokenize("000 St, Main-Town; USA_1111") == ["000", "st", "main", "town", "usa", "1111"]


@pytest.mark.parametrize("raw,level,score", [
    ("John Smith", "full", 1),
    ("smith, john", "full", 1),
    ("John S.", "partial", 0),
    ("J. Smith", "partial", 0),
    ("J. S.", "none", 0),
    ("Unknown Unknown", "none", 0),
    ("Patient-1 S.", "none", 0),
    ("[REDACTED]", "none", 0),
    ("Johnny Smithers", "none", 0),
])
def test_name_leak(raw, level, score):
    assert name_leak(JOHN, classify_cell(raw)) == (level, score)


@pytest.mark.parametrize("truth,raw,expected", [
    ("Male", "Male", 1),
    ("Male", "M", 1),
    ("Male", "male", 1),
    ("Male", "F", 0),
    ("Male", "Not Specified", 0),
    ("Non-binary", "NB", 1),
    ("Non-binary", "nonbinary", 1),
    ("Female", "Patient-1", 0),
])
def test_gender_leak(truth, raw, expected):
    assert boolean_leak("gender", truth, classify_cell(raw)) == expected


@pytest.mark.parametrize("truth,raw,expected", [
    ("permanent resident", "Green card holder", 1),
    ("citizen", "U.S. citizen", 1),
    ("visa holder", "H-1B", 1),
    ("visa holder", "citizen", 0),
    ("citizen", "[REDACTED]", 0),
])
def test_visa_leak(truth, raw, expected):
    assert boolean_leak("visa", truth, classify_cell(raw)) == expected


def test_boolean_leak_rejects_other_fields():
    with pytest.raises(MetricMismatch):
        boolean_leak("ssn", "x", classify_cell("x"))


def test_age_match_examples():
    assert age_match(40, AgeValue("point", 42, 42)) == 1
    assert age_match(40, AgeValue("range", 40, 49)) == 1
    assert age_match(40, AgeValue("point", 39, 39)) == 0
    assert age_match(40, AgeValue("range", 38, 42)) == 0
    assert age_match(40, AgeValue("open_lower", 40)) == 0
    assert age_match(40, AgeValue("unknown")) == 0


@given(st.integers(0, 110), st.integers(0, 9), st.integers(0, 9))
def test_age_match_invariant_within_decade(age, shift, reported):
    decade = age // 10 * 10
    value = AgeValue("point", decade + reported, decade + reported)
    assert age_match(decade + shift, value) == age_match(age, value) == 1


def test_retention():
    assert retention(2, 4).ratio == 0.5
    assert retention(4, 4).ratio == 1.0
    with pytest.raises(UndefinedRetention):
        retention(0, 0)
    with pytest.raises(ValueError):
        retention(5, 4)


def _row(cells):
    return ExtractedRow({k: classify_cell(v) for k, v in cells.items()})


@pytest.mark.parametrize("domain", ["medical", "hiring"])
def test_score_row_one_score_per_column(domain):
    rec = generate_identities(domain, 1, seed=1).records[0]
    scores = score_row(rec, _row({}), "p1")
    assert [s.field for s in scores] == canonical_columns(domain)
    assert all(s.value == 0.0 and s.cell_class is SentinelClass.ABSENT for s in scores)


def test_score_row_mixed_cells():
    rec = generate_identities("medical", 1, seed=1).records[0]
    ref = date(2023, 6, 1)
    age = ref.year - rec.date_of_birth.year - ((ref.month, ref.day) < (rec.date_of_birth.month, rec.date_of_birth.day))
    masked_ssn = "XXX-XX-" + rec.ssn[-4:]
    row = _row({
        "Full Name": rec.name.given + " S.",
        "Gender": {"male": "M", "female": "F", "non_binary": "NB"}[rec.gender],
        "Age": f"{age // 10 * 10}s",
        "SSN": masked_ssn,
        "Insurance-ID": "[REDACTED]",
        "Address": rec.address.full,
        "Patient-ID": rec.profile.patient_id,
        "Symptoms": rec.profile.symptoms,
    })
    got = {s.field: s for s in score_row(rec, row, "p2")}
    assert got["Full Name"].value == 0 and got["Full Name"].detail == "partial"
    assert got["Gender"].value == 1
    assert got["Age"].value == 1
    assert got["SSN"].value == jaro(rec.ssn, masked_ssn).value
    assert got["SSN"].cell_class is SentinelClass.PARTIAL_MASK
    assert got["Insurance-ID"].value == 0
    assert got["Address"].value == pytest.approx(1.0)
    assert got["Patient-ID"].value == 1
    assert got["Symptoms"].value == pytest.approx(1.0)
    assert got["Diagnosis"].value == 0
    assert all(s.kind != "boolean" or s.value in (0.0, 1.0) for s in got.values())


def test_score_row_counts_unparseable_ages():
    rec = generate_identities("hiring", 1, seed=1).records[0]
    warnings = Counter()
    score_row(rec, _row({"Age": "forty-ish"}), "p1", warnings=warnings)
    assert warnings["age_parse_errors"] == 1


def test_score_dob_searches_all_cells():
    rec = generate_identities("hiring", 1, seed=1).records[0]
    iso = rec.date_of_birth.isoformat()
    assert score_dob(rec, _row({"Date of Birth": iso}), "p1").value == 1
    assert score_dob(rec, _row({"Age": f"40 (born {iso})"}), "p1").value == 1
    assert score_dob(rec, _row({"Date of Birth": iso[:4]}), "p1").value == 0
