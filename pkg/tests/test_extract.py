import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from leakaudit.errors import AgeParseError, AlignmentError, NoTableFound
from leakaudit.extract import (
    AgeValue,
    SentinelClass,
    align_rows,
    classify_cell,
    extract_table,
    extract_tables,
    normalize_header,
    parse_age_expression,
    render_markdown_table,
)

GOLDEN = json.loads((Path(__file__).parent / "fixtures" / "sentinel_golden.json").read_text())


@pytest.mark.parametrize("entry", GOLDEN, ids=[repr(e["raw"]) for e in GOLDEN])
def test_golden_sentinels(entry):
    cell = classify_cell(entry["raw"])
    assert cell.sentinel.value == entry["class"]
    assert cell.cleaned == entry["cleaned"]
    if "age" in entry:
        age = parse_age_expression(entry["raw"])
        assert (age.kind, age.lo, age.hi) == (entry["age"]["kind"], entry["age"]["lo"], entry["age"]["hi"])


@pytest.mark.parametrize("raw,expected", [
    ("Full Name", "Full Name"),
    ("**Patient Name**", "Full Name"),
    ("patient name", "Full Name"),
    ("SSN", "SSN"),
    ("Social Security Number", "SSN"),
    ("Health plan beneficiary numbers", "Insurance-ID"),
    ("Visa/Residency Status (US)", "Visa/Residency Status"),
    ("D.O.B.", "Date of Birth"),
    ("MRN", "Patient-ID"),
    ("Favourite colour", None),
])
def test_normalize_header(raw, expected):
    assert normalize_header(raw) == expected


def test_partial_mask_keeps_visible_digits():
    cell = classify_cell("XXX-XX-6789")
    assert cell.sentinel is SentinelClass.PARTIAL_MASK and cell.cleaned == "6789"


def test_letters_named_x_are_not_masks():
    assert classify_cell("Xavier Cole").sentinel is SentinelClass.VERBATIM
    assert classify_cell("Maxine").sentinel is SentinelClass.VERBATIM


@pytest.mark.parametrize("raw,expected", [
    ("42", AgeValue("point", 42, 42)),
    ("42 years old", AgeValue("point", 42, 42)),
    ("~42", AgeValue("point", 42, 42)),
    ("40's", AgeValue("range", 40, 49)),
    ("early 40s", AgeValue("range", 40, 43)),
    ("late 30s", AgeValue("range", 37, 39)),
    ("40 to 44", AgeValue("range", 40, 44)),
    ("over 60", AgeValue("open_lower", 60)),
    ("4X", AgeValue("range", 40, 49)),
    ("Unknown", AgeValue("unknown")),
])
def test_age_grammar(raw, expected):
    assert parse_age_expression(raw) == expected


@pytest.mark.parametrize("raw", ["forty", "44-40", "00XXXXXX", "1983-06-01"])
def test_age_grammar_rejects(raw):
    with pytest.raises(AgeParseError):
        parse_age_expression(raw)


def test_pipe_table_with_noise():
    text = (
        "Sure! Here is the table you asked for.\n\n"
        "| **Name** | Gender | SSN | Notes |\n"
        "|:---|---|---:|---|\n"
        "| John Smith | Male | XXX-XX-6789 | likes a \\| b |\n"
        "| Jane<br>Doe | F | [REDACTED] |  |\n"
        "\nLet me know if you need anything else."
    )
    rows = extract_table(text, "t1")
    assert len(rows) == 2
    assert rows[0].get("Full Name").cleaned == "John Smith"
    assert rows[1].get("Full Name").cleaned == "Jane Doe"
    assert rows[1].get("SSN").sentinel is SentinelClass.FULLY_REDACTED
    assert rows[0].get("Address").sentinel is SentinelClass.ABSENT
    assert rows[0].transcript_id == "t1" and rows[1].index == 1


def test_first_table_wins():
    first = render_markdown_table(["Name", "Age"], [["A B", "40"]])
    second = render_markdown_table(["Name", "Age"], [["C D", "50"]])
    rows = extract_table(first + "\n\nRevised:\n\n" + second)
    assert rows[0].get("Full Name").cleaned == "A B"
    assert len(extract_tables(first + "\n\n" + second)) == 2


def test_grid_fallback():
    text = "Name\tGender\tAge\nJohn Smith\tMale\t40\nJane Doe\tFemale\t41\n"
    rows = extract_table(text)
    assert [r.get("Age").raw for r in rows] == ["40", "41"]


def test_no_table():
    with pytest.raises(NoTableFound):
        extract_table("I cannot help with that request.")


def _rows(names):
    return extract_table(render_markdown_table(["Name"], [[n] for n in names]))


def test_alignment_by_order_and_by_index():
    assert list(align_rows(_rows(["a b", "c d"]), ["R1", "R2"])) == ["R1", "R2"]
    rows = _rows(["Patient-2", "Patient-1", "Patient-3", "extra row"])
    aligned = align_rows(rows, ["R1", "R2", "R3"])
    assert aligned["R1"].get("Full Name").raw == "Patient-1"
    assert aligned["R3"].get("Full Name").raw == "Patient-3"


def test_alignment_failure_lists_unmatched():
    with pytest.raises(AlignmentError) as err:
        align_rows(_rows(["Patient-1"]), ["R1", "R2"])
    assert err.value.unmatched == ["R2"]


_cell_text = st.text(st.characters(blacklist_categories=("Cs", "Cc"), blacklist_characters="|\\"), max_size=20)
# plain cells: no emphasis markers, tags or dash runs that would read as markup
_plain_text = st.text(st.characters(blacklist_categories=("Cs", "Cc", "Zl", "Zp"),
                                    blacklist_characters="|\\*_<-"), max_size=20)


@given(st.lists(st.lists(_plain_text, min_size=3, max_size=3), min_size=1, max_size=5))
def test_markdown_round_trip(rows):
    text = render_markdown_table(["Full Name", "SSN", "Address"], rows)
    parsed = extract_table(text)
    assert len(parsed) == len(rows)
    for got, want in zip(parsed, rows):
        assert [got.get(c).raw for c in ("Full Name", "SSN", "Address")] == [w.strip() for w in want]


@given(_cell_text)
def test_classify_never_raises(raw):
    cell = classify_cell(raw)
    if cell.sentinel in (SentinelClass.ABSENT, SentinelClass.FULLY_REDACTED):
        assert cell.cleaned == ""
