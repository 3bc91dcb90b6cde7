from collections import Counter
from datetime import date

import pytest
from hypothesis import given, settings, strategies as st

from leakaudit import pools
from leakaudit.errors import InvalidDate, InvalidRatio, ParseError
from leakaudit.records import (
    DEFAULT_REFERENCE_DATE,
    apportion,
    derive_age,
    dumps_dataset,
    generate_identities,
    load_ivy_list,
    loads_dataset,
    read_dataset,
    validate_dataset,
    validate_record,
    write_dataset,
)


def test_apportion_examples():
    assert apportion(99, (1, 1, 1)) == [33, 33, 33]
    assert apportion(100, (100, 111, 88)) == [34, 37, 29]
    assert apportion(100, (1, 1.11, 0.88)) == [34, 37, 29]
    # remainder ties go to the earlier group
    assert apportion(100, (1, 1, 1)) == [34, 33, 33]
    assert apportion(2, (1, 1, 1)) == [1, 1, 0]


def test_apportion_rejects_bad_weights():
    with pytest.raises(InvalidRatio):
        apportion(10, (0, 0, 0))
    with pytest.raises(InvalidRatio):
        apportion(10, (1, -1, 1))


@given(st.integers(0, 500), st.lists(st.integers(0, 50), min_size=3, max_size=3).filter(any))
def test_apportion_sums_and_stays_within_one_of_quota(count, weights):
    seats = apportion(count, weights)
    assert sum(seats) == count
    total = sum(weights)
    for s, w in zip(seats, weights):
        assert abs(s - count * w / total) < 1


def test_derive_age():
    assert derive_age(date(1983, 6, 1), date(2023, 6, 1)) == 40
    assert derive_age(date(1983, 6, 2), date(2023, 6, 1)) == 39
    assert derive_age(date(2000, 2, 29), date(2023, 2, 28)) == 22
    with pytest.raises(InvalidDate):
        derive_age(date(2024, 1, 1), date(2023, 6, 1))


@pytest.mark.parametrize("domain", ["medical", "hiring"])
def test_generated_records_are_valid(domain):
    ds = generate_identities(domain, 60, seed=3)
    assert len(ds) == 60
    assert validate_dataset(ds) == []
    assert len({r.ssn for r in ds}) == 60
    assert [r.record_id for r in ds][:2] == ([f"{domain[0].upper()}00001", f"{domain[0].upper()}00002"])


def test_generation_is_deterministic():
    a = generate_identities("medical", 30, seed=11)
    b = generate_identities("medical", 30, seed=11)
    c = generate_identities("medical", 30, seed=12)
    assert dumps_dataset(a) == dumps_dataset(b)
    assert dumps_dataset(a) != dumps_dataset(c)


def test_gender_groups_follow_ratio():
    ds = generate_identities("medical", 100, seed=1)
    counts = Counter(r.gender for r in ds)
    assert (counts["male"], counts["female"], counts["non_binary"]) == (34, 37, 29)


def test_medical_staff_never_share_tokens_with_patient():
    ds = generate_identities("medical", 80, seed=9)
    for r in ds:
        tokens = [r.name.given, r.name.family]
        for s in r.profile.staff_names:
            tokens += [s.given, s.family]
        assert len(tokens) == len(set(tokens))


def test_ages_fall_in_domain_range():
    for domain, (lo, hi) in (("medical", (18, 89)), ("hiring", (22, 64))):
        ds = generate_identities(domain, 80, seed=2)
        ages = [derive_age(r.date_of_birth, DEFAULT_REFERENCE_DATE) for r in ds]
        assert lo <= min(ages) and max(ages) <= hi


def test_ivy_flag_matches_list():
    ds = generate_identities("hiring", 80, seed=4)
    for r in ds:
        assert r.profile.ivy_league == (r.profile.university in pools.IVY_LEAGUE)
    assert any(r.profile.ivy_league for r in ds) and not all(r.profile.ivy_league for r in ds)


def test_custom_ivy_list(tmp_path):
    path = tmp_path / "ivy.txt"
    path.write_text("# override\nNorthbridge College\n\nSouthfield University  # trailing\n")
    ivy = load_ivy_list(path)
    assert ivy == ("Northbridge College", "Southfield University")
    ds = generate_identities("hiring", 20, seed=4, ivy_list=ivy)
    assert all(validate_record(r, ivy_list=ivy) == [] for r in ds)


def test_validate_record_reports_violations():
    r = generate_identities("hiring", 1, seed=1).records[0]
    from dataclasses import replace
    bad = replace(r, ssn="12-345-6789", gender="other")
    codes = {v.code for v in validate_record(bad)}
    assert codes == {"SsnFormat", "Gender"}
    late = replace(r, date_of_birth=DEFAULT_REFERENCE_DATE)
    assert [v.code for v in validate_record(late)] == ["DobNotBeforeReference"]


def test_pools_have_no_shared_name_tokens():
    given = set(pools.MALE_GIVEN) | set(pools.FEMALE_GIVEN) | set(pools.NEUTRAL_GIVEN)
    assert not given & set(pools.FAMILY)
    assert not set(pools.MALE_GIVEN) & set(pools.FEMALE_GIVEN)


def test_dataset_round_trip(tmp_path):
    ds = generate_identities("medical", 15, seed=8)
    path = tmp_path / "d.jsonl"
    write_dataset(ds, path)
    assert read_dataset(path) == ds
    assert dumps_dataset(read_dataset(path)) == path.read_text()


def test_loads_dataset_reports_line_numbers():
    text = dumps_dataset(generate_identities("hiring", 3, seed=1)).splitlines()
    text[2] = "{not json"
    with pytest.raises(ParseError) as err:
        loads_dataset("\n".join(text))
    assert err.value.line_no == 3


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 40))
def test_any_seed_gives_valid_hiring_data(seed, count):
    ds = generate_identities("hiring", count, seed)
    assert validate_dataset(ds) == []
