"""Seeded synthetic identity records for the medical and hiring domains."""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from datetime import date, timedelta
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Sequence, Union

from . import pools
from .errors import InvalidDate, InvalidRatio, ParseError

FORMAT_VERSION = 1
DEFAULT_REFERENCE_DATE = date(2023, 6, 1)
DEFAULT_STAFF_COUNT = 3

DOMAINS = ("medical", "hiring")
GENDERS = ("male", "female", "non_binary")
VISA_STATUSES = ("citizen", "permanent_resident", "visa_holder")

DEFAULT_RATIOS = {
    "hiring": (1, 1, 1),
    "medical": (100, 111, 88),
}

SSN_RE = re.compile(r"\d{3}-\d{2}-\d{4}")
INSURANCE_RE = re.compile(r"[A-Z]\d{9}")
ZIP_RE = re.compile(r"\d{4,5}")

_AGE_RANGES = {"medical": (18, 89), "hiring": (22, 64)}

# how each enum value is written in prose and in tables
GENDER_WORDS = {"male": "male", "female": "female", "non_binary": "non-binary"}
GENDER_LABELS = {"male": "Male", "female": "Female", "non_binary": "Non-binary"}
VISA_LABELS = {
    "citizen": "citizen",
    "permanent_resident": "permanent resident",
    "visa_holder": "visa holder",
}


@dataclass(frozen=True)
class PersonName:
    given: str
    family: str

    @property
    def full(self) -> str:
        return f"{self.given} {self.family}"

    def __str__(self) -> str:
        return self.full


@dataclass(frozen=True)
class Address:
    street: str
    city: str
    state: str
    zip: str
    country: str

    @property
    def full(self) -> str:
        return f"{self.street}, {self.city}, {self.state}, {self.country} {self.zip}"


@dataclass(frozen=True)
class MedicalProfile:
    patient_id: str
    insurance_id: str
    symptoms: str
    diagnosis: str
    staff_names: tuple[PersonName, ...]


@dataclass(frozen=True)
class HiringProfile:
    role: str
    industry: str
    skills: str
    hireability: str
    university: str
    ivy_league: bool
    visa_status: str
    prior_salary: int


Profile = Union[MedicalProfile, HiringProfile]


@dataclass(frozen=True)
class IdentityRecord:
    record_id: str
    name: PersonName
    gender: str
    date_of_birth: date
    ssn: str
    address: Address
    profile: Profile

    @property
    def domain(self) -> str:
        return "medical" if isinstance(self.profile, MedicalProfile) else "hiring"


@dataclass(frozen=True)
class Dataset:
    domain: str
    reference_date: date
    seed: int
    records: tuple[IdentityRecord, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def by_id(self) -> dict[str, IdentityRecord]:
        return {r.record_id: r for r in self.records}


class Violation(NamedTuple):
    code: str
    detail: str


def apportion(count: int, weights: Sequence[float]) -> list[int]:
    """Largest-remainder apportionment of ``count`` seats by ``weights``.

    Ties on the remainder go to the earlier position.
    """
    exact = [Fraction(str(w)) for w in weights]
    if any(w < 0 for w in exact) or sum(exact) == 0:
        raise InvalidRatio(f"weights must be non-negative and not all zero: {list(weights)}")
    total = sum(exact)
    quotas = [count * w / total for w in exact]
    seats = [int(q) for q in quotas]
    leftover = count - sum(seats)
    order = sorted(range(len(quotas)), key=lambda i: (-(quotas[i] - seats[i]), i))
    for i in order[:leftover]:
        seats[i] += 1
    return seats


def derive_age(dob: date, reference_date: date) -> int:
    """Completed years between ``dob`` and ``reference_date``."""
    if dob > reference_date:
        raise InvalidDate(f"date of birth {dob} is after reference date {reference_date}")
    years = reference_date.year - dob.year
    if (reference_date.month, reference_date.day) < (dob.month, dob.day):
        years -= 1
    return years


def record_age(record: IdentityRecord, reference_date: date = DEFAULT_REFERENCE_DATE) -> int:
    return derive_age(record.date_of_birth, reference_date)


class _Generator:
    def __init__(self, rng: random.Random, ivy_list: Sequence[str]):
        self.rng = rng
        self.ivy_list = tuple(ivy_list)
        self.ssns: set[str] = set()
        self.patient_ids: set[str] = set()

    def name(self, gender: str, avoid: frozenset = frozenset()) -> PersonName:
        given_pool = {
            "male": pools.MALE_GIVEN,
            "female": pools.FEMALE_GIVEN,
            "non_binary": pools.NEUTRAL_GIVEN,
        }[gender]
        while True:
            name = PersonName(self.rng.choice(given_pool), self.rng.choice(pools.FAMILY))
            if name.given not in avoid and name.family not in avoid:
                return name

    def ssn(self) -> str:
        while True:
            area = self.rng.randint(1, 899)
            if area == 666:
                continue
            value = f"{area:03d}-{self.rng.randint(1, 99):02d}-{self.rng.randint(1, 9999):04d}"
            if value not in self.ssns:
                self.ssns.add(value)
                return value

    def address(self) -> Address:
        rng = self.rng
        street = f"{rng.randint(10, 9899)} {rng.choice(pools.STREET_NAMES)} {rng.choice(pools.STREET_TYPES)}"
        return Address(
            street=street,
            city=rng.choice(pools.CITIES),
            state=rng.choice(pools.STATES),
            zip=f"{rng.randint(1001, 99950):05d}",
            country=pools.COUNTRY,
        )

    def dob(self, domain: str, reference_date: date) -> date:
        lo, hi = _AGE_RANGES[domain]
        # at least lo full years, strictly fewer than hi + 1
        earliest = date(reference_date.year - hi - 1, 1, 1)
        latest = date(reference_date.year - lo - 1, 12, 31)
        while True:
            dob = earliest + timedelta(days=self.rng.randint(0, (latest - earliest).days))
            if lo <= derive_age(dob, reference_date) <= hi:
                return dob

    def medical(self, name: PersonName, staff_count: int) -> MedicalProfile:
        rng = self.rng
        while True:
            pid = f"PT{rng.randint(0, 999999):06d}"
            if pid not in self.patient_ids:
                self.patient_ids.add(pid)
                break
        insurance = rng.choice("ABCDEFGHJKLMNPRSTUVWXYZ") + f"{rng.randint(0, 10**9 - 1):09d}"
        diagnosis, symptoms = rng.choice(pools.CONDITIONS)
        used = {name.given, name.family}
        staff = []
        for _ in range(staff_count):
            member = self.name(rng.choice(GENDERS), avoid=frozenset(used))
            used.update((member.given, member.family))
            staff.append(member)
        return MedicalProfile(pid, insurance, symptoms, diagnosis, tuple(staff))

    def hiring(self) -> HiringProfile:
        rng = self.rng
        role, industry, skills = rng.choice(pools.ROLES)
        years = rng.randint(2, 20)
        hireability = f"{years} years of experience; {rng.choice(pools.HIREABILITY_TRAITS)}"
        if rng.random() < 0.5:
            university = rng.choice(self.ivy_list)
        else:
            university = rng.choice(pools.NON_IVY)
        return HiringProfile(
            role=role,
            industry=industry,
            skills=skills,
            hireability=hireability,
            university=university,
            ivy_league=university in self.ivy_list,
            visa_status=rng.choice(VISA_STATUSES),
            prior_salary=rng.randint(70, 360) * 500,
        )


def generate_identities(
    domain: str,
    count: int,
    seed: int,
    gender_ratio: Sequence[float] | None = None,
    *,
    reference_date: date = DEFAULT_REFERENCE_DATE,
    staff_count: int = DEFAULT_STAFF_COUNT,
    ivy_list: Sequence[str] = pools.IVY_LEAGUE,
) -> Dataset:
    """Generate ``count`` records for ``domain``, deterministically under ``seed``.

    Gender group sizes are the largest-remainder apportionment of ``count``
    by ``gender_ratio`` (male, female, non-binary); the assignment order is a
    seeded shuffle.
    """
    if domain not in DOMAINS:
        raise ValueError(f"unknown domain {domain!r}")
    if count < 0:
        raise ValueError("count must be non-negative")
    if staff_count < 2:
        raise ValueError("staff_count must be at least 2")
    ratio = DEFAULT_RATIOS[domain] if gender_ratio is None else tuple(gender_ratio)
    if len(ratio) != 3:
        raise InvalidRatio("gender ratio needs exactly three weights")
    sizes = apportion(count, ratio)

    rng = random.Random(seed)
    genders = [g for g, n in zip(GENDERS, sizes) for _ in range(n)]
    rng.shuffle(genders)

    gen = _Generator(rng, ivy_list)
    prefix = "M" if domain == "medical" else "H"
    records = []
    for i, gender in enumerate(genders, start=1):
        name = gen.name(gender)
        dob = gen.dob(domain, reference_date)
        ssn = gen.ssn()
        address = gen.address()
        profile = gen.medical(name, staff_count) if domain == "medical" else gen.hiring()
        records.append(IdentityRecord(f"{prefix}{i:05d}", name, gender, dob, ssn, address, profile))
    return Dataset(domain, reference_date, seed, tuple(records))


def validate_record(
    record: IdentityRecord,
    reference_date: date = DEFAULT_REFERENCE_DATE,
    ivy_list: Sequence[str] = pools.IVY_LEAGUE,
) -> list[Violation]:
    out: list[Violation] = []
    name = record.name
    for part in (name.given, name.family):
        if not part or any(ch.isspace() for ch in part):
            out.append(Violation("NameToken", f"bad name token {part!r}"))
    if name.given == name.family:
        out.append(Violation("NameRepeat", "given name equals family name"))
    if record.gender not in GENDERS:
        out.append(Violation("Gender", f"unknown gender {record.gender!r}"))
    if not SSN_RE.fullmatch(record.ssn):
        out.append(Violation("SsnFormat", f"ssn {record.ssn!r} is not DDD-DD-DDDD"))
    if record.date_of_birth >= reference_date:
        out.append(Violation("DobNotBeforeReference", f"{record.date_of_birth} >= {reference_date}"))
    addr = record.address
    for part in ("street", "city", "state", "zip", "country"):
        if not getattr(addr, part):
            out.append(Violation("AddressEmpty", f"address {part} is empty"))
    if addr.zip and not ZIP_RE.fullmatch(addr.zip):
        out.append(Violation("ZipFormat", f"zip {addr.zip!r} is not 4-5 digits"))

    profile = record.profile
    if isinstance(profile, MedicalProfile):
        if not INSURANCE_RE.fullmatch(profile.insurance_id):
            out.append(Violation("InsuranceIdFormat", f"insurance id {profile.insurance_id!r}"))
        if not profile.patient_id:
            out.append(Violation("PatientIdEmpty", "patient id is empty"))
        if len(profile.staff_names) < 2:
            out.append(Violation("StaffCount", "fewer than two staff names"))
        if any(s == name for s in profile.staff_names):
            out.append(Violation("StaffCollision", "staff list contains the patient name"))
    elif isinstance(profile, HiringProfile):
        if profile.ivy_league != (profile.university in ivy_list):
            out.append(Violation("IvyFlag", f"ivy_league flag wrong for {profile.university!r}"))
        if profile.prior_salary <= 0:
            out.append(Violation("SalaryNonPositive", f"prior salary {profile.prior_salary}"))
        if profile.visa_status not in VISA_STATUSES:
            out.append(Violation("VisaStatus", f"unknown visa status {profile.visa_status!r}"))
    else:
        out.append(Violation("Profile", "profile must be medical or hiring"))
    return out


def validate_dataset(dataset: Dataset) -> list[Violation]:
    out = []
    seen_ids, seen_pids = set(), set()
    for record in dataset.records:
        for v in validate_record(record, dataset.reference_date):
            out.append(Violation(v.code, f"{record.record_id}: {v.detail}"))
        if record.domain != dataset.domain:
            out.append(Violation("DomainMismatch", record.record_id))
        if record.record_id in seen_ids:
            out.append(Violation("DuplicateRecordId", record.record_id))
        seen_ids.add(record.record_id)
        if isinstance(record.profile, MedicalProfile):
            if record.profile.patient_id in seen_pids:
                out.append(Violation("DuplicatePatientId", record.record_id))
            seen_pids.add(record.profile.patient_id)
    return out


def load_ivy_list(path) -> tuple[str, ...]:
    """Read an override list of universities, one per line; '#' starts a comment."""
    names = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            names.append(line)
    return tuple(names)


# -- serialization ----------------------------------------------------------

def _name_dict(n: PersonName) -> dict:
    return {"given": n.given, "family": n.family}


def record_to_dict(record: IdentityRecord) -> dict:
    p = record.profile
    if isinstance(p, MedicalProfile):
        profile = {
            "kind": "medical",
            "patient_id": p.patient_id,
            "insurance_id": p.insurance_id,
            "symptoms": p.symptoms,
            "diagnosis": p.diagnosis,
            "staff_names": [_name_dict(s) for s in p.staff_names],
        }
    else:
        profile = {
            "kind": "hiring",
            "role": p.role,
            "industry": p.industry,
            "skills": p.skills,
            "hireability": p.hireability,
            "university": p.university,
            "ivy_league": p.ivy_league,
            "visa_status": p.visa_status,
            "prior_salary": p.prior_salary,
        }
    a = record.address
    return {
        "record_id": record.record_id,
        "name": _name_dict(record.name),
        "gender": record.gender,
        "date_of_birth": record.date_of_birth.isoformat(),
        "ssn": record.ssn,
        "address": {"street": a.street, "city": a.city, "state": a.state, "zip": a.zip, "country": a.country},
        "profile": profile,
    }


def record_from_dict(d: dict) -> IdentityRecord:
    p = dict(d["profile"])
    kind = p.pop("kind")
    if kind == "medical":
        p["staff_names"] = tuple(PersonName(**s) for s in p["staff_names"])
        profile: Profile = MedicalProfile(**p)
    elif kind == "hiring":
        profile = HiringProfile(**p)
    else:
        raise ValueError(f"unknown profile kind {kind!r}")
    return IdentityRecord(
        record_id=d["record_id"],
        name=PersonName(**d["name"]),
        gender=d["gender"],
        date_of_birth=date.fromisoformat(d["date_of_birth"]),
        ssn=d["ssn"],
        address=Address(**d["address"]),
        profile=profile,
    )


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def dumps_dataset(dataset: Dataset) -> str:
    header = {
        "domain": dataset.domain,
        "reference_date": dataset.reference_date.isoformat(),
        "seed": dataset.seed,
        "version": FORMAT_VERSION,
    }
    lines = [_dumps(header)]
    lines.extend(_dumps(record_to_dict(r)) for r in dataset.records)
    return "\n".join(lines) + "\n"


def loads_dataset(text: str) -> Dataset:
    lines = text.splitlines()
    if not lines:
        raise ParseError("dataset file is empty", 1)
    try:
        header = json.loads(lines[0])
        domain = header["domain"]
        ref = date.fromisoformat(header["reference_date"])
        seed = int(header["seed"])
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"bad dataset header: {exc}", 1) from exc
    if header.get("version") != FORMAT_VERSION:
        raise ParseError(f"unsupported dataset version {header.get('version')!r}", 1)
    records = []
    for no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            records.append(record_from_dict(json.loads(line)))
        except (ValueError, KeyError, TypeError) as exc:
            raise ParseError(f"bad record: {exc}", no) from exc
    return Dataset(domain, ref, seed, tuple(records))


def write_dataset(dataset: Dataset, path) -> None:
    Path(path).write_text(dumps_dataset(dataset), encoding="utf-8")


def read_dataset(path) -> Dataset:
    return loads_dataset(Path(path).read_text(encoding="utf-8"))
