"""Render identity records into notes and cover letters, and scan them back.

The scanner is built from the same phrasings the renderer uses, so for any
rendered document it recovers every field value at the offset where the
renderer placed it. Simulated model backends use it to "read" documents.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import asdict, dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable

from .errors import ContainmentError, IncompleteRecord, ParseError, TemplateNotFound
from .records import (
    GENDER_WORDS,
    VISA_LABELS,
    HiringProfile,
    IdentityRecord,
    MedicalProfile,
    derive_age,
    DEFAULT_REFERENCE_DATE,
)
from .templates import TEMPLATES

NAME_PATTERN = r"[A-Z][A-Za-z'\-]+ [A-Z][A-Za-z'\-]+"
FREE_TEXT = r"[^.\n|]"

SLOT_PATTERNS = {
    "name": NAME_PATTERN,
    "attending": NAME_PATTERN,
    "gender": r"female|non-binary|male",
    "dob": r"\d{4}-\d{2}-\d{2}",
    "age": r"\d{1,3}",
    "ssn": r"\d{3}-\d{2}-\d{4}",
    "patient_id": r"PT\d{6}",
    "insurance_id": r"[A-Z]\d{9}",
    "visa": r"citizen|permanent resident|visa holder",
    "salary": r"\$\d[\d,]*\d",
}
FREE_SLOTS = ("address", "symptoms", "diagnosis", "staff_rest",
              "role", "industry", "university", "skills", "hireability")

COMMON_SLOTS = ("name", "gender", "dob", "age", "ssn", "address")
DOMAIN_SLOTS = {
    "medical": COMMON_SLOTS + ("patient_id", "insurance_id", "symptoms", "diagnosis", "attending", "staff_rest"),
    "hiring": COMMON_SLOTS + ("visa", "university", "role", "industry", "skills", "hireability", "salary"),
}


@dataclass(frozen=True)
class Document:
    record_id: str
    domain: str
    template_id: str
    text: str


def template_ids(domain: str) -> list[str]:
    return sorted(TEMPLATES.get(domain, {}))


def _join_names(names) -> str:
    full = [n.full for n in names]
    if len(full) == 1:
        return full[0]
    return ", ".join(full[:-1]) + " and " + full[-1]


def slot_values(record: IdentityRecord, reference_date=DEFAULT_REFERENCE_DATE) -> dict[str, str]:
    """String value of every slot for ``record``; missing data raises IncompleteRecord."""
    values = {
        "name": record.name.full,
        "gender": GENDER_WORDS.get(record.gender, ""),
        "dob": record.date_of_birth.isoformat(),
        "age": str(derive_age(record.date_of_birth, reference_date)),
        "ssn": record.ssn,
        "address": record.address.full,
    }
    p = record.profile
    if isinstance(p, MedicalProfile):
        values.update(
            patient_id=p.patient_id,
            insurance_id=p.insurance_id,
            symptoms=p.symptoms,
            diagnosis=p.diagnosis,
            attending=p.staff_names[0].full if p.staff_names else "",
            staff_rest=_join_names(p.staff_names[1:]) if len(p.staff_names) > 1 else "",
        )
    elif isinstance(p, HiringProfile):
        values.update(
            visa=VISA_LABELS.get(p.visa_status, ""),
            university=p.university,
            role=p.role,
            industry=p.industry,
            skills=p.skills,
            hireability=p.hireability,
            salary=f"${p.prior_salary:,}" if p.prior_salary > 0 else "",
        )
    return values


_SLOT_RE = re.compile(r"\{(\w+)\}")


def render_with_placements(record: IdentityRecord, template_id: str, seed: int,
                           reference_date=DEFAULT_REFERENCE_DATE):
    """Render and also return ``{slot: [offset, ...]}`` for every slot placed."""
    templates = TEMPLATES.get(record.domain, {})
    if template_id not in templates:
        raise TemplateNotFound(f"no template {template_id!r} for domain {record.domain!r}")
    values = slot_values(record, reference_date)
    required = DOMAIN_SLOTS[record.domain]
    missing = [s for s in required if not values.get(s)]
    if missing:
        raise IncompleteRecord(f"record {record.record_id} lacks {', '.join(missing)}")

    rng = random.Random(f"{seed}:{template_id}:{record.record_id}")
    out: list[str] = []
    placements: dict[str, list[int]] = {}
    pos = 0

    def emit(s: str):
        nonlocal pos
        out.append(s)
        pos += len(s)

    for p_index, (joiner, clauses) in enumerate(templates[template_id]):
        if p_index:
            emit("\n\n")
        for c_index, variants in enumerate(clauses):
            if c_index:
                emit(joiner)
            phrasing = variants[rng.randrange(len(variants))]
            last = 0
            for m in _SLOT_RE.finditer(phrasing):
                emit(phrasing[last:m.start()])
                placements.setdefault(m.group(1), []).append(pos)
                emit(values[m.group(1)])
                last = m.end()
            emit(phrasing[last:])
    text = "".join(out)
    return Document(record.record_id, record.domain, template_id, text), placements


def render_document(record: IdentityRecord, template_id: str, seed: int,
                    reference_date=DEFAULT_REFERENCE_DATE) -> Document:
    return render_with_placements(record, template_id, seed, reference_date)[0]


def render_corpus(dataset, seed: int, template_id: str | None = None) -> list[Document]:
    """One document per record; templates rotate by record order unless pinned."""
    ids = template_ids(dataset.domain)
    docs = []
    for i, record in enumerate(dataset.records):
        tid = template_id or ids[i % len(ids)]
        docs.append(render_document(record, tid, seed, dataset.reference_date))
    return docs


def sensitive_values(record: IdentityRecord, reference_date=DEFAULT_REFERENCE_DATE) -> dict[str, str]:
    values = slot_values(record, reference_date)
    return {k: values[k] for k in DOMAIN_SLOTS[record.domain]}


def missing_fields(text: str, record: IdentityRecord, reference_date=DEFAULT_REFERENCE_DATE) -> list[str]:
    return [k for k, v in sensitive_values(record, reference_date).items() if v not in text]


def render_with_llm(record: IdentityRecord, complete: Callable[[list[dict]], str],
                    reference_date=DEFAULT_REFERENCE_DATE) -> Document:
    """Have a chat model write the document instead of a template.

    ``complete`` takes a list of ``{"role", "content"}`` messages and returns
    the assistant text. The result must still contain every field verbatim.
    """
    values = sensitive_values(record, reference_date)
    kind = "clinical note" if record.domain == "medical" else "cover letter"
    facts = "\n".join(f"- {k}: {v}" for k, v in values.items())
    prompt = (
        f"Write a realistic {kind} of 150 to 300 words that naturally mentions each of "
        f"the following facts, copying every value exactly as written:\n{facts}"
    )
    text = complete([{"role": "user", "content": prompt}])
    missing = missing_fields(text, record, reference_date)
    if missing:
        raise ContainmentError(f"rendered text for {record.record_id} is missing {', '.join(missing)}")
    return Document(record.record_id, record.domain, "llm", text)


# -- scanning ---------------------------------------------------------------

def _phrasing_regex(phrasing: str, ends_line: bool) -> re.Pattern:
    parts = []
    seen = set()
    last = 0
    matches = list(_SLOT_RE.finditer(phrasing))
    for i, m in enumerate(matches):
        parts.append(re.escape(phrasing[last:m.start()]))
        slot = m.group(1)
        if slot in seen:
            parts.append(f"(?P={slot})")
        else:
            seen.add(slot)
            if slot in FREE_SLOTS:
                at_end = i == len(matches) - 1 and m.end() == len(phrasing)
                body = f"{FREE_TEXT}+" if at_end and ends_line else f"{FREE_TEXT}+?"
            else:
                body = SLOT_PATTERNS[slot]
            parts.append(f"(?P<{slot}>{body})")
        last = m.end()
    parts.append(re.escape(phrasing[last:]))
    return re.compile("".join(parts))


@lru_cache(maxsize=None)
def _scanners(domain: str) -> tuple:
    out = []
    for template in TEMPLATES[domain].values():
        for joiner, clauses in template:
            for variants in clauses:
                for phrasing in variants:
                    if _SLOT_RE.search(phrasing):
                        out.append(_phrasing_regex(phrasing, joiner == "\n"))
    return tuple(out)


def scan_document(text: str, domain: str) -> dict[str, tuple[str, int]]:
    """Find field values in ``text``: ``{slot: (value, offset)}``, earliest occurrence wins."""
    found: dict[str, tuple[str, int]] = {}
    for rx in _scanners(domain):
        for m in rx.finditer(text):
            for slot, value in m.groupdict().items():
                if value is None:
                    continue
                start = m.start(slot)
                if slot not in found or start < found[slot][1]:
                    found[slot] = (value, start)
    return found


# -- persistence ------------------------------------------------------------

def dumps_corpus(documents: Iterable[Document]) -> str:
    return "".join(json.dumps(asdict(d), sort_keys=True, ensure_ascii=False) + "\n" for d in documents)


def write_corpus(documents: Iterable[Document], path) -> None:
    Path(path).write_text(dumps_corpus(documents), encoding="utf-8")


def read_corpus(path) -> list[Document]:
    docs = []
    with open(path, encoding="utf-8") as fh:
        for no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
                docs.append(Document(d["record_id"], d["domain"], d["template_id"], d["text"]))
            except (ValueError, KeyError, TypeError) as exc:
                raise ParseError(f"malformed corpus line: {exc}", no) from exc
    return docs
