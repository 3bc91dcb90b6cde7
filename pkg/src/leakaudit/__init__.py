"""Audit harness for personal data leakage in chat model table summaries."""

from .analysis import aggregate, conditional_leakage, gender_retention, leakage_table, university_recall
from .corpus import render_corpus, render_document, scan_document
from .extract import classify_cell, extract_table, parse_age_expression
from .llmclient import Client, ClientConfig, Transcript, complete
from .metrics import age_match, bleu, boolean_leak, jaro, name_leak, retention, score_row
from .protocol import PromptRegime, build_conversation
from .records import generate_identities, validate_record
from .report import build_report, emit_report, score_transcripts

__version__ = "0.1.0"

__all__ = [
    "Client", "ClientConfig", "PromptRegime", "Transcript", "age_match", "aggregate", "bleu",
    "boolean_leak", "build_conversation", "build_report", "classify_cell", "complete",
    "conditional_leakage", "emit_report", "extract_table", "gender_retention", "generate_identities",
    "jaro", "leakage_table", "name_leak", "parse_age_expression", "render_corpus", "render_document",
    "retention", "scan_document", "score_row", "score_transcripts", "university_recall",
    "validate_record",
]
