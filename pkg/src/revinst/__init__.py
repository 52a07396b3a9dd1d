"""Reverse-instruction data pipeline.

Turns raw multilingual corpora into instruction-output pairs by projecting
each document into English, back-generating an instruction for it, localizing
the instruction into the document's language, and keeping the original text
verbatim as the output. Includes adapters for auxiliary sources, quality
filters, near-duplicate elimination, split assignment and diversity reports.
"""

from .records import (
    ENGLISH,
    InstructionRecord,
    LanguageTag,
    Source,
    SourceDocument,
    Split,
    StageTrace,
    parse_jsonl,
    serialize_jsonl,
    validate_record,
)

__all__ = [
    "ENGLISH",
    "InstructionRecord",
    "LanguageTag",
    "Source",
    "SourceDocument",
    "Split",
    "StageTrace",
    "parse_jsonl",
    "serialize_jsonl",
    "validate_record",
]

__version__ = "0.1.0"
