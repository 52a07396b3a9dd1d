"""Canonical record types, JSONL schema and validation shared by every stage.

The on-disk format is one JSON object per line with the exact field set
``id, lang, instruction, output, source, trace, split``. Serialization is
byte-stable for identical input, and ``parse_jsonl(serialize_jsonl(x)) == x``.
"""

from __future__ import annotations

import hashlib
import io
import json
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from typing import Iterable, Iterator

_TAG_RE = re.compile(r"^[a-z]{3}_[A-Z][a-z]{3}$")

# Pipeline stages in execution order; a trace may omit stages but never
# reorder or repeat them.
STAGE_TRANSLATE_DOC = "translate_doc"
STAGE_GENERATE_INST = "generate_inst"
STAGE_LOCALIZE_INST = "localize_inst"
STAGE_LID_CHECK = "lid_check"
STAGE_KEYWORD_FILTER = "keyword_filter"
STAGE_CONTENT_SCREEN = "content_screen"
STAGE_DEDUP = "dedup"
STAGE_ORDER = (
    STAGE_TRANSLATE_DOC,
    STAGE_GENERATE_INST,
    STAGE_LOCALIZE_INST,
    STAGE_LID_CHECK,
    STAGE_KEYWORD_FILTER,
    STAGE_CONTENT_SCREEN,
    STAGE_DEDUP,
)


class Source(str, Enum):
    CULTURAX = "culturax"
    WIKIPEDIA = "wikipedia"
    WIKIHOW = "wikihow"
    SUPNATINST = "supnatinst"
    XP3 = "xp3"
    OASST = "oasst"
    FLAN = "flan"


class Split(str, Enum):
    TRAIN = "train"
    VALIDATION = "validation"
    TEST = "test"
    UNASSIGNED = "unassigned"


class StageStatus(str, Enum):
    PASS = "pass"
    DROP = "drop"


@dataclass(frozen=True, order=True)
class LanguageTag:
    """Language identity as a 3-letter code plus 4-letter script, e.g. tur_Latn."""

    code: str
    script: str

    @classmethod
    def parse(cls, tag: str) -> "LanguageTag":
        if not isinstance(tag, str) or not _TAG_RE.match(tag):
            raise ValueError(f"invalid language tag: {tag!r}")
        code, script = tag.split("_")
        return cls(code, script)

    def __str__(self) -> str:
        return f"{self.code}_{self.script}"


ENGLISH = LanguageTag("eng", "Latn")


class LanguageRegistry:
    """Known (code, script) pairs loaded from the shipped registry file.

    Unknown tags fail loudly at validation/ingest instead of being guessed.
    """

    def __init__(self, pairs: Iterable[tuple[str, str]]):
        self._pairs: set[tuple[str, str]] = set()
        self._primary: dict[str, str] = {}
        for code, script in pairs:
            self._pairs.add((code, script))
            self._primary.setdefault(code, script)

    @classmethod
    def load_default(cls) -> "LanguageRegistry":
        text = resources.files("revinst.data").joinpath("language_registry.tsv").read_text("utf-8")
        pairs = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            code, script = line.split("\t")
            pairs.append((code, script))
        return cls(pairs)

    def is_valid(self, tag: LanguageTag) -> bool:
        return (tag.code, tag.script) in self._pairs

    def primary_tag(self, code: str) -> LanguageTag | None:
        script = self._primary.get(code)
        return LanguageTag(code, script) if script else None

    def __len__(self) -> int:
        return len(self._pairs)


_default_registry: LanguageRegistry | None = None


def default_registry() -> LanguageRegistry:
    global _default_registry
    if _default_registry is None:
        _default_registry = LanguageRegistry.load_default()
    return _default_registry


@dataclass(frozen=True)
class StageEntry:
    stage: str
    status: StageStatus
    reason: str | None = None
    model_id: str | None = None


@dataclass(frozen=True)
class StageTrace:
    """Per-record audit of pipeline stages, including English intermediates."""

    doc_en: str | None = None
    inst_en: str | None = None
    stages: tuple[StageEntry, ...] = ()
    rng_seed: int = 0

    def with_stage(self, stage: str, status: StageStatus, reason: str | None = None,
                   model_id: str | None = None) -> "StageTrace":
        return replace(self, stages=self.stages + (StageEntry(stage, status, reason, model_id),))

    def has_drop(self) -> bool:
        return any(e.status is StageStatus.DROP for e in self.stages)

    def drop_entry(self) -> StageEntry | None:
        for e in self.stages:
            if e.status is StageStatus.DROP:
                return e
        return None


@dataclass(frozen=True)
class SourceDocument:
    id: str
    lang: LanguageTag
    text: str
    source: Source
    meta: tuple[tuple[str, str], ...] = ()

    def meta_dict(self) -> dict[str, str]:
        return dict(self.meta)


@dataclass(frozen=True)
class InstructionRecord:
    id: str
    lang: LanguageTag
    instruction: str
    output: str
    source: Source
    trace: StageTrace = field(default_factory=StageTrace)
    split: Split = Split.UNASSIGNED


@dataclass(frozen=True)
class Violation:
    field: str
    rule: str

    def __str__(self) -> str:
        return f"{self.field}: {self.rule}"


def make_record_id(source: Source, origin: str, text: str) -> str:
    """Content-addressed id so reruns over the same inputs are idempotent."""
    h = hashlib.sha256()
    h.update(source.value.encode("utf-8"))
    h.update(b"\x1f")
    h.update(origin.encode("utf-8"))
    h.update(b"\x1f")
    h.update(text[:256].encode("utf-8"))
    return h.hexdigest()[:16]


def stable_seed(*parts: object) -> int:
    """Derive a process-independent 64-bit seed from the given parts."""
    payload = "\x1f".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def validate_language_tag(tag: object, registry: LanguageRegistry,
                          field_name: str = "lang") -> list[Violation]:
    violations = []
    if isinstance(tag, LanguageTag):
        combined = str(tag)
    else:
        combined = str(tag)
    if not _TAG_RE.match(combined):
        violations.append(Violation(field_name, "must match ^[a-z]{3}_[A-Z][a-z]{3}$"))
        return violations
    parsed = tag if isinstance(tag, LanguageTag) else LanguageTag.parse(combined)
    if not registry.is_valid(parsed):
        violations.append(Violation(field_name, f"tag {combined} not in language registry"))
    return violations


def validate_trace(trace: StageTrace) -> list[Violation]:
    violations = []
    names = [e.stage for e in trace.stages]
    if len(names) != len(set(names)):
        violations.append(Violation("trace.stages", "stage names must appear at most once"))
    order = [STAGE_ORDER.index(n) for n in names if n in STAGE_ORDER]
    if any(n not in STAGE_ORDER for n in names):
        violations.append(Violation("trace.stages", "unknown stage name"))
    elif order != sorted(order):
        violations.append(Violation("trace.stages", "stages must appear in pipeline order"))
    for i, e in enumerate(trace.stages):
        if e.status is StageStatus.DROP and i != len(trace.stages) - 1:
            violations.append(Violation("trace.stages", "a drop must be the last entry"))
            break
    if not (0 <= trace.rng_seed < 2 ** 64):
        violations.append(Violation("trace.rng_seed", "must fit in an unsigned 64-bit integer"))
    return violations


def validate_record(rec: InstructionRecord,
                    registry: LanguageRegistry | None = None) -> list[Violation]:
    """Check every type invariant; returns an empty list iff the record is valid."""
    registry = registry or default_registry()
    violations: list[Violation] = []
    if not rec.id:
        violations.append(Violation("id", "must be nonempty"))
    violations.extend(validate_language_tag(rec.lang, registry))
    if not rec.instruction:
        violations.append(Violation("instruction", "must be nonempty"))
    if not rec.output:
        violations.append(Violation("output", "must be nonempty"))
    if not isinstance(rec.source, Source):
        violations.append(Violation("source", "unknown source"))
    violations.extend(validate_trace(rec.trace))
    if rec.trace.has_drop() and rec.split is not Split.UNASSIGNED:
        violations.append(Violation("split", "a dropped record must stay unassigned"))
    return violations


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _trace_to_obj(trace: StageTrace) -> dict:
    return {
        "doc_en": trace.doc_en,
        "inst_en": trace.inst_en,
        "stages": [
            {"stage": e.stage, "status": e.status.value, "reason": e.reason, "model_id": e.model_id}
            for e in trace.stages
        ],
        "rng_seed": trace.rng_seed,
    }


def record_to_obj(rec: InstructionRecord, strip_trace: bool = False) -> dict:
    obj = {
        "id": rec.id,
        "lang": str(rec.lang),
        "instruction": rec.instruction,
        "output": rec.output,
        "source": rec.source.value,
    }
    if not strip_trace:
        obj["trace"] = _trace_to_obj(rec.trace)
    obj["split"] = rec.split.value
    return obj


def record_to_line(rec: InstructionRecord, strip_trace: bool = False) -> str:
    return json.dumps(record_to_obj(rec, strip_trace=strip_trace),
                      ensure_ascii=False, separators=(",", ":"))


def record_from_obj(obj: dict, line_no: int = 0) -> InstructionRecord:
    try:
        trace_obj = obj.get("trace")
        if trace_obj is None:
            trace = StageTrace()
        else:
            trace = StageTrace(
                doc_en=trace_obj.get("doc_en"),
                inst_en=trace_obj.get("inst_en"),
                stages=tuple(
                    StageEntry(e["stage"], StageStatus(e["status"]),
                               e.get("reason"), e.get("model_id"))
                    for e in trace_obj.get("stages", [])
                ),
                rng_seed=int(trace_obj.get("rng_seed", 0)),
            )
        return InstructionRecord(
            id=obj["id"],
            lang=LanguageTag.parse(obj["lang"]),
            instruction=obj["instruction"],
            output=obj["output"],
            source=Source(obj["source"]),
            trace=trace,
            split=Split(obj["split"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(line_no, f"bad record: {exc}") from exc


def serialize_jsonl(records: Iterable[InstructionRecord], strip_trace: bool = False) -> bytes:
    buf = io.StringIO()
    for rec in records:
        buf.write(record_to_line(rec, strip_trace=strip_trace))
        buf.write("\n")
    return buf.getvalue().encode("utf-8")


def iter_parse_jsonl(data: bytes | str) -> Iterator[InstructionRecord]:
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(0, f"invalid UTF-8: {exc}") from exc
    else:
        text = data
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(line_no, f"malformed JSON: {exc.msg}") from exc
        yield record_from_obj(obj, line_no)


def parse_jsonl(data: bytes | str) -> list[InstructionRecord]:
    return list(iter_parse_jsonl(data))
