"""Corpus ingestion: streaming document readers, seeded sampling, quality gate.

Documents are streamed file by file, line by line, in deterministic order;
peak memory stays independent of corpus size. Sampling is single-pass
reservoir sampling with a seeded generator.
"""

from __future__ import annotations

import json
import logging
import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .records import (
    LanguageRegistry,
    LanguageTag,
    Source,
    SourceDocument,
    default_registry,
    make_record_id,
    stable_seed,
)

logger = logging.getLogger(__name__)

FORMATS = ("jsonl", "wiki-extract", "wikihow-json", "task-json")


@dataclass(frozen=True)
class ManifestEntry:
    path: Path
    format: str
    source: Source
    lang: LanguageTag | None = None


@dataclass(frozen=True)
class CorpusManifest:
    entries: tuple[ManifestEntry, ...]
    # Optional per-language sample quotas (combined tag -> max docs).
    quotas: tuple[tuple[str, int], ...] = ()

    def quota_dict(self) -> dict[str, int]:
        return dict(self.quotas)


class ManifestError(ValueError):
    pass


def load_manifest(path: Path) -> CorpusManifest:
    """Load and validate a manifest JSON file; all entry paths must exist."""
    path = Path(path)
    with open(path, encoding="utf-8") as f:
        obj = json.load(f)
    entries = []
    for i, e in enumerate(obj.get("entries", [])):
        fmt = e.get("format", "jsonl")
        if fmt not in FORMATS:
            raise ManifestError(f"entry {i}: unknown format {fmt!r}")
        try:
            source = Source(e["source"])
        except (KeyError, ValueError) as exc:
            raise ManifestError(f"entry {i}: bad source: {exc}") from exc
        entry_path = (path.parent / e["path"]).resolve() if not Path(e["path"]).is_absolute() \
            else Path(e["path"])
        if not entry_path.is_file():
            raise ManifestError(f"entry {i}: file not readable: {entry_path}")
        lang = LanguageTag.parse(e["lang"]) if e.get("lang") else None
        entries.append(ManifestEntry(entry_path, fmt, source, lang))
    quotas = tuple(sorted((k, int(v)) for k, v in obj.get("quotas", {}).items()))
    return CorpusManifest(tuple(entries), quotas)


def _doc_from_obj(obj: dict, entry: ManifestEntry, registry: LanguageRegistry,
                  line_no: int) -> SourceDocument:
    if entry.format == "wiki-extract":
        title = obj.get("title", "")
        body = obj.get("text") or obj.get("body") or ""
        text = f"{title}\n\n{body}" if title else body
        meta = {"title": title}
    elif entry.format == "wikihow-json":
        parts = [obj.get("title", ""), obj.get("abstract", "")]
        for step in obj.get("steps", []):
            parts.append(step.get("step_title", ""))
            parts.append(step.get("step_text", ""))
        text = "\n\n".join(p for p in parts if p)
        meta = {"title": obj.get("title", "")}
    elif entry.format == "task-json":
        definition = obj.get("definition", "")
        text = f"{definition}\n\n{obj.get('input', '')}"
        meta = {}
    else:
        text = obj.get("text", "")
        meta = {}
    if not isinstance(text, str) or not text.strip():
        raise ValueError("empty or missing text")
    if obj.get("url"):
        meta["url"] = str(obj["url"])

    lang = entry.lang
    if lang is None and obj.get("lang"):
        lang = LanguageTag.parse(str(obj["lang"]))
    if lang is None:
        raise ValueError("no language tag (neither entry override nor record field)")
    if not registry.is_valid(lang):
        raise ValueError(f"language tag {lang} not in registry")

    origin = str(obj.get("id") or obj.get("url") or f"{entry.path.name}:{line_no}")
    doc_id = make_record_id(entry.source, origin, text)
    return SourceDocument(
        id=doc_id,
        lang=lang,
        text=text,
        source=entry.source,
        meta=tuple(sorted(meta.items())),
    )


def stream_documents(manifest: CorpusManifest,
                     registry: LanguageRegistry | None = None,
                     warnings: Counter | None = None) -> Iterator[SourceDocument]:
    """Yield documents in file-then-line order.

    Malformed lines are skipped and counted in ``warnings``; duplicate ids
    within the run are skipped likewise. Unreadable files raise.
    """
    registry = registry or default_registry()
    warnings = warnings if warnings is not None else Counter()
    seen_ids: set[str] = set()
    for entry in manifest.entries:
        if not entry.path.is_file():
            raise FileNotFoundError(f"corpus file not readable: {entry.path}")
        with open(entry.path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    doc = _doc_from_obj(obj, entry, registry, line_no)
                except (json.JSONDecodeError, ValueError) as exc:
                    warnings["malformed_line"] += 1
                    logger.warning("skipping %s:%d: %s", entry.path.name, line_no, exc)
                    continue
                if doc.id in seen_ids:
                    warnings["duplicate_id"] += 1
                    continue
                seen_ids.add(doc.id)
                yield doc


def sample_documents(stream: Iterable[SourceDocument], n: int, seed: int,
                     quotas: dict[str, int] | None = None) -> list[SourceDocument]:
    """Draw a uniform sample of ``n`` documents in one pass (reservoir).

    With ``quotas``, languages listed there get their own reservoir capped at
    the quota; unlisted languages share the global reservoir of size ``n``.
    The result is restored to stream order so downstream output stays aligned
    with the corpus.
    """
    if n < 0:
        raise ValueError("sample size must be >= 0")
    rng = random.Random(seed)
    quotas = quotas or {}

    def run_reservoir(items: Iterable[tuple[int, SourceDocument]], size: int,
                      r: random.Random) -> list[tuple[int, SourceDocument]]:
        reservoir: list[tuple[int, SourceDocument]] = []
        for count, item in enumerate(items):
            if count < size:
                reservoir.append(item)
            else:
                j = r.randrange(count + 1)
                if j < size:
                    reservoir[j] = item
        return reservoir

    if not quotas:
        picked = run_reservoir(enumerate(stream), n, rng)
    else:
        # Deterministic per-language sub-generators: one pass, stable per seed.
        buckets: dict[str, list[tuple[int, SourceDocument]]] = {}
        rngs: dict[str, random.Random] = {}
        counts: Counter = Counter()
        for idx, doc in enumerate(stream):
            tag = str(doc.lang)
            key = tag if tag in quotas else "*"
            size = quotas.get(tag, n)
            bucket = buckets.setdefault(key, [])
            r = rngs.setdefault(key, random.Random(stable_seed(seed, key)))
            c = counts[key]
            if c < size:
                bucket.append((idx, doc))
            else:
                j = r.randrange(c + 1)
                if j < size:
                    bucket[j] = (idx, doc)
            counts[key] += 1
        picked = [item for bucket in buckets.values() for item in bucket]

    picked.sort(key=lambda pair: pair[0])
    return [doc for _, doc in picked]


def document_to_obj(doc: SourceDocument) -> dict:
    return {
        "id": doc.id,
        "lang": str(doc.lang),
        "text": doc.text,
        "source": doc.source.value,
        "meta": dict(doc.meta),
    }


def document_from_obj(obj: dict) -> SourceDocument:
    return SourceDocument(
        id=obj["id"],
        lang=LanguageTag.parse(obj["lang"]),
        text=obj["text"],
        source=Source(obj["source"]),
        meta=tuple(sorted((str(k), str(v)) for k, v in obj.get("meta", {}).items())),
    )


@dataclass(frozen=True)
class QualityConfig:
    min_chars: int = 200
    max_chars: int = 20_000
    min_alpha_ratio: float = 0.5
    max_line_dup_ratio: float = 0.3


@dataclass(frozen=True)
class GateVerdict:
    passed: bool
    reason: str | None = None


def quality_gate(doc: SourceDocument, cfg: QualityConfig = QualityConfig()) -> GateVerdict:
    """Cheap heuristics standing in for 'high-quality human-written' selection."""
    text = doc.text
    length = len(text)
    if length < cfg.min_chars:
        return GateVerdict(False, "too_short")
    if length > cfg.max_chars:
        return GateVerdict(False, "too_long")
    alpha = sum(1 for c in text if c.isalpha())
    if alpha / length < cfg.min_alpha_ratio:
        return GateVerdict(False, "low_alpha_ratio")
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) > 1:
        dup_ratio = 1.0 - len(set(lines)) / len(lines)
        if dup_ratio > cfg.max_line_dup_ratio:
            return GateVerdict(False, "repetition")
    return GateVerdict(True)
