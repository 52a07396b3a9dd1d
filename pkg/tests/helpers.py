"""Shared fixture builders: synthetic corpora, record factories, fault plants."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from revinst.records import InstructionRecord, LanguageTag, Source, StageTrace

FIXTURE_LANGS = ("tur_Latn", "deu_Latn", "spa_Latn", "ces_Latn", "rus_Cyrl")

_WORDS = (
    "harvest", "window", "marble", "river", "lantern", "meadow", "copper",
    "signal", "garden", "thunder", "velvet", "anchor", "bridge", "crystal",
    "ember", "falcon", "granite", "horizon", "island", "juniper",
)


def filler_text(idx: int, rng: random.Random, sentences: int = 5) -> str:
    """Unique prose-like body, long enough to clear the quality gate."""
    parts = [f"Document {idx} covers the {_WORDS[idx % len(_WORDS)]} topic in detail."]
    for s in range(sentences):
        words = " ".join(rng.choice(_WORDS) for _ in range(9))
        parts.append(f"Section {idx}-{s} notes that {words} happened.")
    return " ".join(parts)


@dataclass(frozen=True)
class PlantedCorpus:
    docs: list[dict]
    lid_fault_ids: list[str]
    keyword_ids: list[str]
    screen_ids: list[str]
    dup_pair_ids: list[tuple[str, str]]


def build_planted_corpus(n: int = 100, lid_faults: int = 10, keyword_hits: int = 5,
                         screen_hits: int = 3, dup_pairs: int = 3,
                         seed: int = 1234) -> PlantedCorpus:
    """Corpus of ``n`` docs over five languages with disjoint fault plants:
    LID faults, keyword triggers in the first line, screen triggers, and
    near-duplicate pairs (second member of each pair is the duplicate)."""
    rng = random.Random(seed)
    docs = []
    lid_ids, kw_ids, screen_ids, pairs = [], [], [], []

    plain = n - lid_faults - keyword_hits - screen_hits - 2 * dup_pairs
    assert plain >= 0

    def make(idx: int, first_line: str, body_extra: str = "") -> dict:
        lang = FIXTURE_LANGS[idx % len(FIXTURE_LANGS)]
        text = f"{first_line}\n{filler_text(idx, rng)}{body_extra}"
        return {"id": f"doc-{idx:04d}", "text": text, "lang": lang}

    idx = 0
    for _ in range(lid_faults):
        # Marker in the first line: the mock instruction echoes that line, so
        # the fault propagates into the localized instruction the LID sees.
        doc = make(idx, f"Topic line {idx} LID_FAULT about {_WORDS[idx % len(_WORDS)]}.")
        docs.append(doc)
        lid_ids.append(doc["id"])
        idx += 1
    for k in range(keyword_hits):
        word = ("summarize", "translated", "summarizing", "translations",
                "summarization")[k % 5]
        doc = make(idx, f"Please {word} the quarterly report {idx}.")
        docs.append(doc)
        kw_ids.append(doc["id"])
        idx += 1
    for _ in range(screen_hits):
        doc = make(idx, f"Topic line {idx} about {_WORDS[(idx + 3) % len(_WORDS)]}.",
                   " Contains TRIGGER_HATE in the body text.")
        docs.append(doc)
        screen_ids.append(doc["id"])
        idx += 1
    for p in range(dup_pairs):
        lang = FIXTURE_LANGS[p % len(FIXTURE_LANGS)]
        base_line = f"Shared headline {p} about the {_WORDS[p]} saga."
        base_body = filler_text(1000 + p, random.Random(seed + p), sentences=6)
        first = {"id": f"doc-{idx:04d}", "text": f"{base_line}\n{base_body}", "lang": lang}
        idx += 1
        second = {"id": f"doc-{idx:04d}",
                  "text": f"{base_line}\n{base_body} Slightly amended.", "lang": lang}
        idx += 1
        docs.extend([first, second])
        pairs.append((first["id"], second["id"]))
    for _ in range(plain):
        docs.append(make(idx, f"Topic line {idx} about {_WORDS[(idx + 7) % len(_WORDS)]}."))
        idx += 1

    return PlantedCorpus(docs, lid_ids, kw_ids, screen_ids, pairs)


def write_corpus_fixture(tmp_path: Path, corpus: PlantedCorpus,
                         run_seed: int = 7) -> tuple[Path, Path]:
    """Write corpus JSONL + manifest + mock run config; returns
    (config_path, checkpoint_dir)."""
    corpus_path = tmp_path / "corpus.jsonl"
    with open(corpus_path, "w", encoding="utf-8") as f:
        for doc in corpus.docs:
            f.write(json.dumps(doc, ensure_ascii=False) + "\n")
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(json.dumps({
        "entries": [{"path": "corpus.jsonl", "format": "jsonl", "source": "culturax"}],
    }), encoding="utf-8")
    checkpoint_dir = tmp_path / "out"
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({
        "manifest": "manifest.json",
        "checkpoint_dir": "out",
        "mock": True,
        "run_seed": run_seed,
        "workers": 4,
    }), encoding="utf-8")
    return config_path, checkpoint_dir


def make_record(idx: int, lang: str = "eng_Latn", text: str | None = None,
                source: Source = Source.FLAN, instruction: str | None = None) -> InstructionRecord:
    body = text if text is not None else (
        f"Answer body {idx}: " + " ".join(
            _WORDS[(idx * 3 + j) % len(_WORDS)] for j in range(12)))
    return InstructionRecord(
        id=f"rec-{idx:05d}",
        lang=LanguageTag.parse(lang),
        instruction=instruction or f"Question number {idx}?",
        output=body,
        source=source,
        trace=StageTrace(),
    )
