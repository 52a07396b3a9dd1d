"""Dataset assembly: stratified split assignment, composition statistics,
linguistic-diversity reporting from shipped mapping tables, and review-sheet
export for native-speaker audits.
"""

from __future__ import annotations

import json
import logging
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, replace
from importlib import resources
from typing import Iterable, Mapping, Sequence

from .records import InstructionRecord, Split, stable_seed

logger = logging.getLogger(__name__)

SOURCE_GROUPS = (
    ("reverse_instructions", ("wikipedia", "culturax")),
    ("wikihow", ("wikihow",)),
    ("nlp_tasks", ("supnatinst", "xp3", "oasst", "flan")),
)

WORD_ORDER_CLASSES = ("SOV", "SVO", "VSO", "VOS", "OVS", "OSV", "no-dominant", "unknown")
SCRIPT_GROUPS = {"Latn": "Latin", "Arab": "Arabic", "Cyrl": "Cyrillic"}

REVIEW_COLUMNS = (
    "instruction",
    "output",
    "Alignment",
    "InstructionFormat",
    "InstructionCorrectness",
    "OutputCorrectness",
    "InformationalSufficiency",
    "Notes",
)


@dataclass(frozen=True)
class SplitPlan:
    ratios: tuple[float, float, float] = (0.90, 0.05, 0.05)
    stratify_by: tuple[str, ...] = ("source", "lang")
    seed: int = 0

    def __post_init__(self):
        if any(r <= 0 for r in self.ratios):
            raise ValueError("split ratios must be positive")
        if abs(sum(self.ratios) - 1.0) > 1e-9:
            raise ValueError("split ratios must sum to 1")
        bad = set(self.stratify_by) - {"source", "lang"}
        if bad:
            raise ValueError(f"unknown stratification keys: {sorted(bad)}")


def largest_remainder(total: int, ratios: Sequence[float]) -> list[int]:
    """Apportion ``total`` into integer counts whose deviation from
    total*ratio is below one."""
    quotas = [total * r for r in ratios]
    counts = [int(q) for q in quotas]
    leftover = total - sum(counts)
    # Distribute by largest fractional part; ties go to the larger ratio,
    # then to the earlier slot, so the result is deterministic.
    order = sorted(range(len(ratios)),
                   key=lambda i: (-(quotas[i] - counts[i]), -ratios[i], i))
    for i in order[:leftover]:
        counts[i] += 1
    return counts


def _stratum_key(rec: InstructionRecord, keys: tuple[str, ...]) -> tuple[str, ...]:
    parts = []
    if "source" in keys:
        parts.append(rec.source.value)
    if "lang" in keys:
        parts.append(str(rec.lang))
    return tuple(parts)


def assign_splits(records: Sequence[InstructionRecord], plan: SplitPlan,
                  warnings: Counter | None = None) -> list[InstructionRecord]:
    """Assign train/validation/test within every stratum by largest-remainder
    apportionment of the plan ratios. Strata smaller than 3 go entirely to
    train. Output preserves input order."""
    warnings = warnings if warnings is not None else Counter()
    strata: dict[tuple[str, ...], list[int]] = defaultdict(list)
    for i, rec in enumerate(records):
        if rec.split is not Split.UNASSIGNED:
            raise ValueError(f"record {rec.id} already has split {rec.split.value}")
        strata[_stratum_key(rec, plan.stratify_by)].append(i)

    assigned: dict[int, Split] = {}
    for key in sorted(strata):
        indices = strata[key]
        if len(indices) < 3:
            warnings["stratum_too_small"] += 1
            for i in indices:
                assigned[i] = Split.TRAIN
            continue
        counts = largest_remainder(len(indices), plan.ratios)
        shuffled = list(indices)
        random.Random(stable_seed(plan.seed, *key)).shuffle(shuffled)
        cursor = 0
        for split, count in zip((Split.TRAIN, Split.VALIDATION, Split.TEST), counts):
            for i in shuffled[cursor:cursor + count]:
                assigned[i] = split
            cursor += count

    return [replace(rec, split=assigned[i]) for i, rec in enumerate(records)]


@dataclass(frozen=True)
class DatasetStats:
    # (source value, combined lang tag) -> count; lang "*" means unbroken-down.
    cells: tuple[tuple[tuple[str, str], int], ...]

    @classmethod
    def from_records(cls, records: Iterable[InstructionRecord]) -> "DatasetStats":
        counter: Counter = Counter()
        for rec in records:
            counter[(rec.source.value, str(rec.lang))] += 1
        return cls(tuple(sorted(counter.items())))

    @classmethod
    def from_count_manifest(cls, manifest: Mapping[str, object]) -> "DatasetStats":
        """Totals from a count manifest: {source: count} or
        {source: {lang: count}}."""
        counter: Counter = Counter()
        for source, value in manifest.items():
            if isinstance(value, Mapping):
                for lang, count in value.items():
                    counter[(source, str(lang))] += int(count)
            else:
                counter[(source, "*")] += int(value)
        return cls(tuple(sorted(counter.items())))

    def total(self) -> int:
        return sum(count for _, count in self.cells)

    def by_source(self) -> dict[str, int]:
        out: Counter = Counter()
        for (source, _), count in self.cells:
            out[source] += count
        return dict(out)

    def by_group(self) -> dict[str, int]:
        per_source = self.by_source()
        return {
            group: sum(per_source.get(s, 0) for s in sources)
            for group, sources in SOURCE_GROUPS
        }

    def languages_by_source(self) -> dict[str, int]:
        langs: dict[str, set[str]] = defaultdict(set)
        for (source, lang), _ in self.cells:
            if lang != "*":
                langs[source].add(lang)
        return {s: len(v) for s, v in langs.items()}

    def to_obj(self) -> dict:
        return {
            "total": self.total(),
            "by_source": self.by_source(),
            "by_group": self.by_group(),
            "cells": [
                {"source": source, "lang": lang, "count": count}
                for (source, lang), count in self.cells
            ],
        }


def render_stats_table(stats: DatasetStats) -> str:
    """Plain-text composition table, grouped by source family."""
    per_source = stats.by_source()
    groups = stats.by_group()
    lang_counts = stats.languages_by_source()
    width = max([len("source")] + [len(s) + 2 for s in per_source] +
                [len(g) for g, _ in SOURCE_GROUPS])
    lines = [f"{'source':<{width}}  {'languages':>9}  {'examples':>12}",
             "-" * (width + 25)]
    for group, sources in SOURCE_GROUPS:
        present = [s for s in sources if per_source.get(s)]
        if not present and not groups.get(group):
            continue
        group_langs = sum(lang_counts.get(s, 0) for s in present)
        lines.append(f"{group:<{width}}  {group_langs or '-':>9}  {groups[group]:>12,}")
        if present == [group]:
            continue  # single source named like its group: no sub-row
        for s in present:
            lines.append(f"  {s:<{width - 2}}  {lang_counts.get(s, 0) or '-':>9}  "
                         f"{per_source[s]:>12,}")
    lines.append("-" * (width + 25))
    lines.append(f"{'total':<{width}}  {'':>9}  {stats.total():>12,}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class MappingTables:
    resource_levels: Mapping[str, int]
    word_orders: Mapping[str, str]
    case_markings: Mapping[str, str]

    @classmethod
    def from_objs(cls, levels: Mapping, orders: Mapping, cases: Mapping) -> "MappingTables":
        for code, level in levels.items():
            if not isinstance(level, int) or not 0 <= level <= 5:
                raise ValueError(f"malformed resource level for {code}: {level!r}")
        for code, order in orders.items():
            if order not in WORD_ORDER_CLASSES:
                raise ValueError(f"malformed word-order class for {code}: {order!r}")
        for code, bucket in cases.items():
            if not isinstance(bucket, str) or not bucket:
                raise ValueError(f"malformed case-marking class for {code}: {bucket!r}")
        return cls(levels, orders, cases)

    @classmethod
    def load_default(cls) -> "MappingTables":
        def load(name: str, key: str) -> dict:
            raw = resources.files("revinst.data").joinpath(name).read_text("utf-8")
            obj = json.loads(raw)
            if key not in obj or not isinstance(obj[key], dict):
                raise ValueError(f"malformed mapping table {name}: missing {key!r}")
            return obj[key]

        return cls.from_objs(
            levels=load("resource_levels.json", "levels"),
            orders=load("word_order.json", "orders"),
            cases=load("case_marking.json", "cases"),
        )


@dataclass(frozen=True)
class LanguageDiversity:
    lang: str
    resource_level: str  # "0".."5" or "unknown"
    script: str
    script_group: str
    word_order: str
    case_marking: str
    records: int


@dataclass(frozen=True)
class DiversityReport:
    languages: tuple[LanguageDiversity, ...]

    def histogram(self, dimension: str, weight_records: bool = False) -> dict[str, int]:
        counter: Counter = Counter()
        for entry in self.languages:
            counter[getattr(entry, dimension)] += entry.records if weight_records else 1
        return dict(sorted(counter.items()))

    def to_obj(self) -> dict:
        return {
            "languages": [vars(e) for e in self.languages],
            "histograms": {
                dim: {
                    "languages": self.histogram(dim),
                    "records": self.histogram(dim, weight_records=True),
                }
                for dim in ("resource_level", "script_group", "word_order", "case_marking")
            },
        }


def compute_diversity(records: Iterable[InstructionRecord],
                      tables: MappingTables | None = None) -> DiversityReport:
    """Classify each language present in the records; languages absent from a
    mapping table are reported as unknown, never guessed."""
    tables = tables or MappingTables.load_default()
    per_lang: Counter = Counter()
    scripts: dict[str, str] = {}
    for rec in records:
        per_lang[str(rec.lang)] += 1
        scripts[str(rec.lang)] = rec.lang.script
    entries = []
    for lang in sorted(per_lang):
        code = lang.split("_")[0]
        script = scripts[lang]
        level = tables.resource_levels.get(code)
        entries.append(LanguageDiversity(
            lang=lang,
            resource_level=str(level) if level is not None else "unknown",
            script=script,
            script_group=SCRIPT_GROUPS.get(script, "Other"),
            word_order=tables.word_orders.get(code, "unknown"),
            case_marking=tables.case_markings.get(code, "unknown"),
            records=per_lang[lang],
        ))
    return DiversityReport(tuple(entries))


def _tsv_cell(text: str) -> str:
    return text.replace("\t", " ").replace("\r", " ").replace("\n", " ")


def export_review_sheet(records: Sequence[InstructionRecord], per_lang: int = 30,
                        seed: int = 0, languages: Sequence[str] | None = None,
                        warnings: Counter | None = None) -> str:
    """Tab-separated review sheet: per language, ``per_lang`` seeded-random
    pairs with empty rating columns for annotators."""
    warnings = warnings if warnings is not None else Counter()
    by_lang: dict[str, list[InstructionRecord]] = defaultdict(list)
    for rec in records:
        by_lang[str(rec.lang)].append(rec)
    wanted = list(languages) if languages else sorted(by_lang)

    lines = ["\t".join(REVIEW_COLUMNS)]
    for lang in wanted:
        pool = by_lang.get(lang, [])
        if len(pool) < per_lang:
            warnings["language_undersampled"] += 1
            chosen = list(pool)
        else:
            rng = random.Random(stable_seed(seed, lang))
            chosen = rng.sample(pool, per_lang)
        for rec in chosen:
            lines.append("\t".join((
                _tsv_cell(rec.instruction), _tsv_cell(rec.output),
                "", "", "", "", "", "",
            )))
    return "\n".join(lines) + "\n"
