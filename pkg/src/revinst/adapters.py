"""Converters from auxiliary sources into instruction records: how-to article
rendering with stochastic answer styles, NLP task collections, chat trees and
tabular prompt datasets.

Every adapter is deterministic under its seed and emits records that pass
validation.
"""

from __future__ import annotations

import json
import logging
import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .records import (
    InstructionRecord,
    LanguageTag,
    Source,
    StageTrace,
    make_record_id,
    stable_seed,
)

logger = logging.getLogger(__name__)

TRANSLATION_INSTANCE_CAP = 200
OTHER_INSTANCE_CAP = 500
FLAN_MAIN_QUOTA = 50_000
FLAN_COT_QUOTA = 50_000
CHAT_MAX_PROMPTER_DEPTH = 2


@dataclass(frozen=True)
class WikiHowArticle:
    lang: LanguageTag
    title: str
    abstract: str
    steps: tuple[tuple[str, str], ...]
    url: str

    def __post_init__(self):
        if not self.title:
            raise ValueError("article title must be nonempty")
        if not self.steps:
            raise ValueError("article must have at least one step")


def load_wikihow_articles(path: Path) -> list[WikiHowArticle]:
    """Articles from a JSON file: a list of objects with title, abstract,
    steps (list of {step_title, step_text}), url and lang."""
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    articles = []
    for obj in raw:
        articles.append(WikiHowArticle(
            lang=LanguageTag.parse(obj["lang"]),
            title=obj["title"],
            abstract=obj.get("abstract", ""),
            steps=tuple((s["step_title"], s.get("step_text", "")) for s in obj["steps"]),
            url=obj.get("url", ""),
        ))
    return articles


def render_wikihow_parts(article: WikiHowArticle, include_abstract: bool,
                         full_steps: bool) -> str:
    parts: list[str] = []
    if include_abstract and article.abstract:
        parts.append(article.abstract)
    for i, (step_title, step_text) in enumerate(article.steps, start=1):
        if full_steps and step_text:
            parts.append(f"{i}. {step_title}\n{step_text}")
        else:
            parts.append(f"{i}. {step_title}")
    return "\n\n".join(parts)


def render_wikihow(article: WikiHowArticle, rng_seed: int) -> InstructionRecord:
    """Instruction = article title. Two independent fair coin flips choose the
    answer style: with/without the abstract, and step-titles-only vs titles
    plus texts. The rng is derived from (seed, article url) so reruns are
    stable and proportions hold across a collection."""
    rng = random.Random(stable_seed(rng_seed, article.url or article.title))
    include_abstract = rng.random() < 0.5
    full_steps = rng.random() < 0.5
    output = render_wikihow_parts(article, include_abstract, full_steps)
    return InstructionRecord(
        id=make_record_id(Source.WIKIHOW, article.url or article.title, output),
        lang=article.lang,
        instruction=article.title,
        output=output,
        source=Source.WIKIHOW,
        trace=StageTrace(rng_seed=rng_seed),
    )


@dataclass(frozen=True)
class ChatNode:
    id: str
    parent_id: str | None
    role: str  # prompter | assistant
    text: str
    lang: LanguageTag


@dataclass(frozen=True)
class ChatTree:
    nodes: tuple[ChatNode, ...]

    def __post_init__(self):
        roots = [n for n in self.nodes if n.parent_id is None]
        if len(roots) != 1:
            raise ValueError(f"chat tree must have exactly one root, got {len(roots)}")
        by_id = {n.id: n for n in self.nodes}
        if len(by_id) != len(self.nodes):
            raise ValueError("duplicate node ids in chat tree")
        for n in self.nodes:
            if n.parent_id is not None and n.parent_id not in by_id:
                raise ValueError(f"node {n.id} references missing parent {n.parent_id}")
        # Cycle check: every node must reach the root.
        for n in self.nodes:
            seen = set()
            cur: ChatNode | None = n
            while cur is not None and cur.parent_id is not None:
                if cur.id in seen:
                    raise ValueError("chat tree contains a cycle")
                seen.add(cur.id)
                cur = by_id[cur.parent_id]

    @property
    def root(self) -> ChatNode:
        return next(n for n in self.nodes if n.parent_id is None)

    def children(self, node_id: str) -> list[ChatNode]:
        return [n for n in self.nodes if n.parent_id == node_id]


def load_chat_tree(obj: dict) -> ChatTree:
    nodes = tuple(
        ChatNode(
            id=str(n["id"]),
            parent_id=str(n["parent_id"]) if n.get("parent_id") is not None else None,
            role=n["role"],
            text=n["text"],
            lang=LanguageTag.parse(n["lang"]),
        )
        for n in obj["nodes"]
    )
    return ChatTree(nodes)


def adapt_chat_tree(tree: ChatTree, warnings: Counter | None = None) -> list[InstructionRecord]:
    """Pair prompter turns with their assistant replies for the first two
    conversation turns only (prompter depth 0 or 2; deeper turns excluded)."""
    warnings = warnings if warnings is not None else Counter()
    records = []
    stack = [(tree.root, 0)]
    while stack:
        node, depth = stack.pop()
        for child in reversed(tree.children(node.id)):
            stack.append((child, depth + 1))
        if node.role != "prompter" or depth > CHAT_MAX_PROMPTER_DEPTH or depth % 2 != 0:
            continue
        if not node.text.strip():
            warnings["empty_prompter_text"] += 1
            continue
        for child in tree.children(node.id):
            if child.role != "assistant" or not child.text.strip():
                continue
            if child.lang != node.lang:
                warnings["lang_mismatch_pair"] += 1
                continue
            records.append(InstructionRecord(
                id=make_record_id(Source.OASST, f"{node.id}->{child.id}", child.text),
                lang=node.lang,
                instruction=node.text,
                output=child.text,
                source=Source.OASST,
            ))
    return records


def _seeded_sample(items: list, cap: int, rng: random.Random) -> list:
    if len(items) <= cap:
        return list(items)
    return rng.sample(items, cap)


def adapt_task_collection(task_files: Sequence[Path], seed: int,
                          translation_cap: int = TRANSLATION_INSTANCE_CAP,
                          other_cap: int = OTHER_INSTANCE_CAP,
                          warnings: Counter | None = None) -> list[InstructionRecord]:
    """Task JSON files -> records. Translation-type tasks are capped per task
    at ``translation_cap`` instances; all other tasks are pooled by task type
    and capped at ``other_cap`` instances per type bucket. The instruction is
    the task definition joined with the instance input; the output is the
    first reference."""
    warnings = warnings if warnings is not None else Counter()
    translation_tasks = []
    other_by_type: dict[str, list] = {}

    for path in sorted(Path(p) for p in task_files):
        with open(path, encoding="utf-8") as f:
            task = json.load(f)
        definition = task.get("definition")
        if isinstance(definition, list):
            definition = definition[0] if definition else ""
        categories = task.get("categories") or ["unknown"]
        lang_field = task.get("output_language") or task.get("language")
        if not lang_field:
            warnings["task_missing_language"] += 1
            logger.warning("skipping task %s: no language metadata", path.name)
            continue
        if isinstance(lang_field, list):
            lang_field = lang_field[0]
        try:
            lang = LanguageTag.parse(str(lang_field))
        except ValueError:
            warnings["task_bad_language"] += 1
            continue
        instances = task.get("instances", [])
        task_name = task.get("name", path.stem)
        entry = (task_name, definition, lang, instances)
        category = str(categories[0])
        if "translation" in category.lower():
            translation_tasks.append(entry)
        else:
            other_by_type.setdefault(category, []).append(entry)

    records: list[InstructionRecord] = []

    def emit(task_name: str, definition: str, lang: LanguageTag, instance: dict) -> None:
        outputs = instance.get("output") or []
        if not outputs or not str(outputs[0]).strip():
            warnings["instance_missing_output"] += 1
            return
        instruction = f"{definition}\n\n{instance.get('input', '')}".strip()
        output = str(outputs[0])
        records.append(InstructionRecord(
            id=make_record_id(Source.SUPNATINST,
                              f"{task_name}:{instance.get('id', instance.get('input', ''))}",
                              output),
            lang=lang,
            instruction=instruction,
            output=output,
            source=Source.SUPNATINST,
        ))

    for task_name, definition, lang, instances in translation_tasks:
        rng = random.Random(stable_seed(seed, "translation", task_name))
        for instance in _seeded_sample(instances, translation_cap, rng):
            emit(task_name, definition, lang, instance)

    for task_type in sorted(other_by_type):
        pooled = [(task_name, definition, lang, inst)
                  for task_name, definition, lang, instances in other_by_type[task_type]
                  for inst in instances]
        rng = random.Random(stable_seed(seed, "type", task_type))
        for task_name, definition, lang, instance in _seeded_sample(pooled, other_cap, rng):
            emit(task_name, definition, lang, instance)

    return records


def adapt_prompt_rows(rows: Iterable[dict], source: Source,
                      warnings: Counter | None = None) -> list[InstructionRecord]:
    """Tabular rows {input, target, lang} -> records with plain field mapping."""
    warnings = warnings if warnings is not None else Counter()
    records = []
    for i, row in enumerate(rows):
        target = row.get("target")
        if not target or not str(target).strip():
            warnings["row_missing_target"] += 1
            continue
        try:
            lang = LanguageTag.parse(str(row.get("lang", "")))
        except ValueError:
            warnings["row_bad_language"] += 1
            continue
        records.append(InstructionRecord(
            id=make_record_id(source, str(row.get("id", i)), str(target)),
            lang=lang,
            instruction=str(row["input"]),
            output=str(target),
            source=source,
        ))
    return records


def adapt_instruction_rows(rows: Iterable[dict], seed: int,
                           main_quota: int = FLAN_MAIN_QUOTA,
                           cot_quota: int = FLAN_COT_QUOTA,
                           warnings: Counter | None = None) -> list[InstructionRecord]:
    """English prompt-collection rows with a ``subset`` field (main or cot);
    each subset is sampled to its quota with a seeded reservoir."""
    warnings = warnings if warnings is not None else Counter()
    quotas = {"main": main_quota, "cot": cot_quota}
    reservoirs: dict[str, list[tuple[int, dict]]] = {s: [] for s in quotas}
    rngs = {s: random.Random(stable_seed(seed, "flan", s)) for s in quotas}
    counts: Counter = Counter()
    for i, row in enumerate(rows):
        subset = str(row.get("subset", "main"))
        if subset not in quotas:
            warnings["row_unknown_subset"] += 1
            continue
        cap = quotas[subset]
        c = counts[subset]
        reservoir = reservoirs[subset]
        if c < cap:
            reservoir.append((i, row))
        else:
            j = rngs[subset].randrange(c + 1)
            if j < cap:
                reservoir[j] = (i, row)
        counts[subset] += 1

    picked = sorted((pair for r in reservoirs.values() for pair in r),
                    key=lambda pair: pair[0])
    return adapt_prompt_rows(
        ({**row, "lang": row.get("lang", "eng_Latn"), "id": row.get("id", idx)}
         for idx, row in picked),
        Source.FLAN,
        warnings,
    )
