from __future__ import annotations

import json
import random
from collections import Counter

import pytest

from revinst.adapters import (
    ChatNode,
    ChatTree,
    WikiHowArticle,
    adapt_chat_tree,
    adapt_instruction_rows,
    adapt_prompt_rows,
    adapt_task_collection,
    load_chat_tree,
    load_wikihow_articles,
    render_wikihow,
    render_wikihow_parts,
)
from revinst.records import LanguageTag, Source, validate_record

DEU = LanguageTag.parse("deu_Latn")
ENG = LanguageTag.parse("eng_Latn")


def make_article(n_steps=3, lang="deu_Latn", url="https://how.example/bake"):
    return WikiHowArticle(
        lang=LanguageTag.parse(lang),
        title="Wie man Brot backt",
        abstract="Brot backen ist einfach.",
        steps=tuple((f"Schritt {i} Titel", f"Schritt {i} Beschreibung.")
                    for i in range(1, n_steps + 1)),
        url=url,
    )


# ---------------------------------------------------------------------------
# How-to article rendering
# ---------------------------------------------------------------------------

def test_render_full_with_abstract():
    out = render_wikihow_parts(make_article(2), include_abstract=True, full_steps=True)
    assert out == ("Brot backen ist einfach.\n\n"
                   "1. Schritt 1 Titel\nSchritt 1 Beschreibung.\n\n"
                   "2. Schritt 2 Titel\nSchritt 2 Beschreibung.")


def test_render_titles_only_without_abstract():
    out = render_wikihow_parts(make_article(2), include_abstract=False, full_steps=False)
    assert out == "1. Schritt 1 Titel\n\n2. Schritt 2 Titel"


def test_render_every_step_title_once_in_order():
    article = make_article(6)
    for include_abstract in (False, True):
        for full_steps in (False, True):
            out = render_wikihow_parts(article, include_abstract, full_steps)
            positions = [out.index(title) for title, _ in article.steps]
            assert positions == sorted(positions)
            for title, _ in article.steps:
                assert out.count(title) == 1


def test_render_record_instruction_is_title():
    rec = render_wikihow(make_article(), rng_seed=11)
    assert rec.instruction == "Wie man Brot backt"
    assert rec.source is Source.WIKIHOW
    assert validate_record(rec) == []


def test_render_deterministic_per_seed():
    article = make_article()
    assert render_wikihow(article, 3) == render_wikihow(article, 3)
    outputs = {render_wikihow(article, s).output for s in range(40)}
    assert len(outputs) == 4  # both flips vary across seeds


def test_render_flip_proportions_rough():
    article = make_article()
    with_abstract = sum(
        1 for s in range(2000)
        if render_wikihow(article, s).output.startswith("Brot backen"))
    assert 0.45 <= with_abstract / 2000 <= 0.55


def test_article_validation():
    with pytest.raises(ValueError):
        WikiHowArticle(DEU, "", "abs", (("t", "x"),), "u")
    with pytest.raises(ValueError):
        WikiHowArticle(DEU, "Title", "abs", (), "u")


def test_load_wikihow_articles(tmp_path):
    data = [{
        "lang": "deu_Latn",
        "title": "Wie man Tee kocht",
        "abstract": "Kurz.",
        "steps": [{"step_title": "Wasser kochen", "step_text": "Heiss."}],
        "url": "https://how.example/tee",
    }]
    path = tmp_path / "articles.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    articles = load_wikihow_articles(path)
    assert len(articles) == 1 and articles[0].title == "Wie man Tee kocht"


# ---------------------------------------------------------------------------
# Task collections
# ---------------------------------------------------------------------------

def write_task(tmp_path, name, category, n_instances, lang="deu_Latn"):
    task = {
        "name": name,
        "definition": [f"Definition of {name}."],
        "categories": [category],
        "output_language": lang,
        "instances": [
            {"id": f"{name}-{i}", "input": f"input {i}", "output": [f"output {i}"]}
            for i in range(n_instances)
        ],
    }
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(task), encoding="utf-8")
    return path


def test_translation_task_capped_at_200(tmp_path):
    path = write_task(tmp_path, "task001_translation_x", "Translation", 300)
    records = adapt_task_collection([path], seed=5)
    assert len(records) == 200
    assert all(r.source is Source.SUPNATINST for r in records)
    assert all(validate_record(r) == [] for r in records[:5])


def test_small_bucket_cap_not_binding(tmp_path):
    path = write_task(tmp_path, "task002_qa", "Question Answering", 100)
    records = adapt_task_collection([path], seed=5)
    assert len(records) == 100


def test_nontranslation_tasks_pooled_per_type(tmp_path):
    a = write_task(tmp_path, "task003_qa", "Question Answering", 400)
    b = write_task(tmp_path, "task004_qa", "Question Answering", 400)
    records = adapt_task_collection([a, b], seed=5)
    assert len(records) == 500  # pooled bucket capped, not per task


def test_task_sampling_deterministic(tmp_path):
    path = write_task(tmp_path, "task005_translation_y", "Translation", 250)
    first = adapt_task_collection([path], seed=9)
    second = adapt_task_collection([path], seed=9)
    assert first == second
    assert adapt_task_collection([path], seed=10) != first


def test_task_missing_language_skipped(tmp_path):
    task = {"name": "task006", "definition": ["D."], "categories": ["QA"],
            "instances": [{"id": "a", "input": "i", "output": ["o"]}]}
    path = tmp_path / "task006.json"
    path.write_text(json.dumps(task), encoding="utf-8")
    warnings = Counter()
    records = adapt_task_collection([path], seed=1, warnings=warnings)
    assert records == []
    assert warnings["task_missing_language"] == 1


def test_task_instruction_is_definition_plus_input(tmp_path):
    path = write_task(tmp_path, "task007_qa", "Question Answering", 1)
    rec = adapt_task_collection([path], seed=1)[0]
    assert rec.instruction == "Definition of task007_qa.\n\ninput 0"
    assert rec.output == "output 0"


# ---------------------------------------------------------------------------
# Chat trees
# ---------------------------------------------------------------------------

def node(nid, parent, role, text="text", lang="eng_Latn"):
    return {"id": nid, "parent_id": parent, "role": role, "text": text, "lang": lang}


def test_single_turn_yields_one_record():
    tree = load_chat_tree({"nodes": [
        node("p0", None, "prompter", "How do magnets work?"),
        node("a0", "p0", "assistant", "They attract iron."),
    ]})
    records = adapt_chat_tree(tree)
    assert len(records) == 1
    assert records[0].instruction == "How do magnets work?"
    assert records[0].output == "They attract iron."
    assert records[0].source is Source.OASST


def test_three_turn_chain_keeps_first_two():
    tree = load_chat_tree({"nodes": [
        node("p0", None, "prompter", "turn one"),
        node("a0", "p0", "assistant", "answer one"),
        node("p1", "a0", "prompter", "turn two"),
        node("a1", "p1", "assistant", "answer two"),
        node("p2", "a1", "prompter", "turn three"),
        node("a2", "p2", "assistant", "answer three"),
    ]})
    records = adapt_chat_tree(tree)
    assert [r.instruction for r in records] == ["turn one", "turn two"]


def test_empty_prompter_text_skipped():
    warnings = Counter()
    tree = load_chat_tree({"nodes": [
        node("p0", None, "prompter", "  "),
        node("a0", "p0", "assistant", "reply"),
    ]})
    assert adapt_chat_tree(tree, warnings) == []
    assert warnings["empty_prompter_text"] == 1


def test_multiple_assistant_children_pair_each():
    tree = load_chat_tree({"nodes": [
        node("p0", None, "prompter", "question"),
        node("a0", "p0", "assistant", "first reply"),
        node("a1", "p0", "assistant", "second reply"),
    ]})
    assert [r.output for r in adapt_chat_tree(tree)] == ["first reply", "second reply"]


def test_cross_language_pair_skipped():
    warnings = Counter()
    tree = load_chat_tree({"nodes": [
        node("p0", None, "prompter", "question", "eng_Latn"),
        node("a0", "p0", "assistant", "antwort", "deu_Latn"),
    ]})
    assert adapt_chat_tree(tree, warnings) == []
    assert warnings["lang_mismatch_pair"] == 1


def test_malformed_trees_rejected():
    with pytest.raises(ValueError):
        ChatTree((ChatNode("a", None, "prompter", "x", ENG),
                  ChatNode("b", None, "prompter", "y", ENG)))  # two roots
    with pytest.raises(ValueError):
        ChatTree((ChatNode("r", None, "prompter", "x", ENG),
                  ChatNode("a", "b", "assistant", "y", ENG),
                  ChatNode("b", "a", "prompter", "z", ENG)))  # cycle


def random_tree(rng: random.Random, n_nodes: int) -> tuple[ChatTree, dict[str, int]]:
    nodes = [ChatNode("n0", None, "prompter", "prompt n0", ENG)]
    depths = {"n0": 0}
    for i in range(1, n_nodes):
        parent = nodes[rng.randrange(len(nodes))]
        depth = depths[parent.id] + 1
        role = "assistant" if parent.role == "prompter" else "prompter"
        nodes.append(ChatNode(f"n{i}", parent.id, role, f"{role} n{i}", ENG))
        depths[f"n{i}"] = depth
    return ChatTree(tuple(nodes)), depths


def test_no_pair_below_depth_cutoff_over_random_trees():
    rng = random.Random(8)
    for _ in range(25):
        tree, depths = random_tree(rng, rng.randrange(2, 30))
        for rec in adapt_chat_tree(tree):
            src = next(n for n in tree.nodes if n.text == rec.instruction)
            assert depths[src.id] <= 2


# ---------------------------------------------------------------------------
# Tabular prompt rows
# ---------------------------------------------------------------------------

def test_prompt_row_field_mapping():
    records = adapt_prompt_rows(
        [{"input": "Q", "target": "A", "lang": "eng_Latn"}], Source.XP3)
    assert len(records) == 1
    rec = records[0]
    assert (rec.instruction, rec.output, rec.source) == ("Q", "A", Source.XP3)
    assert validate_record(rec) == []


def test_prompt_rows_empty():
    assert adapt_prompt_rows([], Source.XP3) == []


def test_prompt_row_missing_target_skipped():
    warnings = Counter()
    records = adapt_prompt_rows(
        [{"input": "Q", "lang": "eng_Latn"},
         {"input": "Q2", "target": "", "lang": "eng_Latn"},
         {"input": "Q3", "target": "A3", "lang": "eng_Latn"}],
        Source.XP3, warnings)
    assert len(records) == 1
    assert warnings["row_missing_target"] == 2


def test_instruction_rows_quota_sampling():
    rows = ([{"input": f"m{i}", "target": f"t{i}", "subset": "main"} for i in range(1200)]
            + [{"input": f"c{i}", "target": f"t{i}", "subset": "cot"} for i in range(1200)])
    records = adapt_instruction_rows(iter(rows), seed=4, main_quota=1000, cot_quota=1000)
    assert len(records) == 2000
    mains = sum(1 for r in records if r.instruction.startswith("m"))
    assert mains == 1000
    assert all(r.source is Source.FLAN for r in records[:5])
    assert all(str(r.lang) == "eng_Latn" for r in records[:5])


def test_instruction_rows_quota_not_binding():
    rows = [{"input": f"m{i}", "target": f"t{i}", "subset": "main"} for i in range(50)]
    assert len(adapt_instruction_rows(iter(rows), seed=4)) == 50


def test_instruction_rows_deterministic():
    rows = [{"input": f"m{i}", "target": f"t{i}", "subset": "main"} for i in range(500)]
    a = adapt_instruction_rows(iter(rows), seed=4, main_quota=100, cot_quota=100)
    b = adapt_instruction_rows(iter(rows), seed=4, main_quota=100, cot_quota=100)
    assert a == b


def test_instruction_rows_default_quotas_yield_100k():
    def rows():
        for i in range(60_000):
            yield {"input": f"m{i}", "target": f"t{i}", "subset": "main"}
        for i in range(60_000):
            yield {"input": f"c{i}", "target": f"t{i}", "subset": "cot"}

    records = adapt_instruction_rows(rows(), seed=17)
    assert len(records) == 100_000
    subsets = Counter("main" if r.instruction.startswith("m") else "cot"
                      for r in records)
    assert subsets == {"main": 50_000, "cot": 50_000}
