from __future__ import annotations

import random
from collections import Counter
from pathlib import Path

import pytest

from revinst.assembly import (
    DatasetStats,
    MappingTables,
    SplitPlan,
    assign_splits,
    compute_diversity,
    export_review_sheet,
    largest_remainder,
    render_stats_table,
)
from revinst.records import Split, validate_record

from helpers import make_record

GOLDEN = Path(__file__).parent / "golden"

PUBLISHED_COUNTS = {
    "wikipedia": 1_031_726,
    "culturax": 686_723,
    "wikihow": 54_578,
    "supnatinst": 161_986,
    "xp3": 184_000,
    "oasst": 9_486,
    "flan": 100_000,
}


# ---------------------------------------------------------------------------
# Split apportionment
# ---------------------------------------------------------------------------

def test_largest_remainder_100_is_exact():
    assert largest_remainder(100, (0.90, 0.05, 0.05)) == [90, 5, 5]


def test_largest_remainder_19_by_hand():
    # 19 * (0.9, .05, .05) = (17.1, 0.95, 0.95): floors (17, 0, 0), the two
    # leftovers go to the largest fractional parts.
    assert largest_remainder(19, (0.90, 0.05, 0.05)) == [17, 1, 1]


def test_largest_remainder_deviation_below_one():
    rng = random.Random(31)
    for _ in range(200):
        total = rng.randrange(0, 500)
        a, b = sorted(rng.random() for _ in range(2))
        ratios = (a, b - a, 1 - b)
        if min(ratios) <= 0:
            continue
        counts = largest_remainder(total, ratios)
        assert sum(counts) == total
        for count, ratio in zip(counts, ratios):
            assert abs(count - total * ratio) < 1


def test_split_plan_validation():
    with pytest.raises(ValueError):
        SplitPlan(ratios=(0.9, 0.05, 0.04))
    with pytest.raises(ValueError):
        SplitPlan(ratios=(1.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        SplitPlan(stratify_by=("color",))


def test_assign_splits_stratum_of_100():
    records = [make_record(i, lang="deu_Latn") for i in range(100)]
    out = assign_splits(records, SplitPlan(seed=3))
    counts = Counter(r.split for r in out)
    assert counts == {Split.TRAIN: 90, Split.VALIDATION: 5, Split.TEST: 5}


def test_assign_splits_degenerate_stratum_goes_to_train():
    warnings = Counter()
    out = assign_splits([make_record(0)], SplitPlan(seed=3), warnings)
    assert out[0].split is Split.TRAIN
    assert warnings["stratum_too_small"] == 1


def test_assign_splits_partition_and_order():
    records = [make_record(i, lang=("tur_Latn" if i % 2 else "deu_Latn"))
               for i in range(60)]
    out = assign_splits(records, SplitPlan(seed=9))
    assert [r.id for r in out] == [r.id for r in records]  # order preserved
    assert all(r.split is not Split.UNASSIGNED for r in out)
    for rec in out[:5]:
        assert validate_record(rec) == []


def test_assign_splits_deterministic_under_seed():
    records = [make_record(i) for i in range(50)]
    a = assign_splits(records, SplitPlan(seed=5))
    b = assign_splits(records, SplitPlan(seed=5))
    c = assign_splits(records, SplitPlan(seed=6))
    assert a == b
    assert a != c


def test_assign_splits_rejects_preassigned():
    rec = assign_splits([make_record(i) for i in range(3)], SplitPlan(seed=1))[0]
    with pytest.raises(ValueError):
        assign_splits([rec], SplitPlan(seed=1))


def test_assign_splits_per_stratum_bound():
    records = []
    idx = 0
    for lang in ("tur_Latn", "deu_Latn", "rus_Cyrl"):
        for _ in range(37):
            records.append(make_record(idx, lang=lang))
            idx += 1
    out = assign_splits(records, SplitPlan(seed=2))
    for lang in ("tur_Latn", "deu_Latn", "rus_Cyrl"):
        counts = Counter(r.split for r in out if str(r.lang) == lang)
        for split, ratio in zip((Split.TRAIN, Split.VALIDATION, Split.TEST),
                                (0.9, 0.05, 0.05)):
            assert abs(counts.get(split, 0) - 37 * ratio) < 1


# ---------------------------------------------------------------------------
# Composition statistics
# ---------------------------------------------------------------------------

def test_stats_empty():
    stats = DatasetStats.from_records([])
    assert stats.total() == 0
    assert stats.by_group() == {"reverse_instructions": 0, "wikihow": 0, "nlp_tasks": 0}


def test_stats_two_by_two_cells():
    from revinst.records import Source
    records = [
        make_record(0, lang="tur_Latn", source=Source.WIKIPEDIA),
        make_record(1, lang="tur_Latn", source=Source.WIKIPEDIA),
        make_record(2, lang="deu_Latn", source=Source.WIKIPEDIA),
        make_record(3, lang="tur_Latn", source=Source.XP3),
    ]
    stats = DatasetStats.from_records(records)
    cells = dict(stats.cells)
    assert cells[("wikipedia", "tur_Latn")] == 2
    assert cells[("wikipedia", "deu_Latn")] == 1
    assert cells[("xp3", "tur_Latn")] == 1
    assert stats.total() == 4


def test_stats_published_count_manifest_reproduces_totals():
    stats = DatasetStats.from_count_manifest(PUBLISHED_COUNTS)
    assert stats.total() == 2_228_499
    groups = stats.by_group()
    assert groups["reverse_instructions"] == 1_718_449
    assert groups["wikihow"] == 54_578
    assert groups["nlp_tasks"] == 455_472


def test_stats_table_matches_golden():
    stats = DatasetStats.from_count_manifest(PUBLISHED_COUNTS)
    assert render_stats_table(stats) == (GOLDEN / "stats_table.txt").read_text("utf-8")


def test_stats_nested_count_manifest():
    stats = DatasetStats.from_count_manifest({"wikipedia": {"tur_Latn": 5, "deu_Latn": 7}})
    assert stats.total() == 12
    assert stats.languages_by_source() == {"wikipedia": 2}


# ---------------------------------------------------------------------------
# Diversity report
# ---------------------------------------------------------------------------

def test_diversity_spot_checks():
    records = [
        make_record(0, lang="eng_Latn"),
        make_record(1, lang="ban_Latn"),
        make_record(2, lang="epo_Latn"),  # absent from the resource table
    ]
    report = compute_diversity(records)
    by_lang = {e.lang: e for e in report.languages}
    assert by_lang["eng_Latn"].resource_level == "5"
    assert by_lang["ban_Latn"].resource_level == "0"
    assert by_lang["epo_Latn"].resource_level == "unknown"


def test_diversity_word_order_and_cases():
    records = [make_record(0, lang="tur_Latn"), make_record(1, lang="deu_Latn")]
    report = compute_diversity(records)
    by_lang = {e.lang: e for e in report.languages}
    assert by_lang["tur_Latn"].word_order == "SOV"
    assert by_lang["deu_Latn"].word_order == "no-dominant"
    assert by_lang["deu_Latn"].case_marking == "4"


def test_diversity_script_groups():
    records = [make_record(0, lang="rus_Cyrl"), make_record(1, lang="zho_Hans"),
               make_record(2, lang="arb_Arab"), make_record(3, lang="eng_Latn")]
    report = compute_diversity(records)
    hist = report.histogram("script_group")
    assert hist == {"Arabic": 1, "Cyrillic": 1, "Latin": 1, "Other": 1}


def test_diversity_histogram_weighted_by_records():
    records = [make_record(i, lang="eng_Latn") for i in range(3)] + \
        [make_record(9, lang="tur_Latn")]
    report = compute_diversity(records)
    assert report.histogram("resource_level", weight_records=True)["5"] == 3


def test_diversity_never_guesses():
    report = compute_diversity([make_record(0, lang="bav_Latn")])
    entry = report.languages[0]
    assert entry.word_order == "unknown"
    assert entry.case_marking == "unknown"


def test_malformed_mapping_table_rejected():
    with pytest.raises(ValueError):
        MappingTables.from_objs({"eng": 7}, {}, {})
    with pytest.raises(ValueError):
        MappingTables.from_objs({}, {"eng": "SVX"}, {})
    with pytest.raises(ValueError):
        MappingTables.from_objs({}, {}, {"eng": 4})


# ---------------------------------------------------------------------------
# Review sheets
# ---------------------------------------------------------------------------

def test_review_sheet_shape():
    records = [make_record(i, lang="deu_Latn") for i in range(100)]
    sheet = export_review_sheet(records, per_lang=30, seed=11)
    lines = sheet.rstrip("\n").split("\n")
    assert len(lines) == 31  # header + 30 rows
    assert lines[0].split("\t") == [
        "instruction", "output", "Alignment", "InstructionFormat",
        "InstructionCorrectness", "OutputCorrectness",
        "InformationalSufficiency", "Notes",
    ]
    for line in lines[1:]:
        assert len(line.split("\t")) == 8


def test_review_sheet_saturates_small_language():
    warnings = Counter()
    records = [make_record(i, lang="tur_Latn") for i in range(5)]
    sheet = export_review_sheet(records, per_lang=30, seed=1, warnings=warnings)
    assert len(sheet.rstrip("\n").split("\n")) == 6
    assert warnings["language_undersampled"] == 1


def test_review_sheet_deterministic():
    records = [make_record(i, lang="deu_Latn") for i in range(100)]
    assert export_review_sheet(records, 30, seed=4) == export_review_sheet(records, 30, seed=4)
    assert export_review_sheet(records, 30, seed=4) != export_review_sheet(records, 30, seed=5)


def test_review_sheet_sanitizes_cells():
    rec = make_record(0, text="line one\nline two\twith tab")
    sheet = export_review_sheet([rec], per_lang=1, seed=0)
    row = sheet.rstrip("\n").split("\n")[1]
    assert len(row.split("\t")) == 8
