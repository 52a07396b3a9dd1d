"""Screening of generated pairs: keyword exclusion on the English instruction,
content screen on the English intermediates, and report-only structural-noise
scoring.

Keyword matching runs on the ENGLISH instruction (before localization): the
blocklist words are English, and matching after translation would need a list
per language.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .inference import InferenceClient, InferenceError

# Inflections matched per blocklist stem; plain substring matching would
# over-drop (e.g. "translational").
_EXTRA_FORMS = {
    "summarize": ("summarizes", "summarized", "summarizing", "summarization",
                  "summarise", "summarises", "summarised", "summarising",
                  "summarisation"),
    "translate": ("translates", "translated", "translating", "translation",
                  "translations"),
}


@dataclass(frozen=True)
class FilterConfig:
    keyword_blocklist: tuple[str, ...] = ("summarize", "translate")
    screen_threshold: float = 0.5
    screen_strict: bool = True
    noise_heuristics: bool = True

    def __post_init__(self):
        for word in self.keyword_blocklist:
            if not word or word != word.lower():
                raise ValueError(f"blocklist entries must be nonempty lowercase: {word!r}")


@dataclass(frozen=True)
class FilterVerdict:
    passed: bool
    reason: str | None = None


def _default_inflections(stem: str) -> tuple[str, ...]:
    if stem.endswith("e"):
        return (stem + "s", stem + "d", stem[:-1] + "ing")
    return (stem + "s", stem + "ed", stem + "ing")


def _keyword_pattern(blocklist: tuple[str, ...]) -> re.Pattern:
    forms: list[str] = []
    for stem in blocklist:
        forms.append(stem)
        forms.extend(_EXTRA_FORMS.get(stem, _default_inflections(stem)))
    forms.sort(key=len, reverse=True)
    return re.compile(r"\b(" + "|".join(re.escape(f) for f in forms) + r")\b")


def keyword_filter(inst_en: str, cfg: FilterConfig) -> FilterVerdict:
    """Drop iff a blocklist word (or a common inflection of it) occurs at a
    word boundary in the lowercased English instruction."""
    if not inst_en:
        raise ValueError("keyword_filter: instruction must be nonempty")
    m = _keyword_pattern(cfg.keyword_blocklist).search(inst_en.lower())
    if m:
        return FilterVerdict(False, m.group(1))
    return FilterVerdict(True)


def content_screen(client: InferenceClient, inst_en: str, doc_en: str,
                   cfg: FilterConfig) -> FilterVerdict:
    """Drop iff the screen score of the joined English pair reaches the
    threshold; an unavailable screen drops in strict mode, passes flagged in
    permissive mode."""
    if not inst_en or not doc_en:
        raise ValueError("content_screen: both texts must be present")
    try:
        verdict = client.screen(f"{inst_en}\n{doc_en}")
    except InferenceError:
        if cfg.screen_strict:
            return FilterVerdict(False, "screen_unavailable")
        return FilterVerdict(True, "screen_unavailable")
    if verdict.score >= cfg.screen_threshold:
        return FilterVerdict(False, f"{verdict.score:.2f}")
    return FilterVerdict(True)


_URL_RE = re.compile(r"(https?://\S+|www\.\S+)")
_SEPARATOR_RE = re.compile(r"[|•·]")
_COPYRIGHT_RE = re.compile(r"(©|\(c\)\s*\d{4}|copyright)", re.IGNORECASE)


def structural_noise_score(text: str) -> float:
    """Score boilerplate likelihood in [0, 1] from URL density, navigation
    separator runs and copyright marks. Report-only: nothing drops on it."""
    if not text or not text.strip():
        return 0.0
    words = max(1, len(text.split()))
    url_density = min(1.0, len(_URL_RE.findall(text)) / words * 2.0)
    separator_density = min(1.0, len(_SEPARATOR_RE.findall(text)) / words * 2.0)
    copyright_hit = 1.0 if _COPYRIGHT_RE.search(text) else 0.0
    score = 0.5 * url_density + 0.35 * separator_density + 0.15 * copyright_hit
    return min(1.0, score)
