"""Per-document instruction generation: English projection, instruction
back-generation, localization into the source language, and a language-ID
consistency check.

The output text of a surviving record is always the original document,
byte-for-byte; only the instruction ever passes through machine translation.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from importlib import resources

from .inference import InferenceClient, InferenceError
from .records import (
    ENGLISH,
    STAGE_GENERATE_INST,
    STAGE_LID_CHECK,
    STAGE_LOCALIZE_INST,
    STAGE_TRANSLATE_DOC,
    InstructionRecord,
    LanguageTag,
    SourceDocument,
    StageStatus,
    StageTrace,
)

logger = logging.getLogger(__name__)

CUE_LINE = "What kind of instruction could this be the answer to?"

_SENTENCE_END_RE = re.compile(r"[.!?。؟][\"')\]]*\s")


@dataclass(frozen=True)
class PromptTemplate:
    """In-context examples plus the scaffold around them.

    Each example is rendered as an answer block followed by the cue line and
    the instruction it should elicit; the query document goes into a final
    block whose instruction slot is left open.
    """

    few_shot_examples: tuple[tuple[str, str], ...]

    @classmethod
    def load_default(cls) -> "PromptTemplate":
        raw = resources.files("revinst.data").joinpath("few_shot_examples.json").read_text("utf-8")
        examples = tuple((e["answer"], e["instruction"]) for e in json.loads(raw)["examples"])
        return cls(examples)

    def render(self, doc_en: str) -> str:
        blocks = []
        for answer, instruction in self.few_shot_examples:
            blocks.append(f"Answer: {answer}\n> {CUE_LINE}\nInstruction: {instruction}")
        blocks.append(f"Answer: {doc_en}\n> {CUE_LINE}\nInstruction:")
        return "\n\n".join(blocks)


@dataclass(frozen=True)
class PromptBuild:
    prompt: str
    truncated: bool


def truncate_at_sentence(text: str, limit: int) -> str:
    """Cut to at most ``limit`` chars, preferring the last sentence boundary."""
    if len(text) <= limit:
        return text
    head = text[:limit]
    last_end = None
    for m in _SENTENCE_END_RE.finditer(head):
        last_end = m.end()
    if last_end and last_end > limit // 4:
        return head[:last_end].rstrip()
    return head.rstrip()


def build_prompt(doc_en: str, template: PromptTemplate,
                 max_chars: int = 8_000) -> PromptBuild:
    """Render the few-shot prompt; over-budget documents are truncated at a
    sentence boundary and the truncation is reported for the trace."""
    if not doc_en:
        raise ValueError("build_prompt: doc_en must be nonempty")
    prompt = template.render(doc_en)
    if len(prompt) <= max_chars:
        return PromptBuild(prompt, truncated=False)
    overhead = len(template.render(""))
    budget = max(1, max_chars - overhead)
    clipped = truncate_at_sentence(doc_en, budget)
    return PromptBuild(template.render(clipped), truncated=True)


@dataclass(frozen=True)
class DocumentOutcome:
    """Result of running one document through the generation stages."""

    doc_id: str
    record: InstructionRecord | None
    trace: StageTrace
    drop_stage: str | None = None
    drop_reason: str | None = None

    @property
    def dropped(self) -> bool:
        return self.record is None


def check_language_consistency(client: InferenceClient, inst_src: str,
                               expected: LanguageTag,
                               min_conf: float = 0.5) -> tuple[bool, str | None]:
    """Pass iff the identified language code matches and confidence clears
    ``min_conf``. Scripts are deliberately ignored: script-level matching
    would wrongly reject transliteration-ambiguous languages."""
    if not inst_src:
        raise ValueError("check_language_consistency: text must be nonempty")
    try:
        identified, confidence = client.identify_language(inst_src)
    except InferenceError as exc:
        return False, f"lid_unavailable: {exc}"
    if identified.code != expected.code:
        return False, f"identified {identified} (conf {confidence:.2f}), expected {expected.code}"
    if confidence < min_conf:
        return False, f"confidence {confidence:.2f} below {min_conf}"
    return True, None


class ReverseInstructionGenerator:
    """Runs the translate -> generate -> localize -> LID-check chain per doc."""

    def __init__(self, client: InferenceClient, template: PromptTemplate | None = None,
                 min_lid_confidence: float = 0.5, max_prompt_chars: int = 8_000,
                 translate_top_p: float = 1.0, rng_seed: int = 0):
        self.client = client
        self.template = template or PromptTemplate.load_default()
        self.min_lid_confidence = min_lid_confidence
        self.max_prompt_chars = max_prompt_chars
        self.translate_top_p = translate_top_p
        self.rng_seed = rng_seed

    def process(self, doc: SourceDocument) -> DocumentOutcome:
        trace = StageTrace(rng_seed=self.rng_seed)

        # English projection of the document.
        try:
            doc_en = self.client.translate(doc.text, doc.lang, ENGLISH,
                                           top_p=self.translate_top_p)
        except InferenceError as exc:
            reason = exc.code if exc.code == "empty_translation" else "mt_unavailable"
            trace = trace.with_stage(STAGE_TRANSLATE_DOC, StageStatus.DROP, reason,
                                     self.client.model_id("translate"))
            return DocumentOutcome(doc.id, None, trace, STAGE_TRANSLATE_DOC, reason)
        trace = StageTrace(doc_en=doc_en, inst_en=None, stages=trace.stages,
                           rng_seed=trace.rng_seed)
        trace = trace.with_stage(STAGE_TRANSLATE_DOC, StageStatus.PASS, None,
                                 self.client.model_id("translate"))

        # Instruction back-generation in English, greedy.
        build = build_prompt(doc_en, self.template, self.max_prompt_chars)
        try:
            inst_en = self.client.generate(build.prompt, mode="greedy")
        except InferenceError as exc:
            reason = exc.code if exc.code == "prompt_too_long" else "generation_failed"
            trace = trace.with_stage(STAGE_GENERATE_INST, StageStatus.DROP, reason,
                                     self.client.model_id("generate"))
            return DocumentOutcome(doc.id, None, trace, STAGE_GENERATE_INST, reason)
        trace = StageTrace(doc_en=trace.doc_en, inst_en=inst_en, stages=trace.stages,
                           rng_seed=trace.rng_seed)
        trace = trace.with_stage(STAGE_GENERATE_INST, StageStatus.PASS,
                                 "doc_truncated" if build.truncated else None,
                                 self.client.model_id("generate"))

        # Localization back into the document language.
        try:
            inst_src = self.client.translate(inst_en, ENGLISH, doc.lang,
                                             top_p=self.translate_top_p)
        except InferenceError as exc:
            reason = exc.code if exc.code == "empty_translation" else "mt_unavailable"
            trace = trace.with_stage(STAGE_LOCALIZE_INST, StageStatus.DROP, reason,
                                     self.client.model_id("translate"))
            return DocumentOutcome(doc.id, None, trace, STAGE_LOCALIZE_INST, reason)
        trace = trace.with_stage(STAGE_LOCALIZE_INST, StageStatus.PASS, None,
                                 self.client.model_id("translate"))

        # Language consistency of the localized instruction.
        ok, detail = check_language_consistency(self.client, inst_src, doc.lang,
                                                self.min_lid_confidence)
        if not ok:
            reason = "lid_unavailable" if detail and detail.startswith("lid_unavailable") \
                else "lid_mismatch"
            trace = trace.with_stage(STAGE_LID_CHECK, StageStatus.DROP, detail,
                                     self.client.model_id("lid"))
            return DocumentOutcome(doc.id, None, trace, STAGE_LID_CHECK, reason)
        trace = trace.with_stage(STAGE_LID_CHECK, StageStatus.PASS, None,
                                 self.client.model_id("lid"))

        record = InstructionRecord(
            id=doc.id,
            lang=doc.lang,
            instruction=inst_src,
            output=doc.text,
            source=doc.source,
            trace=trace,
        )
        return DocumentOutcome(doc.id, record, trace)
