"""Model-inference contract: translate, generate, language-ID, content screen.

Two interchangeable backends speak the same contract: a deterministic
in-process mock (so the whole pipeline tests offline) and an HTTP client for
the POST /v1/translate, /v1/generate, /v1/lid, /v1/screen wire protocol.

Mock behavior is frozen by the golden files under contracts/inference_v1 and
must stay in sync with any out-of-process mock server:
  - translate prepends "[MT:src→tgt] " to the text
  - generate answers the last "Answer:" line with "What is <line>?"
  - lid reads the first MT tag back out of the text; the literal marker
    LID_FAULT forces eng_Latn so tests can inject mismatches
  - screen flags text containing the literal marker TRIGGER_HATE
"""

from __future__ import annotations

import logging
import re
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
import requests

from .records import ENGLISH, LanguageRegistry, LanguageTag, default_registry

logger = logging.getLogger(__name__)

LID_FAULT_MARKER = "LID_FAULT"
SCREEN_TRIGGER = "TRIGGER_HATE"

_MT_TAG_RE = re.compile(r"\[MT:([a-z]{3})→([a-z]{3})\]")
_ANSWER_RE = re.compile(r"answer:[ \t]*(.*)", re.IGNORECASE)


class InferenceError(RuntimeError):
    """Backend failure with a stable reason code; maps to a per-record drop."""

    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 3
    backoff_ms_base: int = 100


@dataclass(frozen=True)
class InferenceEndpointConfig:
    base_url: str
    timeout_ms: int = 30_000
    max_in_flight: int = 4
    retry: RetryPolicy = field(default_factory=RetryPolicy)

    def __post_init__(self):
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        if self.retry.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


class ScreenLabel(str, Enum):
    ACCEPTABLE = "acceptable"
    FLAGGED = "flagged"


@dataclass(frozen=True)
class ScreenVerdict:
    label: ScreenLabel
    score: float


def make_screen_verdict(score: float, threshold: float) -> ScreenVerdict:
    label = ScreenLabel.FLAGGED if score >= threshold else ScreenLabel.ACCEPTABLE
    return ScreenVerdict(label, score)


def segment_text(text: str, max_chars: int) -> list[str]:
    """Split on paragraph boundaries into chunks of at most max_chars,
    preserving the original separators inside the returned pieces so that
    re-joining with '' reproduces the input byte-for-byte."""
    if len(text) <= max_chars:
        return [text]
    paragraphs = re.split(r"(\n\s*\n)", text)
    chunks: list[str] = []
    current = ""
    for piece in paragraphs:
        if len(current) + len(piece) <= max_chars or not current:
            current += piece
        else:
            chunks.append(current)
            current = piece
        while len(current) > max_chars:
            chunks.append(current[:max_chars])
            current = current[max_chars:]
    if current:
        chunks.append(current)
    return chunks


class InferenceClient:
    """Shared contract; subclasses implement the single-call primitives."""

    max_translate_chars = 4_000

    def translate(self, text: str, src: LanguageTag, tgt: LanguageTag,
                  top_p: float = 1.0) -> str:
        if not text:
            raise ValueError("translate: text must be nonempty")
        if src == tgt:
            raise ValueError("translate: src and tgt must differ")
        pieces = []
        for chunk in segment_text(text, self.max_translate_chars):
            if not chunk.strip():
                pieces.append(chunk)
                continue
            out = self._translate_once(chunk, src, tgt, top_p)
            if not out:
                raise InferenceError("empty_translation", "backend returned empty text")
            pieces.append(out)
        return "".join(pieces) if len(pieces) > 1 else pieces[0]

    def generate(self, prompt: str, mode: str = "greedy", top_p: float = 1.0) -> str:
        if not prompt:
            raise ValueError("generate: prompt must be nonempty")
        out = self._generate_once(prompt, mode, top_p)
        if not out:
            raise InferenceError("empty_generation", "backend returned empty text")
        return out

    def identify_language(self, text: str) -> tuple[LanguageTag, float]:
        if not text:
            raise ValueError("identify_language: text must be nonempty")
        return self._lid_once(text)

    def screen(self, text: str) -> ScreenVerdict:
        if not text:
            raise ValueError("screen: text must be nonempty")
        return self._screen_once(text)

    def model_id(self, role: str) -> str:
        raise NotImplementedError

    def _translate_once(self, text: str, src: LanguageTag, tgt: LanguageTag,
                        top_p: float) -> str:
        raise NotImplementedError

    def _generate_once(self, prompt: str, mode: str, top_p: float) -> str:
        raise NotImplementedError

    def _lid_once(self, text: str) -> tuple[LanguageTag, float]:
        raise NotImplementedError

    def _screen_once(self, text: str) -> ScreenVerdict:
        raise NotImplementedError


def mock_translate(text: str, src_code: str, tgt_code: str) -> str:
    return f"[MT:{src_code}→{tgt_code}] {text}"


def mock_generate(prompt: str) -> str:
    matches = [m.group(1).strip() for m in _ANSWER_RE.finditer(prompt)]
    matches = [m for m in matches if m]
    subject = matches[-1] if matches else prompt.splitlines()[0].strip()
    return f"What is {subject}?"


def mock_lid(text: str, registry: LanguageRegistry) -> tuple[LanguageTag, float]:
    if LID_FAULT_MARKER in text:
        return ENGLISH, 1.0
    m = _MT_TAG_RE.search(text)
    if m:
        tag = registry.primary_tag(m.group(2)) or LanguageTag(m.group(2), "Latn")
        return tag, 1.0
    return ENGLISH, 0.5


def mock_screen_score(text: str) -> float:
    return 0.99 if SCREEN_TRIGGER in text else 0.01


class MockInferenceClient(InferenceClient):
    """Deterministic offline backend; every call is a pure function of inputs."""

    def __init__(self, registry: LanguageRegistry | None = None,
                 screen_threshold: float = 0.5, max_prompt_chars: int = 100_000):
        self.registry = registry or default_registry()
        self.screen_threshold = screen_threshold
        self.max_prompt_chars = max_prompt_chars

    def model_id(self, role: str) -> str:
        return f"mock-{role}"

    def _translate_once(self, text, src, tgt, top_p):
        return mock_translate(text, src.code, tgt.code)

    def _generate_once(self, prompt, mode, top_p):
        if len(prompt) > self.max_prompt_chars:
            raise InferenceError("prompt_too_long",
                                 f"{len(prompt)} > {self.max_prompt_chars}")
        return mock_generate(prompt)

    def _lid_once(self, text):
        return mock_lid(text, self.registry)

    def _screen_once(self, text):
        return make_screen_verdict(mock_screen_score(text), self.screen_threshold)


class HttpInferenceClient(InferenceClient):
    """HTTP backend for the /v1/* wire contract, with retries and a bound on
    concurrent in-flight requests."""

    def __init__(self, config: InferenceEndpointConfig, screen_threshold: float = 0.5,
                 session: requests.Session | None = None):
        self.config = config
        self.screen_threshold = screen_threshold
        self._session = session or requests.Session()
        self._slots = threading.Semaphore(config.max_in_flight)
        self._model_ids: dict[str, str] = {}

    def model_id(self, role: str) -> str:
        return self._model_ids.get(role, "unknown")

    def _post(self, path: str, body: dict, role: str) -> dict:
        url = self.config.base_url.rstrip("/") + path
        timeout = self.config.timeout_ms / 1000.0
        retry = self.config.retry
        last_error = "unreachable"
        for attempt in range(1, retry.max_attempts + 1):
            try:
                with self._slots:
                    resp = self._session.post(url, json=body, timeout=timeout)
            except requests.RequestException as exc:
                last_error = str(exc)
            else:
                if resp.status_code == 200:
                    payload = resp.json()
                    if payload.get("model_id"):
                        self._model_ids[role] = payload["model_id"]
                    return payload
                code, message = self._error_body(resp)
                if 400 <= resp.status_code < 500:
                    # Client errors are not retryable.
                    raise InferenceError(self._map_code(code), message)
                last_error = f"HTTP {resp.status_code}: {message}"
            if attempt < retry.max_attempts:
                time.sleep(retry.backoff_ms_base * (2 ** (attempt - 1)) / 1000.0)
        raise InferenceError("unavailable", last_error)

    @staticmethod
    def _error_body(resp) -> tuple[str, str]:
        try:
            obj = resp.json()
            return str(obj.get("code", "unknown")), str(obj.get("message", ""))
        except ValueError:
            return "unknown", resp.text[:200]

    @staticmethod
    def _map_code(code: str) -> str:
        return {"too_long": "prompt_too_long"}.get(code, code)

    def _translate_once(self, text, src, tgt, top_p):
        payload = self._post("/v1/translate",
                             {"text": text, "src": str(src), "tgt": str(tgt), "top_p": top_p},
                             role="translate")
        return payload.get("text", "")

    def _generate_once(self, prompt, mode, top_p):
        body = {"prompt": prompt, "mode": mode}
        if mode != "greedy":
            body["top_p"] = top_p
        payload = self._post("/v1/generate", body, role="generate")
        return payload.get("text", "")

    def _lid_once(self, text):
        payload = self._post("/v1/lid", {"text": text}, role="lid")
        try:
            tag = LanguageTag.parse(payload["lang"])
            conf = float(payload["confidence"])
        except (KeyError, ValueError) as exc:
            raise InferenceError("bad_response", f"lid: {exc}") from exc
        return tag, conf

    def _screen_once(self, text):
        payload = self._post("/v1/screen", {"text": text}, role="screen")
        try:
            score = float(payload["score"])
        except (KeyError, ValueError) as exc:
            raise InferenceError("bad_response", f"screen: {exc}") from exc
        return make_screen_verdict(score, self.screen_threshold)
