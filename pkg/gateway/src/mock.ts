/**
 * Deterministic mock backends. Responses must stay byte-identical to the
 * pipeline's in-process mock for identical requests; both sides are pinned by
 * the golden files under contracts/inference_v1.
 */

import { REGISTRY_PAIRS } from "./language_registry.js";

export const LID_FAULT_MARKER = "LID_FAULT";
export const SCREEN_TRIGGER = "TRIGGER_HATE";

const MT_TAG_RE = /\[MT:([a-z]{3})→([a-z]{3})\]/;
const ANSWER_RE = /answer:[ \t]*(.*)/gi;

const primaryScript = new Map<string, string>();
for (const [code, script] of REGISTRY_PAIRS) {
  if (!primaryScript.has(code)) {
    primaryScript.set(code, script);
  }
}

export function languageCode(tag: string): string {
  return tag.slice(0, 3);
}

export function primaryTag(code: string): string {
  return `${code}_${primaryScript.get(code) ?? "Latn"}`;
}

export function mockTranslate(text: string, srcTag: string, tgtTag: string): string {
  return `[MT:${languageCode(srcTag)}→${languageCode(tgtTag)}] ${text}`;
}

export function mockGenerate(prompt: string): string {
  const matches: string[] = [];
  for (const m of prompt.matchAll(ANSWER_RE)) {
    const content = m[1].trim();
    if (content) {
      matches.push(content);
    }
  }
  const subject = matches.length > 0
    ? matches[matches.length - 1]
    : prompt.split("\n")[0].trim();
  return `What is ${subject}?`;
}

export function mockLid(text: string): { lang: string; confidence: number } {
  if (text.includes(LID_FAULT_MARKER)) {
    return { lang: "eng_Latn", confidence: 1.0 };
  }
  const m = MT_TAG_RE.exec(text);
  if (m) {
    return { lang: primaryTag(m[2]), confidence: 1.0 };
  }
  return { lang: "eng_Latn", confidence: 0.5 };
}

export function mockScreenScore(text: string): number {
  return text.includes(SCREEN_TRIGGER) ? 0.99 : 0.01;
}
