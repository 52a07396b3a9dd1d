/** Gateway configuration: one backend binding per model role. */

import { readFileSync } from "node:fs";

export const ROLES = ["translate", "generate", "lid", "screen"] as const;
export type Role = (typeof ROLES)[number];

export interface BackendBinding {
  role: Role;
  mock: boolean;
  /** Checkpoint identifier forwarded to the upstream; required when not mock. */
  model?: string;
  /** Upstream base URL implementing the same wire contract; required when not mock. */
  upstreamUrl?: string;
  /** Opaque device/profile hint forwarded to the upstream. */
  device?: string;
}

export interface GatewayConfig {
  bindings: Record<Role, BackendBinding>;
  screenThreshold: number;
  maxTextChars: number;
  maxPromptChars: number;
  upstreamTimeoutMs: number;
}

export function mockConfig(): GatewayConfig {
  const bindings = {} as Record<Role, BackendBinding>;
  for (const role of ROLES) {
    bindings[role] = { role, mock: true };
  }
  return {
    bindings,
    screenThreshold: 0.5,
    maxTextChars: 20_000,
    maxPromptChars: 100_000,
    upstreamTimeoutMs: 5_000,
  };
}

export function loadConfig(path: string): GatewayConfig {
  const raw = JSON.parse(readFileSync(path, "utf-8"));
  const config = mockConfig();
  if (typeof raw.screen_threshold === "number") config.screenThreshold = raw.screen_threshold;
  if (typeof raw.max_text_chars === "number") config.maxTextChars = raw.max_text_chars;
  if (typeof raw.max_prompt_chars === "number") config.maxPromptChars = raw.max_prompt_chars;
  if (typeof raw.upstream_timeout_ms === "number") config.upstreamTimeoutMs = raw.upstream_timeout_ms;

  const bindings = raw.bindings ?? {};
  const seen = new Set<string>();
  for (const role of ROLES) {
    const b = bindings[role];
    if (b === undefined) {
      throw new Error(`missing binding for role ${role}`);
    }
    if (seen.has(role)) {
      throw new Error(`duplicate binding for role ${role}`);
    }
    seen.add(role);
    const mock = Boolean(b.mock);
    if (!mock && (!b.model || !b.upstream_url)) {
      throw new Error(`non-mock binding for ${role} needs model and upstream_url`);
    }
    config.bindings[role] = {
      role,
      mock,
      model: b.model,
      upstreamUrl: b.upstream_url,
      device: b.device,
    };
  }
  const extra = Object.keys(bindings).filter((r) => !ROLES.includes(r as Role));
  if (extra.length > 0) {
    throw new Error(`unknown roles in bindings: ${extra.join(", ")}`);
  }
  return config;
}
