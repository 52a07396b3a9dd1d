/**
 * The HTTP service: /v1/translate, /v1/generate, /v1/lid, /v1/screen, a
 * /v1/batch wrapper with per-item isolation, and /healthz with per-role
 * readiness. Requests never mutate server state, so replays are idempotent.
 */

import express, { Express, Request, Response } from "express";
import { BackendBinding, GatewayConfig, Role, ROLES } from "./config.js";
import { mockGenerate, mockLid, mockScreenScore, mockTranslate } from "./mock.js";

const TAG_RE = /^[a-z]{3}_[A-Z][a-z]{3}$/;

export interface Reply {
  status: number;
  body: Record<string, unknown>;
}

function bad(message: string): Reply {
  return { status: 400, body: { code: "bad_request", message } };
}

function tooLong(what: string, length: number, limit: number): Reply {
  return {
    status: 400,
    body: { code: "too_long", message: `${what} has ${length} chars, limit ${limit}` },
  };
}

function unready(role: Role, message: string): Reply {
  return { status: 503, body: { code: "unready", message: `${role}: ${message}` } };
}

async function forwardUpstream(
  binding: BackendBinding,
  path: string,
  body: Record<string, unknown>,
  timeoutMs: number,
): Promise<Reply> {
  const url = `${binding.upstreamUrl!.replace(/\/$/, "")}${path}`;
  try {
    const response = await fetch(url, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ ...body, model: binding.model, device: binding.device }),
      signal: AbortSignal.timeout(timeoutMs),
    });
    const payload = (await response.json()) as Record<string, unknown>;
    if (response.ok && payload.model_id === undefined) {
      payload.model_id = binding.model;
    }
    return { status: response.status, body: payload };
  } catch (err) {
    return unready(binding.role, `upstream unreachable: ${String(err)}`);
  }
}

export async function handleRole(
  role: Role,
  body: unknown,
  config: GatewayConfig,
): Promise<Reply> {
  if (typeof body !== "object" || body === null || Array.isArray(body)) {
    return bad("request body must be a JSON object");
  }
  const req = body as Record<string, unknown>;
  const binding = config.bindings[role];

  if (role === "translate") {
    const { text, src, tgt } = req;
    if (typeof text !== "string" || text.length === 0) return bad("text must be a nonempty string");
    if (typeof src !== "string" || !TAG_RE.test(src)) return bad("src must be a code_Script tag");
    if (typeof tgt !== "string" || !TAG_RE.test(tgt)) return bad("tgt must be a code_Script tag");
    if (src === tgt) return bad("src and tgt must differ");
    if (text.length > config.maxTextChars) return tooLong("text", text.length, config.maxTextChars);
    if (binding.mock) {
      return { status: 200, body: { text: mockTranslate(text, src, tgt), model_id: "mock-translate" } };
    }
    return forwardUpstream(binding, "/v1/translate", req, config.upstreamTimeoutMs);
  }

  if (role === "generate") {
    const { prompt, mode } = req;
    if (typeof prompt !== "string" || prompt.length === 0) return bad("prompt must be a nonempty string");
    if (mode !== undefined && mode !== "greedy" && mode !== "sample") {
      return bad("mode must be greedy or sample");
    }
    if (prompt.length > config.maxPromptChars) {
      return tooLong("prompt", prompt.length, config.maxPromptChars);
    }
    if (binding.mock) {
      return { status: 200, body: { text: mockGenerate(prompt), model_id: "mock-generate" } };
    }
    return forwardUpstream(binding, "/v1/generate", req, config.upstreamTimeoutMs);
  }

  // lid and screen share the single-text request shape.
  const { text } = req;
  if (typeof text !== "string" || text.length === 0) return bad("text must be a nonempty string");
  if (text.length > config.maxTextChars) return tooLong("text", text.length, config.maxTextChars);

  if (role === "lid") {
    if (binding.mock) {
      const { lang, confidence } = mockLid(text);
      return { status: 200, body: { lang, confidence, model_id: "mock-lid" } };
    }
    return forwardUpstream(binding, "/v1/lid", req, config.upstreamTimeoutMs);
  }

  if (binding.mock) {
    const score = mockScreenScore(text);
    const label = score >= config.screenThreshold ? "flagged" : "acceptable";
    return { status: 200, body: { label, score, model_id: "mock-screen" } };
  }
  return forwardUpstream(binding, "/v1/screen", req, config.upstreamTimeoutMs);
}

async function roleReadiness(binding: BackendBinding, timeoutMs: number): Promise<string> {
  if (binding.mock) {
    return "ready";
  }
  try {
    const url = `${binding.upstreamUrl!.replace(/\/$/, "")}/healthz`;
    const response = await fetch(url, { signal: AbortSignal.timeout(timeoutMs) });
    return response.ok ? "ready" : "unready";
  } catch {
    return "unready";
  }
}

export function buildApp(config: GatewayConfig): Express {
  const app = express();
  app.use(express.json({ limit: "16mb" }));

  // Malformed JSON bodies surface as bad_request, not a stack trace.
  app.use((err: Error, _req: Request, res: Response, next: (e?: Error) => void) => {
    if (err instanceof SyntaxError) {
      res.status(400).json({ code: "bad_request", message: "malformed JSON body" });
      return;
    }
    next(err);
  });

  for (const role of ROLES) {
    app.post(`/v1/${role}`, async (req, res) => {
      const reply = await handleRole(role, req.body, config);
      res.status(reply.status).json(reply.body);
    });
  }

  app.post("/v1/batch", async (req, res) => {
    const body = req.body as Record<string, unknown>;
    const role = body?.role;
    if (typeof role !== "string" || !ROLES.includes(role as Role)) {
      res.status(400).json({ code: "bad_request", message: "role must name a model role" });
      return;
    }
    const items = body.items;
    if (!Array.isArray(items)) {
      res.status(400).json({ code: "bad_request", message: "items must be an array" });
      return;
    }
    // One failing item yields one error entry, never a batch failure.
    const replies = await Promise.all(
      items.map((item) => handleRole(role as Role, item, config)),
    );
    const out = replies.map((reply) =>
      reply.status === 200
        ? reply.body
        : { error: { code: reply.body.code, message: reply.body.message } },
    );
    res.status(200).json({ items: out });
  });

  app.get("/healthz", async (_req, res) => {
    const roles: Record<string, string> = {};
    await Promise.all(
      ROLES.map(async (role) => {
        roles[role] = await roleReadiness(config.bindings[role], 1_000);
      }),
    );
    const allReady = Object.values(roles).every((state) => state === "ready");
    res.status(200).json({ status: allReady ? "ok" : "degraded", roles });
  });

  app.use((_req, res) => {
    res.status(404).json({ code: "bad_request", message: "unknown endpoint" });
  });

  return app;
}
