/** Entry point: `node dist/server.js --mock --port 8080` or `--config gateway.json`. */

import { loadConfig, mockConfig } from "./config.js";
import { buildApp } from "./service.js";

function parseArgs(argv: string[]): { configPath?: string; mock: boolean; port: number } {
  const out = { configPath: undefined as string | undefined, mock: false, port: 8080 };
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--config" && argv[i + 1]) {
      out.configPath = argv[++i];
    } else if (arg === "--mock") {
      out.mock = true;
    } else if (arg === "--port" && argv[i + 1]) {
      out.port = parseInt(argv[++i], 10);
    } else {
      console.error(`unknown argument: ${arg}`);
      console.error("usage: server --mock [--port N] | --config gateway.json [--port N]");
      process.exit(2);
    }
  }
  if (!out.mock && !out.configPath) {
    console.error("either --mock or --config is required");
    process.exit(2);
  }
  if (out.mock && out.configPath) {
    console.error("--mock and --config are mutually exclusive");
    process.exit(2);
  }
  return out;
}

const args = parseArgs(process.argv.slice(2));
const config = args.mock ? mockConfig() : loadConfig(args.configPath!);
const app = buildApp(config);
app.listen(args.port, () => {
  console.log(`gateway listening on :${args.port} (${args.mock ? "mock" : "configured"} mode)`);
});
