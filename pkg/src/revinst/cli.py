"""Command-line entry point wiring the stages into runnable commands.

Commands: run, stats, diversity, review-sheet, dedup-only, adapt <source>,
validate. Exit codes: 0 success, 1 runtime failure (e.g. backends hard-down
in strict mode, validation failures), 2 invalid config or missing inputs.

The run command checkpoints each stage as JSONL (atomic write-then-rename);
rerunning with the same config resumes after the last completed stage.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import adapters, assembly, dedup, filters, ingest
from .inference import (
    HttpInferenceClient,
    InferenceClient,
    InferenceEndpointConfig,
    MockInferenceClient,
    RetryPolicy,
)
from .io_utils import atomic_write_text, iter_jsonl, write_jsonl_atomic
from .records import (
    STAGE_CONTENT_SCREEN,
    STAGE_DEDUP,
    STAGE_KEYWORD_FILTER,
    InstructionRecord,
    Source,
    Split,
    StageStatus,
    default_registry,
    iter_parse_jsonl,
    serialize_jsonl,
    validate_record,
)
from .reverse import ReverseInstructionGenerator

logger = logging.getLogger(__name__)

ROLES = ("translate", "generate", "lid", "screen")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    manifest: Path
    checkpoint_dir: Path
    run_seed: int = 0
    workers: int = 4
    mock: bool = False
    endpoints: dict = field(default_factory=dict)
    sample_size: int | None = None
    quality: ingest.QualityConfig = field(default_factory=ingest.QualityConfig)
    filters: filters.FilterConfig = field(default_factory=filters.FilterConfig)
    dedup: dedup.DedupParams = field(default_factory=dedup.DedupParams)
    split: assembly.SplitPlan = field(default_factory=assembly.SplitPlan)
    min_lid_confidence: float = 0.5
    max_prompt_chars: int = 8_000
    strict: bool = True
    strip_trace: bool = False
    extra_record_files: tuple[Path, ...] = ()


def load_run_config(path: Path, overrides: argparse.Namespace | None = None) -> RunConfig:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            obj = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc

    base = path.parent

    def resolve(p: str) -> Path:
        q = Path(p)
        return q if q.is_absolute() else (base / q).resolve()

    mock = bool(obj.get("mock", False))
    endpoints = dict(obj.get("endpoints", {}))
    # Environment overrides for endpoint URLs, e.g. REVINST_TRANSLATE_URL.
    for role in ROLES:
        env = os.environ.get(f"REVINST_{role.upper()}_URL")
        if env:
            endpoints.setdefault(role, {})["base_url"] = env

    if overrides is not None:
        if getattr(overrides, "mock", False):
            mock = True
        if getattr(overrides, "seed", None) is not None:
            obj["run_seed"] = overrides.seed
        if getattr(overrides, "workers", None) is not None:
            obj["workers"] = overrides.workers
        if getattr(overrides, "checkpoint_dir", None) is not None:
            obj["checkpoint_dir"] = str(overrides.checkpoint_dir)

    if mock and endpoints:
        raise ConfigError("mock mode and real endpoints are mutually exclusive")
    if not mock:
        missing = [r for r in ROLES if r not in endpoints or not endpoints[r].get("base_url")]
        if missing:
            raise ConfigError(f"missing endpoint config for roles: {', '.join(missing)} "
                              "(or set mock=true)")

    if "manifest" not in obj:
        raise ConfigError("config must name a corpus manifest")
    if "checkpoint_dir" not in obj:
        raise ConfigError("config must name a checkpoint_dir")

    try:
        quality = ingest.QualityConfig(**obj.get("quality_gate", {}))
        filter_cfg = filters.FilterConfig(
            **{k: tuple(v) if isinstance(v, list) else v
               for k, v in obj.get("filters", {}).items()})
        dedup_params = dedup.DedupParams(**obj.get("dedup", {}))
        split_obj = dict(obj.get("split", {}))
        if "ratios" in split_obj:
            split_obj["ratios"] = tuple(split_obj["ratios"])
        if "stratify_by" in split_obj:
            split_obj["stratify_by"] = tuple(split_obj["stratify_by"])
        split_plan = assembly.SplitPlan(seed=int(obj.get("run_seed", 0)), **split_obj)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config section: {exc}") from exc

    return RunConfig(
        manifest=resolve(obj["manifest"]),
        checkpoint_dir=resolve(obj["checkpoint_dir"]),
        run_seed=int(obj.get("run_seed", 0)),
        workers=max(1, int(obj.get("workers", 4))),
        mock=mock,
        endpoints=endpoints,
        sample_size=obj.get("sample_size"),
        quality=quality,
        filters=filter_cfg,
        dedup=dedup_params,
        split=split_plan,
        min_lid_confidence=float(obj.get("min_lid_confidence", 0.5)),
        max_prompt_chars=int(obj.get("max_prompt_chars", 8_000)),
        strict=bool(obj.get("strict", True)),
        strip_trace=bool(obj.get("strip_trace", False))
        or bool(getattr(overrides, "strip_trace", False)),
        extra_record_files=tuple(resolve(p) for p in obj.get("extra_record_files", [])),
    )


def build_client(cfg: RunConfig, role: str) -> InferenceClient:
    if cfg.mock:
        return MockInferenceClient(screen_threshold=cfg.filters.screen_threshold)
    e = cfg.endpoints[role]
    retry = e.get("retry", {})
    endpoint = InferenceEndpointConfig(
        base_url=e["base_url"],
        timeout_ms=int(e.get("timeout_ms", 30_000)),
        max_in_flight=int(e.get("max_in_flight", 4)),
        retry=RetryPolicy(int(retry.get("max_attempts", 3)),
                          int(retry.get("backoff_ms_base", 100))),
    )
    return HttpInferenceClient(endpoint, screen_threshold=cfg.filters.screen_threshold)


def _read_records(path: Path) -> list[InstructionRecord]:
    return list(iter_parse_jsonl(path.read_bytes()))


def _write_records(path: Path, records, strip_trace: bool = False) -> None:
    from .io_utils import atomic_write_bytes
    atomic_write_bytes(path, serialize_jsonl(records, strip_trace=strip_trace))


class PipelineRun:
    """Stage-granular execution with checkpoint resume."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.dir = cfg.checkpoint_dir
        self.paths = {
            "documents": self.dir / "01_documents.jsonl",
            "gate_drops": self.dir / "01_gate_drops.jsonl",
            "generated": self.dir / "02_generated.jsonl",
            "generated_drops": self.dir / "02_drops.jsonl",
            "filtered": self.dir / "03_filtered.jsonl",
            "filtered_drops": self.dir / "03_drops.jsonl",
            "noise": self.dir / "03_noise.json",
            "deduped": self.dir / "04_deduped.jsonl",
            "dedup_pairs": self.dir / "04_dropped_pairs.jsonl",
            "report": self.dir / "report.json",
        }
        self.release_dir = self.dir / "release"
        self.registry = default_registry()

    def _stage_done(self, *names: str) -> bool:
        return all(self.paths[n].exists() for n in names)

    def stage_ingest(self) -> None:
        if self._stage_done("documents", "gate_drops"):
            logger.info("ingest: checkpoint exists, skipping")
            return
        warnings: Counter = Counter()
        manifest = ingest.load_manifest(self.cfg.manifest)
        stream = ingest.stream_documents(manifest, self.registry, warnings)
        gate_drops = []
        passed = []
        streamed = 0
        for doc in stream:
            streamed += 1
            verdict = ingest.quality_gate(doc, self.cfg.quality)
            if verdict.passed:
                passed.append(doc)
            else:
                gate_drops.append({"id": doc.id, "reason": verdict.reason})
        if self.cfg.sample_size is not None:
            sampled = ingest.sample_documents(passed, self.cfg.sample_size,
                                              self.cfg.run_seed, manifest.quota_dict())
        else:
            sampled = passed
        not_sampled = len(passed) - len(sampled)
        meta = {"streamed": streamed, "not_sampled": not_sampled,
                "ingest_warnings": dict(warnings)}
        write_jsonl_atomic(self.paths["gate_drops"],
                           [{"_meta": meta}] + gate_drops)
        write_jsonl_atomic(self.paths["documents"],
                           [ingest.document_to_obj(d) for d in sampled])

    def stage_generate(self) -> None:
        if self._stage_done("generated", "generated_drops"):
            logger.info("generate: checkpoint exists, skipping")
            return
        docs = [ingest.document_from_obj(obj) for _, obj in iter_jsonl(self.paths["documents"])]
        client = build_client(self.cfg, "translate")
        generator = ReverseInstructionGenerator(
            client,
            min_lid_confidence=self.cfg.min_lid_confidence,
            max_prompt_chars=self.cfg.max_prompt_chars,
            rng_seed=self.cfg.run_seed,
        )
        # Documents are independent; executor.map preserves input order.
        with ThreadPoolExecutor(max_workers=self.cfg.workers) as pool:
            outcomes = list(pool.map(generator.process, docs))
        survivors = [o.record for o in outcomes if o.record is not None]
        drops = [
            {"id": o.doc_id, "stage": o.drop_stage, "reason": o.drop_reason}
            for o in outcomes if o.record is None
        ]
        unavailable = [d for d in drops if d["reason"] and "unavailable" in d["reason"]]
        if self.cfg.strict and docs and not survivors and unavailable:
            raise BackendDownError(
                f"all {len(docs)} documents dropped, {len(unavailable)} with "
                "unavailable backends; checkpoints up to ingest are intact")
        write_jsonl_atomic(self.paths["generated_drops"], drops)
        _write_records(self.paths["generated"], survivors)

    def stage_filter(self) -> None:
        if self._stage_done("filtered", "filtered_drops"):
            logger.info("filter: checkpoint exists, skipping")
            return
        records = _read_records(self.paths["generated"])
        client = build_client(self.cfg, "screen")
        kept: list[InstructionRecord] = []
        dropped: list[InstructionRecord] = []
        for rec in records:
            inst_en = rec.trace.inst_en or rec.instruction
            verdict = filters.keyword_filter(inst_en, self.cfg.filters)
            if not verdict.passed:
                dropped.append(replace(rec, trace=rec.trace.with_stage(
                    STAGE_KEYWORD_FILTER, StageStatus.DROP, verdict.reason)))
                continue
            rec = replace(rec, trace=rec.trace.with_stage(STAGE_KEYWORD_FILTER,
                                                          StageStatus.PASS))
            doc_en = rec.trace.doc_en or rec.output
            verdict = filters.content_screen(client, inst_en, doc_en, self.cfg.filters)
            if not verdict.passed:
                dropped.append(replace(rec, trace=rec.trace.with_stage(
                    STAGE_CONTENT_SCREEN, StageStatus.DROP, verdict.reason,
                    client.model_id("screen"))))
                continue
            kept.append(replace(rec, trace=rec.trace.with_stage(
                STAGE_CONTENT_SCREEN, StageStatus.PASS, None,
                client.model_id("screen"))))
        if self.cfg.strict and records and not kept and all(
                r.trace.drop_entry() and r.trace.drop_entry().reason == "screen_unavailable"
                for r in dropped):
            raise BackendDownError("content screen unavailable for every record")
        if self.cfg.filters.noise_heuristics:
            scores = sorted(filters.structural_noise_score(r.output) for r in kept)
            summary = {
                "records": len(scores),
                "mean": round(sum(scores) / len(scores), 4) if scores else 0.0,
                "p90": round(scores[int(0.9 * (len(scores) - 1))], 4) if scores else 0.0,
                "over_half": sum(1 for s in scores if s >= 0.5),
            }
            atomic_write_text(self.paths["noise"],
                              json.dumps(summary, indent=2) + "\n")
        _write_records(self.paths["filtered"], kept)
        _write_records(self.paths["filtered_drops"], dropped)

    def stage_dedup(self) -> None:
        if self._stage_done("deduped", "dedup_pairs"):
            logger.info("dedup: checkpoint exists, skipping")
            return
        records = _read_records(self.paths["filtered"])
        for path in self.cfg.extra_record_files:
            records.extend(_read_records(path))
        retained, pairs = dedup.deduplicate(records, self.cfg.dedup)
        retained = [replace(r, trace=r.trace.with_stage(STAGE_DEDUP, StageStatus.PASS))
                    for r in retained]
        _write_records(self.paths["deduped"], retained)
        write_jsonl_atomic(self.paths["dedup_pairs"],
                           [{"kept_id": p.kept_id, "dropped_id": p.dropped_id,
                             "estimate": round(p.estimate, 6)} for p in pairs])

    def stage_assembly(self) -> None:
        split_paths = {s: self.release_dir / f"{s.value}.jsonl"
                       for s in (Split.TRAIN, Split.VALIDATION, Split.TEST)}
        if all(p.exists() for p in split_paths.values()) and self.paths["report"].exists():
            logger.info("assembly: release files exist, skipping")
            return
        records = _read_records(self.paths["deduped"])
        warnings: Counter = Counter()
        plan = assembly.SplitPlan(self.cfg.split.ratios, self.cfg.split.stratify_by,
                                  self.cfg.run_seed)
        assigned = assembly.assign_splits(records, plan, warnings)
        for split, path in split_paths.items():
            _write_records(path, [r for r in assigned if r.split is split],
                           strip_trace=self.cfg.strip_trace)
        stats = assembly.DatasetStats.from_records(assigned)
        atomic_write_text(self.release_dir / "stats.json",
                          json.dumps(stats.to_obj(), ensure_ascii=False, indent=2) + "\n")
        atomic_write_text(self.release_dir / "stats.txt", assembly.render_stats_table(stats))
        self._write_report(assigned, warnings)

    def _write_report(self, assigned, split_warnings: Counter) -> None:
        meta_line = next(iter_jsonl(self.paths["gate_drops"]))[1]
        meta = meta_line.get("_meta", {})
        gate_reasons: Counter = Counter()
        for _, obj in iter_jsonl(self.paths["gate_drops"]):
            if "_meta" in obj:
                continue
            gate_reasons[obj["reason"]] += 1
        stage_reasons: dict[str, Counter] = {}
        for _, obj in iter_jsonl(self.paths["generated_drops"]):
            stage_reasons.setdefault(obj["stage"], Counter())[obj["reason"]] += 1
        for rec in _read_records(self.paths["filtered_drops"]):
            entry = rec.trace.drop_entry()
            stage_reasons.setdefault(entry.stage, Counter())[entry.reason] += 1
        dedup_pairs = [obj for _, obj in iter_jsonl(self.paths["dedup_pairs"])]

        drops = {"quality_gate": dict(gate_reasons)}
        drops.update({stage: dict(reasons) for stage, reasons in sorted(stage_reasons.items())})
        drops[STAGE_DEDUP] = {"near_duplicate": len(dedup_pairs)}
        dropped_total = sum(sum(r.values()) for r in drops.values())

        noise = None
        if self.paths["noise"].exists():
            noise = json.loads(self.paths["noise"].read_text(encoding="utf-8"))

        report = {
            "ingested": meta.get("streamed", 0),
            "not_sampled": meta.get("not_sampled", 0),
            "ingest_warnings": meta.get("ingest_warnings", {}),
            "drops": drops,
            "dropped_total": dropped_total,
            "surviving": len(assigned),
            "splits": {s.value: sum(1 for r in assigned if r.split is s)
                       for s in (Split.TRAIN, Split.VALIDATION, Split.TEST)},
            "split_warnings": dict(split_warnings),
            "structural_noise": noise,
            "accounting_ok": meta.get("streamed", 0)
            == len(assigned) + dropped_total + meta.get("not_sampled", 0),
        }
        atomic_write_text(self.paths["report"],
                          json.dumps(report, ensure_ascii=False, indent=2) + "\n")

    def run(self) -> dict:
        self.dir.mkdir(parents=True, exist_ok=True)
        self.stage_ingest()
        self.stage_generate()
        self.stage_filter()
        self.stage_dedup()
        self.stage_assembly()
        with open(self.paths["report"], encoding="utf-8") as f:
            return json.load(f)


class BackendDownError(RuntimeError):
    pass


def cmd_run(args: argparse.Namespace) -> int:
    try:
        cfg = load_run_config(args.config, overrides=args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = PipelineRun(cfg).run()
    except BackendDownError as exc:
        print(f"error: backends down: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(report, indent=2))
    return EXIT_OK


def _load_records_arg(paths, what="records") -> list[InstructionRecord]:
    records = []
    for p in paths:
        path = Path(p)
        if not path.is_file():
            raise FileNotFoundError(f"{what} file not found: {path}")
        records.extend(_read_records(path))
    return records


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        records = _load_records_arg(args.records)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    bad = 0
    for rec in records:
        violations = validate_record(rec)
        if violations:
            bad += 1
            for v in violations:
                print(f"{rec.id}\t{v}")
    print(f"checked {len(records)} records, {bad} invalid", file=sys.stderr)
    return EXIT_OK if bad == 0 else EXIT_RUNTIME


def cmd_stats(args: argparse.Namespace) -> int:
    try:
        if args.counts:
            with open(args.counts, encoding="utf-8") as f:
                stats = assembly.DatasetStats.from_count_manifest(json.load(f))
        else:
            stats = assembly.DatasetStats.from_records(_load_records_arg(args.records))
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        atomic_write_text(Path(args.out),
                          json.dumps(stats.to_obj(), ensure_ascii=False, indent=2) + "\n")
    print(assembly.render_stats_table(stats), end="")
    return EXIT_OK


def cmd_diversity(args: argparse.Namespace) -> int:
    try:
        records = _load_records_arg(args.records)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = assembly.compute_diversity(records)
    text = json.dumps(report.to_obj(), ensure_ascii=False, indent=2)
    if args.out:
        atomic_write_text(Path(args.out), text + "\n")
    print(text)
    return EXIT_OK


def cmd_review_sheet(args: argparse.Namespace) -> int:
    try:
        records = _load_records_arg(args.records)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    warnings: Counter = Counter()
    sheet = assembly.export_review_sheet(records, per_lang=args.per_lang,
                                         seed=args.seed or 0,
                                         languages=args.languages, warnings=warnings)
    atomic_write_text(Path(args.out), sheet)
    print(f"wrote {args.out} ({sheet.count(chr(10)) - 1} rows)", file=sys.stderr)
    return EXIT_OK


def cmd_dedup_only(args: argparse.Namespace) -> int:
    try:
        records = _load_records_arg(args.records)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    params = dedup.DedupParams(threshold=args.threshold, perm_seed=args.seed or 0)
    retained, pairs = dedup.deduplicate(records, params)
    _write_records(Path(args.out), retained)
    write_jsonl_atomic(Path(args.pairs),
                       [{"kept_id": p.kept_id, "dropped_id": p.dropped_id,
                         "estimate": round(p.estimate, 6)} for p in pairs])
    print(json.dumps({"input": len(records), "retained": len(retained),
                      "dropped": len(pairs)}))
    return EXIT_OK


def cmd_adapt(args: argparse.Namespace) -> int:
    seed = args.seed or 0
    warnings: Counter = Counter()
    try:
        if args.source == "wikihow":
            articles = []
            for p in args.input:
                articles.extend(adapters.load_wikihow_articles(Path(p)))
            records = [adapters.render_wikihow(a, seed) for a in articles]
        elif args.source == "supnatinst":
            records = adapters.adapt_task_collection(
                [Path(p) for p in args.input], seed,
                translation_cap=args.translation_cap, other_cap=args.other_cap,
                warnings=warnings)
        elif args.source == "oasst":
            records = []
            for p in args.input:
                for _, obj in iter_jsonl(Path(p)):
                    records.extend(adapters.adapt_chat_tree(adapters.load_chat_tree(obj),
                                                            warnings))
        elif args.source == "xp3":
            rows = [obj for p in args.input for _, obj in iter_jsonl(Path(p))]
            records = adapters.adapt_prompt_rows(rows, Source.XP3, warnings)
        elif args.source == "flan":
            rows = (obj for p in args.input for _, obj in iter_jsonl(Path(p)))
            records = adapters.adapt_instruction_rows(rows, seed, warnings=warnings)
        else:
            print(f"error: unknown adapter source {args.source}", file=sys.stderr)
            return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write_records(Path(args.out), records)
    print(json.dumps({"records": len(records), "warnings": dict(warnings)}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="revinst",
                                     description="Reverse-instruction data pipeline")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute the full pipeline from a config file")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--seed", type=int)
    p.add_argument("--mock", action="store_true")
    p.add_argument("--workers", type=int)
    p.add_argument("--checkpoint-dir", type=Path)
    p.add_argument("--strip-trace", action="store_true",
                   help="omit traces from release files (compact export)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("validate", help="validate record files")
    p.add_argument("records", nargs="+")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="composition statistics")
    p.add_argument("records", nargs="*")
    p.add_argument("--counts", help="count manifest JSON instead of record files")
    p.add_argument("--out", help="write stats JSON here")
    p.add_argument("--seed", type=int, help="accepted for interface uniformity")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("diversity", help="linguistic diversity report")
    p.add_argument("records", nargs="+")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, help="accepted for interface uniformity")
    p.set_defaults(func=cmd_diversity)

    p = sub.add_parser("review-sheet", help="export a TSV sheet for annotators")
    p.add_argument("records", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--per-lang", type=int, default=30)
    p.add_argument("--seed", type=int)
    p.add_argument("--languages", nargs="*")
    p.set_defaults(func=cmd_review_sheet)

    p = sub.add_parser("dedup-only", help="near-duplicate elimination over record files")
    p.add_argument("records", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--pairs", required=True)
    p.add_argument("--threshold", type=float, default=dedup.DEFAULT_THRESHOLD)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_dedup_only)

    p = sub.add_parser("adapt", help="convert an auxiliary source into records")
    p.add_argument("source", choices=["wikihow", "supnatinst", "oasst", "xp3", "flan"])
    p.add_argument("--input", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--translation-cap", type=int,
                   default=adapters.TRANSLATION_INSTANCE_CAP,
                   help="per-task instance cap for translation-type tasks")
    p.add_argument("--other-cap", type=int, default=adapters.OTHER_INSTANCE_CAP,
                   help="pooled instance cap per non-translation task type")
    p.set_defaults(func=cmd_adapt)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
