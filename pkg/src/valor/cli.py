"""Command-line front end.

Subcommands: stats, select, evaluate, correlate, compare-chair, report.
Exit codes: 0 success, 2 input error, 3 too many per-item failures,
64 usage or configuration error.  Option precedence is flags over config
file over built-in defaults.  Every run writes a manifest recording the
resolved config, input content hashes, artifact paths, and timing; under a
replay fixture the artifact files themselves are byte-reproducible.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .agent import (
    Agent,
    AgentTransportError,
    DecodingParams,
    PayloadError,
    RemoteBackend,
    ReplayBackend,
    ReplayMissError,
    ResponseCache,
)
from .cooccur import Kind, Statistic, count_frequencies, probabilities_by_object, run_selection, skew_metrics
from .corpus import (
    CANONICAL_PROMPTS,
    BenchmarkItem,
    CaptionRecord,
    Category,
    LoadError,
    ObjectFeature,
    feature_to_obj,
    load_benchmark,
    load_captions,
    load_judgments,
    load_scene_graph,
)
from .features import (
    ExtractedFeatureSet,
    MatchResult,
    expand_comparative,
    extract_features,
    match_features,
)
from .metrics import (
    ItemScore,
    ScoreCounts,
    SynonymTable,
    acc_c,
    acc_f,
    aggregate,
    caption_to_vocab_words,
    chair_scores,
    pearson,
    render_report_table,
    score_pair,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_TOO_MANY_FAILURES = 3
EXIT_USAGE = 64

_KIND_TO_CATEGORY = {
    Kind.OBJECT_OBJECT: Category.OBJECT_EXISTENCE,
    Kind.OBJECT_ATTRIBUTE: Category.ATTRIBUTE_OBJECT,
    Kind.OBJECT_RELATION: Category.RELATION_POSITIONAL,
}


class UsageError(Exception):
    """Bad flags or an inconsistent resolved configuration."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse contract
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


@dataclass
class RunConfig:
    out_dir: str = "valor_out"
    cache_dir: str | None = None
    replay: str | None = None
    parallelism: int = 4
    category: str | None = None
    model_id: str = "gpt-4"
    temperature: float = 0.0
    max_tokens: int = 1024
    endpoint: str | None = None
    rate_limit: float | None = None
    kind: str = Kind.OBJECT_OBJECT.value
    statistic: str = Statistic.FREQUENCY.value
    k: int = 10
    m: int = 3
    min_support: int = 5
    fail_threshold: float = 0.1
    clamp_acc_f: bool = True
    persist: bool = True
    use_cache: bool = True


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """defaults < config file < explicit flags."""
    config = RunConfig()
    field_names = {f.name for f in dataclasses.fields(RunConfig)}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise LoadError(f"config file not found: {path}")
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise LoadError(f"invalid JSON in config {path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise LoadError(f"config {path} must be a JSON object")
        for key, value in doc.items():
            if key not in field_names:
                raise LoadError(f"unknown config key {key!r}")
            setattr(config, key, value)
    for name in field_names:
        value = getattr(args, name, None)
        if value is not None:
            setattr(config, name, value)
    if getattr(args, "no_cache", False):
        config.use_cache = False
    if getattr(args, "no_persist", False):
        config.persist = False
    if getattr(args, "no_clamp", False):
        config.clamp_acc_f = False

    if config.cache_dir is None:
        config.cache_dir = str(Path(config.out_dir) / "cache")
    if Path(config.cache_dir).resolve() == Path(config.out_dir).resolve():
        raise UsageError("cache directory must be distinct from the output directory")
    if config.parallelism < 1:
        raise UsageError("parallelism must be >= 1")
    if config.replay is not None and not Path(config.replay).exists():
        raise LoadError(f"replay fixture not found: {config.replay}")
    return config


def _build_agent(config: RunConfig) -> Agent:
    if config.replay:
        backend = ReplayBackend(config.replay)
    else:
        if not config.endpoint:
            raise UsageError("an --endpoint is required unless --replay is given")
        backend = RemoteBackend(config.endpoint)
    cache = None
    if config.use_cache:
        cache = ResponseCache(Path(config.cache_dir) / "responses.ndjson")
    return Agent(
        backend,
        cache=cache,
        parallelism=config.parallelism,
        rate_limit_per_s=config.rate_limit,
    )


# --- deterministic artifact helpers -------------------------------------------


def _write_json(path: Path, doc) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _write_ndjson(path: Path, records: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [json.dumps(r, sort_keys=True) for r in records]
    path.write_text("\n".join(lines) + ("\n" if lines else ""))


def _sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(
    config: RunConfig,
    command: str,
    inputs: dict[str, str],
    artifacts: dict[str, str],
    started: float,
) -> None:
    manifest = {
        "tool_version": __version__,
        "command": command,
        "config": dataclasses.asdict(config),
        "inputs": {name: _sha256_file(Path(p)) for name, p in inputs.items()},
        "input_paths": dict(inputs),
        "artifacts": artifacts,
        "timing": {
            "started_at": datetime.fromtimestamp(started, tz=timezone.utc).isoformat(),
            "wall_seconds": round(time.time() - started, 3),
        },
    }
    _write_json(Path(config.out_dir) / "manifest.json", manifest)


# --- stats / select --------------------------------------------------------------


def cmd_stats(args: argparse.Namespace) -> int:
    started = time.time()
    config = resolve_config(args)
    kind = Kind(config.kind)
    images = load_scene_graph(args.scene_graph)
    table = count_frequencies(images, kind)
    with_features = {o for (o, _) in table.pair_counts}
    doc = {
        "kind": kind.value,
        "object_counts": dict(sorted(table.object_counts.items())),
        "probabilities": probabilities_by_object(table),
        "skew": {
            obj: {
                "p_max": s.p_max,
                "p_avg": s.p_avg,
                "p_max_minus_avg": s.p_max_minus_avg,
                "p_avg_minus_min": s.p_avg_minus_min,
                "p_max_minus_min": s.p_max_minus_min,
            }
            for obj in sorted(with_features)
            for s in [skew_metrics(table, obj)]
        },
    }
    out = Path(config.out_dir)
    _write_json(out / "stats.json", doc)
    _write_manifest(config, "stats", {"scene_graph": args.scene_graph}, {"stats": "stats.json"}, started)
    print(out / "stats.json")
    return EXIT_OK


def cmd_select(args: argparse.Namespace) -> int:
    started = time.time()
    config = resolve_config(args)
    kind = Kind(config.kind)
    images = load_scene_graph(args.scene_graph)
    selection = run_selection(
        images, kind, Statistic(config.statistic), config.k, config.m, config.min_support
    )
    doc = {
        "head_objects": selection.head_objects,
        "rare_features": selection.rare_features,
        "strong_features": selection.strong_features,
        "candidates": [list(c) for c in selection.candidates],
    }
    out = Path(config.out_dir)
    _write_json(out / "selection.json", doc)

    # Annotation scaffold: one skeleton item per candidate image, ground
    # truth left for a human pass.
    category = _KIND_TO_CATEGORY[kind]
    by_image: dict[str, list[tuple[str, str]]] = {}
    for image_id, obj, feat in selection.candidates:
        by_image.setdefault(image_id, []).append((obj, feat))
    scaffold = {
        "items": [
            {
                "image_id": image_id,
                "image_path": "",
                "category": category.value,
                "prompt": CANONICAL_PROMPTS[category],
                "ground_truth": None,
                "candidate_pairs": [list(p) for p in pairs],
            }
            for image_id, pairs in sorted(by_image.items())
        ]
    }
    _write_json(out / "scaffold.json", scaffold)
    _write_manifest(
        config,
        "select",
        {"scene_graph": args.scene_graph},
        {"selection": "selection.json", "scaffold": "scaffold.json"},
        started,
    )
    print(out / "selection.json")
    return EXIT_OK


# --- evaluate ---------------------------------------------------------------------


@dataclass
class _PairOutcome:
    item: BenchmarkItem
    record: CaptionRecord
    extracted: ExtractedFeatureSet | None = None
    match: MatchResult | None = None
    score: ItemScore | None = None
    error_stage: str | None = None
    error: str | None = None


def _score_item(item: BenchmarkItem, extracted: ExtractedFeatureSet, match: MatchResult) -> ItemScore:
    if item.category is Category.RELATION_COMPARATIVE:
        gen_pairs, gt_pairs, pair_result = expand_comparative(
            item.ground_truth, extracted.features, match
        )
        if not gt_pairs:
            raise LoadError(f"{item.image_id}: comparative item needs at least two ranks")
        faith, cov, counts = score_pair(gen_pairs, gt_pairs, pair_result)
        empty = not gen_pairs
    else:
        faith, cov, counts = score_pair(extracted.features, item.ground_truth, match)
        empty = not extracted.features
    return ItemScore(
        image_id=item.image_id,
        model_name=extracted.model_name,
        category=item.category.value,
        faithfulness=faith,
        coverage=cov,
        counts=counts,
        empty_generated=empty,
    )


def _evaluate_pair(agent: Agent, config: RunConfig, item: BenchmarkItem, record: CaptionRecord) -> _PairOutcome:
    outcome = _PairOutcome(item, record)
    decoding = DecodingParams(config.temperature, config.max_tokens)
    try:
        outcome.extracted = extract_features(agent, item.category, record, config.model_id, decoding)
    except (PayloadError, ReplayMissError, AgentTransportError) as exc:
        outcome.error_stage, outcome.error = "extract", str(exc)
        return outcome
    try:
        outcome.match = match_features(
            agent, item.category, item.ground_truth, outcome.extracted, config.model_id, decoding
        )
    except (PayloadError, ReplayMissError, AgentTransportError) as exc:
        outcome.error_stage, outcome.error = "match", str(exc)
        return outcome
    try:
        outcome.score = _score_item(item, outcome.extracted, outcome.match)
    except (LoadError, ValueError) as exc:
        outcome.error_stage, outcome.error = "score", str(exc)
    return outcome


def _score_record(score: ItemScore) -> dict:
    return {
        "image_id": score.image_id,
        "model": score.model_name,
        "category": score.category,
        "faithfulness": score.faithfulness,
        "coverage": score.coverage,
        "empty_generated": score.empty_generated,
        "counts": dataclasses.asdict(score.counts),
    }


def _report_doc(scores: list[ItemScore], failures: list[dict]) -> dict:
    reports = aggregate(scores)
    return {
        "models": {
            r.model_name: {
                "categories": {
                    cat: {
                        "n_items": cell.n_items,
                        "n_empty_generated": cell.n_empty_generated,
                        "faithfulness": cell.faithfulness_mean,
                        "coverage": cell.coverage_mean,
                        "faithfulness_pct": cell.faithfulness_pct,
                        "coverage_pct": cell.coverage_pct,
                    }
                    for cat, cell in sorted(r.cells.items())
                },
                "missing_categories": r.missing_categories,
                "average_faithfulness_pct": r.average_faithfulness_pct,
                "average_coverage_pct": r.average_coverage_pct,
            }
            for r in reports
        },
        "n_scored": len(scores),
        "n_failures": len(failures),
        "failures": failures,
    }


def cmd_evaluate(args: argparse.Namespace) -> int:
    started = time.time()
    config = resolve_config(args)
    items = load_benchmark(args.benchmark)
    if config.category:
        wanted = Category(config.category)
        items = [i for i in items if i.category is wanted]
    captions = load_captions(args.captions)
    agent = _build_agent(config)

    by_image: dict[str, list[CaptionRecord]] = {}
    for record in captions:
        by_image.setdefault(record.image_id, []).append(record)
    pairs = [
        (item, record)
        for item in items
        for record in sorted(by_image.get(item.image_id, []), key=lambda r: r.model_name)
    ]
    if not pairs:
        # An empty join is a legal (if useless) run: empty report, success.
        logger.warning("no (item, caption) pairs to evaluate")

    with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
        outcomes = list(pool.map(lambda p: _evaluate_pair(agent, config, *p), pairs))
    outcomes.sort(key=lambda o: (o.item.category.value, o.item.image_id, o.record.model_name))

    scores = [o.score for o in outcomes if o.score is not None]
    failures = [
        {
            "image_id": o.item.image_id,
            "model": o.record.model_name,
            "category": o.item.category.value,
            "stage": o.error_stage,
            "error": o.error,
        }
        for o in outcomes
        if o.error is not None
    ]

    out = Path(config.out_dir)
    artifacts = {"report": "report.json", "table": "report.txt", "scores": "item_scores.ndjson"}
    if config.persist:
        _write_ndjson(
            out / "extracted.ndjson",
            [
                {
                    "image_id": o.extracted.image_id,
                    "model": o.extracted.model_name,
                    "category": o.extracted.category.value,
                    "features": [feature_to_obj(f) for f in o.extracted.features],
                    "raw_text": o.extracted.raw_text,
                }
                for o in outcomes
                if o.extracted is not None
            ],
        )
        _write_ndjson(
            out / "matches.ndjson",
            [
                {
                    "image_id": o.item.image_id,
                    "model": o.record.model_name,
                    "category": o.item.category.value,
                    "matched": [
                        {"key": feature_to_obj(k), "value": feature_to_obj(v)}
                        for k, v in o.match.matched.items()
                    ],
                    "broader": [
                        {"key": feature_to_obj(k), "value": feature_to_obj(v)}
                        for k, v in o.match.broader.items()
                    ],
                    "audit": [dataclasses.asdict(a) for a in o.match.audit],
                }
                for o in outcomes
                if o.match is not None
            ],
        )
        artifacts["extracted"] = "extracted.ndjson"
        artifacts["matches"] = "matches.ndjson"
    _write_ndjson(out / "item_scores.ndjson", [_score_record(s) for s in scores])
    report = _report_doc(scores, failures)
    _write_json(out / "report.json", report)
    (out / "report.txt").write_text(render_report_table(aggregate(scores)))
    _write_manifest(
        config,
        "evaluate",
        {"benchmark": args.benchmark, "captions": args.captions},
        artifacts,
        started,
    )
    print(render_report_table(aggregate(scores)), end="")

    failure_fraction = len(failures) / len(outcomes) if outcomes else 0.0
    if failure_fraction > config.fail_threshold:
        print(
            f"{len(failures)}/{len(outcomes)} items failed "
            f"(threshold {config.fail_threshold:.0%})",
            file=sys.stderr,
        )
        return EXIT_TOO_MANY_FAILURES
    return EXIT_OK


# --- report (re-aggregate persisted scores) ------------------------------------------


def _load_scores(path: str) -> list[ItemScore]:
    source = Path(path)
    if not source.exists():
        raise LoadError(f"scores file not found: {source}")
    scores: list[ItemScore] = []
    for lineno, line in enumerate(source.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            scores.append(
                ItemScore(
                    image_id=raw["image_id"],
                    model_name=raw["model"],
                    category=raw["category"],
                    faithfulness=float(raw["faithfulness"]),
                    coverage=float(raw["coverage"]),
                    counts=ScoreCounts(**raw["counts"]),
                    empty_generated=bool(raw.get("empty_generated", False)),
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise LoadError(f"{source}:{lineno}: malformed score record") from exc
    return scores


def cmd_report(args: argparse.Namespace) -> int:
    started = time.time()
    config = resolve_config(args)
    scores = _load_scores(args.scores)
    out = Path(config.out_dir)
    _write_json(out / "report.json", _report_doc(scores, []))
    (out / "report.txt").write_text(render_report_table(aggregate(scores)))
    _write_manifest(
        config,
        "report",
        {"scores": args.scores},
        {"report": "report.json", "table": "report.txt"},
        started,
    )
    print(render_report_table(aggregate(scores)), end="")
    return EXIT_OK


# --- correlate -----------------------------------------------------------------------


def cmd_correlate(args: argparse.Namespace) -> int:
    started = time.time()
    config = resolve_config(args)
    scores = _load_scores(args.scores)
    judgments = load_judgments(args.judgments)
    judged = {(j.image_id, j.model_name): j for j in judgments}

    per_category: dict[str, dict] = {}
    skipped: list[str] = []
    for category in Category:
        joined = [
            (s, judged[(s.image_id, s.model_name)])
            for s in scores
            if s.category == category.value and (s.image_id, s.model_name) in judged
        ]
        if len(joined) < 2:
            skipped.append(category.value)
            logger.warning(
                "category %s has %d joined points; correlation omitted",
                category.value,
                len(joined),
            )
            continue
        machine_f = [s.faithfulness for s, _ in joined]
        human_f = [j.faithfulness for _, j in joined]
        machine_c = [s.coverage for s, _ in joined]
        human_c = [j.coverage for _, j in joined]
        try:
            rho_f = pearson(machine_f, human_f)
            rho_c = pearson(machine_c, human_c)
        except ValueError as exc:
            skipped.append(category.value)
            logger.warning("category %s correlation undefined: %s", category.value, exc)
            continue
        per_category[category.value] = {
            "n": len(joined),
            "faithfulness_rho": rho_f,
            "coverage_rho": rho_c,
        }

    doc = {"categories": per_category, "skipped": sorted(skipped)}
    out = Path(config.out_dir)
    _write_json(out / "correlation.json", doc)
    _write_manifest(
        config,
        "correlate",
        {"scores": args.scores, "judgments": args.judgments},
        {"correlation": "correlation.json"},
        started,
    )
    print(out / "correlation.json")
    return EXIT_OK


# --- compare-chair ----------------------------------------------------------------------


def _load_annotations(path: str) -> dict[tuple[str, str], dict]:
    source = Path(path)
    if not source.exists():
        raise LoadError(f"annotations file not found: {source}")
    out: dict[tuple[str, str], dict] = {}
    for lineno, line in enumerate(source.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            key = (str(raw["image_id"]), str(raw["model"]))
            out[key] = {
                "true_hallucinated": [str(w) for w in raw["true_hallucinated"]],
                "mentioned": [str(w) for w in raw["mentioned"]],
            }
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise LoadError(f"{source}:{lineno}: malformed annotation record") from exc
    return out


def cmd_compare_chair(args: argparse.Namespace) -> int:
    started = time.time()
    config = resolve_config(args)
    table = SynonymTable.from_file(args.synonyms) if args.synonyms else SynonymTable.bundled()
    items = [i for i in load_benchmark(args.benchmark) if i.category is Category.OBJECT_EXISTENCE]
    captions = load_captions(args.captions)
    annotations = _load_annotations(args.annotations)
    agent = _build_agent(config)
    decoding = DecodingParams(config.temperature, config.max_tokens)

    def canon(words) -> set[str]:
        return {table.canonical(w) or w for w in (str(x).strip().lower() for x in words)}

    gt_by_image = {i.image_id: i for i in items}
    rows: dict[str, dict[str, list[float]]] = {}
    failures: list[dict] = []
    for record in captions:
        item = gt_by_image.get(record.image_id)
        key = (record.image_id, record.model_name)
        if item is None or key not in annotations:
            logger.warning("skipping %s: no benchmark item or annotation", key)
            continue
        gt_names = [f.object for f in item.ground_truth if isinstance(f, ObjectFeature)]
        truth = canon(annotations[key]["true_hallucinated"])
        mentioned = canon(annotations[key]["mentioned"])

        chair = chair_scores(caption_to_vocab_words(record.caption, table), gt_names, table)
        try:
            extracted = extract_features(agent, Category.OBJECT_EXISTENCE, record, config.model_id, decoding)
            match = match_features(
                agent, Category.OBJECT_EXISTENCE, item.ground_truth, extracted, config.model_id, decoding
            )
        except (PayloadError, ReplayMissError, AgentTransportError) as exc:
            failures.append({"image_id": record.image_id, "model": record.model_name, "error": str(exc)})
            continue
        matched_keys = set(match.matched) | set(match.broader)
        pipe_names = [f.object for f in extracted.features if isinstance(f, ObjectFeature)]
        pipe_detected = canon(f.object for f in extracted.features if f not in matched_keys)
        faith, cov, _ = score_pair(extracted.features, item.ground_truth, match)

        bucket = rows.setdefault(
            record.model_name,
            {
                "chair_faithfulness": [], "chair_coverage": [], "chair_acc_f": [], "chair_acc_c": [],
                "pipeline_faithfulness": [], "pipeline_coverage": [], "pipeline_acc_f": [], "pipeline_acc_c": [],
            },
        )
        bucket["chair_faithfulness"].append(chair.faithfulness)
        bucket["chair_coverage"].append(chair.coverage)
        bucket["chair_acc_f"].append(acc_f(chair.hallucinated, truth, config.clamp_acc_f))
        bucket["chair_acc_c"].append(acc_c(chair.detected, mentioned))
        bucket["pipeline_faithfulness"].append(faith)
        bucket["pipeline_coverage"].append(cov)
        bucket["pipeline_acc_f"].append(acc_f(pipe_detected, truth, config.clamp_acc_f))
        bucket["pipeline_acc_c"].append(acc_c(canon(pipe_names), mentioned))

    doc = {
        "models": {
            model: {metric: sum(values) / len(values) for metric, values in buckets.items()}
            for model, buckets in sorted(rows.items())
        },
        "failures": failures,
    }
    for model_doc in doc["models"].values():
        model_doc["acc_f_delta"] = model_doc["pipeline_acc_f"] - model_doc["chair_acc_f"]
        model_doc["acc_c_delta"] = model_doc["pipeline_acc_c"] - model_doc["chair_acc_c"]

    out = Path(config.out_dir)
    _write_json(out / "chair_comparison.json", doc)
    _write_manifest(
        config,
        "compare-chair",
        {"benchmark": args.benchmark, "captions": args.captions, "annotations": args.annotations},
        {"comparison": "chair_comparison.json"},
        started,
    )
    for model, metrics_doc in doc["models"].items():
        print(
            f"{model}: acc_f chair={metrics_doc['chair_acc_f']:.3f} "
            f"pipeline={metrics_doc['pipeline_acc_f']:.3f}; "
            f"acc_c chair={metrics_doc['chair_acc_c']:.3f} "
            f"pipeline={metrics_doc['pipeline_acc_c']:.3f}"
        )
    return EXIT_OK


# --- parser -------------------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override it")
    parser.add_argument("--out", dest="out_dir", help="output directory (default valor_out)")
    parser.add_argument("--cache-dir", dest="cache_dir", help="response cache directory")
    parser.add_argument("--no-cache", action="store_true", help="disable the response cache")
    parser.add_argument("--replay", help="replay fixture; run fully offline")
    parser.add_argument("--parallelism", type=_positive_int, help="max in-flight agent calls")
    parser.add_argument(
        "--category", choices=[c.value for c in Category], help="restrict to one category"
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging")


def _add_agent_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--endpoint", help="chat-completion endpoint URL")
    parser.add_argument("--model-id", dest="model_id", help="judge model identifier")
    parser.add_argument("--temperature", type=float, help="decoding temperature (default 0)")
    parser.add_argument("--max-tokens", dest="max_tokens", type=_positive_int)
    parser.add_argument("--rate-limit", dest="rate_limit", type=float, help="requests per second")


def build_parser() -> _Parser:
    parser = _Parser(prog="valor", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", parents=[], help="co-occurrence statistics export")
    _add_common(p)
    p.add_argument("--scene-graph", required=True)
    p.add_argument("--kind", choices=[k.value for k in Kind])
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("select", help="head objects, rare/strong features, candidate images")
    _add_common(p)
    p.add_argument("--scene-graph", required=True)
    p.add_argument("--kind", choices=[k.value for k in Kind])
    p.add_argument("--statistic", choices=[s.value for s in Statistic])
    p.add_argument("--k", type=_positive_int, help="head objects to keep")
    p.add_argument("--m", type=_positive_int, help="rare/strong features per object")
    p.add_argument("--min-support", dest="min_support", type=_positive_int)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("evaluate", help="two-stage agent evaluation of captions")
    _add_common(p)
    _add_agent_flags(p)
    p.add_argument("--benchmark", required=True)
    p.add_argument("--captions", required=True)
    p.add_argument("--fail-threshold", dest="fail_threshold", type=float)
    p.add_argument("--no-persist", action="store_true", help="skip intermediate artifacts")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("correlate", help="Pearson correlation against human judgments")
    _add_common(p)
    p.add_argument("--scores", required=True, help="item_scores.ndjson from evaluate")
    p.add_argument("--judgments", required=True)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("compare-chair", help="closed-vocabulary baseline vs the agent pipeline")
    _add_common(p)
    _add_agent_flags(p)
    p.add_argument("--benchmark", required=True)
    p.add_argument("--captions", required=True)
    p.add_argument("--synonyms", help="synonym table TSV (default: bundled)")
    p.add_argument("--annotations", required=True, help="true hallucination / mention sets")
    p.add_argument("--no-clamp", action="store_true", help="allow negative detection accuracy")
    p.set_defaults(func=cmd_compare_chair)

    p = sub.add_parser("report", help="re-aggregate persisted item scores")
    _add_common(p)
    p.add_argument("--scores", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LoadError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
