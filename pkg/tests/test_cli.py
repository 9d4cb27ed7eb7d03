import json
from pathlib import Path

import pytest

import oracles
from valor.agent import cache_key
from valor.cli import (
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_TOO_MANY_FAILURES,
    EXIT_USAGE,
    main,
)
from valor.corpus import (
    Category,
    bundled_benchmark_path,
    feature_from_obj,
    load_benchmark,
    load_captions,
)
from valor.features import MatchResult, expand_comparative, render_extraction_prompt
from valor.metrics import score_pair

GOLDEN_FILES = ["report.json", "report.txt", "item_scores.ndjson", "extracted.ndjson", "matches.ndjson"]


def run_evaluate(data_dir, out: Path, *extra: str) -> int:
    return main(
        [
            "evaluate",
            "--replay", str(data_dir / "replay_mini.ndjson"),
            "--benchmark", str(bundled_benchmark_path()),
            "--captions", str(data_dir / "mini_captions.ndjson"),
            "--out", str(out),
            *extra,
        ]
    )


# --- exit codes -----------------------------------------------------------------


def test_usage_errors_exit_64(tmp_path, capsys):
    assert main(["stats"]) == EXIT_USAGE  # missing required flag
    assert main(["no-such-command"]) == EXIT_USAGE
    assert main(["select", "--scene-graph", "x.json", "--k", "0"]) == EXIT_USAGE
    assert main(["evaluate", "--benchmark", "b", "--captions", "c", "--category", "bogus"]) == EXIT_USAGE
    capsys.readouterr()


def test_missing_input_exits_2(tmp_path):
    assert main(["stats", "--scene-graph", str(tmp_path / "absent.json")]) == EXIT_INPUT_ERROR


def test_missing_replay_fixture_exits_2(tmp_path, data_dir):
    rc = main(
        [
            "evaluate",
            "--replay", str(tmp_path / "absent.ndjson"),
            "--benchmark", str(bundled_benchmark_path()),
            "--captions", str(data_dir / "mini_captions.ndjson"),
            "--out", str(tmp_path / "out"),
        ]
    )
    assert rc == EXIT_INPUT_ERROR


def test_evaluate_without_endpoint_or_replay_is_usage_error(tmp_path, data_dir):
    rc = main(
        [
            "evaluate",
            "--benchmark", str(bundled_benchmark_path()),
            "--captions", str(data_dir / "mini_captions.ndjson"),
            "--out", str(tmp_path / "out"),
        ]
    )
    assert rc == EXIT_USAGE


def test_cache_dir_must_differ_from_out_dir(tmp_path, data_dir):
    out = tmp_path / "out"
    rc = run_evaluate(data_dir, out, "--cache-dir", str(out))
    assert rc == EXIT_USAGE


# --- config precedence ----------------------------------------------------------------


def test_flags_beat_config_file_beat_defaults(tmp_path, data_dir):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"parallelism": 8, "fail_threshold": 0.5}))
    out = tmp_path / "out"
    rc = run_evaluate(data_dir, out, "--config", str(config), "--parallelism", "2")
    assert rc == EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["parallelism"] == 2  # flag wins
    assert manifest["config"]["fail_threshold"] == 0.5  # config file wins
    assert manifest["config"]["model_id"] == "gpt-4"  # default survives


def test_unknown_config_key_is_input_error(tmp_path, data_dir):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"paralellism": 8}))
    rc = run_evaluate(data_dir, tmp_path / "out", "--config", str(config))
    assert rc == EXIT_INPUT_ERROR


def test_malformed_config_is_input_error(tmp_path, data_dir):
    config = tmp_path / "config.json"
    config.write_text("{broken")
    rc = run_evaluate(data_dir, tmp_path / "out", "--config", str(config))
    assert rc == EXIT_INPUT_ERROR


# --- stats / select ----------------------------------------------------------------------


def test_stats_exports_probabilities_and_skew(tmp_path, data_dir):
    out = tmp_path / "out"
    rc = main(
        ["stats", "--scene-graph", str(data_dir / "scene_graph_surf.json"), "--out", str(out)]
    )
    assert rc == EXIT_OK
    doc = json.loads((out / "stats.json").read_text())
    assert doc["object_counts"] == {"sand": 1, "surfboard": 3, "wave": 2}
    assert doc["probabilities"]["surfboard"]["wave"] == 2 / 3
    assert doc["skew"]["surfboard"]["p_max"] == 2 / 3
    assert doc["skew"]["surfboard"]["p_max_minus_min"] == 2 / 3 - 1 / 3


def test_select_reproduces_worked_example(tmp_path, data_dir):
    out = tmp_path / "out"
    rc = main(
        [
            "select",
            "--scene-graph", str(data_dir / "scene_graph_surf.json"),
            "--k", "1", "--m", "1", "--min-support", "1",
            "--out", str(out),
        ]
    )
    assert rc == EXIT_OK
    doc = json.loads((out / "selection.json").read_text())
    assert doc["head_objects"] == ["surfboard"]
    assert doc["rare_features"] == {"surfboard": ["sand"]}
    assert doc["strong_features"] == {"surfboard": ["wave"]}
    assert doc["candidates"] == [["img3", "surfboard", "sand"]]

    scaffold = json.loads((out / "scaffold.json").read_text())
    assert len(scaffold["items"]) == 1
    item = scaffold["items"][0]
    assert item["image_id"] == "img3"
    assert item["category"] == "object_existence"
    assert item["ground_truth"] is None
    assert item["candidate_pairs"] == [["surfboard", "sand"]]


def test_select_default_support_floor_excludes_small_fixture(tmp_path, data_dir):
    out = tmp_path / "out"
    rc = main(
        ["select", "--scene-graph", str(data_dir / "scene_graph_surf.json"), "--out", str(out)]
    )
    assert rc == EXIT_OK
    doc = json.loads((out / "selection.json").read_text())
    assert doc["head_objects"] == []  # every object appears in fewer than 5 images
    assert doc["candidates"] == []


# --- evaluate ---------------------------------------------------------------------------


def test_evaluate_matches_frozen_goldens(tmp_path, data_dir):
    out = tmp_path / "out"
    assert run_evaluate(data_dir, out, "--no-cache") == EXIT_OK
    for name in GOLDEN_FILES:
        produced = (out / name).read_bytes()
        frozen = (data_dir / "golden_mini" / name).read_bytes()
        assert produced == frozen, f"{name} diverged from the golden copy"


def test_evaluate_defaults_persist_and_use_cache(tmp_path, data_dir):
    out = tmp_path / "out"
    assert run_evaluate(data_dir, out) == EXIT_OK
    assert (out / "extracted.ndjson").exists()
    assert (out / "matches.ndjson").exists()
    assert (out / "cache" / "responses.ndjson").exists()
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["artifacts"]["extracted"] == "extracted.ndjson"
    assert manifest["tool_version"]
    for digest in manifest["inputs"].values():
        assert len(digest) == 64


def test_evaluate_no_persist_skips_intermediates(tmp_path, data_dir):
    out = tmp_path / "out"
    assert run_evaluate(data_dir, out, "--no-persist", "--no-cache") == EXIT_OK
    assert not (out / "extracted.ndjson").exists()
    assert not (out / "matches.ndjson").exists()
    assert (out / "report.json").exists()
    assert (out / "item_scores.ndjson").exists()


def test_evaluate_warm_cache_reproduces_output(tmp_path, data_dir):
    cache_dir = tmp_path / "shared_cache"
    out1, out2 = tmp_path / "out1", tmp_path / "out2"
    assert run_evaluate(data_dir, out1, "--cache-dir", str(cache_dir)) == EXIT_OK
    assert run_evaluate(data_dir, out2, "--cache-dir", str(cache_dir)) == EXIT_OK
    for name in GOLDEN_FILES:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_evaluate_category_filter(tmp_path, data_dir):
    out = tmp_path / "out"
    rc = run_evaluate(data_dir, out, "--category", "object_existence", "--no-cache")
    assert rc == EXIT_OK
    lines = (out / "item_scores.ndjson").read_text().splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0])["image_id"] == "b1"


def test_evaluate_failure_threshold(tmp_path, data_dir):
    # Drop b1's extraction answer from the fixture: 1 of 5 items fails, which
    # exceeds the default 10% threshold.
    items = {i.image_id: i for i in load_benchmark(bundled_benchmark_path())}
    records = {r.image_id: r for r in load_captions(data_dir / "mini_captions.ndjson")}
    b1_digest = cache_key(
        render_extraction_prompt(items["b1"].category, records["b1"].caption)
    )
    kept = [
        line
        for line in (data_dir / "replay_mini.ndjson").read_text().splitlines()
        if json.loads(line)["digest"] != b1_digest
    ]
    fixture = tmp_path / "partial_replay.ndjson"
    fixture.write_text("\n".join(kept) + "\n")

    out = tmp_path / "out"
    rc = main(
        [
            "evaluate",
            "--replay", str(fixture),
            "--benchmark", str(bundled_benchmark_path()),
            "--captions", str(data_dir / "mini_captions.ndjson"),
            "--out", str(out),
            "--no-cache",
        ]
    )
    assert rc == EXIT_TOO_MANY_FAILURES
    report = json.loads((out / "report.json").read_text())
    assert report["n_failures"] == 1
    failure = report["failures"][0]
    assert failure["image_id"] == "b1" and failure["stage"] == "extract"

    # A looser threshold keeps the run successful.
    rc = main(
        [
            "evaluate",
            "--replay", str(fixture),
            "--benchmark", str(bundled_benchmark_path()),
            "--captions", str(data_dir / "mini_captions.ndjson"),
            "--out", str(tmp_path / "out2"),
            "--no-cache",
            "--fail-threshold", "0.5",
        ]
    )
    assert rc == EXIT_OK


def test_scores_recomputable_from_intermediates(data_dir):
    """Persisted extraction and match artifacts must be enough to rebuild
    every item score without consulting the agent again."""
    items = {i.image_id: i for i in load_benchmark(bundled_benchmark_path())}
    golden = data_dir / "golden_mini"
    extracted = {
        rec["image_id"]: rec
        for rec in map(json.loads, (golden / "extracted.ndjson").read_text().splitlines())
    }
    matches = {
        rec["image_id"]: rec
        for rec in map(json.loads, (golden / "matches.ndjson").read_text().splitlines())
    }
    for line in (golden / "item_scores.ndjson").read_text().splitlines():
        score = json.loads(line)
        image_id = score["image_id"]
        features = tuple(feature_from_obj(o) for o in extracted[image_id]["features"])
        result = MatchResult(
            matched={
                feature_from_obj(e["key"]): feature_from_obj(e["value"])
                for e in matches[image_id]["matched"]
            },
            broader={
                feature_from_obj(e["key"]): feature_from_obj(e["value"])
                for e in matches[image_id]["broader"]
            },
        )
        item = items[image_id]
        if item.category is Category.RELATION_COMPARATIVE:
            gen_pairs, gt_pairs, pair_result = expand_comparative(item.ground_truth, features, result)
            faith, cov, _ = score_pair(gen_pairs, gt_pairs, pair_result)
        else:
            faith, cov, _ = score_pair(features, item.ground_truth, result)
        assert faith == score["faithfulness"], image_id
        assert cov == score["coverage"], image_id


def test_evaluate_empty_captions_is_a_legal_empty_run(tmp_path, data_dir):
    captions = tmp_path / "captions.ndjson"
    captions.write_text("")
    out = tmp_path / "out"
    rc = main(
        [
            "evaluate",
            "--replay", str(data_dir / "replay_mini.ndjson"),
            "--benchmark", str(bundled_benchmark_path()),
            "--captions", str(captions),
            "--out", str(out),
            "--no-cache",
        ]
    )
    assert rc == EXIT_OK
    report = json.loads((out / "report.json").read_text())
    assert report["models"] == {}
    assert report["n_failures"] == 0
    assert (out / "item_scores.ndjson").read_text() == ""


def test_replay_run_never_builds_a_remote_backend(tmp_path, data_dir, monkeypatch):
    import valor.cli as cli_module

    def bomb(*args, **kwargs):
        raise AssertionError("remote backend constructed during a replay run")

    monkeypatch.setattr(cli_module, "RemoteBackend", bomb)
    assert run_evaluate(data_dir, tmp_path / "out", "--no-cache") == EXIT_OK


def test_stats_empty_dataset_is_a_legal_empty_export(tmp_path):
    graph = tmp_path / "empty.json"
    graph.write_text("{}")
    out = tmp_path / "out"
    assert main(["stats", "--scene-graph", str(graph), "--out", str(out)]) == EXIT_OK
    doc = json.loads((out / "stats.json").read_text())
    assert doc["object_counts"] == {} and doc["probabilities"] == {} and doc["skew"] == {}


# --- report -----------------------------------------------------------------------------


def test_report_reaggregates_scores(tmp_path, data_dir):
    out = tmp_path / "out"
    rc = main(
        ["report", "--scores", str(data_dir / "golden_mini" / "item_scores.ndjson"), "--out", str(out)]
    )
    assert rc == EXIT_OK
    produced = (out / "report.json").read_bytes()
    frozen = (data_dir / "golden_mini" / "report.json").read_bytes()
    assert produced == frozen
    assert (out / "report.txt").read_bytes() == (data_dir / "golden_mini" / "report.txt").read_bytes()


# --- correlate --------------------------------------------------------------------------


def test_correlate_joins_and_skips(tmp_path, data_dir):
    out = tmp_path / "out"
    rc = main(
        [
            "correlate",
            "--scores", str(data_dir / "scores_for_correlate.ndjson"),
            "--judgments", str(data_dir / "judgments_correlate.ndjson"),
            "--out", str(out),
        ]
    )
    assert rc == EXIT_OK
    doc = json.loads((out / "correlation.json").read_text())
    cell = doc["categories"]["object_existence"]
    assert cell["n"] == 4
    expected_f = oracles.reference_pearson([0.2, 0.4, 0.6, 0.8], [0.1, 0.5, 0.7, 0.9])
    expected_c = oracles.reference_pearson([0.25, 0.5, 0.75, 1.0], [0.3, 0.4, 0.8, 0.9])
    assert cell["faithfulness_rho"] == pytest.approx(expected_f, abs=1e-12)
    assert cell["coverage_rho"] == pytest.approx(expected_c, abs=1e-12)
    # attribute_object has a single joined point; the others have none.
    assert "attribute_object" in doc["skipped"]
    assert "object_existence" not in doc["skipped"]


def test_correlate_disjoint_ids_skips_everything(tmp_path, data_dir):
    judgments = tmp_path / "judgments.ndjson"
    judgments.write_text(
        json.dumps(
            {"image_id": "nowhere", "model": "m1", "faithfulness": 0.5, "coverage": 0.5}
        )
        + "\n"
    )
    out = tmp_path / "out"
    rc = main(
        [
            "correlate",
            "--scores", str(data_dir / "scores_for_correlate.ndjson"),
            "--judgments", str(judgments),
            "--out", str(out),
        ]
    )
    assert rc == EXIT_OK
    doc = json.loads((out / "correlation.json").read_text())
    assert doc["categories"] == {}
    assert "object_existence" in doc["skipped"]


# --- compare-chair ----------------------------------------------------------------------


def test_compare_chair_directional(tmp_path, data_dir):
    out = tmp_path / "out"
    rc = main(
        [
            "compare-chair",
            "--replay", str(data_dir / "replay_chair.ndjson"),
            "--benchmark", str(data_dir / "chair_benchmark.json"),
            "--captions", str(data_dir / "chair_captions.ndjson"),
            "--annotations", str(data_dir / "chair_annotations.ndjson"),
            "--out", str(out),
            "--no-cache",
        ]
    )
    assert rc == EXIT_OK
    doc = json.loads((out / "chair_comparison.json").read_text())
    row = doc["models"]["capgen"]
    assert row["pipeline_acc_f"] > row["chair_acc_f"]
    assert row["pipeline_acc_c"] > row["chair_acc_c"]
    assert row["acc_f_delta"] == pytest.approx(row["pipeline_acc_f"] - row["chair_acc_f"])
    assert doc["failures"] == []


def test_compare_chair_missing_synonym_table_is_input_error(tmp_path, data_dir):
    rc = main(
        [
            "compare-chair",
            "--replay", str(data_dir / "replay_chair.ndjson"),
            "--benchmark", str(data_dir / "chair_benchmark.json"),
            "--captions", str(data_dir / "chair_captions.ndjson"),
            "--annotations", str(data_dir / "chair_annotations.ndjson"),
            "--synonyms", str(tmp_path / "absent.tsv"),
            "--out", str(tmp_path / "out"),
        ]
    )
    assert rc == EXIT_INPUT_ERROR


def test_compare_chair_no_clamp_changes_only_clamping(tmp_path, data_dir):
    out = tmp_path / "out"
    rc = main(
        [
            "compare-chair",
            "--replay", str(data_dir / "replay_chair.ndjson"),
            "--benchmark", str(data_dir / "chair_benchmark.json"),
            "--captions", str(data_dir / "chair_captions.ndjson"),
            "--annotations", str(data_dir / "chair_annotations.ndjson"),
            "--out", str(out),
            "--no-cache",
            "--no-clamp",
        ]
    )
    assert rc == EXIT_OK
    doc = json.loads((out / "chair_comparison.json").read_text())
    # This fixture has no negative raw accuracies, so values are unchanged.
    assert doc["models"]["capgen"]["pipeline_acc_f"] == 1.0
