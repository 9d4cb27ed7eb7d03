import json

import pytest

from valor.corpus import (
    AnnotatedImage,
    AttributeObjectFeature,
    BenchmarkItem,
    CANONICAL_PROMPTS,
    Category,
    ComparativeFeature,
    CountFeature,
    ImageSource,
    LoadError,
    ObjectFeature,
    ObjectInstance,
    PeopleAttributeFeature,
    PositionalFeature,
    bundled_benchmark_path,
    category_counts,
    dump_benchmark,
    dump_captions,
    dump_scene_graph,
    feature_from_obj,
    feature_to_obj,
    load_benchmark,
    load_captions,
    load_judgments,
    load_scene_graph,
    singularize,
    validate_benchmark,
)


def test_singularize_strips_whitelisted_plurals_only():
    assert singularize("Waves") == "wave"
    assert singularize("bags") == "bag"
    assert singularize("grass") == "grass"  # not whitelisted
    assert singularize("bus") == "bus"
    assert singularize("  Dog ") == "dog"


def test_load_scene_graph_round_trip(tmp_path):
    doc = {
        "i1": {
            "objects": [
                {"name": "Dogs", "attributes": ["Brown"], "relations": [{"name": "On", "target": "couch"}]},
                {"name": "couch"},
            ]
        }
    }
    path = tmp_path / "sg.json"
    path.write_text(json.dumps(doc))
    images = load_scene_graph(path)
    assert images[0].object_names() == {"dog", "couch"}
    assert images[0].objects[0].attributes == ("brown",)
    assert images[0].objects[0].relations == (("on", "couch"),)

    reloaded = load_scene_graph_via_dump(tmp_path, images)
    assert reloaded == images


def load_scene_graph_via_dump(tmp_path, images):
    path = tmp_path / "dumped.json"
    path.write_text(json.dumps(dump_scene_graph(images)))
    return load_scene_graph(path)


def test_scene_graph_duplicate_relations_collapse(tmp_path):
    doc = {
        "i1": {
            "objects": [
                {
                    "name": "dog",
                    "relations": [
                        {"name": "on", "target": "couch"},
                        {"name": "on", "target": "couch"},
                    ],
                },
                {"name": "couch"},
            ]
        }
    }
    path = tmp_path / "sg.json"
    path.write_text(json.dumps(doc))
    images = load_scene_graph(path)
    assert images[0].objects[0].relations == (("on", "couch"),)


def test_scene_graph_relation_to_missing_object_named_in_error(tmp_path):
    doc = {"i1": {"objects": [{"name": "dog", "relations": [{"name": "on", "target": "mat"}]}]}}
    path = tmp_path / "sg.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(LoadError, match=r"i1\.objects\[0\]"):
        load_scene_graph(path)


def test_scene_graph_missing_file_and_bad_json(tmp_path):
    with pytest.raises(LoadError, match="not found"):
        load_scene_graph(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(LoadError, match="invalid JSON"):
        load_scene_graph(bad)


def test_bundled_benchmark_counts():
    items = load_benchmark(bundled_benchmark_path())
    counts = category_counts(items)
    assert all(counts[c] == 1 for c in Category)


def test_benchmark_ground_truth_shapes():
    items = {i.image_id: i for i in load_benchmark(bundled_benchmark_path())}
    assert items["b1"].ground_truth[0] == ObjectFeature("dog")
    b2 = items["b2"].ground_truth
    assert b2[0] == CountFeature(2, "bag")
    assert b2[2] == AttributeObjectFeature("white", "bag", ("pale",))
    assert set(b2[2].attribute_forms()) == {"white", "pale"}
    b3 = items["b3"].ground_truth
    assert b3[1] == PeopleAttributeFeature(1, "woman", (("red", "jacket"),))
    b5 = items["b5"].ground_truth
    assert b5[2] == ComparativeFeature(3, ("cup", "mug"))


def test_benchmark_rejects_noncontiguous_ranks(tmp_path):
    doc = {
        "items": [
            {
                "image_id": "x",
                "category": "relation_comparative",
                "ground_truth": {"1": ["bed"], "3": ["cup"]},
            }
        ]
    }
    path = tmp_path / "b.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(LoadError, match="contiguous"):
        load_benchmark(path)


def test_benchmark_rejects_empty_ground_truth(tmp_path):
    path = tmp_path / "b.json"
    path.write_text(json.dumps({"items": [{"image_id": "x", "category": "object_existence", "ground_truth": []}]}))
    with pytest.raises(LoadError, match="non-empty list"):
        load_benchmark(path)


def test_benchmark_prompt_override_flag(tmp_path):
    doc = {
        "items": [
            {
                "image_id": "x",
                "category": "object_existence",
                "ground_truth": ["dog"],
                "prompt": "Custom prompt.",
                "prompt_override": True,
            },
            {
                "image_id": "y",
                "category": "object_existence",
                "ground_truth": ["cat"],
                "prompt": "Sneaky custom prompt.",
            },
        ]
    }
    path = tmp_path / "b.json"
    path.write_text(json.dumps(doc))
    items = load_benchmark(path)
    report = validate_benchmark(items)
    flagged = [i.item_id for i in report.issues if i.severity == "warning"]
    assert flagged == ["y"]


def test_default_prompt_is_canonical():
    items = load_benchmark(bundled_benchmark_path())
    for item in items:
        assert item.prompt == CANONICAL_PROMPTS[item.category]
        assert not item.prompt_overridden


def test_validate_benchmark_structural_violations():
    bad_items = [
        BenchmarkItem("v1", "", Category.OBJECT_EXISTENCE, CANONICAL_PROMPTS[Category.OBJECT_EXISTENCE],
                      (CountFeature(-1, "dog"),)),
        BenchmarkItem("v2", "", Category.RELATION_COMPARATIVE, CANONICAL_PROMPTS[Category.RELATION_COMPARATIVE],
                      (ComparativeFeature(2, ("bed",)), ComparativeFeature(4, ("cup",)))),
        BenchmarkItem("v3", "", Category.ATTRIBUTE_PEOPLE, CANONICAL_PROMPTS[Category.ATTRIBUTE_PEOPLE],
                      (PeopleAttributeFeature(0, "man", (("red", "hat"),)),)),
    ]
    report = validate_benchmark(bad_items)
    violations = {i.item_id for i in report.issues if i.severity == "violation"}
    assert {"v1", "v2", "v3"} <= violations
    assert not report.is_empty()


def test_load_captions_rejects_duplicates(tmp_path):
    path = tmp_path / "c.ndjson"
    line = json.dumps({"image_id": "a", "model": "m", "caption": "x"})
    path.write_text(line + "\n" + line + "\n")
    with pytest.raises(LoadError, match="duplicate"):
        load_captions(path)


def test_load_judgments_bounds(tmp_path):
    path = tmp_path / "j.ndjson"
    path.write_text(json.dumps({"image_id": "a", "model": "m", "faithfulness": 1.5, "coverage": 0.5}) + "\n")
    with pytest.raises(LoadError, match=r"\[0, 1\]"):
        load_judgments(path)


def test_benchmark_dump_round_trip(tmp_path):
    items = load_benchmark(bundled_benchmark_path())
    path = tmp_path / "b.json"
    path.write_text(json.dumps(dump_benchmark(items)))
    assert load_benchmark(path) == items


def test_captions_dump_round_trip(tmp_path, data_dir):
    records = load_captions(data_dir / "mini_captions.ndjson")
    path = tmp_path / "c.ndjson"
    path.write_text(dump_captions(records))
    assert load_captions(path) == records


def test_feature_codec_round_trip():
    features = [
        ObjectFeature("dog"),
        AttributeObjectFeature("white", "bag", ("pale",)),
        CountFeature(2, "bag"),
        PeopleAttributeFeature(1, "woman", (("red", "jacket"), ("blue", "scarf"))),
        PositionalFeature(("lamp to the left of bed", "lamp on left side of bed")),
        ComparativeFeature(3, ("cup", "mug")),
    ]
    for feature in features:
        assert feature_from_obj(feature_to_obj(feature)) == feature


def test_annotated_image_names_deduplicate():
    image = AnnotatedImage(
        "i", (ObjectInstance("dog"), ObjectInstance("dog")), ImageSource.WEB_RETRIEVED
    )
    assert image.object_names() == {"dog"}
