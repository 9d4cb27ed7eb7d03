import math

import pytest

import oracles
from metric_cases import CASES
from valor.corpus import ObjectFeature
from valor.features import MatchResult
from valor.metrics import (
    ItemScore,
    ScoreCounts,
    SynonymTable,
    acc_c,
    acc_f,
    aggregate,
    caption_to_vocab_words,
    chair_scores,
    coverage,
    faithfulness,
    pearson,
    render_report_table,
    round_half_up,
    score_pair,
)


@pytest.mark.parametrize("case", CASES, ids=[c[0] for c in CASES])
def test_hand_computed_cases(case):
    label, features, gt, result, expected_f, expected_c = case
    assert faithfulness(features, result) == expected_f
    assert coverage(gt, result) == expected_c


def test_coverage_requires_ground_truth():
    with pytest.raises(ValueError, match="ground truth"):
        coverage((), MatchResult())


def test_score_pair_counts():
    a, b, x = ObjectFeature("a"), ObjectFeature("b"), ObjectFeature("x")
    faith, cov, counts = score_pair([a, a, b], (x,), MatchResult({a: x}))
    assert faith == 1 / 3 and cov == 1.0
    assert counts.n_generated == 3
    assert counts.n_matched_keys == 1
    assert counts.n_broader_keys == 0
    assert counts.n_generated_matched == 1
    assert counts.n_ground_truth == 1
    assert counts.n_ground_truth_covered == 1


# --- synonym table and the closed-vocabulary baseline ---------------------------


def test_synonym_table_requires_identity_rows():
    with pytest.raises(ValueError, match="identity"):
        SynonymTable({"puppy": "dog"})  # no "dog" -> "dog" row
    table = SynonymTable({"dog": "dog", "puppy": "dog"})
    assert table.canonical("puppy") == "dog"
    assert table.canonical("dogs") == "dog"  # plural surface
    assert table.canonical("unicorn") is None


def test_synonym_table_from_file(tmp_path):
    path = tmp_path / "syn.tsv"
    path.write_text("# comment\ndog\tdog\npuppy\tdog\n\n")
    table = SynonymTable.from_file(path)
    assert table.canonical("puppy") == "dog"


def test_bundled_table_has_canonical_identities():
    table = SynonymTable.bundled()
    for word in ("dog", "person", "dining table", "remote"):
        assert table.canonical(word) == word
    assert table.canonical("man") == "person"
    # Deliberately absent: used to probe out-of-vocabulary blindness.
    for word in ("pooch", "feline", "steed"):
        assert table.canonical(word) is None


def test_chair_scores_basic():
    table = SynonymTable.bundled()
    result = chair_scores(["dog", "kite"], ["dog", "bench"], table)
    assert result.detected == {"dog", "kite"}
    assert result.hallucinated == {"kite"}
    assert result.faithfulness == 0.5
    assert result.coverage == 0.5


def test_chair_scores_empty_detection_is_faithful():
    table = SynonymTable.bundled()
    result = chair_scores([], ["dog"], table)
    assert result.faithfulness == 1.0 and result.coverage == 0.0


def test_chair_scores_rejects_unknown_ground_truth():
    table = SynonymTable.bundled()
    with pytest.raises(ValueError, match="synonym table"):
        chair_scores(["dog"], ["pooch"], table)


def test_caption_scan_prefers_bigrams():
    table = SynonymTable.bundled()
    words = caption_to_vocab_words("A pizza on the dining table near a remote control.", table)
    assert words == ["pizza", "dining table", "remote control"]
    assert caption_to_vocab_words("Two dogs and a pooch.", table) == ["dogs"]


# --- detection accuracies --------------------------------------------------------


def test_acc_f_rewards_and_penalizes():
    assert acc_f({"kite"}, {"kite"}) == 1.0
    assert acc_f({"kite", "dog"}, {"kite"}) == 0.0  # +1 - 1 over 1
    assert acc_f(set(), {"kite"}) == 0.0
    assert acc_f({"dog", "cat"}, {"kite"}) == 0.0  # clamped
    assert acc_f({"dog", "cat"}, {"kite"}, clamp=False) == -2.0


def test_acc_f_empty_truth():
    assert acc_f(set(), set()) == 1.0
    assert acc_f({"dog"}, set()) == 0.0


def test_acc_c():
    assert acc_c({"dog", "cat"}, {"dog", "bench"}) == 0.5
    with pytest.raises(ValueError):
        acc_c({"dog"}, set())


# --- correlation -------------------------------------------------------------------


def test_pearson_identity_and_sign():
    xs = [0.1, 0.5, 0.9, 0.3]
    assert pearson(xs, xs) == 1.0
    assert pearson(xs, [-v for v in xs]) == -1.0


def test_pearson_reference_value():
    assert pearson([1, 2, 3], [1, 2, 4]) == pytest.approx(0.981, abs=1e-3)
    assert pearson([1, 2, 3], [1, 2, 4]) == pytest.approx(
        oracles.reference_pearson([1, 2, 3], [1, 2, 4]), abs=1e-12
    )


def test_pearson_error_cases():
    with pytest.raises(ValueError, match="length"):
        pearson([1, 2], [1, 2, 3])
    with pytest.raises(ValueError, match="two"):
        pearson([1], [2])
    with pytest.raises(ValueError, match="variance"):
        pearson([1, 1, 1], [1, 2, 3])


def test_pearson_stays_in_bounds():
    xs = [1e-9, 2e-9, 3e-9]
    assert -1.0 <= pearson(xs, [2e-9, 4e-9, 6e-9]) <= 1.0


# --- aggregation ----------------------------------------------------------------------


def test_round_half_up():
    assert round_half_up(74.45) == 74.5
    assert round_half_up(66.66666666666667) == 66.7
    assert round_half_up(0.125, 2) == 0.13
    assert round_half_up(50.0) == 50.0


def make_score(image_id, model, category, faith, cov):
    counts = ScoreCounts(1, 1, 0, 1, 1, 1)
    return ItemScore(image_id, model, category, faith, cov, counts)


def test_aggregate_rounds_then_averages():
    scores = [
        make_score("i1", "m", "object_existence", 0.745, 0.2),
        make_score("i2", "m", "object_existence", 0.745, 0.2),
        make_score("i3", "m", "attribute_object", 0.72, 0.3),
    ]
    reports = aggregate(scores)
    assert len(reports) == 1
    report = reports[0]
    cell = report.cells["object_existence"]
    assert cell.n_items == 2
    assert cell.faithfulness_pct == 74.5
    assert report.cells["attribute_object"].faithfulness_pct == 72.0
    # Average over the rounded per-category percents of present categories.
    assert report.average_faithfulness_pct == pytest.approx((74.5 + 72.0) / 2)
    assert set(report.missing_categories) == {
        "attribute_people",
        "relation_positional",
        "relation_comparative",
    }


def test_aggregate_orders_models():
    scores = [
        make_score("i1", "zeta", "object_existence", 0.5, 0.5),
        make_score("i2", "alpha", "object_existence", 0.5, 0.5),
    ]
    reports = aggregate(scores)
    assert [r.model_name for r in reports] == ["alpha", "zeta"]


def test_aggregate_counts_empty_generated():
    counts = ScoreCounts(0, 0, 0, 0, 2, 0)
    scores = [
        ItemScore("i1", "m", "object_existence", 1.0, 0.0, counts, empty_generated=True)
    ]
    cell = aggregate(scores)[0].cells["object_existence"]
    assert cell.n_empty_generated == 1


def test_render_report_table_layout():
    scores = [
        make_score("i1", "m", "object_existence", 2 / 3, 1 / 3),
        make_score("i2", "m", "relation_comparative", 1.0, 0.5),
    ]
    text = render_report_table(aggregate(scores))
    lines = text.splitlines()
    assert lines[0].startswith("Model")
    assert "Object Existence F" in lines[0]
    assert "Average F" in lines[0]
    assert "66.7" in text and "100.0" in text
    # Column order is fixed: existence before comparative.
    assert lines[0].index("Object Existence F") < lines[0].index("Relation (Comparative) F")


def test_faithfulness_math_matches_definition():
    # Cross-check one case numerically against an independent recount.
    label, features, gt, result, expected_f, expected_c = CASES[2]
    matched_keys = set(result.matched) | set(result.broader)
    recount = len({f for f in features if f in matched_keys}) / len(features)
    assert math.isclose(faithfulness(features, result), recount, rel_tol=0, abs_tol=0)
    assert recount == expected_f
