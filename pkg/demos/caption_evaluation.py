"""Score one caption with the two-stage judge, fully offline.

The judge normally talks to a chat-completion endpoint.  Here a scripted
backend plays the judge's part with two authored answers, so the demo shows
the full data path without any network: render the extraction prompt, parse
the feature list out of the answer, render the matching prompt, validate the
returned mappings, then score.

The caption under test mentions a pooch (the annotation says dog), a bench,
and a kite that is not in the image at all.  The matcher links pooch to dog,
leaves the kite unmatched, and the scores follow.

Run:  python3 demos/caption_evaluation.py
"""

from valor import (
    Agent,
    BenchmarkItem,
    CaptionRecord,
    Category,
    ObjectFeature,
    extract_features,
    match_features,
    score_pair,
)
from valor.corpus import CANONICAL_PROMPTS

ITEM = BenchmarkItem(
    image_id="demo_01",
    image_path="images/demo_01.jpg",
    category=Category.OBJECT_EXISTENCE,
    prompt=CANONICAL_PROMPTS[Category.OBJECT_EXISTENCE],
    ground_truth=(ObjectFeature("dog"), ObjectFeature("bench"), ObjectFeature("tree")),
)

RECORD = CaptionRecord(
    image_id="demo_01",
    model_name="demo-captioner",
    caption="A pooch rests on a bench while a kite drifts overhead.",
)

ANSWERS = [
    '{"objects": ["pooch", "bench", "kite"]}',
    '{"matched-objects": {"pooch": "dog", "bench": "bench"}, "broader-concept": {}}',
]


class ScriptedBackend:
    """Answers requests from a list, in order."""

    def __init__(self, answers: list[str]) -> None:
        self.answers = list(answers)

    def send(self, request) -> str:
        return self.answers.pop(0)


def main() -> None:
    agent = Agent(ScriptedBackend(ANSWERS))

    extracted = extract_features(agent, ITEM.category, RECORD)
    print("extracted features:")
    for feature in extracted.features:
        print(f"  {feature}")

    result = match_features(agent, ITEM.category, ITEM.ground_truth, extracted)
    print("\nmatched (extracted -> annotated):")
    for key, value in result.matched.items():
        print(f"  {key.object} -> {value.object}")
    unmatched = [f for f in extracted.features if f not in result.matched and f not in result.broader]
    print(f"unmatched: {[f.object for f in unmatched]}")

    faith, cov, counts = score_pair(extracted.features, ITEM.ground_truth, result)
    print(f"\nfaithfulness = {counts.n_generated_matched}/{counts.n_generated} = {faith:.3f}")
    print(f"coverage     = {counts.n_ground_truth_covered}/{counts.n_ground_truth} = {cov:.3f}")
    print("\nthe kite drags faithfulness down; the unmentioned tree caps coverage")


if __name__ == "__main__":
    main()
