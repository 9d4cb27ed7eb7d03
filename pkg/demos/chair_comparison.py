"""Why an open-vocabulary judge beats fixed-vocabulary word matching.

The classic hallucination check scans a caption for words from a closed
object vocabulary and calls anything outside that list invisible.  A caption
that says "pooch" instead of "dog" slips straight through, and so does a
hallucinated object the vocabulary never heard of.  The agent pipeline reads
the caption instead of grepping it, so both mistakes surface.

This script scores the same caption both ways.  The scripted backend stands
in for the judge model, as in demos/caption_evaluation.py.

Run:  python3 demos/chair_comparison.py
"""

from valor import (
    Agent,
    BenchmarkItem,
    CaptionRecord,
    Category,
    ObjectFeature,
    SynonymTable,
    caption_to_vocab_words,
    chair_scores,
    extract_features,
    match_features,
    score_pair,
)
from valor.corpus import CANONICAL_PROMPTS

ITEM = BenchmarkItem(
    image_id="demo_02",
    image_path="images/demo_02.jpg",
    category=Category.OBJECT_EXISTENCE,
    prompt=CANONICAL_PROMPTS[Category.OBJECT_EXISTENCE],
    ground_truth=(ObjectFeature("dog"), ObjectFeature("bench")),
)

# "pooch" and "gryphon" are both outside the fixed vocabulary; only one of
# them is actually in the image.
RECORD = CaptionRecord(
    image_id="demo_02",
    model_name="demo-captioner",
    caption="A pooch sleeps under a bench while a gryphon statue looms nearby.",
)

ANSWERS = [
    '{"objects": ["pooch", "bench", "gryphon statue"]}',
    '{"matched-objects": {"pooch": "dog", "bench": "bench"}, "broader-concept": {}}',
]


class ScriptedBackend:
    def __init__(self, answers: list[str]) -> None:
        self.answers = list(answers)

    def send(self, request) -> str:
        return self.answers.pop(0)


def main() -> None:
    table = SynonymTable.bundled()

    words = caption_to_vocab_words(RECORD.caption, table)
    chair = chair_scores(words, ["dog", "bench"], table)
    print("fixed-vocabulary route:")
    print(f"  caption words found in the vocabulary: {words}")
    print(f"  detected objects:     {sorted(chair.detected)}")
    print(f"  flagged hallucinated: {sorted(chair.hallucinated)}")
    print(f"  faithfulness = {chair.faithfulness:.3f}   coverage = {chair.coverage:.3f}")
    print("  the pooch never registers and the gryphon goes unflagged")

    agent = Agent(ScriptedBackend(ANSWERS))
    extracted = extract_features(agent, ITEM.category, RECORD)
    result = match_features(agent, ITEM.category, ITEM.ground_truth, extracted)
    faith, cov, _ = score_pair(extracted.features, ITEM.ground_truth, result)
    print("\nagent pipeline:")
    print(f"  extracted: {[f.object for f in extracted.features]}")
    print(f"  matched:   {{{', '.join(f'{k.object!r}: {v.object!r}' for k, v in result.matched.items())}}}")
    print(f"  faithfulness = {faith:.3f}   coverage = {cov:.3f}")
    print("  pooch counts as the dog and the statue costs faithfulness, as it should")


if __name__ == "__main__":
    main()
