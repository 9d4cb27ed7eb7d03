"""Mine co-occurrence bias from a toy scene-graph dataset.

Three annotated images are enough to show the whole pipeline: count how
often each feature appears alongside each object, turn the counts into
conditional probabilities, rank objects by how skewed those probabilities
are, and finally pick the images that pair a frequent object with one of
its rare companions.  Those images are exactly the ones a biased captioner
is most likely to get wrong.

Run:  python3 demos/bias_mining.py
"""

from valor import (
    AnnotatedImage,
    Kind,
    ObjectInstance,
    Statistic,
    conditional_probability,
    count_frequencies,
    run_selection,
    skew_metrics,
)

# Surfboards usually show up with waves; only one image pairs one with sand.
DATASET = [
    AnnotatedImage("beach_01", (ObjectInstance("surfboard"), ObjectInstance("wave"))),
    AnnotatedImage("beach_02", (ObjectInstance("surfboard"), ObjectInstance("wave"))),
    AnnotatedImage("beach_03", (ObjectInstance("surfboard"), ObjectInstance("sand"))),
]


def main() -> None:
    table = count_frequencies(DATASET, Kind.OBJECT_OBJECT)

    print("object support (images containing the object):")
    for name, count in sorted(table.object_counts.items()):
        print(f"  {name}: {count}")

    print("\nconditional probabilities for 'surfboard':")
    for feature in sorted(table.features_of("surfboard")):
        p = conditional_probability(table, feature, "surfboard")
        print(f"  P({feature} | surfboard) = {p:.3f}")

    skew = skew_metrics(table, "surfboard")
    print("\nskew statistics for 'surfboard':")
    print(f"  p_max            = {skew.p_max:.3f}")
    print(f"  p_avg            = {skew.p_avg:.3f}")
    print(f"  p_max_minus_avg  = {skew.p_max_minus_avg:.3f}")
    print(f"  p_avg_minus_min  = {skew.p_avg_minus_min:.3f}")
    print(f"  p_max_minus_min  = {skew.p_max_minus_min:.3f}")

    # Keep the single most frequent object, then its rarest and strongest
    # companion.  min_support=1 because three images is all we have.
    sets = run_selection(DATASET, Kind.OBJECT_OBJECT, Statistic.FREQUENCY, k=1, m=1, min_support=1)
    print("\nselection:")
    print(f"  head objects:    {sets.head_objects}")
    print(f"  rare features:   {sets.rare_features}")
    print(f"  strong features: {sets.strong_features}")

    print("\ncandidate images (object present with a rare feature, strong one absent):")
    for image_id, obj, feature in sets.candidates:
        print(f"  {image_id}: {obj} with {feature}")


if __name__ == "__main__":
    main()
