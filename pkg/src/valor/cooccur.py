"""Co-occurrence statistics over annotated image sets.

Counting is per image presence: an image contributes at most 1 to any
object count or (object, feature) pair count, however many duplicate
instances it holds.  Three pair kinds are supported; the feature strings are

* object_object    -> the other object's name
* object_attribute -> an attribute attached to the object in that image
* object_relation  -> "<relation_name> <target>" for an outgoing relation

Selection walks conditional probabilities P(feature | object) to find the
objects a captioner is most likely to hallucinate around, the features that
rarely accompany them, and the images that can falsify those priors.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .corpus import AnnotatedImage

logger = logging.getLogger(__name__)


class Kind(str, Enum):
    OBJECT_OBJECT = "object_object"
    OBJECT_ATTRIBUTE = "object_attribute"
    OBJECT_RELATION = "object_relation"


class Statistic(str, Enum):
    FREQUENCY = "frequency"
    P_MAX = "p_max"
    P_AVG = "p_avg"
    P_MAX_MINUS_AVG = "p_max_minus_avg"
    P_AVG_MINUS_MIN = "p_avg_minus_min"
    P_MAX_MINUS_MIN = "p_max_minus_min"


@dataclass(frozen=True)
class SkewMetrics:
    """The five spread statistics over one object's conditional probabilities."""

    object: str
    p_max: float
    p_avg: float
    p_max_minus_avg: float
    p_avg_minus_min: float
    p_max_minus_min: float


@dataclass
class FrequencyTable:
    kind: Kind
    pair_counts: dict[tuple[str, str], int]
    object_counts: dict[str, int]

    def features_of(self, obj: str) -> dict[str, int]:
        """Pair counts for one object, keyed by feature."""
        return {f: c for (o, f), c in self.pair_counts.items() if o == obj}


@dataclass
class SelectionSets:
    head_objects: list[str]
    rare_features: dict[str, list[str]]
    strong_features: dict[str, list[str]]
    candidates: list[tuple[str, str, str]]  # (image_id, object, feature)


def image_features(image: AnnotatedImage, obj: str, kind: Kind) -> set[str]:
    """Features that co-occur with ``obj`` inside one image, per ``kind``.

    Empty when the image does not contain the object at all.
    """
    present = image.object_names()
    if obj not in present:
        return set()
    if kind is Kind.OBJECT_OBJECT:
        return present - {obj}
    feats: set[str] = set()
    for inst in image.objects:
        if inst.name != obj:
            continue
        if kind is Kind.OBJECT_ATTRIBUTE:
            feats.update(inst.attributes)
        else:
            feats.update(f"{rel} {target}" for rel, target in inst.relations)
    return feats


def count_frequencies(dataset: list[AnnotatedImage], kind: Kind) -> FrequencyTable:
    """Build presence-based object and pair counts over the dataset."""
    object_counts: Counter = Counter()
    pair_counts: Counter = Counter()
    for image in dataset:
        names = image.object_names()
        for obj in names:
            object_counts[obj] += 1
            for feat in image_features(image, obj, kind):
                pair_counts[(obj, feat)] += 1
    return FrequencyTable(kind, dict(pair_counts), dict(object_counts))


def conditional_probability(table: FrequencyTable, feature: str, obj: str) -> float:
    """P(feature | obj) = pair count / object count.

    Raises ValueError on zero support (object never counted); an absent pair
    on a supported object is simply probability 0.
    """
    support = table.object_counts.get(obj, 0)
    if support == 0:
        raise ValueError(f"zero support: object {obj!r} does not appear in the table")
    return table.pair_counts.get((obj, feature), 0) / support


def skew_metrics(table: FrequencyTable, obj: str) -> SkewMetrics:
    """Spread statistics over {P(f | obj) : f co-occurs with obj}.

    Requires at least one co-occurring feature.  The three difference
    statistics decompose exactly: max-min = (max-avg) + (avg-min).
    """
    probs = [
        count / table.object_counts[obj]
        for (o, _), count in sorted(table.pair_counts.items())
        if o == obj
    ]
    if not probs:
        raise ValueError(f"object {obj!r} has no co-occurring features")
    p_max = max(probs)
    p_min = min(probs)
    p_avg = sum(probs) / len(probs)
    return SkewMetrics(
        object=obj,
        p_max=p_max,
        p_avg=p_avg,
        p_max_minus_avg=p_max - p_avg,
        p_avg_minus_min=p_avg - p_min,
        p_max_minus_min=p_max - p_min,
    )


def _statistic_value(table: FrequencyTable, obj: str, statistic: Statistic) -> float:
    if statistic is Statistic.FREQUENCY:
        return float(table.object_counts[obj])
    skew = skew_metrics(table, obj)
    return {
        Statistic.P_MAX: skew.p_max,
        Statistic.P_AVG: skew.p_avg,
        Statistic.P_MAX_MINUS_AVG: skew.p_max_minus_avg,
        Statistic.P_AVG_MINUS_MIN: skew.p_avg_minus_min,
        Statistic.P_MAX_MINUS_MIN: skew.p_max_minus_min,
    }[statistic]


def select_head_objects(
    table: FrequencyTable,
    statistic: Statistic,
    k: int,
    min_support: int = 1,
) -> list[str]:
    """Top-k objects by the chosen statistic, descending, ties broken by name.

    Objects with no co-occurring feature carry no bias signal and are skipped
    under every statistic.  ``min_support`` drops objects counted in fewer
    images than the floor; the library default of 1 keeps everything, the
    command line applies a stricter floor.  When k exceeds the number of
    rankable objects, all of them are returned and the truncation is logged.
    """
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    with_features = {o for (o, _) in table.pair_counts}
    eligible = [
        o
        for o in table.object_counts
        if o in with_features and table.object_counts[o] >= min_support
    ]
    ranked = sorted(eligible, key=lambda o: (-_statistic_value(table, o, statistic), o))
    if k > len(ranked):
        logger.warning(
            "requested k=%d head objects but only %d are rankable; returning all",
            k,
            len(ranked),
        )
        return ranked
    return ranked[:k]


def select_rare_features(
    table: FrequencyTable, head_objects: list[str], m: int
) -> dict[str, list[str]]:
    """For each head object, the m features with smallest nonzero P, ascending."""
    out: dict[str, list[str]] = {}
    for obj in head_objects:
        if obj not in table.object_counts:
            raise ValueError(f"object {obj!r} absent from the frequency table")
        feats = table.features_of(obj)
        support = table.object_counts[obj]
        ranked = sorted(feats, key=lambda f: (feats[f] / support, f))
        if m > len(ranked):
            logger.warning("object %r has only %d features (m=%d)", obj, len(ranked), m)
        out[obj] = ranked[:m]
    return out


def select_strong_features(
    table: FrequencyTable, head_objects: list[str], m: int
) -> dict[str, list[str]]:
    """For each head object, the m features with largest P, descending."""
    out: dict[str, list[str]] = {}
    for obj in head_objects:
        if obj not in table.object_counts:
            raise ValueError(f"object {obj!r} absent from the frequency table")
        feats = table.features_of(obj)
        support = table.object_counts[obj]
        ranked = sorted(feats, key=lambda f: (-feats[f] / support, f))
        if m > len(ranked):
            logger.warning("object %r has only %d features (m=%d)", obj, len(ranked), m)
        out[obj] = ranked[:m]
    return out


def collect_candidates(
    dataset: list[AnnotatedImage],
    head_objects: list[str],
    rare_features: dict[str, list[str]],
    strong_features: dict[str, list[str]],
    kind: Kind = Kind.OBJECT_OBJECT,
) -> list[tuple[str, str, str]]:
    """Images that pair a head object with one of its rare features while
    containing none of that object's strong features.

    The strong-feature exclusion is per object: an image is a candidate for
    (o, f) even if it contains a feature that is strong for some other head
    object.  Output is sorted by (object, feature, image_id).
    """
    found: list[tuple[str, str, str]] = []
    for image in dataset:
        for obj in head_objects:
            feats = image_features(image, obj, kind)
            if not feats:
                continue
            if feats & set(strong_features.get(obj, [])):
                continue
            for feat in rare_features.get(obj, []):
                if feat in feats:
                    found.append((image.image_id, obj, feat))
    return sorted(found, key=lambda t: (t[1], t[2], t[0]))


def run_selection(
    dataset: list[AnnotatedImage],
    kind: Kind,
    statistic: Statistic,
    k: int,
    m: int,
    min_support: int = 1,
) -> SelectionSets:
    """Full head-object / rare / strong / candidate pipeline in one call."""
    table = count_frequencies(dataset, kind)
    head = select_head_objects(table, statistic, k, min_support)
    rare = select_rare_features(table, head, m)
    strong = select_strong_features(table, head, m)
    candidates = collect_candidates(dataset, head, rare, strong, kind)
    return SelectionSets(head, rare, strong, candidates)


def probabilities_by_object(table: FrequencyTable) -> dict[str, dict[str, float]]:
    """{object -> {feature -> P(feature | object)}} for export."""
    out: dict[str, dict[str, float]] = {}
    for (obj, feat), count in table.pair_counts.items():
        out.setdefault(obj, {})[feat] = count / table.object_counts[obj]
    return {o: dict(sorted(feats.items())) for o, feats in sorted(out.items())}
