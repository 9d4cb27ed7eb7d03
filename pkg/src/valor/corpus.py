"""Data model and ingestion for scene graphs, benchmark items, captions, and judgments.

All loaders normalize object names to lowercase singular form at ingestion and
return immutable records.  Loaders raise :class:`LoadError` on structural
problems; softer checks on already-loaded items live in
:func:`validate_benchmark`, which reports rather than raises.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Union

logger = logging.getLogger(__name__)


class LoadError(ValueError):
    """An input file is missing, malformed, or breaks a data invariant."""


class ImageSource(str, Enum):
    SCENE_GRAPH_DATASET = "scene_graph_dataset"
    WEB_RETRIEVED = "web_retrieved"


class Category(str, Enum):
    OBJECT_EXISTENCE = "object_existence"
    ATTRIBUTE_OBJECT = "attribute_object"
    ATTRIBUTE_PEOPLE = "attribute_people"
    RELATION_POSITIONAL = "relation_positional"
    RELATION_COMPARATIVE = "relation_comparative"


# Default generation prompt per category.  Items may override these, but
# validate_benchmark flags silent divergence.
CANONICAL_PROMPTS: dict[Category, str] = {
    Category.OBJECT_EXISTENCE: (
        "Write a detailed description of the image. Provide information about "
        "all objects in front and background."
    ),
    Category.ATTRIBUTE_OBJECT: (
        "Write a detailed description of the image. Provide information about "
        "the total number and colors of all objects from left to right and up "
        "to bottom."
    ),
    Category.ATTRIBUTE_PEOPLE: (
        "Write a detailed description of the image. Provide information about "
        "the total number of people and colors of clothes for each person from "
        "left to right."
    ),
    Category.RELATION_POSITIONAL: (
        "Describe the positional relationship between all the objects in the "
        "image in detail, using left, right, top, and bottom etc, from the "
        "view of the observer."
    ),
    Category.RELATION_COMPARATIVE: (
        "Rank the size of all the objects in the image in detail, from large "
        "to small."
    ),
}

# Plural surface forms where stripping the trailing "s" yields the singular.
# Deliberately a whitelist, not a stemmer: words like "glass" or "bus" must
# pass through untouched.
PLURAL_WHITELIST = frozenset(
    {
        "apples", "bags", "balls", "beds", "birds", "boards", "boats",
        "books", "bottles", "bowls", "boys", "buildings", "cars", "cats",
        "chairs", "clouds", "cows", "cups", "dogs", "doors", "fields",
        "flowers", "forks", "girls", "hats", "helmets", "horses", "houses",
        "items", "jackets", "kites", "lamps", "lights", "objects", "oranges",
        "persons", "pillows", "plants", "plates", "players", "rackets",
        "rocks", "shirts", "shoes", "signs", "socks", "spoons", "surfboards",
        "tables", "trees", "trucks", "umbrellas", "walls", "waves", "windows",
    }
)


def singularize(name: str) -> str:
    """Lowercase ``name`` and strip a trailing "s" when whitelisted as plural."""
    out = name.strip().lower()
    if out in PLURAL_WHITELIST:
        out = out[:-1]
    return out


@dataclass(frozen=True)
class ObjectInstance:
    """One annotated object: a name plus attribute strings and outgoing relations.

    Relations are (relation_name, target_object_name) pairs; the target must
    name another object in the same image.
    """

    name: str
    attributes: tuple[str, ...] = ()
    relations: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class AnnotatedImage:
    image_id: str
    objects: tuple[ObjectInstance, ...]
    source: ImageSource = ImageSource.SCENE_GRAPH_DATASET

    def object_names(self) -> set[str]:
        return {obj.name for obj in self.objects}


# --- ground-truth feature variants -----------------------------------------


@dataclass(frozen=True)
class ObjectFeature:
    """Bare object presence, e.g. "bench"."""

    object: str


@dataclass(frozen=True)
class AttributeObjectFeature:
    """An (attribute, object) pair; extra acceptable attributes in alternates."""

    attribute: str
    object: str
    alternates: tuple[str, ...] = ()

    def attribute_forms(self) -> tuple[str, ...]:
        return (self.attribute, *self.alternates)


@dataclass(frozen=True)
class CountFeature:
    """A counted object, e.g. six apples -> (6, "apple")."""

    count: int
    object: str


@dataclass(frozen=True)
class PeopleAttributeFeature:
    """Clothing worn by the person at a left-to-right position.

    ``items`` holds (color, garment) pairs, e.g. (("red", "jacket"), ("black", "shoes")).
    """

    person_order: int
    person_label: str
    items: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class PositionalFeature:
    """A spatial relation with one or two equivalent phrasings."""

    phrasings: tuple[str, ...]


@dataclass(frozen=True)
class ComparativeFeature:
    """A size-rank slot: rank 1 is the largest object; names are alternates."""

    rank: int
    object_names: tuple[str, ...]


Feature = Union[
    ObjectFeature,
    AttributeObjectFeature,
    CountFeature,
    PeopleAttributeFeature,
    PositionalFeature,
    ComparativeFeature,
]


@dataclass(frozen=True)
class BenchmarkItem:
    image_id: str
    image_path: str
    category: Category
    prompt: str
    ground_truth: tuple[Feature, ...]
    prompt_overridden: bool = False


@dataclass(frozen=True)
class CaptionRecord:
    """One model's caption for one image.  Empty captions are legal (refusals)."""

    image_id: str
    model_name: str
    caption: str


@dataclass(frozen=True)
class HumanJudgment:
    image_id: str
    model_name: str
    faithfulness: float
    coverage: float


@dataclass(frozen=True)
class ValidationIssue:
    severity: str  # "warning" | "violation"
    item_id: str
    message: str


@dataclass
class ValidationReport:
    issues: list[ValidationIssue] = field(default_factory=list)

    def is_empty(self) -> bool:
        return not self.issues

    def add(self, severity: str, item_id: str, message: str) -> None:
        self.issues.append(ValidationIssue(severity, item_id, message))


# --- scene graph loading ----------------------------------------------------


def _as_relation_pairs(image_id: str, obj_index: int, raw) -> tuple[tuple[str, str], ...]:
    pairs: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for i, rel in enumerate(raw):
        where = f"{image_id}.objects[{obj_index}].relations[{i}]"
        if not isinstance(rel, dict) or "name" not in rel or "target" not in rel:
            raise LoadError(f"malformed relation at {where}: expected {{name, target}}")
        name = str(rel["name"]).strip().lower()
        target = singularize(str(rel["target"]))
        if not name or not target:
            raise LoadError(f"empty relation field at {where}")
        pair = (name, target)
        if pair in seen:
            continue  # presence semantics: a repeated edge adds nothing
        seen.add(pair)
        pairs.append(pair)
    return tuple(pairs)


def load_scene_graph(path: str | Path, source: ImageSource = ImageSource.SCENE_GRAPH_DATASET) -> list[AnnotatedImage]:
    """Load an annotated image set from a JSON scene-graph document.

    Expected shape::

        {"<image_id>": {"objects": [{"name": str,
                                     "attributes": [str, ...],
                                     "relations": [{"name": str, "target": str}, ...]}]}}

    Object and target names are normalized to lowercase singular; attribute
    and relation names are lowercased.  Raises :class:`LoadError` naming the
    first offending location.
    """
    path = Path(path)
    if not path.exists():
        raise LoadError(f"scene graph file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise LoadError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise LoadError(f"scene graph {path} must be an object keyed by image_id")

    images: list[AnnotatedImage] = []
    for image_id, entry in doc.items():
        if not image_id:
            raise LoadError(f"empty image_id in {path}")
        if not isinstance(entry, dict) or "objects" not in entry:
            raise LoadError(f"malformed entry at {image_id}: expected {{objects: [...]}}")
        instances: list[ObjectInstance] = []
        for idx, raw_obj in enumerate(entry["objects"]):
            where = f"{image_id}.objects[{idx}]"
            if not isinstance(raw_obj, dict) or "name" not in raw_obj:
                raise LoadError(f"malformed object at {where}: missing name")
            name = singularize(str(raw_obj["name"]))
            if not name:
                raise LoadError(f"empty object name at {where}")
            attributes = tuple(
                str(a).strip().lower() for a in raw_obj.get("attributes", [])
            )
            if any(not a for a in attributes):
                raise LoadError(f"empty attribute at {where}")
            relations = _as_relation_pairs(image_id, idx, raw_obj.get("relations", []))
            instances.append(ObjectInstance(name, attributes, relations))
        image = AnnotatedImage(str(image_id), tuple(instances), source)
        names = image.object_names()
        for idx, inst in enumerate(image.objects):
            for rel_name, target in inst.relations:
                if target not in names:
                    raise LoadError(
                        f"relation ({rel_name}, {target}) at {image_id}.objects[{idx}] "
                        f"targets an object absent from the image"
                    )
        images.append(image)
    return images


# --- benchmark loading -------------------------------------------------------


def _split_alternates(value: str) -> list[str]:
    """Split a slash-joined alternate form like "black / white / striped"."""
    if "/" in value:
        return [part.strip() for part in value.split("/") if part.strip()]
    return [value.strip()]


def _contiguous_int_keys(mapping: dict, item_id: str, what: str) -> list[int]:
    try:
        keys = sorted(int(k) for k in mapping)
    except (TypeError, ValueError) as exc:
        raise LoadError(f"{item_id}: non-integer {what} key") from exc
    if keys != list(range(1, len(keys) + 1)):
        raise LoadError(f"{item_id}: {what} keys must be contiguous from 1, got {keys}")
    return keys


def _parse_object_gt(item_id: str, raw) -> list[Feature]:
    if not isinstance(raw, list) or not raw:
        raise LoadError(f"{item_id}: object_existence ground truth must be a non-empty list")
    return [ObjectFeature(singularize(str(name))) for name in raw]


def _parse_attr_object_gt(item_id: str, raw) -> list[Feature]:
    if not isinstance(raw, dict):
        raise LoadError(f"{item_id}: attribute_object ground truth must be an object")
    features: list[Feature] = []
    total = raw.get("total")
    if total is not None:
        if not (isinstance(total, list) and len(total) == 2):
            raise LoadError(f"{item_id}: total must be [count, object]")
        features.append(CountFeature(int(total[0]), singularize(str(total[1]))))
    entries = raw.get("objects", {})
    _contiguous_int_keys(entries, item_id, "object order")
    for order in sorted(entries, key=int):
        parts = entries[order]
        if not (isinstance(parts, list) and len(parts) >= 2):
            raise LoadError(f"{item_id}: objects[{order}] must be [attribute..., object]")
        obj = singularize(str(parts[-1]))
        attrs: list[str] = []
        for chunk in parts[:-1]:
            attrs.extend(a.lower() for a in _split_alternates(str(chunk)))
        if not attrs:
            raise LoadError(f"{item_id}: objects[{order}] has no attribute")
        features.append(AttributeObjectFeature(attrs[0], obj, tuple(attrs[1:])))
    if not features:
        raise LoadError(f"{item_id}: empty ground truth")
    return features


def _parse_people_gt(item_id: str, raw) -> list[Feature]:
    if not isinstance(raw, dict):
        raise LoadError(f"{item_id}: attribute_people ground truth must be an object")
    features: list[Feature] = []
    if "total_people" in raw:
        features.append(CountFeature(int(raw["total_people"]), "person"))
    people = raw.get("people", {})
    _contiguous_int_keys(people, item_id, "person order")
    for order in sorted(people, key=int):
        entry = people[order]
        if not isinstance(entry, dict) or "items" not in entry:
            raise LoadError(f"{item_id}: people[{order}] must carry an items list")
        items = []
        for pair in entry["items"]:
            if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
                raise LoadError(f"{item_id}: people[{order}] items must be [color, garment] pairs")
            items.append((str(pair[0]).strip().lower(), singularize(str(pair[1]))))
        if not items:
            raise LoadError(f"{item_id}: people[{order}] has no clothing items")
        label = singularize(str(entry.get("label", "person")))
        features.append(PeopleAttributeFeature(int(order), label, tuple(items)))
    if not features:
        raise LoadError(f"{item_id}: empty ground truth")
    return features


def _parse_positional_gt(item_id: str, raw) -> list[Feature]:
    if not isinstance(raw, dict) or not raw:
        raise LoadError(f"{item_id}: relation_positional ground truth must be a non-empty object")
    features: list[Feature] = []
    for key in raw:
        phrasings = raw[key]
        if isinstance(phrasings, str):
            phrasings = [phrasings]
        if not (isinstance(phrasings, list) and 1 <= len(phrasings) <= 2):
            raise LoadError(f"{item_id}: relation {key} must list 1 or 2 phrasings")
        features.append(PositionalFeature(tuple(str(p).strip().lower() for p in phrasings)))
    return features


def _parse_comparative_gt(item_id: str, raw) -> list[Feature]:
    if not isinstance(raw, dict) or not raw:
        raise LoadError(f"{item_id}: relation_comparative ground truth must be a non-empty object")
    _contiguous_int_keys(raw, item_id, "rank")
    features: list[Feature] = []
    for rank_key in sorted(raw, key=int):
        names = raw[rank_key]
        if isinstance(names, str):
            names = [names]
        flat: list[str] = []
        for name in names:
            flat.extend(singularize(n) for n in _split_alternates(str(name)))
        if not flat:
            raise LoadError(f"{item_id}: rank {rank_key} has no object name")
        features.append(ComparativeFeature(int(rank_key), tuple(flat)))
    return features


_GT_PARSERS = {
    Category.OBJECT_EXISTENCE: _parse_object_gt,
    Category.ATTRIBUTE_OBJECT: _parse_attr_object_gt,
    Category.ATTRIBUTE_PEOPLE: _parse_people_gt,
    Category.RELATION_POSITIONAL: _parse_positional_gt,
    Category.RELATION_COMPARATIVE: _parse_comparative_gt,
}


def load_benchmark(path: str | Path) -> list[BenchmarkItem]:
    """Load benchmark items from a JSON document of shape {"items": [...]}.

    Each item carries image_id, image_path, category, an optional prompt
    override, and a category-specific ground_truth block.  Per-category counts
    are logged after a successful load.
    """
    path = Path(path)
    if not path.exists():
        raise LoadError(f"benchmark file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise LoadError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("items"), list):
        raise LoadError(f"benchmark {path} must be an object with an items list")

    items: list[BenchmarkItem] = []
    for i, raw in enumerate(doc["items"]):
        item_id = str(raw.get("image_id") or f"items[{i}]")
        try:
            category = Category(raw["category"])
        except (KeyError, ValueError) as exc:
            raise LoadError(f"{item_id}: unknown category tag {raw.get('category')!r}") from exc
        if "ground_truth" not in raw:
            raise LoadError(f"{item_id}: missing ground_truth")
        features = _GT_PARSERS[category](item_id, raw["ground_truth"])
        if not features:
            raise LoadError(f"{item_id}: empty ground truth")
        prompt = raw.get("prompt", CANONICAL_PROMPTS[category])
        items.append(
            BenchmarkItem(
                image_id=str(raw.get("image_id", "")),
                image_path=str(raw.get("image_path", "")),
                category=category,
                prompt=prompt,
                ground_truth=tuple(features),
                prompt_overridden=bool(raw.get("prompt_override", False)),
            )
        )
    counts = category_counts(items)
    logger.info(
        "loaded %d benchmark items: %s",
        len(items),
        ", ".join(f"{cat.value}={n}" for cat, n in counts.items()),
    )
    return items


def bundled_benchmark_path() -> Path:
    """Path of the small built-in benchmark, for offline smoke runs and tests."""
    return Path(str(resources.files("valor").joinpath("data/mini_benchmark.json")))


def category_counts(items: list[BenchmarkItem]) -> dict[Category, int]:
    counts: Counter = Counter(item.category for item in items)
    return {cat: counts.get(cat, 0) for cat in Category}


def load_captions(path: str | Path) -> list[CaptionRecord]:
    """Load caption records from newline-delimited JSON.

    Each line: {"image_id": str, "model": str, "caption": str}.  The
    (image_id, model) pair must be unique; captions may be empty.
    """
    path = Path(path)
    if not path.exists():
        raise LoadError(f"captions file not found: {path}")
    records: list[CaptionRecord] = []
    seen: set[tuple[str, str]] = set()
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise LoadError(f"{path}:{lineno}: invalid JSON") from exc
        try:
            record = CaptionRecord(str(raw["image_id"]), str(raw["model"]), str(raw["caption"]))
        except KeyError as exc:
            raise LoadError(f"{path}:{lineno}: missing field {exc}") from exc
        key = (record.image_id, record.model_name)
        if key in seen:
            raise LoadError(f"{path}:{lineno}: duplicate caption for {key}")
        seen.add(key)
        records.append(record)
    return records


def load_judgments(path: str | Path) -> list[HumanJudgment]:
    """Load human judgments from newline-delimited JSON, scores in [0, 1]."""
    path = Path(path)
    if not path.exists():
        raise LoadError(f"judgments file not found: {path}")
    records: list[HumanJudgment] = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            record = HumanJudgment(
                str(raw["image_id"]),
                str(raw["model"]),
                float(raw["faithfulness"]),
                float(raw["coverage"]),
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise LoadError(f"{path}:{lineno}: malformed judgment record") from exc
        if not (0.0 <= record.faithfulness <= 1.0 and 0.0 <= record.coverage <= 1.0):
            raise LoadError(f"{path}:{lineno}: judgment scores must lie in [0, 1]")
        records.append(record)
    return records


# --- validation ---------------------------------------------------------------


def _features_conform(category: Category, features: tuple[Feature, ...]) -> bool:
    allowed: dict[Category, tuple[type, ...]] = {
        Category.OBJECT_EXISTENCE: (ObjectFeature,),
        Category.ATTRIBUTE_OBJECT: (AttributeObjectFeature, CountFeature),
        Category.ATTRIBUTE_PEOPLE: (PeopleAttributeFeature, CountFeature),
        Category.RELATION_POSITIONAL: (PositionalFeature,),
        Category.RELATION_COMPARATIVE: (ComparativeFeature,),
    }
    return all(isinstance(f, allowed[category]) for f in features)


def validate_benchmark(items: list[BenchmarkItem]) -> ValidationReport:
    """Check loaded items against the benchmark invariants.

    Violations and warnings are report content, not exceptions: a downstream
    run may still proceed on a partially flagged benchmark.
    """
    report = ValidationReport()
    for item in items:
        iid = item.image_id
        if not item.ground_truth:
            report.add("violation", iid, "empty ground truth")
            continue
        if not _features_conform(item.category, item.ground_truth):
            report.add("violation", iid, f"feature kinds do not match category {item.category.value}")
        canonical = CANONICAL_PROMPTS[item.category]
        if item.prompt != canonical and not item.prompt_overridden:
            report.add("warning", iid, "prompt differs from the canonical text without an override flag")
        if item.category is Category.RELATION_COMPARATIVE:
            ranks = sorted(
                f.rank for f in item.ground_truth if isinstance(f, ComparativeFeature)
            )
            if ranks != list(range(1, len(ranks) + 1)):
                report.add("violation", iid, f"comparative ranks not contiguous from 1: {ranks}")
        if item.category is Category.RELATION_POSITIONAL:
            for f in item.ground_truth:
                if isinstance(f, PositionalFeature) and not 1 <= len(f.phrasings) <= 2:
                    report.add("violation", iid, f"positional feature lists {len(f.phrasings)} phrasings")
        for f in item.ground_truth:
            if isinstance(f, CountFeature) and f.count < 0:
                report.add("violation", iid, f"negative count {f.count}")
            if isinstance(f, PeopleAttributeFeature) and f.person_order < 1:
                report.add("violation", iid, f"person order {f.person_order} < 1")
    return report


# --- serialization -----------------------------------------------------------


def dump_scene_graph(images: list[AnnotatedImage]) -> dict:
    doc: dict = {}
    for image in images:
        doc[image.image_id] = {
            "objects": [
                {
                    "name": obj.name,
                    "attributes": list(obj.attributes),
                    "relations": [
                        {"name": rel, "target": target} for rel, target in obj.relations
                    ],
                }
                for obj in image.objects
            ]
        }
    return doc


def _dump_ground_truth(item: BenchmarkItem) -> object:
    cat = item.category
    if cat is Category.OBJECT_EXISTENCE:
        return [f.object for f in item.ground_truth]
    if cat is Category.ATTRIBUTE_OBJECT:
        out: dict = {"objects": {}}
        order = 0
        for f in item.ground_truth:
            if isinstance(f, CountFeature):
                out["total"] = [f.count, f.object]
            else:
                order += 1
                out["objects"][str(order)] = [*f.attribute_forms(), f.object]
        return out
    if cat is Category.ATTRIBUTE_PEOPLE:
        out = {"people": {}}
        for f in item.ground_truth:
            if isinstance(f, CountFeature):
                out["total_people"] = f.count
            else:
                out["people"][str(f.person_order)] = {
                    "label": f.person_label,
                    "items": [list(pair) for pair in f.items],
                }
        return out
    if cat is Category.RELATION_POSITIONAL:
        return {
            str(i): list(f.phrasings)
            for i, f in enumerate(item.ground_truth, start=1)
        }
    return {str(f.rank): list(f.object_names) for f in item.ground_truth}


def dump_benchmark(items: list[BenchmarkItem]) -> dict:
    """Serialize items back to the benchmark file shape (inverse of load)."""
    out = []
    for item in items:
        entry: dict = {
            "image_id": item.image_id,
            "image_path": item.image_path,
            "category": item.category.value,
            "ground_truth": _dump_ground_truth(item),
        }
        if item.prompt != CANONICAL_PROMPTS[item.category] or item.prompt_overridden:
            entry["prompt"] = item.prompt
        if item.prompt_overridden:
            entry["prompt_override"] = True
        out.append(entry)
    return {"items": out}


def dump_captions(records: list[CaptionRecord]) -> str:
    lines = [
        json.dumps(
            {"image_id": r.image_id, "model": r.model_name, "caption": r.caption},
            sort_keys=True,
        )
        for r in records
    ]
    return "\n".join(lines) + ("\n" if lines else "")


# Feature <-> plain-JSON codecs, used by the pipeline when persisting
# intermediate artifacts.

def feature_to_obj(feature: Feature) -> dict:
    if isinstance(feature, ObjectFeature):
        return {"kind": "object", "object": feature.object}
    if isinstance(feature, AttributeObjectFeature):
        return {
            "kind": "attribute_object",
            "attribute": feature.attribute,
            "object": feature.object,
            "alternates": list(feature.alternates),
        }
    if isinstance(feature, CountFeature):
        return {"kind": "count", "count": feature.count, "object": feature.object}
    if isinstance(feature, PeopleAttributeFeature):
        return {
            "kind": "people_attribute",
            "person_order": feature.person_order,
            "person_label": feature.person_label,
            "items": [list(pair) for pair in feature.items],
        }
    if isinstance(feature, PositionalFeature):
        return {"kind": "positional", "phrasings": list(feature.phrasings)}
    if isinstance(feature, ComparativeFeature):
        return {"kind": "comparative", "rank": feature.rank, "object_names": list(feature.object_names)}
    raise TypeError(f"not a feature: {feature!r}")


def feature_from_obj(obj: dict) -> Feature:
    kind = obj.get("kind")
    if kind == "object":
        return ObjectFeature(obj["object"])
    if kind == "attribute_object":
        return AttributeObjectFeature(obj["attribute"], obj["object"], tuple(obj.get("alternates", [])))
    if kind == "count":
        return CountFeature(int(obj["count"]), obj["object"])
    if kind == "people_attribute":
        return PeopleAttributeFeature(
            int(obj["person_order"]),
            obj["person_label"],
            tuple((pair[0], pair[1]) for pair in obj["items"]),
        )
    if kind == "positional":
        return PositionalFeature(tuple(obj["phrasings"]))
    if kind == "comparative":
        return ComparativeFeature(int(obj["rank"]), tuple(obj["object_names"]))
    raise LoadError(f"unknown feature kind: {kind!r}")
