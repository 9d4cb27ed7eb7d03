"""Two-stage caption evaluation: feature extraction, then matching.

Stage one asks the agent to pull structured features out of a generated
caption; stage two asks it to align those features against the ground truth,
splitting matches into exact ("matched") and broader-concept ("broader")
mappings.  Everything the agent returns is re-checked mechanically:
:func:`validate_match` drops entries that violate provenance rules and keeps
an audit trail, so downstream scoring can trust the mappings blindly.
"""

from __future__ import annotations

import itertools
import json
import logging
import re
from dataclasses import dataclass, field

from .agent import Agent, AgentRequest, DecodingParams, PayloadError
from .corpus import (
    AttributeObjectFeature,
    Category,
    CaptionRecord,
    ComparativeFeature,
    CountFeature,
    Feature,
    ObjectFeature,
    PeopleAttributeFeature,
    PositionalFeature,
    singularize,
)
from .prompts import (
    CORRECTIVE_SUFFIX,
    EXTRACTION_EXAMPLES,
    EXTRACTION_TEMPLATES,
    FORBIDDEN_ABSTRACT_WORDS,
    FORBIDDEN_POSITION_WORDS,
    MATCHING_EXAMPLES,
    MATCHING_TEMPLATES,
)

logger = logging.getLogger(__name__)

_WORD_NUMBERS = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10, "eleven": 11,
    "twelve": 12, "thirteen": 13, "fourteen": 14, "fifteen": 15,
    "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
    "twenty": 20,
}


@dataclass(frozen=True)
class ExtractedFeatureSet:
    """Stage-one output.  ``features`` is a list: duplicates are preserved
    because the faithfulness denominator counts every mention."""

    image_id: str
    model_name: str
    category: Category
    features: tuple[Feature, ...]
    raw_text: str = ""


@dataclass(frozen=True)
class AuditRecord:
    mapping: str  # "matched" | "broader"
    reason: str
    key: str
    value: str


@dataclass
class MatchResult:
    matched: dict[Feature, Feature] = field(default_factory=dict)
    broader: dict[Feature, Feature] = field(default_factory=dict)
    audit: tuple[AuditRecord, ...] = ()


class MatchShapeError(PayloadError):
    """The matching payload parsed as JSON but not into the declared shape."""


# --- prompt rendering -----------------------------------------------------------


def render_extraction_prompt(
    category: Category,
    caption: str,
    model_id: str = "gpt-4",
    decoding: DecodingParams = DecodingParams(),
) -> AgentRequest:
    template = EXTRACTION_TEMPLATES[category]
    body = template.render(
        in_context_examples=EXTRACTION_EXAMPLES[category],
        caption=caption,
    )
    return AgentRequest(template.system_message, body, decoding, model_id)


def _pair(attribute: str, obj: str) -> str:
    return f"({attribute}, {obj})"


def _serialize_ground_truth(category: Category, ground_truth: tuple[Feature, ...]) -> str:
    if category is Category.OBJECT_EXISTENCE:
        return json.dumps([f.object for f in ground_truth])
    if category is Category.ATTRIBUTE_OBJECT:
        entries: dict[str, str] = {}
        order = 0
        for f in ground_truth:
            if isinstance(f, AttributeObjectFeature):
                order += 1
                entries[str(order)] = ", ".join(_pair(a, f.object) for a in f.attribute_forms())
        return json.dumps(entries)
    if category is Category.ATTRIBUTE_PEOPLE:
        entries = {}
        for f in ground_truth:
            if isinstance(f, PeopleAttributeFeature):
                pairs = ", ".join(_pair(color, garment) for color, garment in f.items)
                entries[str(f.person_order)] = f"({f.person_label}, {pairs})"
        return json.dumps(entries)
    if category is Category.RELATION_POSITIONAL:
        return json.dumps(
            {str(i): list(f.phrasings) for i, f in enumerate(ground_truth, start=1)}
        )
    entries = {}
    for f in ground_truth:
        if isinstance(f, ComparativeFeature):
            entries[str(f.rank)] = " / ".join(f.object_names)
    return json.dumps(entries)


def _serialize_generated(category: Category, features: tuple[Feature, ...]) -> str:
    if category is Category.OBJECT_EXISTENCE:
        return json.dumps([f.object for f in features if isinstance(f, ObjectFeature)])
    if category is Category.ATTRIBUTE_OBJECT:
        entries: dict[str, str] = {}
        order = 0
        for f in features:
            if isinstance(f, AttributeObjectFeature):
                order += 1
                entries[str(order)] = _pair(f.attribute, f.object)
        return json.dumps(entries)
    if category is Category.ATTRIBUTE_PEOPLE:
        entries = {}
        for f in features:
            if isinstance(f, PeopleAttributeFeature):
                entries[str(f.person_order)] = ", ".join(
                    _pair(color, garment) for color, garment in f.items
                )
        return json.dumps(entries)
    if category is Category.RELATION_POSITIONAL:
        return json.dumps(
            [f.phrasings[0] for f in features if isinstance(f, PositionalFeature)]
        )
    entries = {}
    for f in features:
        if isinstance(f, ComparativeFeature):
            entries[str(f.rank)] = f.object_names[0]
    return json.dumps(entries)


def render_matching_prompt(
    category: Category,
    ground_truth: tuple[Feature, ...],
    features: tuple[Feature, ...],
    model_id: str = "gpt-4",
    decoding: DecodingParams = DecodingParams(),
) -> AgentRequest:
    template = MATCHING_TEMPLATES[category]
    body = template.render(
        in_context_examples=MATCHING_EXAMPLES[category],
        ground_truth=_serialize_ground_truth(category, ground_truth),
        generated=_serialize_generated(category, features),
    )
    return AgentRequest(template.system_message, body, decoding, model_id)


# --- stage one: extraction --------------------------------------------------------


def _parse_pair_string(text: str) -> tuple[str, str] | None:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    if "," not in text:
        return None
    attr, _, obj = text.partition(",")
    attr, obj = attr.strip().lower(), singularize(obj)
    if not attr or not obj:
        return None
    return attr, obj


def _parse_count(text: str) -> tuple[int, str] | None:
    parsed = _parse_pair_string(text)
    if parsed is None:
        return None
    num_text, obj = parsed
    if num_text.isdigit():
        return int(num_text), obj
    if num_text in _WORD_NUMBERS:
        return _WORD_NUMBERS[num_text], obj
    logger.warning("uncountable total %r; skipping count feature", text)
    return None


def _extract_objects(payload) -> list[Feature]:
    if not isinstance(payload, dict) or not isinstance(payload.get("objects"), list):
        raise PayloadError('expected {"objects": [...]} payload')
    forbidden = FORBIDDEN_ABSTRACT_WORDS | FORBIDDEN_POSITION_WORDS
    out: list[Feature] = []
    for name in payload["objects"]:
        word = singularize(str(name))
        if not word or word in forbidden:
            continue
        out.append(ObjectFeature(word))
    return out


def _extract_attr_objects(payload) -> list[Feature]:
    if not isinstance(payload, dict):
        raise PayloadError("expected a dictionary payload")
    out: list[Feature] = []
    total = payload.get("total num of objects")
    if isinstance(total, str):
        counted = _parse_count(total)
        if counted is not None:
            out.append(CountFeature(*counted))
    entries = payload.get("objects", {})
    if not isinstance(entries, dict):
        raise PayloadError('expected "objects" to be an order-keyed dictionary')
    for order in sorted(entries, key=_order_key):
        pair = _parse_pair_string(str(entries[order]))
        if pair is None:
            logger.warning("unparseable attribute pair %r; skipped", entries[order])
            continue
        out.append(AttributeObjectFeature(pair[0], pair[1]))
    return out


def _extract_people(payload) -> list[Feature]:
    if not isinstance(payload, dict):
        raise PayloadError("expected a dictionary payload")
    out: list[Feature] = []
    total = payload.get("total num of people")
    if isinstance(total, str):
        counted = _parse_count(total)
        if counted is not None:
            out.append(CountFeature(counted[0], "person"))
    clothes = payload.get("clothes", {})
    if not isinstance(clothes, dict):
        raise PayloadError('expected "clothes" to be an order-keyed dictionary')
    for order in sorted(clothes, key=_order_key):
        entry = clothes[order]
        if not isinstance(entry, dict):
            continue
        raw_items = entry.get("object", [])
        if isinstance(raw_items, str):
            raw_items = [raw_items]
        items = []
        for raw in raw_items:
            pair = _parse_pair_string(str(raw))
            if pair is not None:
                items.append(pair)
        if not items:
            continue
        label = singularize(str(entry.get("person", "person")))
        out.append(PeopleAttributeFeature(_order_key(order), label, tuple(items)))
    return out


def _extract_positional(payload) -> list[Feature]:
    if not isinstance(payload, dict) or not isinstance(payload.get("relations"), list):
        raise PayloadError('expected {"relations": [...]} payload')
    out: list[Feature] = []
    for phrase in payload["relations"]:
        text = str(phrase).strip().lower()
        if text:
            out.append(PositionalFeature((text,)))
    return out


def _extract_comparative(payload) -> list[Feature]:
    if not isinstance(payload, dict):
        raise PayloadError("expected a rank-keyed dictionary payload")
    ranked: list[str] = []
    for key in sorted(payload, key=_order_key):
        name = singularize(str(payload[key]))
        if name:
            ranked.append(name)
    # Ranks are re-numbered contiguously: judges sometimes skip integers.
    return [ComparativeFeature(i, (name,)) for i, name in enumerate(ranked, start=1)]


def _order_key(key) -> int:
    try:
        return int(str(key).strip())
    except ValueError:
        raise PayloadError(f"non-integer order key {key!r}")


_EXTRACTORS = {
    Category.OBJECT_EXISTENCE: _extract_objects,
    Category.ATTRIBUTE_OBJECT: _extract_attr_objects,
    Category.ATTRIBUTE_PEOPLE: _extract_people,
    Category.RELATION_POSITIONAL: _extract_positional,
    Category.RELATION_COMPARATIVE: _extract_comparative,
}


def extract_features(
    agent: Agent,
    category: Category,
    record: CaptionRecord,
    model_id: str = "gpt-4",
    decoding: DecodingParams = DecodingParams(),
) -> ExtractedFeatureSet:
    """Run stage one on a caption.

    An empty caption (a refusal) yields an empty feature list without an
    agent call; it is scored, not skipped.  Raises :class:`PayloadError` when
    the agent answer cannot be parsed, so the pipeline can mark the item
    failed and continue.
    """
    if not record.caption.strip():
        return ExtractedFeatureSet(record.image_id, record.model_name, category, ())
    request = render_extraction_prompt(category, record.caption, model_id, decoding)
    response = agent.complete(request)
    payload = response.parsed_payload
    if payload is None:
        raise PayloadError("no structured payload in extraction answer")
    features = _EXTRACTORS[category](payload)
    return ExtractedFeatureSet(
        record.image_id, record.model_name, category, tuple(features), response.raw_text
    )


# --- stage two: matching -----------------------------------------------------------


def _normalize_phrase(text: str) -> str:
    return re.sub(r"\s+", " ", text.strip().lower())


_SLASH_GROUP_RE = re.compile(r"\S+(?:\s*/\s*\S+)+")


def _expand_slashes(text: str) -> list[str]:
    """All readings of a phrase with "a / b" alternate groups inside it."""
    matches = list(_SLASH_GROUP_RE.finditer(text))
    if not matches:
        return [text]
    option_sets = [[w.strip() for w in m.group().split("/")] for m in matches]
    out = []
    for combo in itertools.product(*option_sets):
        result = []
        last = 0
        for m, word in zip(matches, combo):
            result.append(text[last : m.start()])
            result.append(word)
            last = m.end()
        result.append(text[last:])
        out.append("".join(result))
    return out


def _phrasing_matches(candidate: str, phrasing: str) -> bool:
    cand = _normalize_phrase(candidate)
    return any(cand == _normalize_phrase(v) for v in _expand_slashes(phrasing))


def _resolve_generated(category: Category, key: str, order: str | None, features) -> Feature | None:
    """Find the extracted feature an agent answer string refers to."""
    if category is Category.OBJECT_EXISTENCE:
        name = singularize(key)
        for f in features:
            if isinstance(f, ObjectFeature) and f.object == name:
                return f
    elif category is Category.ATTRIBUTE_OBJECT:
        pair = _parse_pair_string(key)
        if pair is None:
            return None
        attr_objects = [f for f in features if isinstance(f, AttributeObjectFeature)]
        if order is not None:
            try:
                idx = int(order)
            except ValueError:
                idx = 0
            if 1 <= idx <= len(attr_objects):
                f = attr_objects[idx - 1]
                if f.object == pair[1] or f.attribute == pair[0]:
                    return f
        for f in attr_objects:
            if (f.attribute, f.object) == pair:
                return f
    elif category is Category.ATTRIBUTE_PEOPLE:
        people = [f for f in features if isinstance(f, PeopleAttributeFeature)]
        if order is not None:
            try:
                idx = int(order)
            except ValueError:
                idx = 0
            for f in people:
                if f.person_order == idx:
                    return f
        pair = _parse_pair_string(key)
        if pair is not None:
            for f in people:
                if pair in f.items:
                    return f
    elif category is Category.RELATION_POSITIONAL:
        for f in features:
            if isinstance(f, PositionalFeature) and any(
                _phrasing_matches(key, p) for p in f.phrasings
            ):
                return f
    else:
        name = singularize(key)
        for f in features:
            if isinstance(f, ComparativeFeature) and name in f.object_names:
                return f
    return None


def _resolve_ground_truth(category: Category, value: str, order: str | None, ground_truth) -> Feature | None:
    if category is Category.OBJECT_EXISTENCE:
        name = singularize(value)
        for f in ground_truth:
            if isinstance(f, ObjectFeature) and f.object == name:
                return f
    elif category is Category.ATTRIBUTE_OBJECT:
        pair = _parse_pair_string(value)
        if pair is None:
            return None
        for f in ground_truth:
            if (
                isinstance(f, AttributeObjectFeature)
                and f.object == pair[1]
                and pair[0] in f.attribute_forms()
            ):
                return f
    elif category is Category.ATTRIBUTE_PEOPLE:
        people = [f for f in ground_truth if isinstance(f, PeopleAttributeFeature)]
        if order is not None:
            try:
                idx = int(order)
            except ValueError:
                idx = 0
            for f in people:
                if f.person_order == idx:
                    return f
        pair = _parse_pair_string(value)
        if pair is not None:
            for f in people:
                if pair in f.items:
                    return f
    elif category is Category.RELATION_POSITIONAL:
        for f in ground_truth:
            if isinstance(f, PositionalFeature) and any(
                _phrasing_matches(value, p) for p in f.phrasings
            ):
                return f
    else:
        name = singularize(value)
        for f in ground_truth:
            if isinstance(f, ComparativeFeature) and name in f.object_names:
                return f
    return None


_MATCH_KEYS = {
    Category.OBJECT_EXISTENCE: "matched-objects",
    Category.ATTRIBUTE_OBJECT: "matched-att-obj",
    Category.ATTRIBUTE_PEOPLE: "matched-att-obj",
    Category.RELATION_POSITIONAL: "matched-relations",
    Category.RELATION_COMPARATIVE: "matched-objects",
}


def _flatten_mapping(category: Category, raw) -> list[tuple[str | None, str, str]]:
    """Yield (order_or_None, key_string, value_string) from a payload mapping.

    The attribute categories nest their pairs under order keys; every other
    category is a flat string-to-string dictionary.
    """
    if raw is None:
        return []
    if not isinstance(raw, dict):
        raise MatchShapeError("mapping is not a dictionary")
    out: list[tuple[str | None, str, str]] = []
    for key, value in raw.items():
        if isinstance(value, dict):
            for inner_key, inner_value in value.items():
                out.append((str(key), str(inner_key), str(inner_value)))
        else:
            out.append((None, str(key), str(value)))
    return out


def _parse_match_payload(
    category: Category,
    payload,
    ground_truth: tuple[Feature, ...],
    features: tuple[Feature, ...],
) -> MatchResult:
    if not isinstance(payload, dict):
        raise MatchShapeError("payload is not a dictionary")
    match_key = _MATCH_KEYS[category]
    if match_key not in payload and "broader-concept" not in payload:
        raise MatchShapeError(f'payload lacks both "{match_key}" and "broader-concept"')
    result = MatchResult()
    audits: list[AuditRecord] = []
    for mapping_name, raw in (("matched", payload.get(match_key)), ("broader", payload.get("broader-concept"))):
        target = result.matched if mapping_name == "matched" else result.broader
        for order, key, value in _flatten_mapping(category, raw):
            gen = _resolve_generated(category, key, order, features)
            if gen is None:
                audits.append(AuditRecord(mapping_name, "key not among extracted features", key, value))
                logger.warning("dropping %s entry %r: key not extracted", mapping_name, key)
                continue
            gt = _resolve_ground_truth(category, value, order, ground_truth)
            if gt is None:
                audits.append(AuditRecord(mapping_name, "value not in ground truth", key, value))
                logger.warning("dropping %s entry %r -> %r: value unknown", mapping_name, key, value)
                continue
            target[gen] = gt
    result.audit = tuple(audits)
    return result


def _witnessed_object_pairs(result: MatchResult) -> set[tuple[str, str]]:
    pairs: set[tuple[str, str]] = set()
    for mapping in (result.matched, result.broader):
        for gen, gt in mapping.items():
            if isinstance(gen, (ObjectFeature, AttributeObjectFeature)) and isinstance(
                gt, (ObjectFeature, AttributeObjectFeature)
            ):
                pairs.add((gen.object, gt.object))
    return pairs


def _add_mechanical_count_matches(
    result: MatchResult,
    ground_truth: tuple[Feature, ...],
    features: tuple[Feature, ...],
) -> None:
    """Counts are matched by integer equality, never by the agent.

    The counted object names must agree, either literally or through an
    object-level correspondence the agent already asserted.
    """
    witnesses = _witnessed_object_pairs(result)
    gt_counts = [f for f in ground_truth if isinstance(f, CountFeature)]
    for gen in features:
        if not isinstance(gen, CountFeature) or gen in result.matched:
            continue
        for gt in gt_counts:
            names_agree = gen.object == gt.object or (gen.object, gt.object) in witnesses
            if gen.count == gt.count and names_agree:
                result.matched[gen] = gt
                break


def _describe(feature: Feature) -> str:
    return repr(feature)


def _canonical_alternate(value: Feature, ground_truth: tuple[Feature, ...]) -> Feature | None:
    """The ground-truth feature that ``value`` is an alternate form of, if any."""
    for gt in ground_truth:
        if type(value) is not type(gt):
            continue
        if isinstance(gt, AttributeObjectFeature):
            if value.object == gt.object and value.attribute in gt.attribute_forms():
                return gt
        elif isinstance(gt, ComparativeFeature):
            if value.rank == gt.rank and set(value.object_names) & set(gt.object_names):
                return gt
        elif isinstance(gt, PositionalFeature):
            if any(_phrasing_matches(p, g) for p in value.phrasings for g in gt.phrasings):
                return gt
    return None


def validate_match(
    result: MatchResult,
    ground_truth: tuple[Feature, ...],
    features: tuple[Feature, ...],
) -> MatchResult:
    """Deterministically drop invalid entries; never raises, always audits.

    Rules, applied in order: a key absent from the extracted features is
    dropped; a value absent from the ground truth is dropped unless it is a
    listed alternate, in which case it is canonicalized; a key present in
    both mappings keeps its matched entry and loses the broader one.
    Applying the validator to its own output is a no-op.
    """
    feature_set = set(features)
    gt_set = set(ground_truth)
    audits = list(result.audit)

    def clean(mapping: dict[Feature, Feature], name: str) -> dict[Feature, Feature]:
        out: dict[Feature, Feature] = {}
        for key, value in mapping.items():
            if key not in feature_set:
                audits.append(AuditRecord(name, "key not among extracted features", _describe(key), _describe(value)))
                continue
            if value not in gt_set:
                canonical = _canonical_alternate(value, ground_truth)
                if canonical is None:
                    audits.append(AuditRecord(name, "value not in ground truth", _describe(key), _describe(value)))
                    continue
                value = canonical
            out[key] = value
        return out

    matched = clean(result.matched, "matched")
    broader = clean(result.broader, "broader")
    for key in list(broader):
        if key in matched:
            audits.append(
                AuditRecord("broader", "key already present in matched mapping", _describe(key), _describe(broader[key]))
            )
            del broader[key]
    return MatchResult(matched, broader, tuple(audits))


def match_features(
    agent: Agent,
    category: Category,
    ground_truth: tuple[Feature, ...],
    extracted: ExtractedFeatureSet,
    model_id: str = "gpt-4",
    decoding: DecodingParams = DecodingParams(),
) -> MatchResult:
    """Run stage two and return a validated match result.

    A payload that parses as JSON but not into the declared mapping shape
    triggers exactly one corrective re-ask; a second failure raises
    :class:`PayloadError` for the pipeline to record.  Entries that merely
    violate provenance rules are dropped by the validator, not re-asked.
    """
    if not extracted.features:
        return MatchResult()
    request = render_matching_prompt(category, ground_truth, extracted.features, model_id, decoding)
    response = agent.complete(request)
    try:
        if response.parsed_payload is None:
            raise MatchShapeError("no structured payload in matching answer")
        result = _parse_match_payload(category, response.parsed_payload, ground_truth, extracted.features)
    except MatchShapeError as exc:
        logger.warning("matching payload rejected (%s); re-asking once", exc)
        retry = AgentRequest(
            request.system_message,
            request.user_prompt + CORRECTIVE_SUFFIX.replace("{violation}", str(exc)),
            request.decoding,
            request.model_id,
        )
        response = agent.complete(retry)
        if response.parsed_payload is None:
            raise PayloadError("no structured payload after corrective re-ask")
        result = _parse_match_payload(category, response.parsed_payload, ground_truth, extracted.features)
    _add_mechanical_count_matches(result, ground_truth, extracted.features)
    return validate_match(result, ground_truth, extracted.features)


# --- comparative rank expansion -----------------------------------------------------


def comparative_pairs(ranked: list[ComparativeFeature]) -> set[tuple[str, str]]:
    """All ordered (larger, smaller) name pairs implied by a rank list.

    Ranks must be contiguous from 1.  Primary names are used; alternates
    matter only during matching, which happens before expansion.
    """
    ordered = sorted(ranked, key=lambda f: f.rank)
    if [f.rank for f in ordered] != list(range(1, len(ordered) + 1)):
        raise ValueError("comparative ranks must be contiguous from 1")
    return {
        (a.object_names[0], b.object_names[0])
        for i, a in enumerate(ordered)
        for b in ordered[i + 1 :]
    }


def expand_comparative(
    ground_truth: tuple[Feature, ...],
    features: tuple[Feature, ...],
    result: MatchResult,
):
    """Recast a comparative item as ordered pairs so the usual scoring applies.

    A generated pair lands in the matched mapping when both members were
    matched and their ground-truth ranks agree with the generated order; it
    lands in broader when the order is concordant but at least one member
    only matched as a broader concept.  Discordant or unmatched pairs stay
    unmatched and so count against faithfulness.
    """
    gt_ranked = sorted(
        (f for f in ground_truth if isinstance(f, ComparativeFeature)), key=lambda f: f.rank
    )
    gen_ranked = sorted(
        (f for f in features if isinstance(f, ComparativeFeature)), key=lambda f: f.rank
    )
    via: dict[Feature, tuple[Feature, str]] = {}
    for gen, gt in result.matched.items():
        via[gen] = (gt, "matched")
    for gen, gt in result.broader.items():
        if gen not in via:
            via[gen] = (gt, "broader")

    pair_matched: dict[tuple[str, str], tuple[str, str]] = {}
    pair_broader: dict[tuple[str, str], tuple[str, str]] = {}
    gen_pairs: list[tuple[str, str]] = []
    for i, a in enumerate(gen_ranked):
        for b in gen_ranked[i + 1 :]:
            key = (a.object_names[0], b.object_names[0])
            gen_pairs.append(key)
            if a not in via or b not in via:
                continue
            (gt_a, how_a), (gt_b, how_b) = via[a], via[b]
            if not (isinstance(gt_a, ComparativeFeature) and isinstance(gt_b, ComparativeFeature)):
                continue
            if gt_a.rank < gt_b.rank:
                value = (gt_a.object_names[0], gt_b.object_names[0])
                if how_a == how_b == "matched":
                    pair_matched[key] = value
                else:
                    pair_broader[key] = value

    gt_pairs = [
        (a.object_names[0], b.object_names[0])
        for i, a in enumerate(gt_ranked)
        for b in gt_ranked[i + 1 :]
    ]
    return gen_pairs, gt_pairs, MatchResult(pair_matched, pair_broader)
