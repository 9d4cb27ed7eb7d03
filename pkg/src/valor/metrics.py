"""Scoring: faithfulness/coverage, vocabulary-based baselines, and aggregation.

Faithfulness asks how much of what the captioner said is grounded; coverage
asks how much of the ground truth it mentioned.  Both are per-item reals in
[0, 1] computed from validated match mappings.  The vocabulary-based scorer
(:func:`chair_scores`) reimplements the classic fixed-list object metric so
the two approaches can be compared on equal inputs.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import Category, singularize
from .features import MatchResult

logger = logging.getLogger(__name__)


# --- per-item scores -------------------------------------------------------------


def faithfulness(features: Sequence, result: MatchResult) -> float:
    """Fraction of generated features that matched, exactly or as broader.

    The numerator counts distinct features appearing as a key in either
    mapping; the denominator counts every mention, duplicates included, so a
    caption that repeats an unmatched feature pays for each repeat.  An empty
    feature list (a refusal) is defined as 1.0: nothing claimed, nothing
    hallucinated.  Callers flag that case separately.
    """
    if not features:
        return 1.0
    matched_keys = set(result.matched) | set(result.broader)
    distinct = set(features)
    return len(distinct & matched_keys) / len(features)


def coverage(ground_truth: Sequence, result: MatchResult) -> float:
    """Fraction of ground-truth features hit by an exact match.

    Broader-concept matches deliberately do not count: naming "animal" says
    little about whether the cow was seen.  Raises on empty ground truth,
    which is a benchmark defect rather than a score.
    """
    if not ground_truth:
        raise ValueError("coverage undefined: empty ground truth")
    hit = set(result.matched.values())
    return len(hit) / len(ground_truth)


@dataclass(frozen=True)
class ScoreCounts:
    n_generated: int
    n_matched_keys: int
    n_broader_keys: int
    n_generated_matched: int  # distinct generated features with any match
    n_ground_truth: int
    n_ground_truth_covered: int


@dataclass(frozen=True)
class ItemScore:
    image_id: str
    model_name: str
    category: str
    faithfulness: float
    coverage: float
    counts: ScoreCounts
    empty_generated: bool = False


def score_pair(features: Sequence, ground_truth: Sequence, result: MatchResult):
    """(faithfulness, coverage, counts) for one item's validated mappings."""
    matched_keys = set(result.matched) | set(result.broader)
    counts = ScoreCounts(
        n_generated=len(features),
        n_matched_keys=len(result.matched),
        n_broader_keys=len(result.broader),
        n_generated_matched=len(set(features) & matched_keys),
        n_ground_truth=len(ground_truth),
        n_ground_truth_covered=len(set(result.matched.values())),
    )
    return faithfulness(features, result), coverage(ground_truth, result), counts


# --- vocabulary-based baseline ------------------------------------------------------


class SynonymTable:
    """surface -> canonical map over a closed object vocabulary.

    The file format is one "surface<TAB>canonical" pair per line; every
    canonical name must also appear as its own surface so the vocabulary is
    exactly the set of canonical names.
    """

    def __init__(self, mapping: dict[str, str]) -> None:
        vocabulary = set(mapping.values())
        for canonical in sorted(vocabulary):
            if mapping.get(canonical) != canonical:
                raise ValueError(f"canonical name {canonical!r} lacks an identity row")
        self.mapping = dict(mapping)
        self.vocabulary = frozenset(vocabulary)

    @classmethod
    def from_file(cls, path: str | Path) -> "SynonymTable":
        mapping: dict[str, str] = {}
        text = Path(path).read_text()
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'surface<TAB>canonical'")
            mapping[parts[0].strip().lower()] = parts[1].strip().lower()
        return cls(mapping)

    @classmethod
    def bundled(cls) -> "SynonymTable":
        ref = resources.files("valor").joinpath("data/coco_synonyms.tsv")
        with resources.as_file(ref) as path:
            return cls.from_file(path)

    def canonical(self, word: str) -> str | None:
        return self.mapping.get(singularize(word))


@dataclass(frozen=True)
class ChairResult:
    faithfulness: float
    coverage: float
    hallucinated: frozenset[str]
    detected: frozenset[str]  # canonical in-vocabulary caption objects


def chair_scores(
    caption_objects: Iterable[str], gt_objects: Iterable[str], table: SynonymTable
) -> ChairResult:
    """Closed-vocabulary hallucination scoring.

    Caption objects outside the vocabulary are invisible to this metric; that
    blindness is the point of comparison with the agent pipeline.  Ground
    truth must canonicalize fully, since it defines the answer key.
    """
    canonical_gt: set[str] = set()
    for obj in gt_objects:
        canonical = table.canonical(obj)
        if canonical is None:
            raise ValueError(f"ground-truth object {obj!r} not in the synonym table")
        canonical_gt.add(canonical)
    if not canonical_gt:
        raise ValueError("empty ground truth")
    detected = {c for c in (table.canonical(o) for o in caption_objects) if c is not None}
    hallucinated = detected - canonical_gt
    faithful = 1.0 - len(hallucinated) / len(detected) if detected else 1.0
    covered = len(canonical_gt & detected) / len(canonical_gt)
    return ChairResult(faithful, covered, frozenset(hallucinated), frozenset(detected))


_TOKEN_RE = re.compile(r"[a-z]+")


def caption_to_vocab_words(caption: str, table: SynonymTable) -> list[str]:
    """Scan caption text for surface forms known to the synonym table.

    Two-word surfaces ("traffic light") are preferred over their parts.
    Returns surface forms in order of appearance; deduplication is left to
    the set-based scoring.
    """
    tokens = _TOKEN_RE.findall(caption.lower())
    words: list[str] = []
    i = 0
    while i < len(tokens):
        if i + 1 < len(tokens):
            bigram = f"{tokens[i]} {tokens[i + 1]}"
            if singularize(bigram) in table.mapping or bigram in table.mapping:
                words.append(bigram)
                i += 2
                continue
        if singularize(tokens[i]) in table.mapping:
            words.append(tokens[i])
        i += 1
    return words


# --- detection accuracies ------------------------------------------------------------


def acc_f(detected: Iterable[str], true_hallucinated: Iterable[str], clamp: bool = True) -> float:
    """Hallucination-detection accuracy with a false-alarm penalty.

    Every correctly detected hallucination earns +1, every false alarm -1,
    normalized by the number of true hallucinations.  With no true
    hallucinations the score is 1.0 only for a silent detector.  ``clamp``
    floors the score at zero; pass False to keep the raw signed value.
    """
    d, t = set(detected), set(true_hallucinated)
    if not t:
        return 1.0 if not d else 0.0
    raw = (len(d & t) - len(d - t)) / len(t)
    return max(0.0, raw) if clamp else raw


def acc_c(extracted: Iterable[str], mentioned: Iterable[str]) -> float:
    """Share of annotated caption mentions the extractor actually recovered."""
    m = set(mentioned)
    if not m:
        raise ValueError("no annotated mentions to recover")
    return len(set(extracted) & m) / len(m)


# --- correlation ---------------------------------------------------------------------


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation, clamped into [-1, 1].

    Raises on length mismatch, fewer than two points, or zero variance in
    either vector.
    """
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValueError("need at least two points")
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(np.dot(xc, xc))
    syy = float(np.dot(yc, yc))
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("zero variance")
    r = float(np.dot(xc, yc)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


# --- aggregation ----------------------------------------------------------------------


def round_half_up(value: float, decimals: int = 1) -> float:
    quantum = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class CategoryCell:
    n_items: int
    n_empty_generated: int
    faithfulness_mean: float  # raw, in [0, 1]
    coverage_mean: float
    faithfulness_pct: float  # percent, rounded half-up to one decimal
    coverage_pct: float


@dataclass
class CategoryReport:
    model_name: str
    cells: dict[str, CategoryCell]
    missing_categories: list[str]
    average_faithfulness_pct: float
    average_coverage_pct: float


def aggregate(scores: list[ItemScore]) -> list[CategoryReport]:
    """Per-model, per-category unweighted means, then unweighted averages.

    The two Average columns are means of the rounded per-category percents
    over the categories actually present; absent categories are listed, not
    silently averaged as zero.  Items with an empty generated feature list
    contribute their defined 1.0 faithfulness, and the cell records how many
    there were.
    """
    by_model: dict[str, list[ItemScore]] = {}
    for score in scores:
        by_model.setdefault(score.model_name, []).append(score)

    reports: list[CategoryReport] = []
    for model_name in sorted(by_model):
        model_scores = by_model[model_name]
        cells: dict[str, CategoryCell] = {}
        for category in Category:
            bucket = [s for s in model_scores if s.category == category.value]
            if not bucket:
                continue
            f_mean = sum(s.faithfulness for s in bucket) / len(bucket)
            c_mean = sum(s.coverage for s in bucket) / len(bucket)
            cells[category.value] = CategoryCell(
                n_items=len(bucket),
                n_empty_generated=sum(1 for s in bucket if s.empty_generated),
                faithfulness_mean=f_mean,
                coverage_mean=c_mean,
                faithfulness_pct=round_half_up(f_mean * 100.0, 1),
                coverage_pct=round_half_up(c_mean * 100.0, 1),
            )
        missing = [c.value for c in Category if c.value not in cells]
        if missing:
            logger.warning("model %s missing categories: %s", model_name, ", ".join(missing))
        avg_f = sum(cell.faithfulness_pct for cell in cells.values()) / len(cells)
        avg_c = sum(cell.coverage_pct for cell in cells.values()) / len(cells)
        reports.append(CategoryReport(model_name, cells, missing, avg_f, avg_c))
    return reports


_COLUMN_ORDER = [
    (Category.OBJECT_EXISTENCE.value, "Object Existence"),
    (Category.ATTRIBUTE_OBJECT.value, "Attribute (Object)"),
    (Category.ATTRIBUTE_PEOPLE.value, "Attribute (People)"),
    (Category.RELATION_POSITIONAL.value, "Relation (Positional)"),
    (Category.RELATION_COMPARATIVE.value, "Relation (Comparative)"),
]


def render_report_table(reports: list[CategoryReport]) -> str:
    """Fixed-width text table: per-category F/C percents plus the averages."""
    headers = ["Model"]
    for _, label in _COLUMN_ORDER:
        headers.extend([f"{label} F", f"{label} C"])
    headers.extend(["Average F", "Average C"])

    rows: list[list[str]] = []
    for report in reports:
        row = [report.model_name]
        for key, _ in _COLUMN_ORDER:
            cell = report.cells.get(key)
            if cell is None:
                row.extend(["-", "-"])
            else:
                row.extend([f"{cell.faithfulness_pct:.1f}", f"{cell.coverage_pct:.1f}"])
        row.append(f"{round_half_up(report.average_faithfulness_pct, 2):.2f}")
        row.append(f"{round_half_up(report.average_coverage_pct, 2):.2f}")
        rows.append(row)

    widths = [max(len(headers[i]), *(len(r[i]) for r in rows)) if rows else len(headers[i]) for i in range(len(headers))]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * widths[i] for i in range(len(headers))),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines) + "\n"
