from valor.corpus import Category
from valor.prompts import (
    CORRECTIVE_SUFFIX,
    EXTRACTION_EXAMPLES,
    EXTRACTION_TEMPLATES,
    FORBIDDEN_ABSTRACT_WORDS,
    FORBIDDEN_POSITION_WORDS,
    MATCHING_EXAMPLES,
    MATCHING_TEMPLATES,
    PROMPT_VERSION,
)


def test_every_category_has_both_templates_and_examples():
    for mapping in (EXTRACTION_TEMPLATES, EXTRACTION_EXAMPLES, MATCHING_TEMPLATES, MATCHING_EXAMPLES):
        assert set(mapping) == set(Category)


def test_extraction_render_fills_all_markers():
    for category in Category:
        template = EXTRACTION_TEMPLATES[category]
        rendered = template.render(
            in_context_examples=EXTRACTION_EXAMPLES[category],
            caption="A dog on a bench.",
        )
        assert "A dog on a bench." in rendered
        assert "{in_context_examples}" not in rendered
        assert "{caption}" not in rendered
        assert template.system_message


def test_matching_render_fills_all_markers():
    for category in Category:
        template = MATCHING_TEMPLATES[category]
        rendered = template.render(
            in_context_examples=MATCHING_EXAMPLES[category],
            ground_truth='["dog"]',
            generated='["dog", "cat"]',
        )
        assert '["dog"]' in rendered
        assert '["dog", "cat"]' in rendered
        assert "{ground_truth}" not in rendered
        assert "{generated}" not in rendered


def test_render_tolerates_literal_json_braces():
    # Template bodies are full of {"key": ...} examples; rendering must not
    # treat those as slots.
    template = EXTRACTION_TEMPLATES[Category.OBJECT_EXISTENCE]
    rendered = template.render(
        in_context_examples=EXTRACTION_EXAMPLES[Category.OBJECT_EXISTENCE],
        caption="cap",
    )
    assert '{"objects"' in rendered


def test_corrective_suffix_carries_violation():
    text = CORRECTIVE_SUFFIX.replace("{violation}", "mapping is not a dictionary")
    assert "mapping is not a dictionary" in text
    assert "{violation}" not in text


def test_prompt_version_pinned():
    assert PROMPT_VERSION == "1"


def test_forbidden_word_lists_are_disjoint_and_lowercase():
    assert not FORBIDDEN_ABSTRACT_WORDS & FORBIDDEN_POSITION_WORDS
    for word in FORBIDDEN_ABSTRACT_WORDS | FORBIDDEN_POSITION_WORDS:
        assert word == word.lower()
