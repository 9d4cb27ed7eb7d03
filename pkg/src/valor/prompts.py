"""Prompt templates for the two agent stages: feature extraction and matching.

Template bodies are fixed strings with three substitution markers filled by
plain string replacement (never str.format, the bodies are full of literal
braces): {in_context_examples}, {caption}, and the matching-stage pair
{ground_truth} / {generated}.  The in-context example blocks below are part
of the pinned prompt version; editing them changes every request digest, so
treat any change as a cache/fixture-breaking version bump.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Category


@dataclass(frozen=True)
class PromptTemplate:
    category: Category
    stage: str  # "extraction" | "matching"
    system_message: str
    body: str

    def render(self, **slots: str) -> str:
        text = self.body
        for name, value in slots.items():
            text = text.replace("{" + name + "}", value)
        return text


PROMPT_VERSION = "1"

_EXTRACT_SYSTEM = "You are a language assistant who helps extract information from given sentences."
_EXTRACT_SYSTEM_REL = "You are a language assistant that helps to extract information from given sentences."
_EXTRACT_SYSTEM_RANK = "You are a language assistant that helps to extract ranking from given sentences."

_OBJECT_EXTRACTION_EXAMPLES = """\
Caption: "Two cows graze in a grassy field under a bright sky."
Answer: {"objects": ["cow", "field", "sky"]}

Caption: "A man rides his bike past some parked cars."
Answer: {"objects": ["man", "bike", "car"]}"""

_ATTR_OBJECT_EXTRACTION_EXAMPLES = """\
Caption: "The image shows three bags from left to right: a black bag, a white bag, and a red backpack."
Answer: {"total num of objects": "(3, bag)", "objects": {"1": "(black, bag)", "2": "(white, bag)", "3": "(red, backpack)"}}

Caption: "There are six green apples on the table."
Answer: {"total num of objects": "(6, apple)", "objects": {"1": "(green, apple)"}}"""

_ATTR_PEOPLE_EXTRACTION_EXAMPLES = """\
Caption: "Two people stand on the court. The woman on the left wears a red jacket, and the man beside her wears a blue shirt."
Answer: {"total num of people": "(2, person)", "clothes": {"1": {"person": "woman", "object": "(red, jacket)", "action": "standing"}, "2": {"person": "man", "object": "(blue, shirt)", "action": "standing"}}}"""

_POSITIONAL_EXTRACTION_EXAMPLES = """\
Caption: "A lamp sits to the left of the bed, and a clock hangs above the table."
Answer: {"relations": ["lamp to the left of bed", "clock on top of table"]}

Caption: "A quiet street at dusk."
Answer: {"relations": []}"""

_COMPARATIVE_EXTRACTION_EXAMPLES = """\
Caption: "The bed is the largest object in the room, followed by the table, and the cup is the smallest."
Answer: {"1": "bed", "2": "table", "3": "cup"}

Caption: "An empty white wall."
Answer: {}"""

_OBJECT_EXTRACTION_BODY = """\
Given an image with a caption that is generated by a vision-language model.

Please act as a linguistic master and extract all the objects from the captions.

Format your response in JSON format, with the key being "objects" and the value being a list of objects.

Please only extract objects without including attributes. For example, extract "field" instead of "grassy field". Also be mindful of plural forms. For example, extract "cow" instead of "cows".

Please only extract the object that is a concrete entity in the real world instead of abstract concepts, actions, and moves.

It cannot be an abstract notion such as day, time, scene, moment, image, game, sport, setting, plot, atmosphere, surroundings, group etc.

It cannot be any words describing the emotions such as excitement, enthusiasm, etc.

It cannot be any words describing the positions in the image, such as foreground, background, left, right, etc.

For clarity, consider these examples: {in_context_examples}
-------------------
With these examples in mind, please help me extract the objects based on the factual information in the caption.
Here is the caption: {caption}"""

_ATTR_OBJECT_EXTRACTION_BODY = """\
Given an image with a caption that is generated by a vision-language model.

Please act as a linguistic master and extract the total number and colors of all objects as mentioned in the captions.

Your answer should be a dictionary of this format: {"total num of objects": "(NUM, OBJECT)", "objects": {"ORDER": "(ATTRIBUTE, OBJECT)"}}. Remember OBJECT should be in singular format.

For clarity, consider these examples: {in_context_examples}
-------------------
With these examples in mind, please help me extract the objects and attributes based on the factual information in the caption.
Here is the caption: {caption}"""

_ATTR_PEOPLE_EXTRACTION_BODY = """\
Given an image with a caption that is generated by a vision-language model.

Please act as a linguistic master and extract the total number of people and colors of clothes for each person as mentioned in the captions.

Your answer should be a dictionary of this format: {"total num of people": "(NUM, PERSON)", "clothes": {"ORDER": {"person": "PERSON", "object": "(ATTRIBUTE, OBJECT)", "action": "ACTION"}}}. OBJECT can be clothes or accessories (e.g., bags, socks).

For clarity, consider these examples: {in_context_examples}
-------------------
With these examples in mind, please help me extract the objects and attributes based on the factual information in the caption.
Here is the caption: {caption}"""

_POSITIONAL_EXTRACTION_BODY = """\
Given an image with a caption that is generated by a vision language model.
Please act as a linguistic master and extract a set of words describing the spatial or positional relations between all the visual objects from the captions.
Your answer should be a list of values that are in format of object1 relation with object2 with the relation being left, right, top, bottom, middle etc.
Do not extract the attribute along with the object and don't extract any relation that is an verb, replace it with simply which object is (on or to the left or etc) the other object or the image. Formulate your response into a JSON object with the key being "relations" and the value being a list of relations.
If there are no relations found, please return an empty list.

For clarity, consider these examples: {in_context_examples}
-------------------
With these examples in mind, please help me extract the relations based on the information in the caption.
Here is the caption: {caption}"""

_COMPARATIVE_EXTRACTION_BODY = """\
Given an image with a caption that is generated by a vision language model.
Please act as a linguistic master and extract the rank of all the objects from large to small as mentioned in the captions.
Your answer should be a dict of values which the keys represent the ranks starting from 1 and values are the No.1 largest object to smallest.
If the caption does not mention the order of the object, you can by default view the order of objects appearance as from largest to smallest.
If there are no objects mentioned in the caption, you can return an empty dict.

For clarity, consider these examples: {in_context_examples}
-------------------
With these examples in mind, please help me extract the relations based on the information in the caption.
Here is the caption: {caption}"""

EXTRACTION_TEMPLATES: dict[Category, PromptTemplate] = {
    Category.OBJECT_EXISTENCE: PromptTemplate(
        Category.OBJECT_EXISTENCE, "extraction", _EXTRACT_SYSTEM, _OBJECT_EXTRACTION_BODY
    ),
    Category.ATTRIBUTE_OBJECT: PromptTemplate(
        Category.ATTRIBUTE_OBJECT, "extraction", _EXTRACT_SYSTEM, _ATTR_OBJECT_EXTRACTION_BODY
    ),
    Category.ATTRIBUTE_PEOPLE: PromptTemplate(
        Category.ATTRIBUTE_PEOPLE, "extraction", _EXTRACT_SYSTEM, _ATTR_PEOPLE_EXTRACTION_BODY
    ),
    Category.RELATION_POSITIONAL: PromptTemplate(
        Category.RELATION_POSITIONAL, "extraction", _EXTRACT_SYSTEM_REL, _POSITIONAL_EXTRACTION_BODY
    ),
    Category.RELATION_COMPARATIVE: PromptTemplate(
        Category.RELATION_COMPARATIVE, "extraction", _EXTRACT_SYSTEM_RANK, _COMPARATIVE_EXTRACTION_BODY
    ),
}

EXTRACTION_EXAMPLES: dict[Category, str] = {
    Category.OBJECT_EXISTENCE: _OBJECT_EXTRACTION_EXAMPLES,
    Category.ATTRIBUTE_OBJECT: _ATTR_OBJECT_EXTRACTION_EXAMPLES,
    Category.ATTRIBUTE_PEOPLE: _ATTR_PEOPLE_EXTRACTION_EXAMPLES,
    Category.RELATION_POSITIONAL: _POSITIONAL_EXTRACTION_EXAMPLES,
    Category.RELATION_COMPARATIVE: _COMPARATIVE_EXTRACTION_EXAMPLES,
}

# Words the object extractor must never emit, mirrored as a mechanical
# post-filter because judges occasionally ignore the instruction.
FORBIDDEN_ABSTRACT_WORDS = frozenset(
    {
        "day", "time", "scene", "moment", "image", "game", "sport",
        "setting", "plot", "atmosphere", "surroundings", "group",
    }
)
FORBIDDEN_POSITION_WORDS = frozenset({"foreground", "background", "left", "right"})


_MATCH_OBJECT_SYSTEM = "You are given a task to match objects from two lists that have the same meaning."
_MATCH_ATTR_SYSTEM = "You are given a task to match (attributes, objects) from two lists that have the same meaning."
_MATCH_POSITIONAL_SYSTEM = (
    "You are given a task to match (object-1 positional relation with object-2) "
    "from a ground truth dictionary and a list based on their meaning."
)
_MATCH_COMPARATIVE_SYSTEM = (
    "You are given a task to match the correct objects with the same meaning "
    "from a ground truth dictionary and a generated dictionary."
)

_OBJECT_MATCHING_EXAMPLES = """\
gt-objects: ["lady", "bench", "building"]
generated-objects: ["woman", "person", "bench"]
Answer: {"matched-objects": {"woman": "lady", "bench": "bench"}, "broader-concept": {"person": "lady"}}"""

_ATTR_OBJECT_MATCHING_EXAMPLES = """\
gt-att-obj: {"1": "(green, apple)", "2": "(black, bag), (white, bag), (striped, bag)", "3": "(red, dress)"}
generated-att-obj: {"1": "(green, apple)", "2": "(white, bag)", "3": "(red, clothes)"}
Answer: {"matched-att-obj": {"1": {"(green, apple)": "(green, apple)"}, "2": {"(white, bag)": "(black, bag)"}}, "broader-concept": {"3": {"(red, clothes)": "(red, dress)"}}}"""

_ATTR_PEOPLE_MATCHING_EXAMPLES = """\
gt-att-obj: {"1": "(woman, (red, jacket))", "2": "(man, (blue, shirt))"}
generated-att-obj: {"1": "(red, jacket)", "2": "(blue, t-shirt)"}
Answer: {"matched-att-obj": {"1": {"(red, jacket)": "(red, jacket)"}, "2": {"(blue, t-shirt)": "(blue, shirt)"}}, "broader-concept": {}}"""

_POSITIONAL_MATCHING_EXAMPLES = """\
gt-relations: {"1": ["the lamp is to the left of the bed", "the bed is to the right of the lamp"], "2": ["the clock is on top of the table / desk"]}
generated-relations: ["lamp to the left of bed", "clock near table"]
Answer: {"matched-relations": {"lamp to the left of bed": "the lamp is to the left of the bed"}, "broader-concept": {"clock near table": "the clock is on top of the table / desk"}}"""

_COMPARATIVE_MATCHING_EXAMPLES = """\
gt-objects: {"1": "bed", "2": "ground / court", "3": "cup"}
generated-objects: {"1": "bed", "2": "floor", "3": "mug"}
Answer: {"matched-objects": {"bed": "bed", "floor": "ground", "mug": "cup"}, "broader-concept": {}}"""

_OBJECT_MATCHING_BODY = """\
Input Lists:

1. "gt-objects": Ground truth objects in the image.
2. "generated-objects": Objects identified by a vision-language model.

Matching Criteria:
- For each object in "generated-objects", find the object in the "gt-objects" that have the same meaning and add it to the "matched-objects" dictionary.
- By the same meaning, we mean the words can be synonyms, can be plural/singular forms of each other and can also have different length of words to express the same meaning of objects, etc.
- Note since we find the matched object for each object in "generated-objects", it's ok that multiple objects in "generated-objects" match one object in "gt-object", list all matches.
- There is special scenario that when you can't find the matched object in "gt-objects" but you can find one or more object is a subset or a sub category of the generated object, which means that the generated object is a broader concept of the object in "gt-objects", add it to the "broader-concept" dictionary instead of the "matched-objects". If there are many objects are a subset or a sub category of the generated object, you can pick anyone of them. Note we are matching for each object in "generated-objects". If you can find the matched object in "gt-objects", you should not add it to the "broader-concept" dictionary.

Output:
1. A "broader-concept" dictionary: only if an object from "generated-objects" denotes a broader category of a concept in "gt-objects". Key = word from "generated-objects", Value = word from "gt-objects".
2. A "matched-objects" dictionary: Key = word from "generated-objects", Value = word from "gt-objects". It should not contain any words from the "broader-concept" dictionary.

For clarity, consider these examples: {in_context_examples}
-------------------
With these examples in mind, please help me extract the broader-concept, and matched-objects from the following two objects lists.
1. gt-objects: {ground_truth}
2. generated-objects: {generated}"""

_ATTR_MATCHING_BODY = """\
Inputs:

1. "gt-att-obj": A dictionary with order being the key and the ground-truth (attribute, object) pair being the value. Sometimes one object can be, for example "(black, bag), (white, bag), (striped, bag)", it means either "black" or "white" or "striped" is correct for an attribute related with the "bag" and should be matched.

2. "generated-att-obj": A dictionary with order being the key and the generated (attribute, object) pair being the value. The order is the order of the object in the generated caption.

Matching Criteria:
- For each (attribute, object) in "generated-att-obj", find the (attribute, object) in the "gt-att-obj" that have the same meaning and add it to the "matched-att-obj" dictionary.
- By the same meaning, we mean the words can be synonyms, can be plural/singular forms of each other and can also have different length of words to express the same meaning of attributes or objects, etc.
- If you find that the "generated-att-obj" can be matched with the "gt-att-obj" but the attribute or object in "generated-att-obj" is a broader concept of the attribute or object in "gt-att-obj", for example, one object in "generated-att-obj" is "person", but the "gt-att-obj" don't have "person" but specifically have "man", which is a subcategory of "person", add it to the "broader-concept" dictionary instead of the "matched-att-obj".

Output:

1. A "broader-concept" dictionary: {"ORDER2": {"(ATTRIBUTE1, OBJECT1)": "(ATTRIBUTE2, OBJECT2)"}} only if an (ATTRIBUTE1, OBJECT1) with ORDER1 from "generated-att-obj" denotes a broader category of an (ATTRIBUTE2, OBJECT2) with ORDER2 in "gt-att-obj". Notify that Key must be the (ATTRIBUTE1, OBJECT1) from "generated-att-obj", Value must be (ATTRIBUTE2, OBJECT2) from "gt-att-obj". If none, it should be an empty dictionary. ORDER1 should be the same as ORDER2.

2. A "matched-att-obj" dictionary: {"ORDER2": {"(ATTRIBUTE1, OBJECT1)": "(ATTRIBUTE2, OBJECT2)"}} only if an (ATTRIBUTE1, OBJECT1) with ORDER1 from "generated-att-obj" can be mapped to an (ATTRIBUTE2, OBJECT2) with ORDER2 in "gt-att-obj" with the matching criteria. Key must be (ATTRIBUTE1, OBJECT1) from "generated-att-obj", Value must be (ATTRIBUTE2, OBJECT2) from "gt-att-obj". It should not contain any (ATTRIBUTE1, OBJECT1) or (ATTRIBUTE2, OBJECT2) from the "broader-concept" dictionary. ORDER1 should be the same as ORDER2.

- The keys in "broader-concept" and "matched-att-obj" must be the same as "gt-att-obj".

For clarity, consider these examples: {in_context_examples}
-------------------
With these examples in mind, please help me extract the broader-concept, and matched-objects from the following two objects lists.
1. gt-objects: {ground_truth}
2. generated-objects: {generated}"""

_POSITIONAL_MATCHING_BODY = """\
Inputs:
1. "gt-relations": A dictionary of ground truth relations. Each key is a number with no meaning of order. Each key represents different relations. The values is a list of one or two relations, if there are two relations, they are synonyms. Sometimes in one relation it contains for example "image / table", it means either image or table in this phrase is correct.
2. "generated-relations": A list of generated relations from a model.

Matching Criteria:
- For each relation in "generated-relations", find the corresponding relation in "gt-relations" based on their meaning, if there is none, skip it.
- If you find a match, add it to the "matched-relations" dictionary. Note that if there are two relations in a item of "gt-relations", it means the same meaning of the relation, you can pick either one of them as the match to the relation in "generated-relations".
- If you find that the generated relation is a broader concept of a relation in "gt-relations" such as the generated relation is near each other, next to, in touch etc. but the gt-relation specifically have their relation is specifically left, right, behind or front, etc, which is more than near, add it to the "broader-concept" dictionary.

Output:
1. A "broader-concept" dictionary: only if an relation from "generated-relations" denotes a broader category of a concept in "gt-relations" Notify that Key must be the item from "generated-relations", Value must be item from "gt-relation". If none, it should be an empty dictionary.
2. A "matched-relations" dictionary: only if an relation from "generated-relations" can be mapped to an relation in "gt-relations" with the matching criteria. Key must be word from "generated-relations", Value must be word from "gt-relations". It should not contain any words from the "broader-concept" dictionary.

For clarity, consider these examples: {in_context_examples}
-------------------
With these examples in mind, please help me extract the broader-concept, and matched-relations from the following two inputs.
1. gt-relations: {ground_truth}
2. generated-relations: {generated}"""

_COMPARATIVE_MATCHING_BODY = """\
Inputs:
1. "gt-objects": A dictionary of ground truth objects. Each key is a number starting rank No.1 and increment each time by 1. Each value is the corresponding object with the rank. Sometimes one object can be, for example "ground / court", it means either ground or court is correct and should be matched.
2. "generated-objects": A dictionary with rank being the key and the object being the value. The rank is the rank of the object in the generated caption.

Matching Criteria:
- For each object in "generated-objects", find the object in the "gt-objects" that have the same meaning and add it to the "matched-objects" dictionary.
- By the same meaning, we mean the words can be synonyms, can be plural/singular forms of each other and can also have different length of words to express the same meaning of objects, etc.
- Notice that the final matched-objects must follow the order of values in "generated-objects".
- If you find that the "generated-objects" can be matched with the "gt-objects" but the object in "generated-objects" is a broader concept of the objects in "gt-objects", for example, one object in "generated-objects" is "person", but the "gt-objects" don't have "person" but specifically have "man", which is a subcategory of "person", add it to the "broader-concept" dictionary instead of the "matched-objects".

Output:
1. A "broader-concept" dictionary: only if an object from "generated-objects" denotes a broader category of a concept in "gt-objects" Notify that Key must be the item from "generated-objects", Value must be item from "gt-objects". If none, it should be an empty dictionary.
2. A "matched-objects" dictionary: only if an object from "generated-objects" can be mapped to an object in "gt-objects" with the matching criteria. Key must be word from "generated-objects", Value must be word from "gt-objects". It should not contain any words from the "broader-concept" dictionary.

For clarity, consider these examples: {in_context_examples}
-------------------
With these examples in mind, please help me extract the broader-concept, and matched-relations from the following two inputs.
1. gt-relations: {ground_truth}
2. generated-relations: {generated}"""

MATCHING_TEMPLATES: dict[Category, PromptTemplate] = {
    Category.OBJECT_EXISTENCE: PromptTemplate(
        Category.OBJECT_EXISTENCE, "matching", _MATCH_OBJECT_SYSTEM, _OBJECT_MATCHING_BODY
    ),
    Category.ATTRIBUTE_OBJECT: PromptTemplate(
        Category.ATTRIBUTE_OBJECT, "matching", _MATCH_ATTR_SYSTEM, _ATTR_MATCHING_BODY
    ),
    Category.ATTRIBUTE_PEOPLE: PromptTemplate(
        Category.ATTRIBUTE_PEOPLE, "matching", _MATCH_ATTR_SYSTEM, _ATTR_MATCHING_BODY
    ),
    Category.RELATION_POSITIONAL: PromptTemplate(
        Category.RELATION_POSITIONAL, "matching", _MATCH_POSITIONAL_SYSTEM, _POSITIONAL_MATCHING_BODY
    ),
    Category.RELATION_COMPARATIVE: PromptTemplate(
        Category.RELATION_COMPARATIVE, "matching", _MATCH_COMPARATIVE_SYSTEM, _COMPARATIVE_MATCHING_BODY
    ),
}

MATCHING_EXAMPLES: dict[Category, str] = {
    Category.OBJECT_EXISTENCE: _OBJECT_MATCHING_EXAMPLES,
    Category.ATTRIBUTE_OBJECT: _ATTR_OBJECT_MATCHING_EXAMPLES,
    Category.ATTRIBUTE_PEOPLE: _ATTR_PEOPLE_MATCHING_EXAMPLES,
    Category.RELATION_POSITIONAL: _POSITIONAL_MATCHING_EXAMPLES,
    Category.RELATION_COMPARATIVE: _COMPARATIVE_MATCHING_EXAMPLES,
}

# Appended once when a matching payload cannot be parsed into the declared
# shape; the retry prompt names the rule that was broken.
CORRECTIVE_SUFFIX = (
    "\n\nYour previous answer violated the required output format: {violation}. "
    "Please answer again with exactly one JSON document in the format stated above."
)
