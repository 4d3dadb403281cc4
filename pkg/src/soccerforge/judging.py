"""Judge scoring protocol: prompt construction and verdict parsing.

The judge sees one query, the ground-truth label, and a dict of model
answers; it must return a fenced dictionary with "scores", "reason" and
"predicted_class" maps keyed by model name. The template instructs the
judge to avoid ties, but the parser accepts whatever comes back;
enforcing uniqueness here would corrupt data. Scores are clamped to
[0, 10] with an audit warning; predictions matching no class map to the
wrong-prediction sentinel.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import SoccerForgeError
from .jsonish import ExtractionError, parse_object

logger = logging.getLogger(__name__)

WRONG_PREDICTION = "Wrong Prediction"


class JudgeError(SoccerForgeError):
    pass


class UnparseableVerdict(JudgeError):
    def __init__(self, raw: str, reason: str):
        self.raw = raw
        super().__init__(reason)


class MissingModel(JudgeError):
    def __init__(self, missing: Sequence[str]):
        self.missing = tuple(sorted(missing))
        super().__init__(f"verdict is missing model(s): {', '.join(self.missing)}")


class NonNumericScore(JudgeError):
    def __init__(self, model: str, value):
        self.model = model
        self.value = value
        super().__init__(f"score for {model!r} is not numeric: {value!r}")


@dataclass(frozen=True)
class ClassSet:
    """An ordered label vocabulary for one classification task."""

    name: str
    labels: tuple[str, ...]
    wrong_sentinel: str = WRONG_PREDICTION

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("class labels must be unique")
        if not self.labels:
            raise ValueError("class set must have at least one label")


SIX_CLASS = ClassSet(
    "six",
    (
        "Ball out of play",
        "Foul",
        "Goal",
        "Shots off target",
        "Shots on target",
        "Throw-in",
    ),
)

SIXTEEN_CLASS = ClassSet(
    "sixteen",
    (
        "Ball out of play",
        "Clearance",
        "Corner",
        "Direct free-kick",
        "Foul",
        "Goal",
        "Indirect free-kick",
        "Kick-off",
        "Offside",
        "Penalty",
        "Red card",
        "Shots off target",
        "Shots on target",
        "Substitution",
        "Throw-in",
        "Yellow card",
    ),
)

CLASS_SETS = {cs.name: cs for cs in (SIX_CLASS, SIXTEEN_CLASS)}

_COUNT_WORDS = {
    1: "one", 2: "two", 3: "three", 4: "four", 5: "five", 6: "six",
    7: "seven", 8: "eight", 9: "nine", 10: "ten", 11: "eleven",
    12: "twelve", 13: "thirteen", 14: "fourteen", 15: "fifteen",
    16: "sixteen", 17: "seventeen", 18: "eighteen", 19: "nineteen",
    20: "twenty",
}


def _count_word(n: int) -> str:
    return _COUNT_WORDS.get(n, str(n))


def _quoted_list(labels: Sequence[str]) -> str:
    quoted = [f"'{label}'" for label in labels]
    if len(quoted) == 1:
        return quoted[0]
    return ", ".join(quoted[:-1]) + f", or {quoted[-1]}"


JUDGE_TEMPLATE = """The task is to classify the outputs of different models based on whether they correctly identified the given class. The score reflects the model's ability to correctly classify the Query into the Actual Label provided.

### Scoring Criteria:
- 0: Completely incorrect classification (model's answer does not match the Actual Label at all).
- 10: Fully correct classification (model's answer exactly matches the Actual Label).

### Inputs:
Query: {query}
Actual Label: "{label}"
LLM-Answers: {answers}

### Task:
For each model's answer provided in the LLM-Answers dictionary:
1. Assess whether the model's output correctly identifies the Actual Label.
2. Assign a score from 0 to 10 based on the correctness of the classification. If the classification is fully correct, assign a score of 10. If it is completely incorrect, assign a score of 0. Partial correctness or near misses can be scored in between.
3. Ensure no two models have the same score to clarify the comparison.
4. predicted_class could be '{sentinel}' if the model's answer is different from the {count_word} possible classes

Output a dictionary enclosed by ``` on both sides with three keys:
- "scores": A dictionary where each key is the model name from the LLM-Answers dictionary, and the value is the score (range 0-10) assigned to the model's answer.
- "reason": A dictionary where each key is the model name, and the value is a string explanation for why the score was assigned to the respective model.
- "predicted_class": A dictionary where each key is the model name, and the value is one best predicted class only out of the {count_word} possible classes:  {class_list}. Output '{sentinel}' if the  the model's answer does not match any of the possible classes.

### Output:
No coding is required. Directly provide the expected output result as a valid Python JSON dict of dict enclosed in ```."""


def build_judge_prompt(
    query: str,
    label: str,
    answers: Mapping[str, str],
    classes: ClassSet = SIX_CLASS,
) -> str:
    """Fill the scorer template for one clip; deterministic bytes."""
    if not answers:
        raise ValueError("at least one model answer is required")
    rendered = json.dumps(dict(answers), ensure_ascii=False, sort_keys=True)
    return JUDGE_TEMPLATE.format(
        query=query,
        label=label,
        answers=rendered,
        sentinel=classes.wrong_sentinel,
        count_word=_count_word(len(classes.labels)),
        class_list=_quoted_list(classes.labels),
    )


@dataclass(frozen=True)
class JudgeVerdict:
    scores: dict[str, int]
    reasons: dict[str, str]
    predicted_class: dict[str, str]
    warnings: tuple[str, ...] = ()


def _coerce_score(model: str, value) -> float:
    if isinstance(value, bool):
        raise NonNumericScore(model, value)
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            raise NonNumericScore(model, value) from None
    raise NonNumericScore(model, value)


def parse_judge_output(
    raw: str, expected_models: Iterable[str], classes: ClassSet = SIX_CLASS
) -> JudgeVerdict:
    """Parse a judge reply into a verdict covering every expected model."""
    expected = set(expected_models)
    try:
        obj = parse_object(raw)
    except ExtractionError as exc:
        raise UnparseableVerdict(raw, str(exc)) from exc
    for key in ("scores", "reason", "predicted_class"):
        if key not in obj or not isinstance(obj[key], dict):
            raise UnparseableVerdict(raw, f"missing or non-dict key {key!r}")

    missing = [
        m
        for m in expected
        if m not in obj["scores"]
        or m not in obj["reason"]
        or m not in obj["predicted_class"]
    ]
    if missing:
        raise MissingModel(missing)

    warnings: list[str] = []
    scores: dict[str, int] = {}
    reasons: dict[str, str] = {}
    predicted: dict[str, str] = {}
    for model in sorted(expected):
        value = _coerce_score(model, obj["scores"][model])
        clamped = min(max(value, 0.0), 10.0)
        if clamped != value:
            message = f"score {value:g} for {model!r} clamped to {clamped:g}"
            warnings.append(message)
            logger.warning("%s", message)
        scores[model] = int(round(clamped))
        reasons[model] = str(obj["reason"][model])
        raw_class = obj["predicted_class"][model]
        predicted[model] = (
            raw_class if raw_class in classes.labels else classes.wrong_sentinel
        )
    return JudgeVerdict(scores, reasons, predicted, tuple(warnings))


CLASSIFICATION_QUERY_TEMPLATE = (
    "This video shows a short soccer clip. Classify the event shown into "
    "exactly one of the following classes: {class_list}. Predict the "
    "appropriate class and justify your selection."
)


def build_classification_query(clip, classes: ClassSet) -> str:
    """The question shown to candidate models for one clip.

    The text depends only on the class set, so every clip of a task sees
    the same deterministic query; the clip argument is accepted for call
    symmetry with the other builders.
    """
    del clip
    return CLASSIFICATION_QUERY_TEMPLATE.format(class_list=_quoted_list(classes.labels))


# ---------------------------------------------------------------------------
# verdict log


def judge_prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


def verdict_to_record(
    clip_id: str, raw: str, verdict: JudgeVerdict, prompt_hash: str
) -> dict:
    return {
        "clip_id": clip_id,
        "raw": raw,
        "verdict": {
            "scores": verdict.scores,
            "reasons": verdict.reasons,
            "predicted_class": verdict.predicted_class,
            "warnings": list(verdict.warnings),
        },
        "prompt_hash": prompt_hash,
    }
