"""Question bank: validated screening questions with keyword-driven
followups. The shipped bank is a non-clinical placeholder."""

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

__all__ = ["Question", "QuestionBank", "BankInvalidError", "CLOSING_ID"]

CLOSING_ID = "closing"


class BankInvalidError(ValueError):
    """The question bank fails validation."""


@dataclass(frozen=True)
class Question:
    id: str
    text: str
    topic_keywords: tuple = ()
    followups: dict = field(default_factory=dict)  # keyword -> question id
    priority: int = 0
    opener: bool = False


@dataclass(frozen=True)
class QuestionBank:
    questions: tuple
    closing_prompt: str = "Thank you for talking with me today."
    disclaimer: str = ""

    def __post_init__(self):
        if not self.questions:
            raise BankInvalidError("question bank is empty")
        ids = [q.id for q in self.questions]
        if len(set(ids)) != len(ids):
            raise BankInvalidError("question ids must be unique")
        if CLOSING_ID in ids:
            raise BankInvalidError(f"question id {CLOSING_ID!r} is reserved")
        known = set(ids)
        for q in self.questions:
            for keyword, target in q.followups.items():
                if target not in known:
                    raise BankInvalidError(
                        f"{q.id}: followup {keyword!r} targets unknown question {target!r}")
        if not any(q.opener for q in self.questions):
            raise BankInvalidError("at least one question must be marked opener")

    def __len__(self) -> int:
        return len(self.questions)

    def by_id(self, question_id: str) -> Question:
        for q in self.questions:
            if q.id == question_id:
                return q
        raise KeyError(question_id)

    def opener(self) -> Question:
        openers = [q for q in self.questions if q.opener]
        return max(openers, key=lambda q: (q.priority, q.id))

    def closing_question(self) -> Question:
        return Question(id=CLOSING_ID, text=self.closing_prompt)

    @classmethod
    def from_dict(cls, data: dict) -> "QuestionBank":
        try:
            questions = tuple(
                Question(
                    id=item["id"],
                    text=item["text"],
                    topic_keywords=tuple(item.get("topic_keywords", ())),
                    followups=dict(item.get("followups", {})),
                    priority=int(item.get("priority", 0)),
                    opener=bool(item.get("opener", False)),
                )
                for item in data.get("questions", [])
            )
        except (KeyError, TypeError) as exc:
            raise BankInvalidError(f"malformed question entry: {exc}") from exc
        return cls(
            questions=questions,
            closing_prompt=data.get("closing_prompt", cls.closing_prompt),
            disclaimer=data.get("disclaimer", ""),
        )

    @classmethod
    def load(cls, path: str | Path) -> "QuestionBank":
        return cls.from_dict(json.loads(Path(path).read_text("utf-8")))

    @classmethod
    def default(cls) -> "QuestionBank":
        blob = resources.files("chatscreen.data").joinpath("question_bank.json").read_text("utf-8")
        return cls.from_dict(json.loads(blob))
