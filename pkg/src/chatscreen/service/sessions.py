"""Session management for the screening chat: per-message scoring, risk
aggregation, question selection and report generation.

Each session is a serialization domain: its lock guarantees messages are
processed strictly in arrival order while many sessions run concurrently
over the shared read-only detector model. An append-only JSON-lines event
log per session makes conversations replayable after a restart.
"""

import json
import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from ..textproc import CleanRules, clean_text, default_rules, encode
from .bank import CLOSING_ID, Question, QuestionBank

__all__ = [
    "SessionNotFoundError", "SessionClosedError", "ModelNotLoadedError",
    "RiskThresholds", "RiskAggregate", "ModelDetector", "NoopIssueDetector",
    "ChatSession", "SessionManager", "RECOMMENDED_ACTIONS",
]

RECOMMENDED_ACTIONS = {
    "none": "no action indicated",
    "elevated": "review transcript",
    "high": "immediate professional referral",
}


class SessionNotFoundError(KeyError):
    pass


class SessionClosedError(RuntimeError):
    pass


class ModelNotLoadedError(RuntimeError):
    pass


@dataclass(frozen=True)
class RiskThresholds:
    """Aggregation constants; overridable through the service config."""

    flag: float = 0.8
    high_max: float = 0.8
    high_ewma: float = 0.6
    elevated_max: float = 0.5
    ewma_decay: float = 0.7

    def to_dict(self) -> dict:
        return {
            "flag": self.flag, "high_max": self.high_max,
            "high_ewma": self.high_ewma, "elevated_max": self.elevated_max,
            "ewma_decay": self.ewma_decay,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RiskThresholds":
        return cls(**data)


@dataclass
class RiskAggregate:
    max_prob: float = 0.0
    ewma_prob: float = 0.0
    flagged_count: int = 0
    level: str = "none"
    message_count: int = 0

    def update(self, prob: float, t: RiskThresholds) -> None:
        self.max_prob = max(self.max_prob, prob)
        if self.message_count == 0:
            self.ewma_prob = prob
        else:
            self.ewma_prob = t.ewma_decay * self.ewma_prob + (1.0 - t.ewma_decay) * prob
        self.message_count += 1
        if prob >= t.flag:
            self.flagged_count += 1
        self.level = risk_level(self.max_prob, self.ewma_prob, t)

    def to_dict(self) -> dict:
        return {
            "max_prob": self.max_prob,
            "ewma_prob": self.ewma_prob,
            "flagged_count": self.flagged_count,
            "level": self.level,
        }


def risk_level(max_prob: float, ewma_prob: float, t: RiskThresholds) -> str:
    """Total mapping from (max, ewma) to a risk level."""
    if max_prob >= t.high_max or ewma_prob >= t.high_ewma:
        return "high"
    if max_prob >= t.elevated_max:
        return "elevated"
    return "none"


class ModelDetector:
    """Scores cleaned text with the GRU classifier (probability of the
    suicide class)."""

    def __init__(self, model, vocab):
        self.model = model
        self.vocab = vocab

    def score(self, cleaned_text: str) -> float:
        encoded = encode(cleaned_text, self.vocab, self.model.config.seq_len)
        probs = self.model.forward(encoded[None, :], mode="infer")
        return float(probs[0, 0])


class NoopIssueDetector:
    """Default pluggable detector for other mental-health issues."""

    def assess(self, session: "ChatSession") -> list:
        return []


@dataclass
class TranscriptEntry:
    role: str  # "bot" | "user"
    text: str
    timestamp: str

    def to_dict(self) -> dict:
        return {"role": self.role, "text": self.text, "timestamp": self.timestamp}


class ChatSession:
    def __init__(self, session_id: str):
        self.session_id = session_id
        self.transcript: list = []
        self.scores: list = []
        self.asked: set = set()
        self.state = "active"
        self.aggregate = RiskAggregate()
        self.last_question_id: str | None = None
        self.lock = threading.Lock()


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


class SessionManager:
    """Owns all sessions; safe for concurrent use across sessions."""

    def __init__(self, bank: QuestionBank, detector=None,
                 rules: CleanRules | None = None,
                 thresholds: RiskThresholds | None = None,
                 data_dir: str | Path | None = None,
                 model_checksum: str = "",
                 issue_detector=None,
                 clock=None):
        self.bank = bank
        self.detector = detector
        self.rules = rules if rules is not None else default_rules()
        self.thresholds = thresholds if thresholds is not None else RiskThresholds()
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self.model_checksum = model_checksum
        self.issue_detector = issue_detector if issue_detector is not None else NoopIssueDetector()
        self.clock = clock if clock is not None else _utc_now
        self._sessions: dict = {}
        self._registry_lock = threading.RLock()
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._replay_logs()

    # ---- persistence -----------------------------------------------------

    def _log_path(self, session_id: str) -> Path | None:
        if self.data_dir is None:
            return None
        return self.data_dir / f"{session_id}.jsonl"

    def _append_event(self, session_id: str, event: dict) -> None:
        path = self._log_path(session_id)
        if path is None:
            return
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")

    def _replay_logs(self) -> None:
        for path in sorted(self.data_dir.glob("*.jsonl")):
            session = None
            for line in path.read_text("utf-8").splitlines():
                if not line.strip():
                    continue
                event = json.loads(line)
                kind = event.get("event")
                if kind == "created":
                    session = ChatSession(event["session_id"])
                    question = self.bank.by_id(event["question_id"])
                    session.transcript.append(TranscriptEntry("bot", question.text, event["ts"]))
                    session.asked.add(question.id)
                    session.last_question_id = question.id
                elif session is None:
                    continue
                elif kind == "user_message":
                    session.transcript.append(TranscriptEntry("user", event["text"], event["ts"]))
                    session.scores.append(event["score"])
                    session.aggregate.update(event["score"], self.thresholds)
                elif kind == "bot_question":
                    qid = event["question_id"]
                    question = (self.bank.closing_question() if qid == CLOSING_ID
                                else self.bank.by_id(qid))
                    session.transcript.append(TranscriptEntry("bot", question.text, event["ts"]))
                    if qid != CLOSING_ID:
                        session.asked.add(qid)
                    session.last_question_id = qid
                elif kind == "closed":
                    session.state = "closed"
            if session is not None:
                self._sessions[session.session_id] = session

    # ---- session operations ----------------------------------------------

    def _get(self, session_id: str) -> ChatSession:
        with self._registry_lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise SessionNotFoundError(session_id) from None

    def create_session(self):
        """Start a session; returns (session_id, opening Question)."""
        opener = self.bank.opener()
        with self._registry_lock:
            session_id = secrets.token_hex(16)
            while session_id in self._sessions:
                session_id = secrets.token_hex(16)
            session = ChatSession(session_id)
            now = self.clock()
            session.transcript.append(TranscriptEntry("bot", opener.text, now))
            session.asked.add(opener.id)
            session.last_question_id = opener.id
            self._sessions[session_id] = session
        self._append_event(session_id, {
            "event": "created", "session_id": session_id,
            "question_id": opener.id, "ts": now,
        })
        return session_id, opener

    def select_next_question(self, session: ChatSession, cleaned_text: str) -> Question:
        """Keyword-driven followup of the last asked question when one
        matches, otherwise the highest-priority unasked question; the
        closing prompt once everything has been asked. Ties break on id."""
        tokens = set(cleaned_text.split(" ")) if cleaned_text else set()
        if session.last_question_id and session.last_question_id != CLOSING_ID:
            last = self.bank.by_id(session.last_question_id)
            candidates = [
                self.bank.by_id(target)
                for keyword, target in last.followups.items()
                if keyword in tokens and target not in session.asked
            ]
            if candidates:
                return min(candidates, key=lambda q: (-q.priority, q.id))
        unasked = [q for q in self.bank.questions if q.id not in session.asked]
        if unasked:
            return min(unasked, key=lambda q: (-q.priority, q.id))
        return self.bank.closing_question()

    def post_message(self, session_id: str, text: str) -> dict:
        """Score one user message, update the aggregate, pick the next
        question and append both turns to the transcript atomically."""
        if self.detector is None:
            raise ModelNotLoadedError("no detector model is loaded")
        session = self._get(session_id)
        with session.lock:
            if session.state != "active":
                raise SessionClosedError(session_id)
            cleaned = clean_text(text, self.rules)
            score = float(self.detector.score(cleaned))
            now = self.clock()
            session.transcript.append(TranscriptEntry("user", text, now))
            session.scores.append(score)
            session.aggregate.update(score, self.thresholds)
            self._append_event(session_id, {
                "event": "user_message", "text": text, "score": score, "ts": now,
            })
            next_question = self.select_next_question(session, cleaned)
            now = self.clock()
            session.transcript.append(TranscriptEntry("bot", next_question.text, now))
            self._append_event(session_id, {
                "event": "bot_question", "question_id": next_question.id, "ts": now,
            })
            if next_question.id == CLOSING_ID:
                session.state = "closed"
                self._append_event(session_id, {"event": "closed", "ts": now})
            else:
                session.asked.add(next_question.id)
            session.last_question_id = next_question.id
            return {
                "score": score,
                "next_question": next_question,
                "aggregate": RiskAggregate(**vars(session.aggregate)),
            }

    def generate_report(self, session_id: str) -> dict:
        """Deterministic risk report over a consistent session snapshot."""
        session = self._get(session_id)
        with session.lock:
            user_entries = [
                (i, entry) for i, entry in enumerate(session.transcript)
                if entry.role == "user"
            ]
            flagged = [
                {
                    "transcript_index": i,
                    "text": entry.text,
                    "probability": score,
                }
                for (i, entry), score in zip(user_entries, session.scores)
                if score >= self.thresholds.flag
            ]
            return {
                "session_id": session.session_id,
                "generated_at": self.clock(),
                "state": session.state,
                "transcript": [entry.to_dict() for entry in session.transcript],
                "scores": list(session.scores),
                "flagged": flagged,
                "aggregate": session.aggregate.to_dict(),
                "recommended_action": RECOMMENDED_ACTIONS[session.aggregate.level],
                "model_checksum": self.model_checksum,
                "other_findings": self.issue_detector.assess(session),
            }
