from .bank import BankInvalidError, CLOSING_ID, Question, QuestionBank
from .sessions import (ChatSession, ModelDetector, ModelNotLoadedError,
                       NoopIssueDetector, RiskAggregate, RiskThresholds,
                       SessionClosedError, SessionManager,
                       SessionNotFoundError, risk_level, RECOMMENDED_ACTIONS)
from .api import create_app

__all__ = [
    "BankInvalidError", "CLOSING_ID", "Question", "QuestionBank",
    "ChatSession", "ModelDetector", "ModelNotLoadedError",
    "NoopIssueDetector", "RiskAggregate", "RiskThresholds",
    "SessionClosedError", "SessionManager", "SessionNotFoundError",
    "risk_level", "RECOMMENDED_ACTIONS", "create_app",
]
