from .app import STATUS_BY_CODE, create_app
from .sessions import DEFAULT_CALL_BUDGET, ServiceError, Session, SessionManager

__all__ = [
    "DEFAULT_CALL_BUDGET",
    "STATUS_BY_CODE",
    "ServiceError",
    "Session",
    "SessionManager",
    "create_app",
]
