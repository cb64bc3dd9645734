"""Interrogator harness: trial store, scoring, reporting, HTTP service."""

from .service import HarnessServer, make_server
from .store import Report, ROLES, Trial, TrialAnswer, TrialStore, score_answer

__all__ = [
    "HarnessServer",
    "Report",
    "ROLES",
    "Trial",
    "TrialAnswer",
    "TrialStore",
    "make_server",
    "score_answer",
]
