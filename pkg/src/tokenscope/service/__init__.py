"""Serving layer: session store, orchestration loop, HTTP app, CLI."""

from .orchestrator import ChatEvent, Orchestrator, ServiceClients, execute_tool
from .sessions import SessionRecord, SessionStore, replay_log

__all__ = [
    "ChatEvent",
    "Orchestrator",
    "ServiceClients",
    "SessionRecord",
    "SessionStore",
    "execute_tool",
    "replay_log",
]
