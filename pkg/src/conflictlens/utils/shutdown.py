from __future__ import annotations

import signal
import threading

from ..errors import ConflictLensError

_STOP_EVENT = threading.Event()


class SearchInterrupted(ConflictLensError):
    """Raised inside a search loop after a stop was requested."""


def request_stop() -> None:
    _STOP_EVENT.set()


def reset() -> None:
    _STOP_EVENT.clear()


def stopping() -> bool:
    return _STOP_EVENT.is_set()


def check_stop(where: str) -> None:
    """Abort the current search if Ctrl+C or SIGTERM arrived."""
    if _STOP_EVENT.is_set():
        raise SearchInterrupted(f"stopped during {where}")


def install_signal_handlers() -> None:
    def _handler(signum, frame):  # pragma: no cover
        request_stop()

    for sig in (signal.SIGINT, signal.SIGTERM):
        try:
            signal.signal(sig, _handler)
        except (ValueError, OSError):
            # not the main thread, or the platform lacks the signal
            pass
