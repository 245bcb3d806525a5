"""Deliberate-fault switches for negative-control runs.

The verification suites must be shown to fail when an operator is broken;
these switches let the harness flip a sign or drop an indicator inside an
operator without touching its production code path.  They are off unless
explicitly activated (CLI ``--corrupt`` or the ``corrupted`` context
manager) and exist only so the test suite can prove it is not vacuous.
"""

from __future__ import annotations

from contextlib import contextmanager

KNOWN_TAGS = frozenset({"alternate-sign-flip", "tmap-drop-restrict"})

_active: set[str] = set()


def activate(tag: str) -> None:
    if tag not in KNOWN_TAGS:
        raise ValueError(f"unknown corruption tag {tag!r}; known: {sorted(KNOWN_TAGS)}")
    _active.add(tag)


def deactivate(tag: str) -> None:
    _active.discard(tag)


def clear() -> None:
    _active.clear()


def is_active(tag: str) -> bool:
    return tag in _active


def active_tags() -> tuple[str, ...]:
    return tuple(sorted(_active))


@contextmanager
def corrupted(*tags: str):
    for tag in tags:
        activate(tag)
    try:
        yield
    finally:
        for tag in tags:
            deactivate(tag)
