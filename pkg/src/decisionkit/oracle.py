"""Answer sources for learning protocols.

Every question is addressed by a stable string key. Answers are recorded
verbatim in an append-only transcript; re-asking a key returns the recorded
answer, which makes any elicitation replayable: run once against a live or
function-backed oracle, save the transcript, replay it through a
TableOracle and get the identical session.
"""

from __future__ import annotations

import json
from typing import Callable

from .errors import IncompleteElicitation


class Oracle:
    """Base: memoized ask() over an answer source."""

    def __init__(self):
        self.transcript: list[tuple[str, object]] = []
        self._memo: dict[str, object] = {}

    def ask(self, key: str, payload=None):
        if key in self._memo:
            return self._memo[key]
        answer = self._answer(key, payload)
        self._memo[key] = answer
        self.transcript.append((key, answer))
        return answer

    def _answer(self, key: str, payload):
        raise NotImplementedError

    def save_transcript(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.transcript, fh, sort_keys=True, indent=1)


class TableOracle(Oracle):
    """Scripted answers from a key -> answer table (e.g. a saved transcript)."""

    def __init__(self, table: dict[str, object]):
        super().__init__()
        self.table = dict(table)

    def _answer(self, key, payload):
        if key not in self.table:
            raise IncompleteElicitation(f"no scripted answer for {key!r}")
        return self.table[key]

    @classmethod
    def from_transcript(cls, entries) -> "TableOracle":
        return cls({k: v for k, v in entries})

    @classmethod
    def load(cls, path) -> "TableOracle":
        with open(path) as fh:
            return cls.from_transcript(json.load(fh))


class FunctionOracle(Oracle):
    """Answers computed by a callable; used to plant ground truth in tests."""

    def __init__(self, fn: Callable[[str, object], object]):
        super().__init__()
        self.fn = fn

    def _answer(self, key, payload):
        return self.fn(key, payload)


class QueueOracle(Oracle):
    """Live session source: questions wait in ``pending`` until an external
    client posts the answer (the service module drives this)."""

    def __init__(self):
        super().__init__()
        self.pending: list[tuple[str, object]] = []
        self._answers: dict[str, object] = {}

    def offer(self, key: str, answer) -> None:
        self._answers[key] = answer

    def _answer(self, key, payload):
        if key in self._answers:
            return self._answers.pop(key)
        if all(k != key for k, _ in self.pending):
            self.pending.append((key, payload))
        raise IncompleteElicitation(f"awaiting external answer for {key!r}")
