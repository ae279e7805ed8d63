"""Command vocabulary: text normalization, exact matching, and bigram-cosine fuzzy matching."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from math import nextafter, sqrt
from pathlib import Path
from typing import Iterable, Iterator


class Command(Enum):
    FORWARD = "Forward"
    BACKWARD = "Backward"
    LEFT = "Left"
    RIGHT = "Right"
    STOP = "Stop"
    LIGHT_ON = "LightOn"
    LIGHT_OFF = "LightOff"
    HORN_ON = "HornOn"
    HORN_OFF = "HornOff"


class MatchMethod(Enum):
    EXACT = "Exact"
    FUZZY = "Fuzzy"
    NO_MATCH = "NoMatch"


@dataclass(frozen=True)
class Utterance:
    """Raw command text as received, stamped with the simulation tick."""

    raw_text: str
    received_at: int


@dataclass(frozen=True)
class MatchResult:
    command: Command | None
    score: float
    method: MatchMethod


# Keys accepted in command-table files, in canonical declaration order.
_KIND_KEYS = {
    "forward": Command.FORWARD,
    "backward": Command.BACKWARD,
    "left": Command.LEFT,
    "right": Command.RIGHT,
    "stop": Command.STOP,
    "light_on": Command.LIGHT_ON,
    "light_off": Command.LIGHT_OFF,
    "horn_on": Command.HORN_ON,
    "horn_off": Command.HORN_OFF,
}

DEFAULT_FUZZY_THRESHOLD = 0.75

DEFAULT_ENTRIES: tuple[tuple[Command, str], ...] = (
    (Command.FORWARD, "forward"),
    (Command.BACKWARD, "backward"),
    (Command.LEFT, "left"),
    (Command.RIGHT, "right"),
    (Command.STOP, "stop"),
    (Command.LIGHT_ON, "light on"),
    (Command.LIGHT_OFF, "light off"),
    (Command.HORN_ON, "horn please"),
    (Command.HORN_OFF, "horn stop"),
)


def normalize(text: str) -> str:
    """Canonicalize an utterance: lowercase, keep only ASCII alphanumerics and
    spaces, collapse whitespace runs, strip the ends. Total and idempotent."""
    kept = []
    for ch in text.lower():
        if ch.isspace():
            kept.append(" ")
        elif "a" <= ch <= "z" or "0" <= ch <= "9":
            kept.append(ch)
    return " ".join("".join(kept).split())


class CommandTable:
    """Ordered mapping of canonical phrases to commands.

    Order is significant: fuzzy ties break toward the earliest entry.
    """

    def __init__(self, entries: Iterable[tuple[Command, str]]):
        entries = tuple((cmd, normalize(phrase)) for cmd, phrase in entries)
        commands = [cmd for cmd, _ in entries]
        if sorted(c.value for c in commands) != sorted(c.value for c in Command):
            raise ValueError("command table must bind every command exactly once")
        phrases = [p for _, p in entries]
        if len(set(phrases)) != len(phrases):
            raise ValueError("command table phrases must be unique")
        if any(not p for p in phrases):
            raise ValueError("command table phrases must be non-empty")
        self.entries = entries
        self._by_phrase = {p: cmd for cmd, p in entries}
        self._by_command = {cmd: p for cmd, p in entries}

    def __iter__(self) -> Iterator[tuple[Command, str]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def phrases(self) -> tuple[str, ...]:
        return tuple(p for _, p in self.entries)

    def phrase_for(self, command: Command) -> str:
        return self._by_command[command]

    def lookup(self, phrase: str) -> Command | None:
        return self._by_phrase.get(phrase)


DEFAULT_TABLE = CommandTable(DEFAULT_ENTRIES)


def match_exact(utterance: str, table: CommandTable = DEFAULT_TABLE) -> Command | None:
    """Byte-for-byte phrase lookup of an already-normalized utterance."""
    return table.lookup(utterance)


def _bigram_counts(text: str) -> Counter[str]:
    # One space of padding on each side so word boundaries carry weight.
    padded = f" {text} "
    return Counter(padded[i : i + 2] for i in range(len(padded) - 1))


# Largest float below 1.0; scores this high mean "nearly identical profile".
_JUST_BELOW_ONE = nextafter(1.0, 0.0)


def similarity(a: str, b: str) -> float:
    """Cosine similarity of character-bigram count vectors of the padded strings.

    Returns 1.0 iff the strings are equal: distinct strings can have
    proportional bigram profiles ("ab ab" vs "ab ab ab"), so those demote to
    just below 1.0. Symmetric and deterministic.
    """
    if a == b:
        return 1.0
    if not a or not b:
        return 0.0
    ca = _bigram_counts(a)
    cb = _bigram_counts(b)
    dot = sum(n * cb[g] for g, n in ca.items() if g in cb)
    if dot == 0:
        return 0.0
    na2 = sum(n * n for n in ca.values())
    nb2 = sum(n * n for n in cb.values())
    score = dot / sqrt(na2 * nb2)
    if score >= 1.0:
        return _JUST_BELOW_ONE
    return score


def match_fuzzy(
    utterance: str,
    table: CommandTable = DEFAULT_TABLE,
    threshold: float = DEFAULT_FUZZY_THRESHOLD,
) -> MatchResult:
    """Pick the most similar canonical phrase, requiring score >= threshold.

    Ties break toward the earliest table entry. A score of exactly 1.0 is
    reported as an exact match.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    best_cmd: Command | None = None
    best = -1.0
    for cmd, phrase in table:
        s = similarity(utterance, phrase)
        if s > best:
            best = s
            best_cmd = cmd
    best = max(best, 0.0)
    if best >= threshold:
        method = MatchMethod.EXACT if best == 1.0 else MatchMethod.FUZZY
        return MatchResult(best_cmd, best, method)
    return MatchResult(None, best, MatchMethod.NO_MATCH)


def load_table(path: str | Path) -> CommandTable:
    """Read a command table file: one `<kind>: <phrase>` line per command.

    Lines starting with `#` and blank lines are ignored. Every command kind
    must appear exactly once; line order defines tie-break precedence.
    """
    entries: list[tuple[Command, str]] = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, phrase = line.partition(":")
        if not sep:
            raise ValueError(f"{path}:{lineno}: expected '<kind>: <phrase>'")
        kind = key.strip().lower()
        if kind not in _KIND_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown command kind {kind!r}")
        entries.append((_KIND_KEYS[kind], phrase.strip()))
    try:
        return CommandTable(entries)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc
