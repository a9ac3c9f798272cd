"""Character score tables and the word-to-color encoding.

A score table maps characters to (channel, score) pairs. A word's color is
computed by summing score * length into each character's channel and
saturating each channel sum at 255. Anagrams therefore always share a color,
and a single-character OCR error moves each channel by at most 9 * length.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from types import MappingProxyType

from wordvis.errors import TableError, TableParseError, TableValidationError

SCORE_MIN = 1
SCORE_MAX = 9
CHANNEL_MAX = 255

DEFAULT_TABLE_NAME = "default-ascending"
EXAMPLE_TABLE_NAME = "paper-example"


class Channel(enum.Enum):
    """One RGB channel. Every scored character belongs to exactly one."""

    RED = "R"
    GREEN = "G"
    BLUE = "B"


@dataclass(frozen=True)
class WordColor:
    """An 8-bit RGB triple; construction rejects anything outside [0, 255]."""

    r: int
    g: int
    b: int

    def __post_init__(self):
        for name, value in (("r", self.r), ("g", self.g), ("b", self.b)):
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValueError(f"channel {name} must be an integer, got {value!r}")
            if not 0 <= value <= CHANNEL_MAX:
                raise ValueError(f"channel {name}={value} outside [0, {CHANNEL_MAX}]")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.r, self.g, self.b)


@dataclass(frozen=True)
class TokenScoreBreakdown:
    """Full scoring result for one normalized token."""

    token: str
    m_factor: int
    raw_sums: tuple[int, int, int]
    color: WordColor


class ScoreTable:
    """Immutable mapping from characters to (channel, score) pairs.

    Keys are compared after case folding. Characters absent from the table
    are unscored: they contribute nothing to a word's color but still count
    toward its length factor.
    """

    def __init__(self, name: str, entries: dict[str, tuple[Channel, int]]):
        folded: dict[str, tuple[Channel, int]] = {}
        for char, (channel, score) in entries.items():
            key = _fold_key(char)
            if not isinstance(channel, Channel):
                raise TableValidationError(f"character {char!r}: invalid channel {channel!r}")
            if not isinstance(score, int) or isinstance(score, bool):
                raise TableValidationError(f"character {char!r}: score must be an integer")
            if not SCORE_MIN <= score <= SCORE_MAX:
                raise TableValidationError(
                    f"character {char!r}: score {score} outside [{SCORE_MIN}, {SCORE_MAX}]"
                )
            if key in folded:
                raise TableValidationError(f"duplicate character {key!r}")
            folded[key] = (channel, score)
        self.name = name
        self._entries = MappingProxyType(folded)

    def lookup(self, char: str) -> tuple[Channel, int] | None:
        return self._entries.get(char)

    def __contains__(self, char: str) -> bool:
        return char in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScoreTable):
            return NotImplemented
        return dict(self._entries) == dict(other._entries)

    def __repr__(self) -> str:
        return f"ScoreTable(name={self.name!r}, entries={len(self)})"

    def items(self):
        return self._entries.items()

    def scored_characters(self) -> list[str]:
        return sorted(self._entries)

    def channel_counts(self) -> dict[Channel, int]:
        counts = {channel: 0 for channel in Channel}
        for channel, _ in self._entries.values():
            counts[channel] += 1
        return counts


def _fold_key(char: str) -> str:
    if not isinstance(char, str) or len(char) != 1:
        raise TableValidationError(f"table key must be a single character, got {char!r}")
    key = char.casefold()
    if len(key) != 1:
        raise TableValidationError(f"character {char!r} does not case-fold to a single character")
    return key


def build_default_table() -> ScoreTable:
    """The built-in table: 36 characters, 12 per channel, ascending scores.

    Letters fill the channels first (a-i red, j-r green, s-z blue), digits
    top each channel up to 12 entries.
    """
    entries: dict[str, tuple[Channel, int]] = {}
    for i, char in enumerate("abcdefghi"):
        entries[char] = (Channel.RED, i + 1)
    for i, char in enumerate("jklmnopqr"):
        entries[char] = (Channel.GREEN, i + 1)
    for i, char in enumerate("stuvwxyz"):
        entries[char] = (Channel.BLUE, i + 1)
    for i, char in enumerate("012"):
        entries[char] = (Channel.RED, i + 1)
    for i, char in enumerate("345"):
        entries[char] = (Channel.GREEN, i + 1)
    for i, char in enumerate("6789"):
        entries[char] = (Channel.BLUE, i + 1)
    return ScoreTable(DEFAULT_TABLE_NAME, entries)


def build_paper_example_table() -> ScoreTable:
    """Default table with pinned overrides d=3, e=5, p=7, q=8.

    This is the reference table for the worked example in the README:
    it maps "deep" to (52, 28, 0) and the OCR misread "deeq" to (52, 32, 0).
    """
    entries = dict(build_default_table().items())
    entries["d"] = (Channel.RED, 3)
    entries["e"] = (Channel.RED, 5)
    entries["p"] = (Channel.GREEN, 7)
    entries["q"] = (Channel.GREEN, 8)
    return ScoreTable(EXAMPLE_TABLE_NAME, entries)


_CHANNEL_LETTERS = {"R": Channel.RED, "G": Channel.GREEN, "B": Channel.BLUE}


def parse_table(source: str, name: str = "custom") -> ScoreTable:
    """Parse score-table text: one `<char> <R|G|B> <score>` entry per line.

    Blank lines are skipped and `#` starts a comment (so `#` itself cannot
    be assigned from a file). Raises TableParseError with line/column for
    malformed syntax and TableValidationError for range or duplicate
    violations.
    """
    entries: dict[str, tuple[Channel, int]] = {}
    for lineno, raw_line in enumerate(source.splitlines(), start=1):
        line = raw_line.split("#", 1)[0]
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 3:
            raise TableParseError(
                f"expected '<char> <R|G|B> <score>', got {len(fields)} field(s)", lineno
            )
        char, channel_letter, score_text = fields
        if len(char) != 1:
            raise TableParseError(
                f"first field must be a single character, got {char!r}",
                lineno,
                _column_of(raw_line, char),
            )
        channel = _CHANNEL_LETTERS.get(channel_letter.upper())
        if channel is None:
            raise TableParseError(
                f"channel must be one of R, G, B, got {channel_letter!r}",
                lineno,
                _column_of(raw_line, channel_letter),
            )
        try:
            score = int(score_text)
        except ValueError:
            raise TableParseError(
                f"score must be an integer, got {score_text!r}",
                lineno,
                _column_of(raw_line, score_text),
            ) from None
        key = _fold_key(char)
        if key in entries:
            raise TableValidationError(f"duplicate character {key!r} (line {lineno})")
        if not SCORE_MIN <= score <= SCORE_MAX:
            raise TableValidationError(
                f"character {key!r}: score {score} outside [{SCORE_MIN}, {SCORE_MAX}]"
                f" (line {lineno})"
            )
        entries[key] = (channel, score)
    return ScoreTable(name, entries)


def _column_of(line: str, field: str) -> int:
    index = line.find(field)
    return index + 1 if index >= 0 else 1


def load_table(path: str | Path) -> ScoreTable:
    """Load a score table from a file; its name is the file stem."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise TableError(f"cannot read table file {path}: {exc}") from exc
    return parse_table(text, name=path.stem)


def resolve_table(ref: str | Path) -> ScoreTable:
    """Resolve a built-in table name or a table file path."""
    if isinstance(ref, str):
        if ref in ("default", DEFAULT_TABLE_NAME):
            return build_default_table()
        if ref == EXAMPLE_TABLE_NAME:
            return build_paper_example_table()
    path = Path(ref)
    if path.is_file():
        return load_table(path)
    raise TableError(
        f"unknown table {ref!r}: not a built-in name"
        f" ({DEFAULT_TABLE_NAME!r}, {EXAMPLE_TABLE_NAME!r}) and no such file"
    )


def default_table_file_text() -> str:
    """Text of the checked-in default table file (package data)."""
    return resources.files("wordvis.data").joinpath("default_table.txt").read_text("utf-8")


def normalize_token(text: str) -> str:
    """Trim surrounding whitespace and case-fold; keep everything else."""
    return text.strip().casefold()


def multiplying_factor(token: str) -> int:
    """Length factor of a normalized token: its character count, unscored
    characters included."""
    return len(token)


def word_color(table: ScoreTable, token: str) -> TokenScoreBreakdown:
    """Score a normalized token into a color.

    Each scored character adds score * length_factor into its channel; the
    three sums are then clamped to 255. Unscored characters contribute
    nothing but still count toward the length factor.
    """
    m_factor = multiplying_factor(token)
    sums = {Channel.RED: 0, Channel.GREEN: 0, Channel.BLUE: 0}
    for char in token:
        entry = table.lookup(char)
        if entry is not None:
            channel, score = entry
            sums[channel] += score * m_factor
    raw = (sums[Channel.RED], sums[Channel.GREEN], sums[Channel.BLUE])
    color = WordColor(*(min(value, CHANNEL_MAX) for value in raw))
    return TokenScoreBreakdown(token=token, m_factor=m_factor, raw_sums=raw, color=color)
