"""Measurable properties of the encoding over a lexicon.

Three reports: color collisions (anagrams always collide under sum-based
scoring, so uniqueness is measured, not assumed), color stability under
single-character substitutions (bounded by 9 * word length per channel),
and the hue pattern separating stop-words from longer distinct words.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from wordvis.errors import AnalysisError
from wordvis.scoring import SCORE_MAX, Channel, ScoreTable, WordColor, normalize_token, word_color


def load_lexicon(path: str | Path) -> list[str]:
    """One token per line; normalized, deduplicated, sorted."""
    text = Path(path).read_text(encoding="utf-8")
    return lexicon_from_lines(text.splitlines())


def lexicon_from_lines(lines) -> list[str]:
    tokens = {normalize_token(line) for line in lines}
    tokens.discard("")
    return sorted(tokens)


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Stop-word set from a file, or the bundled English list."""
    if path is None:
        text = resources.files("wordvis.data").joinpath("stopwords_en.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    words = set()
    for line in text.splitlines():
        token = normalize_token(line.split("#", 1)[0])
        if token:
            words.add(token)
    return frozenset(words)


# ---------------------------------------------------------------------------
# Collisions


@dataclass
class CollisionReport:
    lexicon_size: int
    distinct_colors: int
    collision_classes: int
    largest_class_color: WordColor | None
    largest_class_words: list[str] = field(default_factory=list)
    anagram_pairs: int = 0
    non_anagram_pairs: int = 0

    def to_dict(self) -> dict:
        return {
            "lexicon_size": self.lexicon_size,
            "distinct_colors": self.distinct_colors,
            "collision_classes": self.collision_classes,
            "largest_class": {
                "color": list(self.largest_class_color.as_tuple())
                if self.largest_class_color
                else None,
                "words": self.largest_class_words,
            },
            "anagram_pairs": self.anagram_pairs,
            "non_anagram_pairs": self.non_anagram_pairs,
        }


def collision_report(lexicon: list[str], table: ScoreTable) -> CollisionReport:
    """Group lexicon words by color; count colliding pairs, split into
    anagram pairs (same character multiset) and the rest."""
    if not lexicon:
        raise AnalysisError("lexicon is empty")

    classes: dict[tuple[int, int, int], list[str]] = defaultdict(list)
    for token in lexicon:
        classes[word_color(table, token).color.as_tuple()].append(token)

    anagram_pairs = 0
    non_anagram_pairs = 0
    for members in classes.values():
        if len(members) < 2:
            continue
        total_pairs = len(members) * (len(members) - 1) // 2
        by_multiset: dict[str, int] = defaultdict(int)
        for token in members:
            by_multiset["".join(sorted(token))] += 1
        same = sum(count * (count - 1) // 2 for count in by_multiset.values())
        anagram_pairs += same
        non_anagram_pairs += total_pairs - same

    largest = max(classes.items(), key=lambda item: (len(item[1]), sorted(item[1])[0]))
    return CollisionReport(
        lexicon_size=len(lexicon),
        distinct_colors=len(classes),
        collision_classes=sum(1 for members in classes.values() if len(members) > 1),
        largest_class_color=WordColor(*largest[0]),
        largest_class_words=sorted(largest[1]),
        anagram_pairs=anagram_pairs,
        non_anagram_pairs=non_anagram_pairs,
    )


# ---------------------------------------------------------------------------
# Perturbations


@dataclass
class WordPerturbation:
    word: str
    max_delta: int
    bound: int


@dataclass
class PerturbationReport:
    per_word: list[WordPerturbation]
    max_delta: int
    mean_delta: float
    alphabet_size: int

    def to_dict(self) -> dict:
        return {
            "max_delta": self.max_delta,
            "mean_delta": self.mean_delta,
            "alphabet_size": self.alphabet_size,
            "words": [
                {"word": w.word, "max_delta": w.max_delta, "bound": w.bound}
                for w in self.per_word
            ],
        }


def perturbation_report(
    lexicon: list[str],
    table: ScoreTable,
    alphabet: list[str] | None = None,
) -> PerturbationReport:
    """Worst-case color change of every word under all single-character
    substitutions from the alphabet (default: the table's scored characters).

    Each word's observed max channel delta is bounded by 9 * length: a
    substitution moves each pre-clamp channel sum by at most SCORE_MAX *
    length, and clamping never widens a difference.
    """
    if not lexicon:
        raise AnalysisError("lexicon is empty")
    if alphabet is None:
        alphabet = table.scored_characters()

    per_word = []
    total = 0
    observed_max = 0
    for token in lexicon:
        base = word_color(table, token).color
        worst = 0
        for i in range(len(token)):
            for substitute in alphabet:
                if substitute == token[i]:
                    continue
                mutated = token[:i] + substitute + token[i + 1:]
                color = word_color(table, mutated).color
                delta = max(
                    abs(color.r - base.r),
                    abs(color.g - base.g),
                    abs(color.b - base.b),
                )
                if delta > worst:
                    worst = delta
        per_word.append(WordPerturbation(word=token, max_delta=worst, bound=SCORE_MAX * len(token)))
        total += worst
        observed_max = max(observed_max, worst)

    return PerturbationReport(
        per_word=per_word,
        max_delta=observed_max,
        mean_delta=total / len(lexicon),
        alphabet_size=len(alphabet),
    )


# ---------------------------------------------------------------------------
# Hue profile


@dataclass
class WordHue:
    word: str
    color: WordColor
    dominant: Channel
    tie: bool
    spread: int


@dataclass
class HueProfile:
    per_word: list[WordHue]
    stopword_count: int
    non_stopword_count: int
    stopword_green_fraction: float | None
    mean_spread_stopwords: float | None
    mean_spread_non_stopwords: float | None
    spread_difference: float
    tie_count: int

    def to_dict(self) -> dict:
        return {
            "stopword_count": self.stopword_count,
            "non_stopword_count": self.non_stopword_count,
            "stopword_green_fraction": self.stopword_green_fraction,
            "mean_spread_stopwords": self.mean_spread_stopwords,
            "mean_spread_non_stopwords": self.mean_spread_non_stopwords,
            "spread_difference": self.spread_difference,
            "tie_count": self.tie_count,
            "words": [
                {
                    "word": w.word,
                    "color": list(w.color.as_tuple()),
                    "dominant": w.dominant.value,
                    "tie": w.tie,
                    "spread": w.spread,
                }
                for w in self.per_word
            ],
        }


def dominant_channel(color: WordColor) -> tuple[Channel, bool]:
    """Argmax channel with ties broken red > green > blue; flags the tie."""
    values = color.as_tuple()
    best = max(values)
    dominant = (Channel.RED, Channel.GREEN, Channel.BLUE)[values.index(best)]
    return dominant, values.count(best) > 1


def hue_profile(
    lexicon: list[str],
    table: ScoreTable,
    stopwords: frozenset[str] | set[str],
) -> HueProfile:
    """Compare color character of stop-words vs the rest of the lexicon.

    Reports the green-dominance fraction among stop-words and the mean
    spread (max channel - min channel) of each group; the difference is
    non-stop minus stop, defined as 0 when either group is empty.
    """
    if not lexicon:
        raise AnalysisError("lexicon is empty")

    per_word = []
    stop_spreads: list[int] = []
    non_stop_spreads: list[int] = []
    green_stopwords = 0
    ties = 0
    for token in lexicon:
        color = word_color(table, token).color
        dominant, tie = dominant_channel(color)
        spread = max(color.as_tuple()) - min(color.as_tuple())
        per_word.append(WordHue(word=token, color=color, dominant=dominant, tie=tie, spread=spread))
        if tie:
            ties += 1
        if token in stopwords:
            stop_spreads.append(spread)
            if dominant is Channel.GREEN and not tie:
                green_stopwords += 1
        else:
            non_stop_spreads.append(spread)

    mean_stop = sum(stop_spreads) / len(stop_spreads) if stop_spreads else None
    mean_non = sum(non_stop_spreads) / len(non_stop_spreads) if non_stop_spreads else None
    difference = (mean_non - mean_stop) if mean_stop is not None and mean_non is not None else 0.0
    return HueProfile(
        per_word=per_word,
        stopword_count=len(stop_spreads),
        non_stopword_count=len(non_stop_spreads),
        stopword_green_fraction=green_stopwords / len(stop_spreads) if stop_spreads else None,
        mean_spread_stopwords=mean_stop,
        mean_spread_non_stopwords=mean_non,
        spread_difference=difference,
        tie_count=ties,
    )
