"""Tokenization and frequency-thresholded vocabulary construction.

The tokenizer targets informal review-style text: it splits on Unicode
whitespace, peels leading/trailing punctuation runs off each chunk as
separate tokens, downcases words unless they are written in all uppercase
(two or more characters, so "I" still downcases), and preserves emoticons
listed in an explicit lexicon. The default lexicon ships with the package
as ``data/emoticons.txt``, one emoticon per line.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable


def load_default_emoticons() -> frozenset[str]:
    """Load the packaged emoticon lexicon (one emoticon per line, UTF-8)."""
    text = resources.files("warmglove").joinpath("data/emoticons.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


def _is_punct(ch: str) -> bool:
    # Punctuation and symbol categories both count as "punctuation" here,
    # so $, +, quotes and dashes all get peeled.
    return unicodedata.category(ch)[0] in ("P", "S")


@dataclass(frozen=True)
class TokenizerConfig:
    """Tokenizer switches.

    ``lowercase_mode`` currently has a single supported value,
    "downcase-unless-all-caps". ``punctuation_split=False`` keeps chunks
    whole (whitespace splitting only, still case-processed).
    """

    lowercase_mode: str = "downcase-unless-all-caps"
    emoticon_lexicon: frozenset[str] = field(default_factory=load_default_emoticons)
    punctuation_split: bool = True

    def __post_init__(self):
        if self.lowercase_mode != "downcase-unless-all-caps":
            raise ValueError(f"unsupported lowercase_mode: {self.lowercase_mode!r}")


_DEFAULT_CONFIG: TokenizerConfig | None = None


def default_config() -> TokenizerConfig:
    global _DEFAULT_CONFIG
    if _DEFAULT_CONFIG is None:
        _DEFAULT_CONFIG = TokenizerConfig()
    return _DEFAULT_CONFIG


def _case_fold(word: str) -> str:
    # All-uppercase words of length >= 2 are kept verbatim (acronyms,
    # shouting); everything else downcases. Single letters always downcase.
    if len(word) >= 2 and word.isupper():
        return word
    return word.lower()


def _split_chunk(chunk: str, cfg: TokenizerConfig) -> list[str]:
    if chunk in cfg.emoticon_lexicon:
        return [chunk]
    if not cfg.punctuation_split:
        return [_case_fold(chunk)]

    i, n = 0, len(chunk)
    while i < n and _is_punct(chunk[i]):
        i += 1
    if i == n:
        # Chunk is one punctuation run; emit it whole.
        return [chunk]
    j = n
    while j > i and _is_punct(chunk[j - 1]):
        j -= 1

    out = []
    if i > 0:
        out.append(chunk[:i])
    core = chunk[i:j]
    if core in cfg.emoticon_lexicon:
        out.append(core)
    else:
        out.append(_case_fold(core))
    if j < n:
        out.append(chunk[j:])
    return out


def tokenize(text: str, cfg: TokenizerConfig | None = None) -> list[str]:
    """Split ``text`` into tokens. Deterministic; empty input gives []."""
    if cfg is None:
        cfg = default_config()
    tokens: list[str] = []
    for chunk in text.split():
        tokens.extend(_split_chunk(chunk, cfg))
    return tokens


@dataclass
class Vocabulary:
    """Token/id bimap with occurrence counts.

    Ids are contiguous, assigned by descending frequency with lexicographic
    tie-break, so the same counts always produce the same ids.
    """

    tokens: list[str]
    index: dict[str, int]
    counts: dict[str, int]
    min_count: int

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def save(self, path) -> None:
        """Write one ``token<TAB>count`` line per token; id = line number."""
        with open(path, "w", encoding="utf-8") as f:
            for tok in self.tokens:
                f.write(f"{tok}\t{self.counts[tok]}\n")

    @classmethod
    def load(cls, path) -> "Vocabulary":
        tokens: list[str] = []
        counts: dict[str, int] = {}
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    tok, cnt = line.split("\t")
                    counts[tok] = int(cnt)
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: bad vocabulary line {line!r}") from exc
                tokens.append(tok)
        if not tokens:
            raise ValueError(f"{path}: empty vocabulary file")
        index = {tok: i for i, tok in enumerate(tokens)}
        if len(index) != len(tokens):
            raise ValueError(f"{path}: duplicate token in vocabulary file")
        # The threshold itself is not stored in the file; the smallest
        # retained count is the tightest value consistent with the contents.
        return cls(tokens=tokens, index=index, counts=counts, min_count=min(counts.values()))


def build_vocabulary(token_stream: Iterable[str], min_count: int) -> Vocabulary:
    """Count tokens and keep those occurring at least ``min_count`` times.

    Raises ValueError if the threshold filters out everything (or the
    stream is empty), or if ``min_count`` < 1.
    """
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    freqs = Counter(token_stream)
    kept = [t for t, c in freqs.items() if c >= min_count]
    if not kept:
        raise ValueError(f"no token occurs at least {min_count} times")
    kept.sort(key=lambda t: (-freqs[t], t))
    return Vocabulary(
        tokens=kept,
        index={t: i for i, t in enumerate(kept)},
        counts={t: freqs[t] for t in kept},
        min_count=min_count,
    )
