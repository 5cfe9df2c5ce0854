"""Plain text to dictionary-gated bags of lemmas.

Three stages: tokenize (lowercase, punctuation split, periods kept as
standalone tokens), stop-word removal, and suffix-detachment lemmatization
against a per-part-of-speech lexicon.  Tokens that cannot be mapped to a
lexicon entry are discarded, so the resulting bag contains dictionary words
only.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from litsim.errors import LexiconFormatError

POS_ORDER = ("noun", "verb", "adj", "adv")

# Suffix detachment rules, tried in order within each part of speech; the
# first candidate that is a lexicon entry wins.
DETACHMENT_RULES: dict[str, tuple[tuple[str, str], ...]] = {
    "noun": (
        ("s", ""),
        ("ses", "s"),
        ("xes", "x"),
        ("zes", "z"),
        ("ches", "ch"),
        ("shes", "sh"),
        ("men", "man"),
        ("ies", "y"),
    ),
    "verb": (
        ("s", ""),
        ("ies", "y"),
        ("es", "e"),
        ("es", ""),
        ("ed", "e"),
        ("ed", ""),
        ("ing", "e"),
        ("ing", ""),
    ),
    "adj": (
        ("er", ""),
        ("er", "e"),
        ("est", ""),
        ("est", "e"),
    ),
    "adv": (
        ("er", ""),
        ("er", "e"),
        ("est", ""),
        ("est", "e"),
    ),
}

# A token is a run of letters/digits; a period is its own one-char token.
_TOKEN_RE = re.compile(r"[^\W_]+|\.", re.UNICODE)


@dataclass(frozen=True)
class Lexicon:
    """Per-POS sets of base forms plus irregular-form exception maps.

    Entries are stored lowercase; every exception target must itself be an
    entry of the same part of speech.
    """

    entries: dict[str, frozenset[str]]
    exceptions: dict[str, dict[str, str]]

    def __post_init__(self):
        for pos in POS_ORDER:
            if pos not in self.entries:
                raise LexiconFormatError(f"missing entry section for {pos!r}")
            for form, base in self.exceptions.get(pos, {}).items():
                if base not in self.entries[pos]:
                    raise LexiconFormatError(
                        f"exception target {base!r} ({form!r}, {pos}) is not an entry"
                    )

    def __contains__(self, lemma: str) -> bool:
        return any(lemma in self.entries[pos] for pos in POS_ORDER)

    def __len__(self) -> int:
        return sum(len(self.entries[pos]) for pos in POS_ORDER)

    @classmethod
    def from_text(cls, text: str) -> "Lexicon":
        """Parse the lexicon file format.

        Sections are introduced by ``[pos]`` / ``[pos.exc]`` headers with pos
        one of noun, verb, adj, adv.  Entry sections hold one lowercase word
        per line; exception sections hold ``form<TAB>base`` lines.
        """
        entries: dict[str, set[str]] = {pos: set() for pos in POS_ORDER}
        exceptions: dict[str, dict[str, str]] = {pos: {} for pos in POS_ORDER}
        section: tuple[str, bool] | None = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                name = line[1:-1]
                is_exc = name.endswith(".exc")
                pos = name[:-4] if is_exc else name
                if pos not in POS_ORDER:
                    raise LexiconFormatError(f"unknown section {line!r} at line {lineno}")
                section = (pos, is_exc)
                continue
            if section is None:
                raise LexiconFormatError(f"entry before any section at line {lineno}")
            pos, is_exc = section
            if is_exc:
                if "\t" not in line:
                    raise LexiconFormatError(f"exception line without TAB at line {lineno}")
                form, base = line.split("\t", 1)
                exceptions[pos][form.strip().lower()] = base.strip().lower()
            else:
                entries[pos].add(line.lower())
        return cls(
            entries={pos: frozenset(words) for pos, words in entries.items()},
            exceptions=exceptions,
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "Lexicon":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class StopList:
    """Set of lowercase stop words; membership is exact on lowercase tokens."""

    words: frozenset[str]

    def __contains__(self, token: str) -> bool:
        return token in self.words

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def from_text(cls, text: str) -> "StopList":
        return cls(frozenset(w.strip().lower() for w in text.split() if w.strip()))

    @classmethod
    def from_file(cls, path: str | Path) -> "StopList":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


@dataclass
class TokenBag:
    """Multiset of lemmas with its total count."""

    counts: dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __bool__(self) -> bool:
        return bool(self.counts)

    def __eq__(self, other) -> bool:
        return isinstance(other, TokenBag) and self.counts == other.counts


def default_lexicon() -> Lexicon:
    """Lexicon shipped with the package (a small English word list)."""
    text = resources.files("litsim.data").joinpath("lexicon.txt").read_text("utf-8")
    return Lexicon.from_text(text)


def default_stoplist() -> StopList:
    """English stop words shipped with the package."""
    text = resources.files("litsim.data").joinpath("stopwords.txt").read_text("utf-8")
    return StopList.from_text(text)


def tokenize(text: str) -> list[str]:
    """Split text into lowercase word tokens.

    Splits on whitespace and punctuation.  Every period becomes a standalone
    single-character token; all other punctuation is dropped.
    """
    return _TOKEN_RE.findall(text.lower())


def remove_stopwords(tokens: list[str], stoplist: StopList) -> list[str]:
    """Order-preserving filter removing stop-list members."""
    return [t for t in tokens if t not in stoplist]


def lemmatize(token: str, lex: Lexicon) -> str | None:
    """Map a lowercase token to its lexicon base form, or None to discard.

    Parts of speech are tried in noun, verb, adjective, adverb order.  Within
    each: the token itself if it is already an entry, then the irregular-form
    exceptions, then the suffix detachment rules in their listed order.
    """
    for pos in POS_ORDER:
        entries = lex.entries[pos]
        if token in entries:
            return token
        base = lex.exceptions.get(pos, {}).get(token)
        if base is not None and base in entries:
            return base
        for suffix, replacement in DETACHMENT_RULES[pos]:
            if token.endswith(suffix):
                candidate = token[: len(token) - len(suffix)] + replacement
                if candidate and candidate in entries:
                    return candidate
    return None


def lemmatize_tokens(tokens: list[str], lex: Lexicon) -> list[str]:
    """Lemmatize a token stream, dropping tokens outside the lexicon."""
    out = []
    for token in tokens:
        lemma = lemmatize(token, lex)
        if lemma is not None:
            out.append(lemma)
    return out


def bag_from_tokens(tokens: list[str], lex: Lexicon) -> TokenBag:
    return TokenBag(dict(Counter(lemmatize_tokens(tokens, lex))))


def process_text(text: str, lex: Lexicon, stoplist: StopList) -> TokenBag:
    """Full pipeline: tokenize, drop stop words, lemmatize, aggregate counts.

    Tokens without a lexicon entry (including the period token) are
    discarded; the bag may come out empty.
    """
    return bag_from_tokens(remove_stopwords(tokenize(text), stoplist), lex)
