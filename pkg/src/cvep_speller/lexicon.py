"""Dictionary, lag signatures and candidate filtering."""

from __future__ import annotations

import enum
import logging
import string
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

from .exceptions import DictionaryEmptyError, UnknownCharacterError

logger = logging.getLogger(__name__)

DEFAULT_CHARACTERS = string.ascii_uppercase + "_.,?!-"


@dataclass(frozen=True)
class KeyboardLayout:
    """Keyboard characters in position order plus the lag spacing in samples."""

    characters: str = DEFAULT_CHARACTERS
    shift_samples: int = 8
    word_alphabet: frozenset = frozenset(string.ascii_uppercase)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.characters)) != len(self.characters):
            raise ValueError("keyboard characters must be distinct")
        if not set(self.word_alphabet) <= set(self.characters):
            raise ValueError("word alphabet must be a subset of the keyboard characters")
        object.__setattr__(self, "word_alphabet", frozenset(self.word_alphabet))
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(self.characters)})

    @property
    def num_chars(self) -> int:
        return len(self.characters)

    def position(self, char: str) -> int:
        try:
            return self._index[char]
        except KeyError:
            raise UnknownCharacterError(f"character {char!r} is not on the keyboard") from None

    def char_at(self, position: int) -> str:
        return self.characters[position % self.num_chars]

    def is_valid_word(self, word: str) -> bool:
        return bool(word) and all(c in self.word_alphabet for c in word)


class _Node:
    __slots__ = ("children", "terminal")

    def __init__(self):
        self.children: dict[str, _Node] = {}
        self.terminal = False


class Dictionary:
    """Immutable word set with a prefix tree for prefix queries.

    Words are uppercased; entries using characters outside the layout's word
    alphabet are dropped and listed in ``rejected``.
    """

    def __init__(self, words: Iterable[str], layout: KeyboardLayout | None = None):
        self.layout = layout or KeyboardLayout()
        accepted, rejected = set(), []
        for raw in words:
            w = raw.strip().upper()
            if self.layout.is_valid_word(w):
                accepted.add(w)
            else:
                rejected.append(raw.strip())
        if rejected:
            logger.warning("rejected %d dictionary entries: %s", len(rejected), ", ".join(rejected))
        if not accepted:
            raise DictionaryEmptyError("dictionary has no valid words")
        self.words = frozenset(accepted)
        self.rejected = tuple(rejected)
        self._root = _Node()
        for w in sorted(self.words):
            node = self._root
            for c in w:
                node = node.children.setdefault(c, _Node())
            node.terminal = True

    @classmethod
    def from_file(cls, path, layout: KeyboardLayout | None = None) -> "Dictionary":
        """One word per line; blank lines and ``#`` comments are skipped."""
        text = Path(path).read_text(encoding="utf-8")
        lines = [ln.strip() for ln in text.splitlines()]
        return cls([ln for ln in lines if ln and not ln.startswith("#")], layout)

    def restrict_length(self, length: int) -> "Dictionary":
        return Dictionary([w for w in self.words if len(w) == length], self.layout)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word) -> bool:
        return word in self.words

    def __iter__(self):
        return iter(sorted(self.words))

    def _node(self, prefix: str) -> _Node | None:
        node = self._root
        for c in prefix:
            node = node.children.get(c)
            if node is None:
                return None
        return node

    def has_prefix(self, prefix: str) -> bool:
        return self._node(prefix) is not None

    def words_with_prefix(self, prefix: str) -> list[str]:
        node = self._node(prefix)
        if node is None:
            return []
        out, stack = [], [(node, prefix)]
        while stack:
            node, p = stack.pop()
            if node.terminal:
                out.append(p)
            stack.extend((child, p + c) for c, child in node.children.items())
        return sorted(out)


LagSignature = tuple  # (l_2, ..., l_k), each in 0..L-1


def signature_of_word(word: str, layout: KeyboardLayout) -> LagSignature:
    """Relative lags of letters 2..n with respect to the first letter."""
    if not word:
        raise ValueError("word must be non-empty")
    pos = [layout.position(c) for c in word]
    return tuple((p - pos[0]) % layout.num_chars for p in pos[1:])


@dataclass(frozen=True)
class CandidateSet:
    """Dictionary words whose first ``k`` letters match an observed signature."""

    signature: LagSignature
    words: frozenset
    dictionary: Dictionary = field(repr=False, compare=False)

    @property
    def observed_length(self) -> int:
        return len(self.signature) + 1

    @property
    def display_prefixes(self) -> list[str]:
        return display_prefixes(self)

    def __len__(self) -> int:
        return len(self.words)


def filter_candidates(dictionary: Dictionary, layout: KeyboardLayout, signature) -> CandidateSet:
    """Words whose first ``len(signature) + 1`` letters carry ``signature``.

    Each keyboard character that starts some word is tried as the first
    letter; the signature then fixes every following letter, and the prefix
    tree prunes letter chains that begin no word.
    """
    signature = tuple(int(l) for l in signature)
    if not signature:
        raise ValueError("signature must hold at least one lag")
    matches = set()
    for first, node in dictionary._root.children.items():
        p0 = layout.position(first)
        prefix = first
        for lag in signature:
            c = layout.char_at(p0 + lag)
            node = node.children.get(c)
            if node is None:
                break
            prefix += c
        else:
            matches.update(dictionary.words_with_prefix(prefix))
    return CandidateSet(signature, frozenset(matches), dictionary)


def refine(candidates: CandidateSet, next_lag: int) -> CandidateSet:
    """Extend the signature by one lag; only ever removes words."""
    layout = candidates.dictionary.layout
    k = candidates.observed_length
    sig = candidates.signature + (int(next_lag),)
    kept = frozenset(
        w for w in candidates.words
        if len(w) > k and (layout.position(w[k]) - layout.position(w[0])) % layout.num_chars == sig[-1]
    )
    return CandidateSet(sig, kept, candidates.dictionary)


class ResolutionKind(enum.Enum):
    UNRESOLVED = "unresolved"
    UNIQUE = "unique"
    EMPTY = "empty"


class Resolution(NamedTuple):
    kind: ResolutionKind
    word: str | None = None


def resolution(candidates: CandidateSet) -> Resolution:
    if not candidates.words:
        return Resolution(ResolutionKind.EMPTY)
    if len(candidates.words) == 1:
        (w,) = candidates.words
        return Resolution(ResolutionKind.UNIQUE, w)
    return Resolution(ResolutionKind.UNRESOLVED)


def display_prefixes(candidates: CandidateSet) -> list[str]:
    """Sorted distinct ``k``-letter beginnings of the remaining words."""
    k = candidates.observed_length
    return sorted({w[:k] for w in candidates.words})
