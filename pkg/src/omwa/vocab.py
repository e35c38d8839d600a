"""Dynamic vocabulary with IME word likelihood (IWL) weights and word n-gram counts.

IWL is a nonnegative weight measuring how word-like a character sequence is for
input purposes. Word probability is the IWL share of the total pool; conditional
probabilities are raw count ratios over the n-gram store with multiplicative
backoff to shorter histories, bottoming out at the IWL unigram with a floor for
unknown words. Emission probabilities come from (word, pinyin) co-occurrence
counts, uniform over the table's renderings when a word has none.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .pinyin import PinyinTable


class UndefinedDistributionError(ValueError):
    """Word probability requested from an empty IWL pool without a floor."""


@dataclass
class EngineConfig:
    alpha: float = 1.0
    beta: float = 5.0
    gamma: float = 1.0
    cap: int = 1_000_000
    per: int = 1000
    maxlen: int = 4
    n: int = 4
    k: int = 10
    epsilon: float = 1e-8
    backoff: float = 0.4
    bonus_norm: bool = False

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ValueError("alpha, beta, gamma must be nonnegative")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not 0 < self.backoff < 1:
            raise ValueError("backoff must be in (0, 1)")
        for name in ("cap", "per", "maxlen", "n", "k"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")


@dataclass
class IMEWord:
    text: str
    iwl: float = 0.0
    # joined syllable span ("bei jing") -> observation count
    pinyin_counts: dict[str, int] = field(default_factory=dict)


class SyllableTrie:
    """Trie over syllable sequences; each node holds the words indexed there."""

    __slots__ = ("children", "words")

    def __init__(self):
        self.children: dict[str, SyllableTrie] = {}
        self.words: set[str] = set()

    def insert(self, span: tuple[str, ...], word: str) -> None:
        node = self
        for s in span:
            node = node.children.setdefault(s, SyllableTrie())
        node.words.add(word)

    def remove(self, span: tuple[str, ...], word: str) -> None:
        path = [self]
        for s in span:
            nxt = path[-1].children.get(s)
            if nxt is None:
                return
            path.append(nxt)
        path[-1].words.discard(word)
        for i in range(len(span), 0, -1):
            node, parent = path[i], path[i - 1]
            if node.words or node.children:
                break
            del parent.children[span[i - 1]]

    def get(self, span: Sequence[str]) -> set[str]:
        node = self
        for s in span:
            node = node.children.get(s)
            if node is None:
                return set()
        return set(node.words)

    def child(self, syllable: str) -> "SyllableTrie | None":
        return self.children.get(syllable)


class Vocabulary:
    """IWL-weighted word store with a syllable-keyed index for lattice lookup."""

    def __init__(self, config: EngineConfig | None = None, table: PinyinTable | None = None):
        self.config = config or EngineConfig()
        self.table = table
        self.entries: dict[str, IMEWord] = {}
        self.syllable_index = SyllableTrie()
        self.iwl_total = 0.0

    @property
    def size(self) -> int:
        return len(self.entries)

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def _renderings(self, word: str) -> list[tuple[str, ...]]:
        if self.table is None:
            return []
        return self.table.renderings(word)

    def iwl_add(self, word: str, delta: float, pinyin: Sequence[str] | None = None) -> bool:
        """Add weight to a word, creating it if absent.

        A ``pinyin`` span marks an actual observation and bumps the
        co-occurrence count. Words longer than ``maxlen`` are ignored (returns
        False), not an error.
        """
        if not word or len(word) > self.config.maxlen or delta < 0:
            return False
        entry = self.entries.get(word)
        if entry is None:
            entry = IMEWord(word)
            self.entries[word] = entry
            for span in self._renderings(word):
                self.syllable_index.insert(span, word)
        entry.iwl += delta
        self.iwl_total += delta
        if pinyin is not None:
            key = " ".join(pinyin)
            if key not in entry.pinyin_counts:
                self.syllable_index.insert(tuple(pinyin), word)
            entry.pinyin_counts[key] = entry.pinyin_counts.get(key, 0) + 1
        return True

    def _remove(self, entry: IMEWord) -> None:
        spans = {tuple(k.split(" ")) for k in entry.pinyin_counts}
        spans.update(self._renderings(entry.text))
        for span in spans:
            self.syllable_index.remove(span, entry.text)
        del self.entries[entry.text]

    def cull(self, cap: int | None = None) -> list[str]:
        """Evict lowest-IWL words until the size is within ``cap``.

        Ties evict the longer word first, then lexicographically smaller.
        Evicted words are simply gone: their probability reads as zero.
        """
        cap = self.config.cap if cap is None else cap
        excess = self.size - cap
        if excess <= 0:
            return []
        victims = heapq.nsmallest(
            excess, self.entries.values(), key=lambda e: (e.iwl, -len(e.text), e.text)
        )
        evicted = []
        for entry in victims:
            self._remove(entry)
            evicted.append(entry.text)
        self.iwl_total = sum(e.iwl for e in self.entries.values())
        return evicted

    def word_prob(self, word: str, floor: bool = False) -> float:
        if self.iwl_total <= 0:
            if floor:
                return self.config.epsilon
            raise UndefinedDistributionError("total IWL is zero; no distribution")
        entry = self.entries.get(word)
        p = entry.iwl / self.iwl_total if entry is not None else 0.0
        if p <= 0 and floor:
            return self.config.epsilon
        return p

    def emission_prob(self, pinyin: Sequence[str], word: str) -> float:
        """P(pinyin | word) from co-occurrence counts.

        Uniform over the table renderings when the word has no recorded
        co-occurrence; zero when the span cannot be produced from the word's
        characters at all.
        """
        span = tuple(pinyin)
        if self.table is not None:
            if len(span) != len(word):
                return 0.0
            for ch, s in zip(word, span):
                if s not in self.table.char_to_syllables.get(ch, ()):
                    return 0.0
        entry = self.entries.get(word)
        counts = entry.pinyin_counts if entry is not None else {}
        total = sum(counts.values())
        if total > 0:
            return counts.get(" ".join(span), 0) / total
        renderings = self._renderings(word)
        if renderings:
            return 1.0 / len(renderings)
        return 0.0

    def lookup_by_pinyin(self, span: Sequence[str]) -> set[str]:
        """Words whose recorded or table-derivable pinyin equals the span."""
        return self.syllable_index.get(tuple(span))

    def top_words(self, m: int) -> list[tuple[str, float]]:
        ordered = sorted(self.entries.values(), key=lambda e: (-e.iwl, e.text))
        return [(e.text, e.iwl) for e in ordered[:m]]


class NGramStore:
    """Counts of word sequences up to a fixed order, with per-context totals.

    All contiguous sub-sequences of an added sequence are counted together, so
    any stored extension implies its prefixes are stored too. The decoder's
    history-merging relies on that closure; mutate only through ``add`` /
    ``add_sequence``.
    """

    def __init__(self, order: int = 4):
        if order < 1:
            raise ValueError("order must be >= 1")
        self.order = order
        self.counts: dict[tuple[str, ...], int] = {}
        self.context_totals: dict[tuple[str, ...], int] = {}

    def add(self, gram: Sequence[str], count: int = 1) -> None:
        gram = tuple(gram)
        if not gram or len(gram) > self.order:
            raise ValueError(f"gram length must be 1..{self.order}")
        self.counts[gram] = self.counts.get(gram, 0) + count
        ctx = gram[:-1]
        self.context_totals[ctx] = self.context_totals.get(ctx, 0) + count

    def add_sequence(self, words: Sequence[str]) -> None:
        words = tuple(words)
        for i in range(len(words)):
            for j in range(i + 1, min(i + self.order, len(words)) + 1):
                self.add(words[i:j])

    def count(self, gram: Sequence[str]) -> int:
        return self.counts.get(tuple(gram), 0)

    def row_total(self, history: Sequence[str]) -> int:
        return self.context_totals.get(tuple(history), 0)


def ngram_prob(
    store: NGramStore,
    word: str,
    history: Sequence[str],
    vocab: Vocabulary,
    config: EngineConfig | None = None,
) -> float:
    """P(word | history): count ratio at the longest history with a match,
    a backoff factor per discarded history word, IWL unigram with floor at the
    bottom. Always in (0, 1]."""
    config = config or vocab.config
    h = tuple(history)
    if store.order > 1:
        h = h[-(store.order - 1):]
    else:
        h = ()
    factor = 1.0
    while h:
        c = store.counts.get(h + (word,), 0)
        if c > 0:
            return factor * c / store.context_totals[h]
        factor *= config.backoff
        h = h[1:]
    return factor * vocab.word_prob(word, floor=True)


def export_vocab_tsv(vocab: Vocabulary) -> str:
    lines = []
    for text in sorted(vocab.entries):
        e = vocab.entries[text]
        pairs = ",".join(f"{k}:{e.pinyin_counts[k]}" for k in sorted(e.pinyin_counts))
        lines.append(f"{text}\t{e.iwl!r}\t{pairs}")
    return "\n".join(lines) + ("\n" if lines else "")


def import_vocab_tsv(
    source: Iterable[str] | str,
    config: EngineConfig | None = None,
    table: PinyinTable | None = None,
) -> Vocabulary:
    from .pinyin import _iter_lines

    vocab = Vocabulary(config, table)
    for lineno, line in enumerate(_iter_lines(source), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"vocab line {lineno}: expected 3 tab-separated fields")
        text, iwl_s, pairs = parts
        entry = IMEWord(text, float(iwl_s))
        if pairs:
            for item in pairs.split(","):
                key, _, cnt = item.rpartition(":")
                entry.pinyin_counts[key] = int(cnt)
        vocab.entries[text] = entry
        vocab.iwl_total += entry.iwl
        spans = {tuple(k.split(" ")) for k in entry.pinyin_counts}
        spans.update(vocab._renderings(text))
        for span in spans:
            vocab.syllable_index.insert(span, text)
    return vocab


def export_ngrams_tsv(store: NGramStore) -> str:
    lines = [
        f"{' '.join(gram)}\t{store.counts[gram]}"
        for gram in sorted(store.counts, key=lambda g: (len(g), g))
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def import_ngrams_tsv(source: Iterable[str] | str, order: int = 4) -> NGramStore:
    from .pinyin import _iter_lines

    store = NGramStore(order)
    for lineno, line in enumerate(_iter_lines(source), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"ngram line {lineno}: expected '<w1> <w2> ...\\t<count>'")
        gram = tuple(parts[0].split(" "))
        store.add(gram, int(parts[1]))
    return store
