"""Offline unigram/bigram/trigram conversion models with a fixed vocabulary.

Trained once on a segmented, pinyin-annotated corpus; probabilities are raw
count ratios with no smoothing, so unseen words and unseen histories prune the
path outright. Character fallback exists only to keep inputs convertible: a
fallback character carries a fixed tiny probability and breaks the n-gram
context (the following word starts from an empty history).
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

from . import decoder
from .decoder import ConversionResult, Lattice, NoPathError, TransitionModel
from .pinyin import PinyinTable
from .vocab import EngineConfig, SyllableTrie

FALLBACK_LOGP = math.log(1e-12)


class OfflineModel:
    def __init__(self, order: int):
        if order not in (1, 2, 3):
            raise ValueError("offline model order must be 1, 2 or 3")
        self.order = order
        self.counts: dict[tuple[str, ...], int] = {}
        self.context_totals: dict[tuple[str, ...], int] = {}
        self.vocabulary: set[str] = set()
        self.emissions: dict[str, dict[str, int]] = {}
        self.syllable_index = SyllableTrie()
        self.max_word_len = 1

    def _add_gram(self, gram: tuple[str, ...], count: int = 1) -> None:
        self.counts[gram] = self.counts.get(gram, 0) + count
        ctx = gram[:-1]
        self.context_totals[ctx] = self.context_totals.get(ctx, 0) + count

    def add_record(self, words: Sequence[str], syllables: Sequence[str]) -> None:
        words = list(words)
        syllables = list(syllables)
        if sum(len(w) for w in words) != len(syllables):
            raise ValueError("word characters and syllables do not align")
        pos = 0
        for w in words:
            span = syllables[pos:pos + len(w)]
            pos += len(w)
            self.vocabulary.add(w)
            self.max_word_len = max(self.max_word_len, len(w))
            key = " ".join(span)
            slot = self.emissions.setdefault(w, {})
            if key not in slot:
                self.syllable_index.insert(tuple(span), w)
            slot[key] = slot.get(key, 0) + 1
        for i in range(len(words)):
            for j in range(i + 1, min(i + self.order, len(words)) + 1):
                self._add_gram(tuple(words[i:j]))

    def lookup_by_pinyin(self, span: Sequence[str]) -> set[str]:
        return self.syllable_index.get(tuple(span))

    def emission_prob(self, pinyin: Sequence[str], word: str) -> float:
        counts = self.emissions.get(word)
        if not counts:
            return 0.0
        total = sum(counts.values())
        return counts.get(" ".join(pinyin), 0) / total


class OfflineTransitions:
    """Raw ratio transitions. None prunes the path; fallback characters score
    the fixed tiny constant and reset the history."""

    def __init__(self, model: OfflineModel):
        self.model = model

    def initial_state(self):
        return ()

    def transition_logp(self, word: str, state) -> float | None:
        model = self.model
        if word not in model.vocabulary:
            return FALLBACK_LOGP
        h = state
        c = model.counts.get(h + (word,), 0)
        row = model.context_totals.get(h, 0)
        if c <= 0 or row <= 0:
            return None
        return math.log(c / row)

    def advance(self, state, word: str):
        if word not in self.model.vocabulary:
            return ()
        limit = self.model.order - 1
        return (state + (word,))[-limit:] if limit > 0 else ()


def train_offline(
    corpus: Iterable[tuple[Sequence[str], Sequence[str]]], order: int
) -> OfflineModel:
    model = OfflineModel(order)
    n = 0
    for words, syllables in corpus:
        model.add_record(words, syllables)
        n += 1
    if n == 0:
        raise ValueError("empty training corpus")
    return model


def parse_training_line(line: str) -> tuple[list[str], list[str]]:
    """``<w1> <w2> ...\\t<syl1> <syl2> ...`` with per-word alignment implied by
    character counts."""
    words_s, _, syls_s = line.rstrip("\n").partition("\t")
    words = words_s.split()
    syls = syls_s.split()
    if not words or not syls:
        raise ValueError(f"bad training line: {line!r}")
    return words, syls


def load_training_corpus(source) -> list[tuple[list[str], list[str]]]:
    from .pinyin import _iter_lines

    out = []
    for line in _iter_lines(source):
        if line.strip():
            out.append(parse_training_line(line))
    return out


def convert_offline(
    model: OfflineModel,
    syllables: Sequence[str],
    table: PinyinTable,
    k: int,
    config: EngineConfig | None = None,
) -> ConversionResult:
    config = config or EngineConfig()
    if model.max_word_len > config.maxlen:
        config = EngineConfig(**{**vars(config), "maxlen": model.max_word_len})
    lattice = decoder.build_lattice(syllables, model, table, config, char_fallback="uncovered")
    trans = OfflineTransitions(model)
    result = decoder.make_candidates(lattice, trans, k)
    if not result.candidates:
        raise NoPathError(f"offline model cannot convert {' '.join(syllables)!r}")
    return result


class OfflineEngine:
    """Adapter giving an offline model the online engine's convert interface."""

    def __init__(self, model: OfflineModel, table: PinyinTable, config: EngineConfig | None = None):
        self.model = model
        self.table = table
        self.config = config or EngineConfig()

    def convert(self, syllables: Sequence[str], k: int | None = None) -> ConversionResult:
        return convert_offline(self.model, syllables, self.table, k or self.config.k, self.config)
