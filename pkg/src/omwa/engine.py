"""The online engine: conversion table + vocabulary + n-gram store + learner.

Starts from an empty vocabulary and learns from commits. Snapshots round-trip
the full state (vocabulary TSV, n-gram dump, update counter, config) so a
restarted engine converts identically.
"""
from __future__ import annotations

import json
import os
from typing import Sequence

from . import decoder
from .learner import ObservationError, OnlineLearner
from .pinyin import PinyinLM, PinyinTable, default_inventory, default_table, segment_pinyin
from .vocab import (
    EngineConfig,
    NGramStore,
    Vocabulary,
    export_ngrams_tsv,
    export_vocab_tsv,
    import_ngrams_tsv,
    import_vocab_tsv,
)

SNAPSHOT_VERSION = 1


class OnlineEngine:
    def __init__(
        self,
        table: PinyinTable | None = None,
        inventory: frozenset[str] | None = None,
        config: EngineConfig | None = None,
        pinyin_lm: PinyinLM | None = None,
    ):
        self.table = table if table is not None else default_table()
        base = inventory if inventory is not None else (default_inventory() if table is None else frozenset())
        self.syllables = frozenset(base) | self.table.syllables
        self.config = config or EngineConfig()
        self.pinyin_lm = pinyin_lm
        self.vocab = Vocabulary(self.config, self.table)
        self.store = NGramStore(self.config.n)
        self.learner = OnlineLearner(self.vocab, self.store, self.config, self.table)

    @property
    def n_updates(self) -> int:
        return self.learner.n_updates

    def reset(self) -> None:
        self.vocab = Vocabulary(self.config, self.table)
        self.store = NGramStore(self.config.n)
        self.learner = OnlineLearner(self.vocab, self.store, self.config, self.table)

    def segment(self, raw: str) -> list[str]:
        return segment_pinyin(raw, self.syllables, self.pinyin_lm)

    def convert(self, pinyin: str | Sequence[str], k: int | None = None) -> decoder.ConversionResult:
        syllables = self.segment(pinyin) if isinstance(pinyin, str) else list(pinyin)
        lattice = decoder.build_lattice(syllables, self.vocab, self.table, self.config)
        trans = decoder.OnlineTransitions(self.vocab, self.store, self.config)
        return decoder.make_candidates(lattice, trans, k or self.config.k)

    def observe(self, text: str, syllables: Sequence[str]) -> None:
        self.learner.observe(text, syllables)

    def commit(self, text: str, raw_pinyin: str) -> list[str]:
        """Align a raw pinyin string against the committed text and learn from it."""
        syllables = align_pinyin(raw_pinyin, text, self.table)
        if syllables is None:
            raise ObservationError(f"pinyin {raw_pinyin!r} cannot spell {text!r}")
        self.observe(text, syllables)
        return syllables

    def top_words(self, m: int) -> list[tuple[str, float]]:
        return self.vocab.top_words(m)

    def save_snapshot(self, directory: str) -> None:
        os.makedirs(directory, exist_ok=True)
        with open(os.path.join(directory, "vocab.tsv"), "w", encoding="utf-8") as f:
            f.write(export_vocab_tsv(self.vocab))
        with open(os.path.join(directory, "ngrams.tsv"), "w", encoding="utf-8") as f:
            f.write(export_ngrams_tsv(self.store))
        meta = {
            "v": SNAPSHOT_VERSION,
            "n_updates": self.learner.n_updates,
            "config": vars(self.config),
        }
        with open(os.path.join(directory, "meta.json"), "w", encoding="utf-8") as f:
            json.dump(meta, f, ensure_ascii=False, sort_keys=True, indent=0)
            f.write("\n")

    def load_snapshot(self, directory: str) -> None:
        with open(os.path.join(directory, "meta.json"), encoding="utf-8") as f:
            meta = json.load(f)
        self.config = EngineConfig(**meta["config"])
        with open(os.path.join(directory, "vocab.tsv"), encoding="utf-8") as f:
            self.vocab = import_vocab_tsv(f, self.config, self.table)
        with open(os.path.join(directory, "ngrams.tsv"), encoding="utf-8") as f:
            self.store = import_ngrams_tsv(f, self.config.n)
        self.learner = OnlineLearner(self.vocab, self.store, self.config, self.table)
        self.learner.n_updates = meta["n_updates"]


def align_pinyin(raw: str, text: str, table: PinyinTable) -> list[str] | None:
    """Factor a raw letter string into one reading per character of ``text``.

    Apostrophes are discarded first. Readings are tried in table order, so the
    result is deterministic. None when no factoring exists.
    """
    raw = raw.replace("'", "")
    memo: dict[tuple[int, int], list[str] | None] = {}

    def go(ci: int, pos: int):
        if ci == len(text):
            return [] if pos == len(raw) else None
        key = (ci, pos)
        if key in memo:
            return memo[key]
        result = None
        for reading in table.readings(text[ci]):
            if raw.startswith(reading, pos):
                rest = go(ci + 1, pos + len(reading))
                if rest is not None:
                    result = [reading] + rest
                    break
        memo[key] = result
        return result

    return go(0, 0)
