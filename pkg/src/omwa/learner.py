"""Online vocabulary updates from committed text.

Each committed character sequence runs, in order: periodic cull (using the
pre-observation weights), injection of every substring up to maxlen with its
aligned pinyin span, max-probability segmentation of the commit under the
current model, an IWL bonus for the segmentation's words scaled by the
segmentation probability, and n-gram counting over the segmentation. At the
end of a culling period the cap is enforced once more so the vocabulary never
crosses a period boundary oversized.
"""
from __future__ import annotations

import math
from typing import Sequence

from .decoder import OnlineTransitions
from .pinyin import PinyinTable
from .vocab import EngineConfig, NGramStore, Vocabulary


class ObservationError(ValueError):
    """Committed text and pinyin do not line up under the conversion table."""


class OnlineLearner:
    def __init__(
        self,
        vocab: Vocabulary,
        store: NGramStore,
        config: EngineConfig | None = None,
        table: PinyinTable | None = None,
    ):
        self.vocab = vocab
        self.store = store
        self.config = config or vocab.config
        self.table = table if table is not None else vocab.table
        self.n_updates = 0

    def _validate(self, text: str, syllables: Sequence[str]) -> None:
        if not text:
            raise ObservationError("empty commit")
        if len(syllables) != len(text):
            raise ObservationError(
                f"{len(text)} characters vs {len(syllables)} syllables"
            )
        if self.table is not None:
            for i, (ch, s) in enumerate(zip(text, syllables)):
                if s not in self.table.char_to_syllables.get(ch, ()):
                    raise ObservationError(f"syllable {s!r} is not a reading of {ch!r} (position {i})")

    def observe(self, text: str, syllables: Sequence[str]) -> None:
        syllables = list(syllables)
        self._validate(text, syllables)
        cfg = self.config
        periodic = self.n_updates % cfg.per == 0
        if periodic:
            self.vocab.cull(cfg.cap)
        L = len(text)
        for i in range(L):
            for j in range(i + 1, min(i + cfg.maxlen, L) + 1):
                self.vocab.iwl_add(text[i:j], cfg.alpha, pinyin=syllables[i:j])
        seg, pr = segment_chars(text, self.vocab, self.store, cfg)
        bonus_pr = pr ** (1.0 / len(seg)) if cfg.bonus_norm else pr
        bonus = cfg.beta * bonus_pr + cfg.gamma
        for word in seg:
            self.vocab.iwl_add(word, bonus)
        self.store.add_sequence(seg)
        if periodic:
            self.vocab.cull(cfg.cap)
        self.n_updates += 1


def segment_chars(
    text: str,
    vocab: Vocabulary,
    store: NGramStore,
    config: EngineConfig | None = None,
) -> tuple[list[str], float]:
    """Argmax segmentation of a character sequence under the word n-gram model,
    segments capped at maxlen, and its probability.

    Every substring is rateable thanks to the unknown-word floor, so a full
    segmentation always exists.
    """
    config = config or vocab.config
    trans = OnlineTransitions(vocab, store, config)
    n = len(text)
    if n == 0:
        raise ValueError("empty text")
    layers: list[dict] = [dict() for _ in range(n + 1)]
    layers[0][trans.initial_state()] = (0.0, ())
    for i in range(n):
        layer = layers[i]
        for state, (score, words) in list(layer.items()):
            for j in range(i + 1, min(i + config.maxlen, n) + 1):
                word = text[i:j]
                t = trans.transition_logp(word, state)
                if t is None:
                    continue
                nstate = trans.advance(state, word)
                cand = (score + t, words + (word,))
                cur = layers[j].get(nstate)
                if cur is None or _better(cand, cur):
                    layers[j][nstate] = cand
    best = None
    for item in layers[n].values():
        if best is None or _better(item, best):
            best = item
    score, words = best
    return list(words), math.exp(score)


def _better(a, b) -> bool:
    if a[0] != b[0]:
        return a[0] > b[0]
    return (len(a[1]), a[1]) < (len(b[1]), b[1])
