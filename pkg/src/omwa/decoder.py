"""Syllable-lattice decoding: exact n-gram Viterbi, k-best paths, candidate lists.

A lattice node sits at every syllable boundary; edges are candidate words
spanning syllable ranges, plus per-character fallback edges so any input stays
convertible. Path score = sum of log emission and log transition terms. The
dynamic program's state is the last n-1 words of the path; states are merged
down to the longest suffix that still matters for scoring (a suffix with no
stored context row scores identically for every continuation, so dropping its
head is lossless — this relies on the n-gram store's prefix-closure).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol, Sequence

from .pinyin import PinyinTable
from .vocab import EngineConfig, NGramStore, Vocabulary


class UnconvertibleInputError(ValueError):
    """A syllable has no character in the conversion table."""

    def __init__(self, syllable: str, position: int):
        super().__init__(f"syllable {syllable!r} at position {position} has no characters")
        self.syllable = syllable
        self.position = position


class NoPathError(ValueError):
    """The lattice has no full path from start to end."""


@dataclass(frozen=True)
class Edge:
    start: int
    end: int
    word: str
    log_emission: float


class Lattice:
    def __init__(self, syllables: Sequence[str], edges: list[Edge]):
        self.syllables = tuple(syllables)
        self.m = len(self.syllables)
        self.edges_from: list[list[Edge]] = [[] for _ in range(self.m)]
        for e in edges:
            self.edges_from[e.start].append(e)
        for bucket in self.edges_from:
            bucket.sort(key=lambda e: (e.end, e.word))

    def all_edges(self) -> list[Edge]:
        return [e for bucket in self.edges_from for e in bucket]

    def edges_covering(self, start: int, end: int) -> list[Edge]:
        return [e for e in self.edges_from[start] if e.end == end]


class LatticeSource(Protocol):
    """Anything that can propose words for a syllable span and rate emissions."""

    def lookup_by_pinyin(self, span: Sequence[str]) -> set[str]: ...

    def emission_prob(self, pinyin: Sequence[str], word: str) -> float: ...


def build_lattice(
    syllables: Sequence[str],
    source: LatticeSource,
    table: PinyinTable,
    config: EngineConfig,
    char_fallback: str = "always",
) -> Lattice:
    """One edge per (span, word) from the source, plus single-character table
    fallback edges with uniform emission.

    ``char_fallback`` is "always" for the online engine; "uncovered" adds
    character edges only at positions no word edge covers (escalating back to
    "always" if the end would be unreachable).
    """
    syllables = list(syllables)
    if not syllables:
        raise UnconvertibleInputError("", 0)
    m = len(syllables)
    best: dict[tuple[int, int, str], float] = {}
    for start in range(m):
        for end in range(start + 1, min(start + config.maxlen, m) + 1):
            span = tuple(syllables[start:end])
            for word in sorted(source.lookup_by_pinyin(span)):
                p = source.emission_prob(span, word)
                if p <= 0:
                    continue
                key = (start, end, word)
                lp = math.log(p)
                if key not in best or lp > best[key]:
                    best[key] = lp

    def char_edges(positions) -> dict[tuple[int, int, str], float]:
        out = {}
        for i in positions:
            for ch in table.chars(syllables[i]):
                out[(i, i + 1, ch)] = math.log(1.0 / len(table.readings(ch)))
        return out

    # any syllable without table characters is unconvertible regardless of mode
    for i in range(m):
        if not table.chars(syllables[i]):
            raise UnconvertibleInputError(syllables[i], i)

    # a word edge for the same (span, word) wins over its fallback twin
    if char_fallback == "always":
        best.update({k: v for k, v in char_edges(range(m)).items() if k not in best})
    else:
        covered = set()
        for (s, e, _w) in best:
            covered.update(range(s, e))
        uncovered = [i for i in range(m) if i not in covered]
        best.update({k: v for k, v in char_edges(uncovered).items() if k not in best})
        if not _reachable(best, m):
            best.update({k: v for k, v in char_edges(range(m)).items() if k not in best})

    edges = [Edge(s, e, w, lp) for (s, e, w), lp in sorted(best.items())]
    return Lattice(syllables, edges)


def _reachable(edge_keys, m: int) -> bool:
    reach = {0}
    spans = sorted((s, e) for (s, e, _w) in edge_keys)
    for s, e in spans:
        if s in reach:
            reach.add(e)
    return m in reach


class TransitionModel(Protocol):
    def initial_state(self): ...

    def transition_logp(self, word: str, state) -> float | None: ...

    def advance(self, state, word: str): ...


class OnlineTransitions:
    """Transition scores for the learning engine.

    State is (merged history suffix, true history length capped at n-1). Each
    history word discarded below the true length costs one backoff factor, which
    keeps merged states scoring exactly like the full ones.
    """

    def __init__(self, vocab: Vocabulary, store: NGramStore, config: EngineConfig | None = None):
        self.vocab = vocab
        self.store = store
        self.config = config or vocab.config
        self._log_backoff = math.log(self.config.backoff)

    def initial_state(self):
        return ((), 0)

    def transition_logp(self, word: str, state) -> float | None:
        h, true_len = state
        log_factor = self._log_backoff * (true_len - len(h))
        while h:
            c = self.store.counts.get(h + (word,), 0)
            if c > 0:
                return log_factor + math.log(c / self.store.context_totals[h])
            log_factor += self._log_backoff
            h = h[1:]
        return log_factor + math.log(self.vocab.word_prob(word, floor=True))

    def advance(self, state, word: str):
        h, true_len = state
        limit = self.store.order - 1
        nh = (h + (word,))[-limit:] if limit > 0 else ()
        while nh and self.store.context_totals.get(nh, 0) == 0:
            nh = nh[1:]
        return (nh, min(true_len + 1, limit))


def _decode(lattice: Lattice, trans: TransitionModel, k: int):
    """Top-k paths per merged state per node. Returns the final path list and
    the best partial path reaching each interior node (for prefix candidates).
    """
    m = lattice.m
    layers: list[dict] = [dict() for _ in range(m + 1)]
    layers[0][trans.initial_state()] = [(0.0, ())]
    for node in range(m):
        layer = layers[node]
        if not layer:
            continue
        for state in list(layer):
            paths = sorted(layer[state], key=_path_rank)[:k]
            layer[state] = paths
            for edge in lattice.edges_from[node]:
                t = trans.transition_logp(edge.word, state)
                if t is None:
                    continue
                inc = edge.log_emission + t
                nstate = trans.advance(state, edge.word)
                bucket = layers[edge.end].setdefault(nstate, [])
                for sc, steps in paths:
                    bucket.append((sc + inc, steps + ((edge.word, edge.end),)))
    prefix_best = []
    for node in range(m + 1):
        cands = [p for paths in layers[node].values() for p in paths]
        prefix_best.append(min(cands, key=_path_rank) if cands else None)
    final = sorted((p for paths in layers[m].values() for p in paths), key=_path_rank)
    return final[:k], prefix_best


def _path_rank(item):
    score, steps = item
    return (-score, len(steps), tuple(w for w, _ in steps))


@dataclass(frozen=True)
class Path:
    words: tuple[str, ...]
    ends: tuple[int, ...]
    log_score: float

    @property
    def text(self) -> str:
        return "".join(self.words)


def _to_path(item) -> Path:
    score, steps = item
    return Path(tuple(w for w, _ in steps), tuple(e for _, e in steps), score)


def viterbi_best(lattice: Lattice, trans: TransitionModel) -> Path:
    paths, _ = _decode(lattice, trans, 1)
    if not paths:
        raise NoPathError(f"no full path over {len(lattice.syllables)} syllables")
    return _to_path(paths[0])


def kbest(lattice: Lattice, trans: TransitionModel, k: int) -> list[Path]:
    if k < 1:
        raise ValueError("k must be >= 1")
    paths, _ = _decode(lattice, trans, k)
    return [_to_path(p) for p in paths]


@dataclass
class ConversionResult:
    candidates: list[tuple[str, float]]

    def texts(self) -> list[str]:
        return [t for t, _ in self.candidates]


def make_candidates(
    lattice: Lattice, trans: TransitionModel, k: int
) -> ConversionResult:
    """Ranked candidate list: the best full conversion first, then best
    conversions of the best path's word-boundary prefixes (longest first), then
    alternative words over the first span, then remaining full paths. Deduped
    by text and truncated to k."""
    full, prefix_best = _decode(lattice, trans, k)
    out: list[tuple[str, float]] = []
    seen: set[str] = set()

    def add(text: str, score: float) -> None:
        if text and text not in seen:
            seen.add(text)
            out.append((text, score))

    if full:
        best = _to_path(full[0])
        add(best.text, best.log_score)
        for boundary in reversed(best.ends[:-1]):
            item = prefix_best[boundary]
            if item is not None:
                p = _to_path(item)
                add(p.text, p.log_score)
        first_end = best.ends[0]
        spans = [(0, first_end)] + ([(0, 1)] if first_end > 1 else [])
        alts = []
        for s, e in spans:
            for edge in lattice.edges_covering(s, e):
                t = trans.transition_logp(edge.word, trans.initial_state())
                if t is None:
                    continue
                alts.append((e - s, edge.log_emission + t, edge.word))
        for span_len, score, word in sorted(alts, key=lambda a: (-a[0], -a[1], a[2])):
            add(word, score)
        for item in full[1:]:
            p = _to_path(item)
            add(p.text, p.log_score)
    return ConversionResult(out[:k])
