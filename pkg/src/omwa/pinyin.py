"""Character-pinyin conversion table, syllable segmentation and the syllable trigram model.

The conversion table maps each Chinese character to its legal toneless readings
and is loaded from a TSV file (``<char>\\t<syll>[,<syll>...]``). Raw letter
strings are segmented into syllable sequences either by a fewest-syllables rule
or, when a trained syllable trigram is supplied, by maximum language-model
score. Apostrophes in the raw input force syllable boundaries and are dropped.
"""
from __future__ import annotations

import math
from importlib import resources
from typing import Iterable, Sequence

# History padding marker for the syllable trigram; never a predicted token.
BOS = "<s>"

_KN_DISCOUNT = 0.75


class TableLoadError(ValueError):
    """Raised when the character-pinyin TSV cannot be parsed."""


class SegmentationError(ValueError):
    """Raised when a raw pinyin string has no legal syllable segmentation."""

    def __init__(self, message: str, raw: str = "", span: tuple[int, int] | None = None):
        super().__init__(message)
        self.raw = raw
        self.span = span


def _iter_lines(source) -> Iterable[str]:
    if isinstance(source, (str, bytes)):
        import os

        if isinstance(source, bytes):
            yield from source.decode("utf-8").splitlines()
            return
        if os.path.exists(source):
            with open(source, encoding="utf-8") as f:
                yield from f.read().splitlines()
            return
        yield from source.splitlines()
        return
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        yield from data.splitlines()
        return
    yield from source


class PinyinTable:
    """Bidirectional character <-> syllable mapping.

    ``char_to_syllables`` preserves the reading order of the source file (the
    first listed reading is the conventional one); ``syllable_to_chars`` is the
    exact inverse, in first-seen order.
    """

    def __init__(self, char_to_syllables: dict[str, list[str]]):
        self.char_to_syllables: dict[str, list[str]] = {}
        self.syllable_to_chars: dict[str, list[str]] = {}
        for char, sylls in char_to_syllables.items():
            if not sylls:
                raise TableLoadError(f"character {char!r} has no readings")
            uniq = list(dict.fromkeys(sylls))
            self.char_to_syllables[char] = uniq
            for s in uniq:
                self.syllable_to_chars.setdefault(s, [])
                if char not in self.syllable_to_chars[s]:
                    self.syllable_to_chars[s].append(char)
        self.syllables = frozenset(self.syllable_to_chars)

    def __len__(self) -> int:
        return len(self.char_to_syllables)

    def readings(self, char: str) -> list[str]:
        return self.char_to_syllables.get(char, [])

    def chars(self, syllable: str) -> list[str]:
        return self.syllable_to_chars.get(syllable, [])

    def renderings(self, word: str) -> list[tuple[str, ...]]:
        """All full-pinyin renderings of a word (one syllable per character).

        Empty when any character is not in the table.
        """
        out: list[tuple[str, ...]] = [()]
        for ch in word:
            rs = self.char_to_syllables.get(ch)
            if not rs:
                return []
            out = [prefix + (r,) for prefix in out for r in rs]
        return out

    @classmethod
    def load(cls, source) -> "PinyinTable":
        mapping: dict[str, list[str]] = {}
        n = 0
        for lineno, line in enumerate(_iter_lines(source), 1):
            if not line.strip():
                continue
            n += 1
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise TableLoadError(f"line {lineno}: expected '<char>\\t<syll>[,...]', got {line!r}")
            char, syls = parts
            readings = [s.strip() for s in syls.split(",") if s.strip()]
            if not readings or any(not s.isascii() or not s.islower() for s in readings):
                raise TableLoadError(f"line {lineno}: bad readings {syls!r}")
            merged = mapping.setdefault(char, [])
            for s in readings:
                if s not in merged:
                    merged.append(s)
        if n == 0:
            raise TableLoadError("empty conversion table")
        return cls(mapping)


def load_inventory(source) -> frozenset[str]:
    out = []
    for line in _iter_lines(source):
        s = line.strip()
        if s:
            out.append(s)
    if not out:
        raise TableLoadError("empty syllable inventory")
    return frozenset(out)


def default_table() -> PinyinTable:
    path = resources.files("omwa").joinpath("data/char_pinyin.tsv")
    return PinyinTable.load(path.read_text(encoding="utf-8"))


def default_inventory() -> frozenset[str]:
    path = resources.files("omwa").joinpath("data/syllables.txt")
    return load_inventory(path.read_text(encoding="utf-8"))


class PinyinLM:
    """Syllable trigram with interpolated Kneser-Ney smoothing, one fixed discount.

    Lower orders use continuation counts; the unigram level interpolates with a
    uniform distribution over the training alphabet so every syllable keeps
    nonzero mass and per-history probabilities sum to one.
    """

    def __init__(self, alphabet: frozenset[str]):
        self.alphabet = alphabet
        self.discount = _KN_DISCOUNT
        self.tri: dict[tuple[str, str, str], int] = {}
        self.tri_row: dict[tuple[str, str], int] = {}
        self.tri_row_types: dict[tuple[str, str], int] = {}
        # continuation counts: distinct left contexts
        self.cont_bi: dict[tuple[str, str], int] = {}
        self.cont_bi_row: dict[str, int] = {}
        self.cont_bi_types: dict[str, int] = {}
        self.cont_uni: dict[str, int] = {}
        self.cont_uni_total = 0

    def prob(self, syllable: str, prev2: str, prev1: str) -> float:
        d = self.discount
        v = len(self.alphabet)
        p1 = 1.0 / v
        if self.cont_uni_total > 0:
            p1 = (
                max(self.cont_uni.get(syllable, 0) - d, 0.0)
                + d * len(self.cont_uni) * (1.0 / v)
            ) / self.cont_uni_total
        row = self.cont_bi_row.get(prev1, 0)
        p2 = p1
        if row > 0:
            p2 = (
                max(self.cont_bi.get((prev1, syllable), 0) - d, 0.0)
                + d * self.cont_bi_types[prev1] * p1
            ) / row
        row3 = self.tri_row.get((prev2, prev1), 0)
        if row3 > 0:
            return (
                max(self.tri.get((prev2, prev1, syllable), 0) - d, 0.0)
                + d * self.tri_row_types[(prev2, prev1)] * p2
            ) / row3
        return p2

    def logp(self, syllable: str, prev2: str, prev1: str) -> float:
        return math.log(self.prob(syllable, prev2, prev1))

    def score(self, seq: Sequence[str]) -> float:
        prev2, prev1 = BOS, BOS
        total = 0.0
        for s in seq:
            total += self.logp(s, prev2, prev1)
            prev2, prev1 = prev1, s
        return total


def train_pinyin_lm(corpus: Iterable[Sequence[str]], alphabet: Iterable[str] | None = None) -> PinyinLM:
    """Count a syllable corpus into a PinyinLM.

    ``alphabet`` should normally be the full syllable inventory; it is extended
    with every observed syllable so normalization holds.
    """
    tri: dict[tuple[str, str, str], int] = {}
    bi: dict[tuple[str, str], int] = {}
    tri_left: dict[tuple[str, str], set] = {}
    bi_left: dict[str, set] = {}
    seen: set[str] = set()
    n_seq = 0
    for seq in corpus:
        seq = list(seq)
        if not seq:
            continue
        n_seq += 1
        seen.update(seq)
        padded = [BOS, BOS] + seq
        for i in range(len(seq)):
            u, v, w = padded[i], padded[i + 1], padded[i + 2]
            tri[(u, v, w)] = tri.get((u, v, w), 0) + 1
            tri_left.setdefault((v, w), set()).add(u)
            bi[(v, w)] = bi.get((v, w), 0) + 1
            bi_left.setdefault(w, set()).add(v)
    if n_seq == 0:
        raise ValueError("empty pinyin corpus")
    alpha = frozenset(alphabet or ()) | seen
    lm = PinyinLM(alpha)
    lm.tri = tri
    for (u, v, w), c in tri.items():
        lm.tri_row[(u, v)] = lm.tri_row.get((u, v), 0) + c
        lm.tri_row_types[(u, v)] = lm.tri_row_types.get((u, v), 0) + 1
    for (v, w), left in tri_left.items():
        lm.cont_bi[(v, w)] = len(left)
        lm.cont_bi_row[v] = lm.cont_bi_row.get(v, 0) + len(left)
        lm.cont_bi_types[v] = lm.cont_bi_types.get(v, 0) + 1
    for w, left in bi_left.items():
        lm.cont_uni[w] = len(left)
        lm.cont_uni_total += len(left)
    return lm


def _chunk_error(chunk: str, offset: int, raw: str, max_len: int) -> SegmentationError:
    # furthest position reachable from the chunk start via legal syllables
    return SegmentationError(
        f"no legal syllable segmentation at {chunk[offset:offset + max_len]!r} "
        f"(offset {offset})",
        raw=raw,
        span=(offset, min(offset + max_len, len(chunk))),
    )


def segment_pinyin(
    raw: str,
    syllables: Iterable[str],
    lm: PinyinLM | None = None,
) -> list[str]:
    """Split a raw letter string into inventory syllables.

    Without a language model the fewest-syllables segmentation wins, breaking
    ties by preferring the longest syllable at the leftmost position. With a
    model, the segmentation with the highest trigram score wins. The
    concatenated output always equals the input minus apostrophes.
    """
    legal = syllables if isinstance(syllables, frozenset) else frozenset(syllables)
    for i, ch in enumerate(raw):
        if ch != "'" and not ("a" <= ch <= "z"):
            raise SegmentationError(f"illegal character {ch!r} at offset {i}", raw=raw, span=(i, i + 1))
    max_len = max((len(s) for s in legal), default=0)
    out: list[str] = []
    offset = 0
    for chunk in raw.split("'"):
        if chunk:
            out.extend(_segment_chunk(chunk, legal, lm, max_len, raw, offset))
        offset += len(chunk) + 1
    return out


def _segment_chunk(
    chunk: str, legal: frozenset, lm: PinyinLM | None, max_len: int, raw: str, base: int
) -> list[str]:
    n = len(chunk)
    if lm is None:
        # min syllable count for each suffix, then greedy leftmost-longest
        INF = n + 2
        best = [INF] * (n + 1)
        best[n] = 0
        for i in range(n - 1, -1, -1):
            for j in range(i + 1, min(i + max_len, n) + 1):
                if chunk[i:j] in legal and 1 + best[j] < best[i]:
                    best[i] = 1 + best[j]
        if best[0] >= INF:
            stuck = 0
            reach = {0}
            for i in range(n):
                if i in reach:
                    stuck = max(stuck, i)
                    for j in range(i + 1, min(i + max_len, n) + 1):
                        if chunk[i:j] in legal:
                            reach.add(j)
            raise _chunk_error(chunk, stuck, raw, max_len or 1)
        out = []
        i = 0
        while i < n:
            for j in range(min(i + max_len, n), i, -1):
                if chunk[i:j] in legal and 1 + best[j] == best[i]:
                    out.append(chunk[i:j])
                    i = j
                    break
        return out
    # trigram-scored segmentation: DP over (position, previous two syllables)
    layers: list[dict[tuple[str, str], tuple[float, tuple[str, ...]]]] = [dict() for _ in range(n + 1)]
    layers[0][(BOS, BOS)] = (0.0, ())
    for i in range(n):
        if not layers[i]:
            continue
        for j in range(i + 1, min(i + max_len, n) + 1):
            s = chunk[i:j]
            if s not in legal:
                continue
            for (p2, p1), (sc, seq) in layers[i].items():
                nsc = sc + lm.logp(s, p2, p1)
                key = (p1, s)
                cur = layers[j].get(key)
                if cur is None or nsc > cur[0] or (nsc == cur[0] and seq + (s,) < cur[1]):
                    layers[j][key] = (nsc, seq + (s,))
    if not layers[n]:
        reach = max(i for i in range(n + 1) if layers[i])
        raise _chunk_error(chunk, reach, raw, max_len or 1)
    best_sc, best_seq = max(layers[n].values(), key=lambda t: (t[0], [len(s) for s in t[1]]))
    return list(best_seq)
