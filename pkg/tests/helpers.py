"""Independent oracles and synthetic-world builders shared by the test suite.

The oracles re-derive every score by direct enumeration and the literal
recursive probability definitions; they never touch the dynamic programs they
are used to check.
"""
from __future__ import annotations

import math
import random

from omwa import EngineConfig, NGramStore, PinyinTable, Vocabulary, default_inventory

# ---------------------------------------------------------------- oracles


def oracle_ngram_prob(store, word, history, vocab, config):
    h = tuple(history)
    h = h[-(store.order - 1):] if store.order > 1 else ()
    if h:
        c = store.counts.get(h + (word,), 0)
        if c > 0:
            return c / store.context_totals[h]
        return config.backoff * oracle_ngram_prob(store, word, h[1:], vocab, config)
    try:
        p = vocab.word_prob(word, floor=True)
    except ValueError:
        p = config.epsilon
    return p


def enumerate_paths(lattice):
    """All full edge sequences from node 0 to node m, by depth-first walk."""
    out = []

    def walk(node, acc):
        if node == lattice.m:
            out.append(list(acc))
            return
        for edge in lattice.edges_from[node]:
            acc.append(edge)
            walk(edge.end, acc)
            acc.pop()

    walk(0, [])
    return out


def oracle_path_score(edges, vocab, store, config):
    total = 0.0
    history: list[str] = []
    for e in edges:
        total += e.log_emission
        total += math.log(oracle_ngram_prob(store, e.word, history, vocab, config))
        history.append(e.word)
    return total


def oracle_all_scores(lattice, vocab, store, config):
    """Sorted (score desc) list of (score, words) over every full path."""
    scored = []
    for edges in enumerate_paths(lattice):
        sc = oracle_path_score(edges, vocab, store, config)
        scored.append((sc, tuple(e.word for e in edges)))
    scored.sort(key=lambda t: (-t[0], len(t[1]), t[1]))
    return scored


def all_segmentations(text, maxlen):
    if not text:
        yield []
        return
    for j in range(1, min(maxlen, len(text)) + 1):
        head = text[:j]
        for rest in all_segmentations(text[j:], maxlen):
            yield [head] + rest


def oracle_segment_chars(text, vocab, store, config):
    best = None
    for seg in all_segmentations(text, config.maxlen):
        logp = 0.0
        history: list[str] = []
        for w in seg:
            logp += math.log(oracle_ngram_prob(store, w, history, vocab, config))
            history.append(w)
        cand = (logp, seg)
        if best is None or cand[0] > best[0] or (
            cand[0] == best[0] and (len(cand[1]), cand[1]) < (len(best[1]), best[1])
        ):
            best = cand
    return best[1], math.exp(best[0])


# ---------------------------------------------------------- synthetic worlds

_INV = sorted(default_inventory())


class SynthWorld:
    """A closed little language: a few syllables, a few characters per
    syllable, and a lexicon of multi-character words with unique renderings."""

    def __init__(self, seed: int, syllable_slice=(0, 30), char_base=0x4E00,
                 chars_per_syllable=4, lexicon_size=50, word_lens=(2, 2, 3, 4)):
        rng = random.Random(seed)
        lo, hi = syllable_slice
        self.syllables = _INV[lo:hi]
        self.chars: list[str] = []
        mapping: dict[str, list[str]] = {}
        code = char_base
        self.char_syllable: dict[str, str] = {}
        for s in self.syllables:
            for _ in range(chars_per_syllable):
                ch = chr(code)
                code += 1
                mapping[ch] = [s]
                self.char_syllable[ch] = s
                self.chars.append(ch)
        self.mapping = mapping
        self.table = PinyinTable.load(
            "\n".join(f"{c}\t{mapping[c][0]}" for c in self.chars)
        )
        self.lexicon: list[str] = []
        seen_text, seen_pinyin = set(), set()
        while len(self.lexicon) < lexicon_size:
            n = rng.choice(word_lens)
            word = "".join(rng.choice(self.chars) for _ in range(n))
            pinyin = " ".join(self.char_syllable[c] for c in word)
            if word in seen_text or pinyin in seen_pinyin:
                continue
            seen_text.add(word)
            seen_pinyin.add(pinyin)
            self.lexicon.append(word)
        # Zipf-ish sampling weights
        self.weights = [1.0 / (i + 1) ** 1.2 for i in range(lexicon_size)]

    def pinyin_of(self, text: str) -> list[str]:
        return [self.char_syllable[c] for c in text]

    def sample_mius(self, count: int, seed: int, words_per_miu=(1, 2, 3)):
        rng = random.Random(seed)
        out = []
        for _ in range(count):
            k = rng.choice(words_per_miu)
            words = rng.choices(self.lexicon, weights=self.weights, k=k)
            text = "".join(words)
            out.append((text, self.pinyin_of(text), words))
        return out


def merge_tables(*tables: PinyinTable) -> PinyinTable:
    mapping: dict[str, list[str]] = {}
    for t in tables:
        for ch, syls in t.char_to_syllables.items():
            merged = mapping.setdefault(ch, [])
            for s in syls:
                if s not in merged:
                    merged.append(s)
    return PinyinTable(mapping)


def random_instance(rng: random.Random, table_chars="甲乙丙丁戊己庚辛", max_sylls=6):
    """A random tiny decoding instance: table, vocab, counts, input syllables."""
    sylls = ["ba", "bo", "bi", "bu", "ma", "mo", "mi", "mu"]
    mapping = {}
    for i, ch in enumerate(table_chars):
        readings = [sylls[i]]
        if rng.random() < 0.3:
            readings.append(rng.choice(sylls))
        mapping[ch] = list(dict.fromkeys(readings))
    table = PinyinTable(mapping)
    config = EngineConfig(n=rng.choice([2, 3, 4]), maxlen=4)
    vocab = Vocabulary(config, table)
    n_words = rng.randint(0, 8)
    for _ in range(n_words):
        length = rng.randint(1, 3)
        word = "".join(rng.choice(table_chars) for _ in range(length))
        rendering = [rng.choice(mapping[c]) for c in word]
        vocab.iwl_add(word, rng.uniform(0.2, 8.0), pinyin=rendering)
    store = NGramStore(config.n)
    words_in = sorted(vocab.entries)
    if words_in:
        for _ in range(rng.randint(0, 6)):
            seq = [rng.choice(words_in) for _ in range(rng.randint(1, 4))]
            store.add_sequence(seq)
    m = rng.randint(1, max_sylls)
    syllables = []
    for _ in range(m):
        ch = rng.choice(table_chars)
        syllables.append(rng.choice(mapping[ch]))
    return table, config, vocab, store, syllables
