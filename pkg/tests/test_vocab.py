import random

import pytest

from omwa import (
    EngineConfig,
    NGramStore,
    UndefinedDistributionError,
    Vocabulary,
    ngram_prob,
)
from omwa.vocab import export_ngrams_tsv, export_vocab_tsv, import_ngrams_tsv, import_vocab_tsv


def make_vocab(table=None, **cfg):
    return Vocabulary(EngineConfig(**cfg), table)


class TestIwlAdd:
    def test_first_insertion(self, fig_table):
        v = make_vocab(fig_table)
        assert v.iwl_add("北京", 1.0, pinyin=["bei", "jing"])
        assert v.entries["北京"].iwl == 1.0
        assert v.size == 1

    def test_additivity(self, fig_table):
        v = make_vocab(fig_table)
        v.iwl_add("北京", 1.0, pinyin=["bei", "jing"])
        v.iwl_add("北京", 1.0, pinyin=["bei", "jing"])
        assert v.entries["北京"].iwl == 2.0
        assert v.entries["北京"].pinyin_counts == {"bei jing": 2}

    def test_maxlen_guard(self, fig_table):
        v = make_vocab(fig_table, maxlen=4)
        assert not v.iwl_add("北京北京北", 1.0)
        assert v.size == 0

    def test_bonus_without_pinyin_keeps_counts(self, fig_table):
        v = make_vocab(fig_table)
        v.iwl_add("北京", 1.0, pinyin=["bei", "jing"])
        v.iwl_add("北京", 2.5)
        assert v.entries["北京"].iwl == 3.5
        assert v.entries["北京"].pinyin_counts == {"bei jing": 1}


class TestCull:
    def seed(self, v, weights):
        for text, w in weights.items():
            v.iwl_add(text, w)

    def test_forced_eviction(self, fig_table):
        v = make_vocab(fig_table)
        self.seed(v, {"北": 5, "京": 1, "背": 3})
        evicted = v.cull(2)
        assert evicted == ["京"]
        assert set(v.entries) == {"北", "背"}
        assert v.word_prob("京") == 0.0

    def test_noop_when_within_cap(self, fig_table):
        v = make_vocab(fig_table)
        self.seed(v, {"北": 5, "京": 1})
        assert v.cull(5) == []
        assert v.size == 2

    def test_tie_break_deterministic(self, fig_table):
        # equal IWL: the longer word goes first, then code-point order (京 < 北)
        v1 = make_vocab(fig_table)
        v1.iwl_add("北", 1.0)
        v1.iwl_add("京", 1.0)
        v2 = make_vocab(fig_table)
        v2.iwl_add("京", 1.0)
        v2.iwl_add("北", 1.0)
        assert v1.cull(1) == v2.cull(1) == ["京"]
        v3 = make_vocab(fig_table)
        v3.iwl_add("北京", 1.0, pinyin=["bei", "jing"])
        v3.iwl_add("京", 1.0)
        assert v3.cull(1) == ["北京"]

    def test_cull_cleans_index(self, fig_table):
        v = make_vocab(fig_table)
        v.iwl_add("北京", 1.0, pinyin=["bei", "jing"])
        v.iwl_add("背景", 5.0, pinyin=["bei", "jing"])
        v.cull(1)
        assert v.lookup_by_pinyin(["bei", "jing"]) == {"背景"}


class TestWordProb:
    def test_ratio(self, fig_table):
        v = make_vocab(fig_table)
        for w in ("北", "京", "北京"):
            v.iwl_add(w, 1.0)
        assert v.word_prob("北京") == pytest.approx(1 / 3)

    def test_floor_for_absent(self, fig_table):
        v = make_vocab(fig_table, epsilon=1e-8)
        v.iwl_add("北", 1.0)
        assert v.word_prob("京", floor=True) == 1e-8
        assert v.word_prob("京") == 0.0

    def test_empty_pool_errors(self, fig_table):
        v = make_vocab(fig_table)
        with pytest.raises(UndefinedDistributionError):
            v.word_prob("北")
        assert v.word_prob("北", floor=True) == v.config.epsilon

    def test_normalization_over_entries(self, fig_table):
        rng = random.Random(11)
        v = make_vocab(fig_table)
        for i, w in enumerate("北京背景倍"):
            v.iwl_add(w, rng.uniform(0.1, 5.0))
        assert sum(v.word_prob(w) for w in v.entries) == pytest.approx(1.0, abs=1e-9)


class TestNGramProb:
    def test_seen_ratio(self, fig_table):
        v = make_vocab(fig_table)
        v.iwl_add("我", 1.0)
        store = NGramStore(2)
        store.add(("我", "爱"), 2)
        store.add(("我", "吃"), 2)
        assert ngram_prob(store, "爱", ["我"], v) == pytest.approx(0.5)

    def test_unseen_history_backs_off(self, fig_table):
        v = make_vocab(fig_table, backoff=0.4)
        v.iwl_add("爱", 1.0)
        v.iwl_add("我", 3.0)
        store = NGramStore(2)
        p = ngram_prob(store, "爱", ["我"], v)
        assert p == pytest.approx(0.4 * 0.25)

    def test_observed_continuation_ratios_sum_to_one(self, fig_table):
        v = make_vocab(fig_table)
        store = NGramStore(3)
        rng = random.Random(5)
        words = list("北京背景")
        for _ in range(30):
            store.add_sequence([rng.choice(words) for _ in range(3)])
        for history in [("北",), ("京", "背")]:
            row = store.row_total(history)
            if row == 0:
                continue
            ratios = sum(
                store.count(history + (w,)) / row
                for w in words
                if store.count(history + (w,)) > 0
            )
            assert ratios == pytest.approx(1.0, abs=1e-9)

    def test_always_positive_and_bounded(self, fig_table):
        rng = random.Random(13)
        v = make_vocab(fig_table)
        for w in "北京背":
            v.iwl_add(w, rng.uniform(0, 3))
        store = NGramStore(4)
        for _ in range(10):
            store.add_sequence([rng.choice("北京背") for _ in range(rng.randint(1, 5))])
        for _ in range(200):
            word = rng.choice("北京背景倍呗")
            history = [rng.choice("北京背景") for _ in range(rng.randint(0, 5))]
            p = ngram_prob(store, word, history, v)
            assert 0 < p <= 1

    def test_prefix_count_dominates_extension(self):
        rng = random.Random(17)
        store = NGramStore(4)
        for _ in range(50):
            store.add_sequence([rng.choice("abcd") for _ in range(rng.randint(1, 6))])
        for gram, c in store.counts.items():
            if len(gram) > 1:
                assert store.counts[gram[:-1]] >= c


class TestEmission:
    def test_single_observation(self, fig_table):
        v = make_vocab(fig_table)
        v.iwl_add("北京", 1.0, pinyin=["bei", "jing"])
        assert v.emission_prob(["bei", "jing"], "北京") == 1.0

    def test_polyphonic_ratio(self, fig_table):
        v = make_vocab(fig_table)
        for _ in range(3):
            v.iwl_add("什么", 1.0, pinyin=["shen", "me"])
        v.iwl_add("什么", 1.0, pinyin=["shi", "me"])
        assert v.emission_prob(["shen", "me"], "什么") == pytest.approx(0.75)

    def test_incompatible_is_zero(self, fig_table):
        v = make_vocab(fig_table)
        v.iwl_add("北京", 1.0, pinyin=["bei", "jing"])
        assert v.emission_prob(["jing", "bei"], "北京") == 0.0

    def test_uniform_when_unobserved(self, fig_table):
        v = make_vocab(fig_table)
        v.iwl_add("什么", 1.0)
        assert v.emission_prob(["shen", "me"], "什么") == pytest.approx(0.5)


class TestLookup:
    def test_recorded_words(self, fig_table):
        v = make_vocab(fig_table)
        v.iwl_add("北京", 1.0, pinyin=["bei", "jing"])
        v.iwl_add("背景", 1.0, pinyin=["bei", "jing"])
        assert v.lookup_by_pinyin(["bei", "jing"]) == {"北京", "背景"}

    def test_table_derivable_rendering(self, fig_table):
        v = make_vocab(fig_table)
        v.iwl_add("什么", 1.0, pinyin=["shen", "me"])
        assert "什么" in v.lookup_by_pinyin(["shi", "me"])

    def test_missing_span_empty(self, fig_table):
        v = make_vocab(fig_table)
        assert v.lookup_by_pinyin(["bei"]) == set()
        assert v.lookup_by_pinyin(["bei", "jing"]) == set()


class TestTopWords:
    def test_sorted_desc(self, fig_table):
        v = make_vocab(fig_table)
        v.iwl_add("北", 5.0)
        v.iwl_add("京", 1.0)
        v.iwl_add("背", 3.0)
        assert v.top_words(2) == [("北", 5.0), ("背", 3.0)]

    def test_m_exceeds_size(self, fig_table):
        v = make_vocab(fig_table)
        v.iwl_add("北", 1.0)
        assert len(v.top_words(10)) == 1

    def test_tie_by_text(self, fig_table):
        v = make_vocab(fig_table)
        v.iwl_add("北", 2.0)
        v.iwl_add("京", 2.0)
        assert [t for t, _ in v.top_words(2)] == ["京", "北"]  # code-point order


class TestCachedTotal:
    def test_random_operation_sequences(self, fig_table):
        rng = random.Random(23)
        words = ["北", "京", "背", "景", "北京", "背景", "倍", "呗"]
        for trial in range(20):
            v = make_vocab(fig_table)
            for _ in range(rng.randint(5, 60)):
                op = rng.random()
                if op < 0.8:
                    w = rng.choice(words)
                    spans = fig_table.renderings(w)
                    v.iwl_add(w, rng.uniform(0, 4), pinyin=list(rng.choice(spans)))
                else:
                    v.cull(rng.randint(1, 6))
                assert v.iwl_total == pytest.approx(
                    sum(e.iwl for e in v.entries.values()), abs=1e-9
                )


class TestRoundTrip:
    def test_vocab_tsv_lossless(self, fig_table):
        rng = random.Random(29)
        v = make_vocab(fig_table)
        for w in ["北京", "背景", "什么", "北"]:
            for _ in range(rng.randint(1, 3)):
                spans = fig_table.renderings(w)
                v.iwl_add(w, rng.uniform(0.01, 7.3), pinyin=list(rng.choice(spans)))
        text = export_vocab_tsv(v)
        v2 = import_vocab_tsv(text, v.config, fig_table)
        assert export_vocab_tsv(v2) == text
        assert {t: e.iwl for t, e in v2.entries.items()} == {
            t: e.iwl for t, e in v.entries.items()
        }
        assert v2.lookup_by_pinyin(["bei", "jing"]) == v.lookup_by_pinyin(["bei", "jing"])

    def test_ngram_tsv_lossless(self):
        rng = random.Random(31)
        store = NGramStore(4)
        for _ in range(20):
            store.add_sequence([rng.choice("abcd") for _ in range(rng.randint(1, 5))])
        text = export_ngrams_tsv(store)
        store2 = import_ngrams_tsv(text, 4)
        assert store2.counts == store.counts
        assert store2.context_totals == store.context_totals
        assert export_ngrams_tsv(store2) == text
