"""Adaptive pinyin input method engine with online word-likelihood learning."""

from .baseline import OfflineEngine, OfflineModel, convert_offline, train_offline
from .decoder import (
    ConversionResult,
    Lattice,
    NoPathError,
    OnlineTransitions,
    Path,
    UnconvertibleInputError,
    build_lattice,
    kbest,
    make_candidates,
    viterbi_best,
)
from .engine import OnlineEngine, align_pinyin
from .evaluate import (
    MIU,
    ScoreReport,
    extract_mius,
    interleave,
    run_simulation,
    topk_score,
)
from .learner import ObservationError, OnlineLearner, segment_chars
from .pinyin import (
    PinyinLM,
    PinyinTable,
    SegmentationError,
    TableLoadError,
    default_inventory,
    default_table,
    load_inventory,
    segment_pinyin,
    train_pinyin_lm,
)
from .vocab import (
    EngineConfig,
    IMEWord,
    NGramStore,
    UndefinedDistributionError,
    Vocabulary,
    ngram_prob,
)

__version__ = "0.1.0"

__all__ = [
    "ConversionResult",
    "EngineConfig",
    "IMEWord",
    "Lattice",
    "MIU",
    "NGramStore",
    "NoPathError",
    "ObservationError",
    "OfflineEngine",
    "OfflineModel",
    "OnlineEngine",
    "OnlineLearner",
    "OnlineTransitions",
    "Path",
    "PinyinLM",
    "PinyinTable",
    "ScoreReport",
    "SegmentationError",
    "TableLoadError",
    "UnconvertibleInputError",
    "UndefinedDistributionError",
    "Vocabulary",
    "align_pinyin",
    "build_lattice",
    "convert_offline",
    "default_inventory",
    "default_table",
    "extract_mius",
    "interleave",
    "kbest",
    "load_inventory",
    "make_candidates",
    "ngram_prob",
    "run_simulation",
    "segment_chars",
    "segment_pinyin",
    "topk_score",
    "train_offline",
    "train_pinyin_lm",
    "viterbi_best",
]
