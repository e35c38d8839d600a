"""Replay harness: MIU extraction, the decayed top-K prefix score, per-group
learning curves, corpus interleaving, and deterministic CSV/JSON reports.

A maximum input unit (MIU) is a maximal run of Chinese characters between
non-Chinese separators; each MIU is converted, scored against the true text,
and (for the online engine) fed back as a commit. The score of a candidate
list halves with each rank and weights each prefix-matching candidate by its
covered fraction, so values above 1 are possible when several candidates are
prefixes of the target.
"""
from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .decoder import ConversionResult
from .pinyin import PinyinTable

CJK_RUN = re.compile(r"[一-鿿]+")


@dataclass(frozen=True)
class MIU:
    text: str
    line_no: int = 0


def extract_mius(line: str, line_no: int = 0) -> list[MIU]:
    return [MIU(m.group(0), line_no) for m in CJK_RUN.finditer(line)]


def topk_score(result: ConversionResult | Sequence[str], target: str, k: int) -> float:
    """Sum over the first k candidates of (1/2)^(i-1) * [candidate is a prefix
    of target] * len(candidate)/len(target)."""
    if k < 1 or not target:
        raise ValueError("k must be >= 1 and target non-empty")
    texts = result.texts() if isinstance(result, ConversionResult) else list(result)
    score = 0.0
    for i, text in enumerate(texts[:k]):
        if target.startswith(text):
            score += (0.5 ** i) * len(text) / len(target)
    return score


def interleave(a: Sequence, b: Sequence, segments: int) -> tuple[list, list[int]]:
    """A1 B1 A2 B2 ... with order preserved inside segments; chunk sizes differ
    by at most one (leading chunks take the remainder). Returns the combined
    list and the joint indices where the source switches."""
    if segments < 1:
        raise ValueError("segments must be >= 1")

    def chunks(xs):
        n = len(xs)
        size, extra = divmod(n, segments)
        out, pos = [], 0
        for i in range(segments):
            step = size + (1 if i < extra else 0)
            out.append(list(xs[pos:pos + step]))
            pos += step
        return out

    combined: list = []
    joints: list[int] = []
    for ca, cb in zip(chunks(a), chunks(b)):
        for chunk in (ca, cb):
            if combined and chunk:
                joints.append(len(combined))
            combined.extend(chunk)
    return combined, joints


@dataclass
class ScoreReport:
    k_values: tuple[int, ...]
    group_size: int
    totals: dict[int, float] = field(default_factory=dict)
    # one row per group: (group index, size, {k: mean score})
    groups: list[tuple[int, int, dict[int, float]]] = field(default_factory=list)
    joints: list[int] = field(default_factory=list)
    n_mius: int = 0
    skipped: int = 0

    def to_csv(self) -> str:
        header = "group," + ",".join(f"top{k}" for k in self.k_values)
        rows = [header]
        for idx, _size, means in self.groups:
            rows.append(f"{idx}," + ",".join(f"{means[k]:.6f}" for k in self.k_values))
        return "\n".join(rows) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "v": 1,
            "group_size": self.group_size,
            "k": list(self.k_values),
            "mius": self.n_mius,
            "skipped": self.skipped,
            "joints": list(self.joints),
            "totals": {f"top{k}": f"{self.totals[k]:.6f}" for k in self.k_values},
            "groups": [
                {
                    "group": idx,
                    "size": size,
                    **{f"top{k}": f"{means[k]:.6f}" for k in self.k_values},
                }
                for idx, size, means in self.groups
            ],
        }


def first_reading_pinyin(text: str, table: PinyinTable) -> list[str] | None:
    out = []
    for ch in text:
        readings = table.readings(ch)
        if not readings:
            return None
        out.append(readings[0])
    return out


def run_simulation(
    corpus: Iterable[tuple[str, Sequence[str] | None]],
    engine,
    k_values: Sequence[int] = (1, 10),
    group_size: int = 2000,
    table: PinyinTable | None = None,
    joints: Sequence[int] | None = None,
    log=None,
) -> ScoreReport:
    """Convert each MIU, score at every requested k, then let a learning engine
    observe the commit. Records with unusable pinyin are skipped and counted.
    """
    k_values = tuple(k_values)
    kmax = max(k_values)
    table = table if table is not None else getattr(engine, "table", None)
    can_learn = hasattr(engine, "observe")
    report = ScoreReport(k_values, group_size, joints=list(joints or []))
    sums = {k: 0.0 for k in k_values}
    g_sums = {k: 0.0 for k in k_values}
    g_count = 0
    g_index = 1

    def flush_group():
        nonlocal g_count, g_index
        if g_count:
            report.groups.append(
                (g_index, g_count, {k: g_sums[k] / g_count for k in k_values})
            )
            g_index += 1
            for k in k_values:
                g_sums[k] = 0.0
            g_count = 0

    for text, syllables in corpus:
        if syllables is None:
            syllables = first_reading_pinyin(text, table) if table is not None else None
        ok = (
            syllables is not None
            and len(syllables) == len(text)
            and (
                table is None
                or all(s in table.char_to_syllables.get(c, ()) for c, s in zip(text, syllables))
            )
        )
        if not ok:
            report.skipped += 1
            if log is not None:
                print(f"skipped unconvertible record: {text!r}", file=log)
            continue
        result = engine.convert(list(syllables), kmax)
        for k in k_values:
            s = topk_score(result, text, k)
            sums[k] += s
            g_sums[k] += s
        g_count += 1
        report.n_mius += 1
        if can_learn:
            engine.observe(text, list(syllables))
        if g_count == group_size:
            flush_group()
    flush_group()
    report.totals = {
        k: (sums[k] / report.n_mius if report.n_mius else 0.0) for k in k_values
    }
    return report


def load_corpus(source) -> list[tuple[str, list[str] | None]]:
    """Corpus lines: ``<MIU text>[\\t<syl1> <syl2> ...]``."""
    from .pinyin import _iter_lines

    out: list[tuple[str, list[str] | None]] = []
    for line in _iter_lines(source):
        if not line.strip():
            continue
        text, _, syls = line.rstrip("\n").partition("\t")
        out.append((text, syls.split() if syls else None))
    return out


def write_corpus(records: Iterable[tuple[str, Sequence[str] | None]], path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for text, syls in records:
            if syls:
                f.write(f"{text}\t{' '.join(syls)}\n")
            else:
                f.write(f"{text}\n")


def write_report(report: ScoreReport, out_dir: str, basename: str = "report", figure: bool = True) -> list[str]:
    import json
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = []
    csv_path = os.path.join(out_dir, f"{basename}.csv")
    with open(csv_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(report.to_csv())
    paths.append(csv_path)
    json_path = os.path.join(out_dir, f"{basename}.json")
    with open(json_path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(report.to_json_obj(), f, ensure_ascii=False, sort_keys=True, indent=2)
        f.write("\n")
    paths.append(json_path)
    if figure:
        from .figures import render_report

        png_path = os.path.join(out_dir, f"{basename}.png")
        render_report(report, png_path)
        paths.append(png_path)
    return paths
