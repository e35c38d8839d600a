// Session state machine for the typing loop. Pure of DOM concerns so it can
// be driven directly in tests: the view layer subscribes through onChange.
//
// Composition model: typed letters accumulate in `buffer`; a conversion always
// covers the whole remaining buffer. Selecting a candidate consumes the
// letters of the syllables it covers (one syllable per character) and stages
// its text; when the buffer is fully consumed the staged text is committed to
// the engine in one piece, which is the signal the learner trains on.

import { ApiError } from "./api.js";
import type { Candidate, EngineApi, SessionStats, StatsResponse } from "./api.js";

export const PAGE_SIZE = 5;

export class Session {
  buffer = "";
  stagedText = "";
  stagedPinyin = "";
  committed = "";
  syllables: string[] = [];
  candidates: Candidate[] = [];
  page = 0;
  notice = "";
  stats: StatsResponse | null = null;
  sessionStats: SessionStats | null = null;
  statsTop: number;

  private epoch = 0;

  constructor(
    private api: EngineApi,
    private k = 10,
    private onChange: () => void = () => {},
    statsTop = 10,
  ) {
    this.statsTop = statsTop;
  }

  pageCount(): number {
    return Math.max(1, Math.ceil(this.candidates.length / PAGE_SIZE));
  }

  pageCandidates(): Candidate[] {
    const start = this.page * PAGE_SIZE;
    return this.candidates.slice(start, start + PAGE_SIZE);
  }

  nextPage(): void {
    if (this.page + 1 < this.pageCount()) {
      this.page += 1;
      this.onChange();
    }
  }

  prevPage(): void {
    if (this.page > 0) {
      this.page -= 1;
      this.onChange();
    }
  }

  async input(letters: string): Promise<void> {
    this.buffer += letters;
    this.notice = "";
    await this.convert();
  }

  async backspace(): Promise<void> {
    if (!this.buffer) return;
    this.buffer = this.buffer.slice(0, -1);
    this.notice = "";
    await this.convert();
  }

  escape(): void {
    this.buffer = "";
    this.stagedText = "";
    this.stagedPinyin = "";
    this.clearConversion();
    this.onChange();
  }

  async convert(): Promise<void> {
    this.page = 0;
    if (!this.buffer) {
      this.clearConversion();
      this.onChange();
      return;
    }
    const epoch = ++this.epoch;
    try {
      const resp = await this.api.convert(this.buffer, this.k);
      if (epoch !== this.epoch) return; // a newer request superseded this one
      this.syllables = resp.syllables;
      this.candidates = resp.candidates;
      this.notice = "";
    } catch (err) {
      if (epoch !== this.epoch) return;
      this.clearConversion();
      this.notice = err instanceof ApiError && err.status === 422
        ? "unconvertible input"
        : `request failed: ${err instanceof Error ? err.message : err}`;
    }
    this.onChange();
  }

  /** Digit shortcut on the current page, 1-based like the displayed labels. */
  async selectDigit(digit: number): Promise<void> {
    await this.selectIndex(this.page * PAGE_SIZE + digit - 1);
  }

  async selectIndex(index: number): Promise<void> {
    const cand = this.candidates[index];
    if (!cand) return;
    const chars = [...cand.text].length;
    if (chars > this.syllables.length) return;
    const letters = this.syllables.slice(0, chars).join("").length;
    const consumed = this.consumeBuffer(letters);
    this.stagedText += cand.text;
    this.stagedPinyin += consumed;
    if (this.buffer) {
      await this.convert();
    } else {
      this.clearConversion();
      await this.commitStaged();
      this.onChange();
    }
  }

  /** Space bar: the first candidate of the current page. */
  space(): Promise<void> {
    return this.selectDigit(1);
  }

  /**
   * Enter: flush the whole composition literally. Staged selections commit to
   * the engine; leftover raw letters append to the output as typed (they are
   * not Chinese text, so the engine is not told about them).
   */
  async enter(): Promise<void> {
    await this.commitStaged();
    if (this.buffer) {
      this.committed += this.buffer;
      this.buffer = "";
      this.clearConversion();
    }
    this.onChange();
  }

  async refreshStats(): Promise<void> {
    try {
      this.stats = await this.api.stats(this.statsTop);
      this.sessionStats = this.stats.session;
    } catch {
      // stats are advisory; leave the last snapshot in place
    }
    this.onChange();
  }

  restoreCommitted(text: string): void {
    this.committed = text;
  }

  private clearConversion(): void {
    this.syllables = [];
    this.candidates = [];
    this.page = 0;
  }

  private async commitStaged(): Promise<void> {
    if (!this.stagedText) return;
    const text = this.stagedText;
    const pinyin = this.stagedPinyin;
    this.stagedText = "";
    this.stagedPinyin = "";
    try {
      const resp = await this.api.commit(pinyin, text);
      this.committed += text;
      this.sessionStats = resp.session;
    } catch (err) {
      this.notice = err instanceof ApiError
        ? `commit rejected: ${err.message}`
        : `commit failed: ${err instanceof Error ? err.message : err}`;
      this.onChange();
      return;
    }
    await this.refreshStats();
  }

  /** Remove the letters covered by a selection, apostrophes included. */
  private consumeBuffer(letterCount: number): string {
    let pos = 0;
    let seen = 0;
    while (pos < this.buffer.length && seen < letterCount) {
      if (this.buffer[pos] !== "'") seen += 1;
      pos += 1;
    }
    while (this.buffer[pos] === "'") pos += 1; // boundary marker belongs left
    const consumed = this.buffer.slice(0, pos);
    this.buffer = this.buffer.slice(pos);
    return consumed;
  }
}
