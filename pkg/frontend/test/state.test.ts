// Session state machine against a scripted fake engine.

import { ApiError } from "../src/api.js";
import type {
  CommitResponse,
  ConvertResponse,
  EngineApi,
  StatsResponse,
} from "../src/api.js";
import { PAGE_SIZE, Session } from "../src/state.js";
import { eq, ok, test } from "./runner.js";

type Script = Record<string, ConvertResponse>;

function conv(syllables: string[], texts: string[]): ConvertResponse {
  return {
    v: 1,
    syllables,
    candidates: texts.map((t, i) => ({ text: t, score: -i })),
  };
}

class FakeApi implements EngineApi {
  convertCalls: string[] = [];
  commits: { pinyin: string; text: string }[] = [];
  statsCalls = 0;
  holdConverts = false;
  held: { pinyin: string; resolve: (r: ConvertResponse) => void }[] = [];

  constructor(private script: Script) {}

  convert(pinyin: string, _k: number): Promise<ConvertResponse> {
    this.convertCalls.push(pinyin);
    if (this.holdConverts) {
      return new Promise((resolve) => this.held.push({ pinyin, resolve }));
    }
    const hit = this.script[pinyin];
    if (!hit) return Promise.reject(new ApiError(422, "unconvertible"));
    return Promise.resolve(hit);
  }

  commit(pinyin: string, text: string): Promise<CommitResponse> {
    this.commits.push({ pinyin, text });
    return Promise.resolve({
      v: 1,
      ok: true,
      n: this.commits.length,
      session: { commits: this.commits.length, top1_mean: 0.5, recent_top1: [0.5] },
    });
  }

  stats(top: number): Promise<StatsResponse> {
    this.statsCalls += 1;
    return Promise.resolve({
      v: 1,
      top: [["北京", 3.7]].slice(0, top) as [string, number][],
      vocab_size: 3,
      updates: this.commits.length,
      session: { commits: this.commits.length, top1_mean: 0.5, recent_top1: [0.5] },
    });
  }
}

const BEIJING = conv(["bei", "jing"], ["北京", "背景", "北", "背", "呗", "倍", "被"]);

test("typing converts the whole buffer", async () => {
  const api = new FakeApi({ beijing: BEIJING });
  const s = new Session(api);
  await s.input("beijing");
  eq(api.convertCalls, ["beijing"]);
  eq(s.syllables, ["bei", "jing"]);
  eq(s.pageCandidates().map((c) => c.text), ["北京", "背景", "北", "背", "呗"]);
});

test("empty buffer never issues a request", async () => {
  const api = new FakeApi({});
  const s = new Session(api);
  await s.convert();
  await s.backspace();
  eq(api.convertCalls, []);
});

test("selecting a full-coverage candidate commits it", async () => {
  const api = new FakeApi({ beijing: BEIJING });
  const s = new Session(api);
  await s.input("beijing");
  await s.selectDigit(2);
  eq(api.commits, [{ pinyin: "beijing", text: "背景" }]);
  eq(s.committed, "背景");
  eq(s.buffer, "");
  eq(s.candidates.length, 0);
  ok(api.statsCalls >= 1, "stats refreshed after commit");
});

test("selecting a shorter candidate keeps the remaining syllables", async () => {
  const api = new FakeApi({
    beijingdaxue: conv(["bei", "jing", "da", "xue"], ["北京大学", "北京", "背景"]),
    daxue: conv(["da", "xue"], ["大学", "大"]),
  });
  const s = new Session(api);
  await s.input("beijingdaxue");
  await s.selectDigit(2); // 北京 covers two syllables
  eq(s.buffer, "daxue");
  eq(s.stagedText, "北京");
  eq(api.commits.length, 0);
  eq(api.convertCalls, ["beijingdaxue", "daxue"]);
  await s.selectDigit(1); // 大学 finishes the composition
  eq(api.commits, [{ pinyin: "beijingdaxue", text: "北京大学" }]);
  eq(s.committed, "北京大学");
});

test("apostrophes are consumed with the syllables they separate", async () => {
  const api = new FakeApi({ "xi'an": conv(["xi", "an"], ["西安", "西"]) });
  const s = new Session(api);
  await s.input("xi'an");
  await s.selectDigit(1);
  eq(api.commits, [{ pinyin: "xi'an", text: "西安" }]);
});

test("space takes the first candidate of the current page", async () => {
  const api = new FakeApi({ beijing: BEIJING });
  const s = new Session(api);
  await s.input("beijing");
  await s.space();
  eq(api.commits, [{ pinyin: "beijing", text: "北京" }]);
});

test("digit selection respects paging", async () => {
  const api = new FakeApi({ beijing: BEIJING });
  const s = new Session(api);
  await s.input("beijing");
  eq(s.pageCount(), 2);
  s.nextPage();
  eq(s.pageCandidates().map((c) => c.text), ["倍", "被"]);
  s.nextPage(); // clamped at the last page
  eq(s.page, 1);
  await s.selectDigit(3); // no third candidate on page 2: no-op
  eq(api.commits.length, 0);
  s.prevPage();
  eq(s.page, 0);
});

test("enter commits the raw buffer as-is without touching the engine", async () => {
  const api = new FakeApi({ hello: conv(["he"], ["喝"]) });
  const s = new Session(api);
  s.buffer = "hello";
  await s.enter();
  eq(s.committed, "hello");
  eq(api.commits.length, 0);
});

test("enter flushes staged selections to the engine, leftovers literally", async () => {
  const api = new FakeApi({
    beijingok: conv(["bei", "jing"], ["北京"]),
    ok: conv(["o"], ["哦"]),
  });
  const s = new Session(api);
  await s.input("beijingok");
  await s.selectDigit(1); // stages 北京, leaves "ok"
  await s.enter();
  eq(api.commits, [{ pinyin: "beijing", text: "北京" }]);
  eq(s.committed, "北京ok");
  eq(s.buffer, "");
});

test("unconvertible input shows a notice and clears candidates", async () => {
  const api = new FakeApi({ beijing: BEIJING });
  const s = new Session(api);
  await s.input("beijing");
  await s.input("qqq"); // beijingqqq is not in the script: 422
  eq(s.notice, "unconvertible input");
  eq(s.candidates.length, 0);
});

test("stale convert responses lose to the latest request", async () => {
  const api = new FakeApi({});
  api.holdConverts = true;
  const s = new Session(api);
  const first = s.input("bei");
  const second = s.input("jing");
  eq(api.held.map((h) => h.pinyin), ["bei", "beijing"]);
  api.held[1].resolve(BEIJING);
  await second;
  api.held[0].resolve(conv(["bei"], ["北"]));
  await first;
  eq(s.syllables, ["bei", "jing"], "late response for the old buffer is dropped");
});

test("escape cancels the composition without committing", async () => {
  const api = new FakeApi({ beijing: BEIJING });
  const s = new Session(api);
  await s.input("beijing");
  s.escape();
  eq(s.buffer, "");
  eq(s.candidates.length, 0);
  eq(api.commits.length, 0);
});

test("the engine is only ever mutated through commit", async () => {
  const api = new FakeApi({
    beijing: BEIJING,
    daxue: conv(["da", "xue"], ["大学"]),
  });
  const s = new Session(api);
  await s.input("beijing");
  s.nextPage();
  s.prevPage();
  await s.backspace(); // "beijin" -> 422 path
  await s.input("g");
  await s.selectDigit(1);
  await s.refreshStats();
  eq(api.commits.length, 1); // exactly the one user commit
});

test("page size matches the displayed layout", () => {
  eq(PAGE_SIZE, 5);
});
