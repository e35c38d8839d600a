// End-to-end loop against a real engine service: spawn `omwa serve`, drive the
// session state machine over actual HTTP, assert the learning feedback loop.

import { spawn } from "node:child_process";
import { test, eq, ok } from "../build-test/test/runner.js";
import { HttpEngineApi } from "../dist/api.js";
import { Session } from "../dist/state.js";

const PORT = 18650 + (process.pid % 1000);
const BASE = `http://127.0.0.1:${PORT}`;

async function waitReady(timeoutMs = 15000) {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/stats?top=1`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error("engine service did not come up");
}

test("live loop: second-choice commit becomes the next top candidate", async () => {
  const child = spawn(
    "python3",
    ["-m", "omwa.cli", "serve", "--host", "127.0.0.1", "--port", String(PORT)],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  let stderr = "";
  child.stderr.on("data", (d) => (stderr += d));
  try {
    await waitReady();
    const api = new HttpEngineApi(BASE);
    // prior history: two rivals committed once each
    await api.commit("beijing", "北京"); // 北京
    await api.commit("beijing", "背景"); // 背景

    const session = new Session(api);
    await session.input("beijing");
    eq(session.syllables, ["bei", "jing"]);
    const texts = session.candidates.map((c) => c.text);
    eq(texts[0], "北京", "deterministic tie-break puts 北京 first");
    eq(texts[1], "背景");

    await session.selectDigit(2); // pick 背景: full coverage, commits
    eq(session.committed, "背景");

    await session.input("beijing"); // retype the same pinyin
    eq(session.candidates[0].text, "背景", "previously selected text leads");

    // stats panel state reflects the commit
    ok(session.stats, "stats fetched after commit");
    eq(session.stats.top[0][0], "背景");
    ok(session.stats.top[0][1] > session.stats.top.find(([w]) => w === "北京")[1],
       "committed word outweighs its rival");
    eq(session.sessionStats.commits, 3);
  } finally {
    child.kill("SIGTERM");
    await new Promise((resolve) => {
      child.on("exit", resolve);
      setTimeout(resolve, 3000);
    });
    if (stderr && process.env.DEBUG) console.error(stderr);
  }
});
