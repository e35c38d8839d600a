// Micro test harness: zero dependencies, works in node without type stubs.

type TestFn = () => void | Promise<void>;

const tests: { name: string; fn: TestFn }[] = [];

export function test(name: string, fn: TestFn): void {
  tests.push({ name, fn });
}

export function ok(cond: unknown, msg = "expected truthy"): asserts cond {
  if (!cond) throw new Error(msg);
}

export function eq<T>(actual: T, expected: T, msg = ""): void {
  const a = JSON.stringify(actual);
  const b = JSON.stringify(expected);
  if (a !== b) {
    throw new Error(`${msg ? msg + ": " : ""}expected ${b}, got ${a}`);
  }
}

export async function runAll(): Promise<number> {
  let failures = 0;
  for (const { name, fn } of tests) {
    try {
      await fn();
      console.log(`[PASS] ${name}`);
    } catch (err) {
      failures += 1;
      console.error(`[FAIL] ${name}`);
      console.error(`       ${err instanceof Error ? err.stack ?? err.message : err}`);
    }
  }
  console.log(failures ? `${failures} test(s) failed` : `all ${tests.length} tests passed`);
  return failures;
}
