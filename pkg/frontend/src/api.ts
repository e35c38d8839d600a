// Typed client for the engine's JSON-over-HTTP endpoints. The UI mutates
// model state exclusively through commit().

export interface Candidate {
  text: string;
  score: number;
}

export interface ConvertResponse {
  v: number;
  syllables: string[];
  candidates: Candidate[];
}

export interface SessionStats {
  commits: number;
  top1_mean: number;
  recent_top1: number[];
}

export interface CommitResponse {
  v: number;
  ok: boolean;
  n: number;
  session: SessionStats;
}

export interface StatsResponse {
  v: number;
  top: [string, number][];
  vocab_size: number;
  updates: number;
  session: SessionStats;
}

export interface EngineApi {
  convert(pinyin: string, k: number): Promise<ConvertResponse>;
  commit(pinyin: string, text: string): Promise<CommitResponse>;
  stats(top: number): Promise<StatsResponse>;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class HttpEngineApi implements EngineApi {
  constructor(private base = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.base + path, init);
    let data: unknown = {};
    try {
      data = await resp.json();
    } catch {
      // non-JSON body: fall through to status handling
    }
    if (!resp.ok) {
      const message = (data as { error?: string }).error ?? resp.statusText;
      throw new ApiError(resp.status, message);
    }
    return data as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  convert(pinyin: string, k: number): Promise<ConvertResponse> {
    return this.post("/convert", { pinyin, k });
  }

  commit(pinyin: string, text: string): Promise<CommitResponse> {
    return this.post("/commit", { pinyin, text });
  }

  stats(top: number): Promise<StatsResponse> {
    return this.request(`/stats?top=${top}`);
  }
}
