// In-memory stand-in for the suggestion service. Unit tests inject its
// fetch function into ApiClient; integration tests talk to the real server.

import {
  CanvasDocument,
  MovieDetail,
  SearchHit,
  SuggestRequest,
  SuggestResponse,
  Suggestion,
  TropeDetail,
} from "../../src/api.js";

export interface RecordedRequest {
  method: string;
  path: string;
  query: Record<string, string>;
  body: unknown;
}

const POOL: Array<{ id: string; name: string; laconic: string }> = [
  { id: "T10", name: "The Gentleman Thief", laconic: "A charming crook." },
  { id: "T11", name: "The Big Heist", laconic: "One last job." },
  { id: "T12", name: "City of Endless Night", laconic: "" },
  { id: "T13", name: "Masked Vigilante", laconic: "Justice after dark." },
  { id: "T14", name: "Neon Noir", laconic: "Wet streets, bright signs." },
  { id: "T15", name: "Star-Crossed Lovers", laconic: "Fate keeps them apart." },
  { id: "T16", name: "The Perfect Alibi", laconic: "Somewhere else, provably." },
  { id: "T17", name: "Rain-Slick Streets", laconic: "" },
];

export class MockService {
  requests: RecordedRequest[] = [];
  canvases = new Map<string, CanvasDocument>();
  /** Delay per suggest call, consumed in order; lets tests stage races. */
  suggestDelays: Array<Promise<void>> = [];
  /** When set, answers every request instead of the normal routing. */
  fetchOverride: ((input: string, init?: RequestInit) => Promise<Response>) | null = null;

  readonly fetch = async (input: string, init?: RequestInit): Promise<Response> => {
    if (this.fetchOverride) return this.fetchOverride(input, init);
    const url = new URL(input, "http://mock.test");
    const method = (init?.method ?? "GET").toUpperCase();
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    const query: Record<string, string> = {};
    url.searchParams.forEach((value, key) => (query[key] = value));
    this.requests.push({ method, path: url.pathname, query, body });
    return this.route(method, url.pathname, query, body);
  };

  suggestBodies(): SuggestRequest[] {
    return this.requests
      .filter((r) => r.path === "/api/suggest")
      .map((r) => r.body as SuggestRequest);
  }

  private async route(
    method: string,
    path: string,
    query: Record<string, string>,
    body: unknown,
  ): Promise<Response> {
    if (method === "POST" && path === "/api/suggest") {
      const delay = this.suggestDelays.shift();
      if (delay) await delay;
      return json(200, this.suggest(body as SuggestRequest));
    }
    if (method === "GET" && path === "/api/search") {
      const fragment = (query.q ?? "").toLowerCase();
      const results: SearchHit[] = POOL.filter((t) =>
        t.name.toLowerCase().includes(fragment),
      ).map((t) => ({ id: t.id, name: t.name }));
      return json(200, { query: query.q ?? "", results });
    }
    if (method === "GET" && path.startsWith("/api/tropes/")) {
      return json(200, this.tropeDetail(decodeURIComponent(path.slice(12)), query));
    }
    if (method === "GET" && path.startsWith("/api/movies/")) {
      return json(200, this.movieDetail(decodeURIComponent(path.slice(12)), query));
    }
    if (path.startsWith("/api/canvases/")) {
      const id = decodeURIComponent(path.slice(14));
      if (method === "GET") {
        const doc = this.canvases.get(id);
        if (!doc) return json(404, { code: "not_found", message: `no canvas ${id}` });
        return json(200, doc);
      }
      const doc = body as CanvasDocument;
      this.canvases.set(id, doc);
      return json(200, { accepted: true, updated_at: doc.updated_at, warnings: [] });
    }
    return json(404, { code: "not_found", message: `no route ${method} ${path}` });
  }

  /** Deterministic in the seed: rotate the pool, score by output position. */
  private suggest(body: SuggestRequest): SuggestResponse {
    const seed = body.seed ?? 999;
    const rotation = seed % POOL.length;
    const rotated = [...POOL.slice(rotation), ...POOL.slice(0, rotation)];
    const suggestions: Suggestion[] = rotated.slice(0, body.count).map((t, i) => ({
      trope: t.id,
      name: t.name,
      laconic: t.laconic,
      raw_score: 0.9 - i * 0.1,
      final_score: 0.9 - i * 0.1,
      rank: i,
      evidence:
        i === 0
          ? [
              { movie: "M1", title: "The Museum Job", text: "a suave burglar" },
              { movie: "M2", title: "Midnight Diamond", text: "the thief returns" },
            ]
          : [],
    }));
    return {
      suggestions,
      query: {
        input_tropes: [...new Set(body.input_tropes)].sort(),
        text: body.text,
        breadth: body.breadth,
        index_filters: body.index_filters,
        movie_filters: body.movie_filters,
        count: body.count,
        temperature: body.temperature,
        seed,
        candidate_count: POOL.length,
      },
      corpus_fingerprint: "mock",
    };
  }

  private tropeDetail(id: string, query: Record<string, string>): TropeDetail {
    const entry = POOL.find((t) => t.id === id);
    const occurrences = [
      { movie: "M1", title: "The Museum Job", text: "first occurrence" },
      { movie: "M2", title: "Midnight Diamond", text: "second occurrence" },
    ];
    return {
      id,
      name: entry?.name ?? id,
      laconic: entry?.laconic ?? "",
      description_tropes: [],
      indexes: ["CrimeTropes"],
      sub_tropes: ["T11", "T13"],
      occurrences: query.index_filter ? occurrences.slice(0, 1) : occurrences,
    };
  }

  private movieDetail(id: string, query: Record<string, string>): MovieDetail {
    const tropes = [
      { trope: "T10", name: "The Gentleman Thief", text: "a suave burglar" },
      { trope: "T11", name: "The Big Heist", text: "the crew rehearses" },
      { trope: "T16", name: "The Perfect Alibi", text: "an airtight alibi" },
    ];
    return {
      id,
      title: "The Museum Job",
      year: 1998,
      synopsis: "A crew plans a museum heist.",
      genres: ["crime"],
      tropes: query.index_filter ? tropes.slice(0, 2) : tropes,
    };
  }
}

function json(status: number, payload: unknown): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}
