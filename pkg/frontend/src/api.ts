// Typed client for the suggestion service. Every number shown in the UI
// comes out of these response types; nothing is recomputed client-side.

export interface SuggestRequest {
  input_tropes: string[];
  text: string | null;
  breadth: number;
  index_filters: string[];
  movie_filters: string[];
  count: number;
  temperature: number;
  seed: number | null;
  exclude: string[];
}

export interface Evidence {
  movie: string;
  title: string;
  text: string;
}

export interface Suggestion {
  trope: string;
  name: string;
  laconic: string;
  raw_score: number;
  final_score: number;
  rank: number;
  evidence: Evidence[];
}

export interface ResolvedQuery {
  input_tropes: string[];
  text: string | null;
  breadth: number;
  index_filters: string[];
  movie_filters: string[];
  count: number;
  temperature: number;
  seed: number;
  candidate_count: number;
}

export interface SuggestResponse {
  suggestions: Suggestion[];
  query: ResolvedQuery;
  corpus_fingerprint: string;
}

export interface Occurrence {
  movie: string;
  title: string;
  text: string;
}

export interface TropeDetail {
  id: string;
  name: string;
  laconic: string;
  description_tropes: string[];
  indexes: string[];
  sub_tropes: string[];
  occurrences: Occurrence[];
}

export interface MovieTrope {
  trope: string;
  name: string;
  text: string;
}

export interface MovieDetail {
  id: string;
  title: string;
  year: number | null;
  synopsis: string | null;
  genres: string[] | null;
  tropes: MovieTrope[];
}

export interface SearchHit {
  id: string;
  name: string;
}

export interface SearchResponse {
  query: string;
  results: SearchHit[];
}

export interface CardPosition {
  x: number;
  y: number;
}

export type CardType = "trope" | "text" | "movie" | "title" | "image";

export interface CanvasCard {
  card_id: string;
  card_type: CardType;
  position: CardPosition;
  payload: string;
  selected_for_input: boolean;
}

export interface CanvasDocument {
  id: string;
  title: string;
  cards: CanvasCard[];
  updated_at: string;
  writer: string;
}

export interface CanvasPutResponse {
  accepted: boolean;
  updated_at: string;
  warnings: string[];
}

export interface Stats {
  n_tropes: number;
  n_indexes: number;
  n_movies: number;
  mean_description_tropes: number;
  mean_indexes: number;
  mean_occurrences: number;
  corpus_fingerprint: string;
}

export class ApiError extends Error {
  status: number;
  code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.status = status;
    this.code = code;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private baseUrl: string;
  private fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  async suggest(body: SuggestRequest): Promise<SuggestResponse> {
    return this.request("POST", "/api/suggest", body);
  }

  async trope(id: string, indexFilter?: string): Promise<TropeDetail> {
    const query = indexFilter ? `?index_filter=${encodeURIComponent(indexFilter)}` : "";
    return this.request("GET", `/api/tropes/${encodeURIComponent(id)}${query}`);
  }

  async movie(id: string, indexFilter?: string): Promise<MovieDetail> {
    const query = indexFilter ? `?index_filter=${encodeURIComponent(indexFilter)}` : "";
    return this.request("GET", `/api/movies/${encodeURIComponent(id)}${query}`);
  }

  async search(fragment: string, limit = 10): Promise<SearchResponse> {
    const params = new URLSearchParams({ q: fragment, limit: String(limit) });
    return this.request("GET", `/api/search?${params}`);
  }

  async stats(): Promise<Stats> {
    return this.request("GET", "/api/stats");
  }

  /** Returns null when the canvas has never been saved. */
  async loadCanvas(id: string): Promise<CanvasDocument | null> {
    try {
      return await this.request("GET", `/api/canvases/${encodeURIComponent(id)}`);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) return null;
      throw err;
    }
  }

  async saveCanvas(doc: CanvasDocument): Promise<CanvasPutResponse> {
    return this.request("PUT", `/api/canvases/${encodeURIComponent(doc.id)}`, doc);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let code = "http_error";
      let message = `${response.status} ${response.statusText}`;
      try {
        const payload = await response.json();
        if (payload && typeof payload.code === "string") code = payload.code;
        if (payload && payload.message) message = String(payload.message);
      } catch {
        // non-JSON error body, keep the status text
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }
}
