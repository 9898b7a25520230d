/**
 * Typed client for the review-insight HTTP API.
 *
 * The UI must never compute over reviews itself, so every method returns
 * the server document verbatim; displayed numbers (cost, latency, counts)
 * come straight from these fields.
 */

export type JobState = "pending" | "fetching" | "ready" | "failed";

export interface JobRecord {
  job_id: string;
  listing_id: string;
  url: string;
  state: JobState;
  created_at: string;
  error: string | null;
  review_count: number | null;
}

export interface InsightDoc {
  kind: "summary" | "answer";
  text: string;
  model_id: string;
  plan_digest: string;
  usage: { input_tokens: number; output_tokens: number };
  cost_usd: string;
  latency_s: number;
  insufficient_evidence: boolean;
  language: string;
  template: { id: string; version: string };
}

export interface ModelRow {
  model_id: string;
  display_name: string;
  release_date: string;
  input_cost_per_1m: string;
  output_cost_per_1m: string;
  prompt_window: number;
  completion_window: number;
  open_source: boolean;
  provider: string;
  available: boolean;
  rate_policy: {
    requests_per_minute: number | null;
    requests_per_day: number | null;
    tokens_per_minute: number | null;
  } | null;
  note: string | null;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  let code = "http_error";
  let message = `${response.status}`;
  try {
    const body = (await response.json()) as { error?: string; message?: string };
    code = body.error ?? code;
    message = body.message ?? message;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, code, message);
}

export function createApi(baseUrl = "", fetchImpl?: FetchLike) {
  const doFetch: FetchLike = fetchImpl ?? ((input, init) => globalThis.fetch(input, init));

  return {
    async submitListing(url: string, provider?: string): Promise<JobRecord> {
      const response = await doFetch(`${baseUrl}/api/listings`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(provider ? { url, provider } : { url }),
      });
      return parseOrThrow<JobRecord>(response);
    },

    async getJob(jobId: string): Promise<JobRecord> {
      return parseOrThrow<JobRecord>(await doFetch(`${baseUrl}/api/jobs/${jobId}`));
    },

    async getSummary(listingId: string, lang: string, model: string): Promise<InsightDoc> {
      const params = new URLSearchParams({ lang, model });
      return parseOrThrow<InsightDoc>(
        await doFetch(`${baseUrl}/api/listings/${listingId}/summary?${params}`),
      );
    },

    async postQuery(
      listingId: string,
      question: string,
      lang: string,
      model: string,
    ): Promise<InsightDoc> {
      const response = await doFetch(`${baseUrl}/api/listings/${listingId}/query`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ question, lang, model }),
      });
      return parseOrThrow<InsightDoc>(response);
    },

    async getModels(): Promise<ModelRow[]> {
      const body = await parseOrThrow<{ models: ModelRow[] }>(
        await doFetch(`${baseUrl}/api/models`),
      );
      return body.models;
    },
  };
}

export type Api = ReturnType<typeof createApi>;
