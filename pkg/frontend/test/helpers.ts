import pageHtml from "../index.html?raw";
import type { Api, InsightDoc, JobRecord, ModelRow } from "../src/api";

export function loadPage(): void {
  document.documentElement.innerHTML = pageHtml;
}

export function insightDoc(overrides: Partial<InsightDoc> = {}): InsightDoc {
  return {
    kind: "summary",
    text: "mock-completion digest=abc blocks=200 language=en",
    model_id: "mock",
    plan_digest: "0123456789abcdef",
    usage: { input_tokens: 22421, output_tokens: 15 },
    cost_usd: "0.000000",
    latency_s: 0.001,
    insufficient_evidence: false,
    language: "en",
    template: { id: "summary", version: "v1" },
    ...overrides,
  };
}

export function jobRecord(state: JobRecord["state"], overrides: Partial<JobRecord> = {}): JobRecord {
  return {
    job_id: "job-f76edf9672cfecd8",
    listing_id: "f76edf9672cfecd8",
    url: "https://www.booking.com/hotel/gr/seaside-apartments.html",
    state,
    created_at: "2025-01-01T00:00:00+00:00",
    error: state === "failed" ? "no_reviews_found" : null,
    review_count: state === "ready" ? 200 : null,
    ...overrides,
  };
}

export function modelRow(overrides: Partial<ModelRow> = {}): ModelRow {
  return {
    model_id: "gpt-4",
    display_name: "GPT-4",
    release_date: "2023-03",
    input_cost_per_1m: "30.000000",
    output_cost_per_1m: "60.000000",
    prompt_window: 8192,
    completion_window: 8192,
    open_source: false,
    provider: "openai",
    available: true,
    rate_policy: null,
    note: null,
    ...overrides,
  };
}

export interface FakeApiCalls {
  submits: string[];
  jobPolls: number;
  summaries: { listingId: string; lang: string; model: string }[];
  queries: { listingId: string; question: string; lang: string; model: string }[];
}

export interface FakeApiConfig {
  jobStates?: JobRecord["state"][];
  models?: ModelRow[];
  insufficientFor?: (question: string) => boolean;
}

/** In-memory stand-in for the HTTP API with call recording. */
export function fakeApi(config: FakeApiConfig = {}): { api: Api; calls: FakeApiCalls } {
  const jobStates = config.jobStates ?? ["pending", "fetching", "ready"];
  const models = config.models ?? [
    modelRow(),
    modelRow({ model_id: "llama-3.2-3b", display_name: "LLaMA 3.2 3B", available: false, note: "times out" }),
  ];
  const insufficientFor = config.insufficientFor ?? ((q) => q.includes("zeppelin"));
  const calls: FakeApiCalls = { submits: [], jobPolls: 0, summaries: [], queries: [] };

  const api: Api = {
    async submitListing(url: string) {
      calls.submits.push(url);
      return jobRecord(jobStates[0] ?? "pending");
    },
    async getJob() {
      const index = Math.min(calls.jobPolls, jobStates.length - 1);
      calls.jobPolls += 1;
      return jobRecord(jobStates[index] ?? "ready");
    },
    async getSummary(listingId: string, lang: string, model: string) {
      calls.summaries.push({ listingId, lang, model });
      return insightDoc({
        language: lang,
        model_id: model,
        text: `mock-completion digest=abc blocks=200 language=${lang}`,
      });
    },
    async postQuery(listingId: string, question: string, lang: string, model: string) {
      calls.queries.push({ listingId, question, lang, model });
      return insightDoc({
        kind: "answer",
        language: lang,
        model_id: model,
        text: `answer to: ${question}`,
        insufficient_evidence: insufficientFor(question),
      });
    },
    async getModels() {
      return models;
    },
  };
  return { api, calls };
}

export const immediateSleep = async (_ms: number): Promise<void> => {};
