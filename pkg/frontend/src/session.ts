/**
 * Client-side session state.
 *
 * The transcript is append-only for the lifetime of the session, and
 * summaries are requested exactly once per (listing, language, model):
 * the session keeps the returned documents and the UI re-renders from
 * here on repeat selections, mirroring the server-side cache.
 */

import type { InsightDoc, JobRecord } from "./api";

export interface TranscriptEntry {
  question: string;
  answer: InsightDoc;
}

export class UiSession {
  language: string;
  model: string;
  job: JobRecord | null = null;
  questionPending = false;

  private entries: TranscriptEntry[] = [];
  private summaries = new Map<string, InsightDoc>();

  constructor(language = "en", model = "mock") {
    this.language = language;
    this.model = model;
  }

  get transcript(): readonly TranscriptEntry[] {
    return this.entries;
  }

  appendEntry(question: string, answer: InsightDoc): TranscriptEntry {
    const entry = { question, answer };
    this.entries.push(entry);
    return entry;
  }

  get ready(): boolean {
    return this.job?.state === "ready";
  }

  /** Questions are allowed once the job is ready and none is in flight. */
  get canAsk(): boolean {
    return this.ready && !this.questionPending;
  }

  private summaryKey(listingId: string): string {
    return `${listingId}|${this.language}|${this.model}`;
  }

  cachedSummary(listingId: string): InsightDoc | undefined {
    return this.summaries.get(this.summaryKey(listingId));
  }

  storeSummary(listingId: string, doc: InsightDoc): void {
    this.summaries.set(this.summaryKey(listingId), doc);
  }
}
