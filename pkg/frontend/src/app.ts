/**
 * DOM wiring for the single-page review UI.
 *
 * Flow: submit a listing URL, watch the fetch job progress, read the
 * summary in the selected language/model, then ask questions one at a
 * time. All displayed numbers are verbatim API fields; the page never
 * computes anything over reviews itself.
 */

import { ApiError, type Api, type InsightDoc, type JobRecord, type ModelRow } from "./api";
import { pollJob, type PollOptions } from "./poll";
import { UiSession } from "./session";

export interface MountOptions {
  poll?: PollOptions;
  now?: () => number;
}

function looksLikeUrl(value: string): boolean {
  try {
    const parsed = new URL(value);
    return parsed.protocol === "http:" || parsed.protocol === "https:";
  } catch {
    return false;
  }
}

function el<T extends HTMLElement>(root: Document, id: string): T {
  const node = root.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id} in page`);
  }
  return node as T;
}

export function mount(root: Document, api: Api, options: MountOptions = {}) {
  const session = new UiSession();
  const now = options.now ?? Date.now;

  const urlInput = el<HTMLInputElement>(root, "url-input");
  const submitBtn = el<HTMLButtonElement>(root, "submit-btn");
  const listingForm = el<HTMLFormElement>(root, "listing-form");
  const formError = el<HTMLParagraphElement>(root, "form-error");
  const statusBanner = el<HTMLDivElement>(root, "status-banner");
  const languageSwitcher = el<HTMLSelectElement>(root, "language-switcher");
  const modelSelector = el<HTMLSelectElement>(root, "model-selector");
  const summaryPanel = el<HTMLElement>(root, "summary-panel");
  const summaryText = el<HTMLParagraphElement>(root, "summary-text");
  const summaryBadge = el<HTMLParagraphElement>(root, "summary-badge");
  const qaPanel = el<HTMLElement>(root, "qa-panel");
  const transcriptList = el<HTMLOListElement>(root, "transcript");
  const questionForm = el<HTMLFormElement>(root, "question-form");
  const questionInput = el<HTMLInputElement>(root, "question-input");
  const askBtn = el<HTMLButtonElement>(root, "ask-btn");

  let submitting = false;

  function setStatus(text: string, kind: "info" | "error" = "info", retry = false) {
    statusBanner.textContent = text;
    statusBanner.classList.remove("hidden", "error");
    if (kind === "error") {
      statusBanner.classList.add("error");
    }
    if (retry) {
      const button = root.createElement("button");
      button.textContent = "Retry";
      button.id = "retry-btn";
      button.addEventListener("click", () => void submitListing());
      statusBanner.append(" ", button);
    }
  }

  function clearStatus() {
    statusBanner.textContent = "";
    statusBanner.classList.add("hidden");
    statusBanner.classList.remove("error");
  }

  function refreshQuestionControls() {
    const askable = session.canAsk;
    questionInput.disabled = !askable;
    askBtn.disabled = !askable || questionInput.value.trim() === "";
  }

  function renderSummary(doc: InsightDoc) {
    summaryPanel.classList.remove("hidden");
    qaPanel.classList.remove("hidden");
    summaryText.textContent = doc.text;
    summaryBadge.textContent =
      `model ${doc.model_id} · language ${doc.language} · cost $${doc.cost_usd} · ${doc.latency_s}s` +
      ` · tokens ${doc.usage.input_tokens}/${doc.usage.output_tokens}`;
    refreshQuestionControls();
  }

  async function requestSummary(): Promise<void> {
    const job = session.job;
    if (!job || job.state !== "ready") {
      return;
    }
    const cached = session.cachedSummary(job.listing_id);
    if (cached) {
      renderSummary(cached);
      return;
    }
    setStatus("Generating the review summary…");
    try {
      const doc = await api.getSummary(job.listing_id, session.language, session.model);
      session.storeSummary(job.listing_id, doc);
      clearStatus();
      renderSummary(doc);
    } catch (error) {
      setStatus(describeError(error), "error", true);
    }
  }

  async function submitListing(): Promise<void> {
    if (submitting) {
      return;
    }
    const url = urlInput.value.trim();
    formError.classList.add("hidden");
    if (!looksLikeUrl(url)) {
      formError.textContent = "That does not look like a listing URL (expected http(s)://…).";
      formError.classList.remove("hidden");
      return;
    }
    submitting = true;
    submitBtn.disabled = true;
    const startedAt = now();
    try {
      const record = await api.submitListing(url);
      session.job = record;
      setStatus("Fetching reviews… 0s elapsed");
      const done = await pollJob(api, record.job_id, {
        ...options.poll,
        onUpdate: (update: JobRecord) => {
          session.job = update;
          const elapsed = Math.round((now() - startedAt) / 1000);
          setStatus(`Fetching reviews (${update.state})… ${elapsed}s elapsed`);
          options.poll?.onUpdate?.(update);
        },
      });
      session.job = done;
      if (done.state === "failed") {
        setStatus(`Fetching reviews failed: ${done.error ?? "unknown error"}.`, "error", true);
        refreshQuestionControls();
        return;
      }
      clearStatus();
      await requestSummary();
    } catch (error) {
      setStatus(describeError(error), "error", true);
    } finally {
      submitting = false;
      submitBtn.disabled = false;
      refreshQuestionControls();
    }
  }

  function appendTranscriptEntry(question: string, answer: InsightDoc) {
    session.appendEntry(question, answer);
    const item = root.createElement("li");
    if (answer.insufficient_evidence) {
      item.classList.add("insufficient-evidence");
      const tag = root.createElement("span");
      tag.className = "evidence-tag";
      tag.textContent = "insufficient evidence";
      item.appendChild(tag);
    }
    const questionNode = root.createElement("p");
    questionNode.className = "question";
    questionNode.textContent = question;
    const answerNode = root.createElement("p");
    answerNode.className = "answer";
    answerNode.textContent = answer.text;
    const badge = root.createElement("p");
    badge.className = "badge";
    badge.textContent = `cost $${answer.cost_usd} · ${answer.latency_s}s`;
    item.append(questionNode, answerNode, badge);
    transcriptList.appendChild(item);
  }

  async function askQuestion(): Promise<void> {
    const job = session.job;
    const question = questionInput.value.trim();
    if (!job || !session.canAsk || question === "") {
      return;
    }
    session.questionPending = true;
    refreshQuestionControls();
    try {
      const answer = await api.postQuery(job.listing_id, question, session.language, session.model);
      appendTranscriptEntry(question, answer);
      questionInput.value = "";
    } catch (error) {
      setStatus(describeError(error), "error");
    } finally {
      session.questionPending = false;
      refreshQuestionControls();
    }
  }

  async function loadModels(): Promise<void> {
    let models: ModelRow[];
    try {
      models = await api.getModels();
    } catch (error) {
      setStatus(describeError(error), "error");
      return;
    }
    modelSelector.innerHTML = "";
    const mockOption = root.createElement("option");
    mockOption.value = "mock";
    mockOption.textContent = "mock (offline)";
    modelSelector.appendChild(mockOption);
    for (const model of models) {
      const option = root.createElement("option");
      option.value = model.model_id;
      option.textContent =
        `${model.display_name} — $${model.input_cost_per_1m}/$${model.output_cost_per_1m} per 1M, ` +
        `window ${model.prompt_window}/${model.completion_window}`;
      if (!model.available) {
        option.disabled = true;
        option.title = model.note ?? "currently unavailable";
      }
      modelSelector.appendChild(option);
    }
    modelSelector.value = session.model;
  }

  listingForm.addEventListener("submit", (event) => {
    event.preventDefault();
    void submitListing();
  });

  questionForm.addEventListener("submit", (event) => {
    event.preventDefault();
    void askQuestion();
  });

  questionInput.addEventListener("input", refreshQuestionControls);

  languageSwitcher.addEventListener("change", () => {
    const language = languageSwitcher.value;
    if (language === session.language) {
      return;
    }
    session.language = language;
    // A fetch still in flight picks the new language up when it is ready.
    void requestSummary();
  });

  modelSelector.addEventListener("change", () => {
    const model = modelSelector.value;
    if (model === session.model) {
      return;
    }
    session.model = model;
    void requestSummary();
  });

  const modelsLoaded = loadModels();
  refreshQuestionControls();

  return { session, modelsLoaded };
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    return `Request failed (${error.code}): ${error.message}`;
  }
  return `Request failed: ${String(error)}`;
}
