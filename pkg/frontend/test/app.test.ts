import { beforeEach, describe, expect, it, vi } from "vitest";
import { mount } from "../src/app";
import { fakeApi, immediateSleep, loadPage } from "./helpers";

const LISTING_URL = "https://www.booking.com/hotel/gr/seaside-apartments.html";

function input(id: string): HTMLInputElement {
  return document.getElementById(id) as HTMLInputElement;
}

function select(id: string): HTMLSelectElement {
  return document.getElementById(id) as HTMLSelectElement;
}

function submitForm(id: string): void {
  (document.getElementById(id) as HTMLFormElement).dispatchEvent(
    new Event("submit", { bubbles: true, cancelable: true }),
  );
}

function setInput(id: string, value: string): void {
  const node = input(id);
  node.value = value;
  node.dispatchEvent(new Event("input", { bubbles: true }));
}

async function mountApp(config = {}) {
  const { api, calls } = fakeApi(config);
  const handle = mount(document, api, { poll: { sleep: immediateSleep } });
  await handle.modelsLoaded;
  return { calls, session: handle.session };
}

async function submitAndWaitForSummary(calls: { summaries: unknown[] }) {
  setInput("url-input", LISTING_URL);
  submitForm("listing-form");
  await vi.waitFor(() => {
    expect(document.getElementById("summary-panel")!.classList.contains("hidden")).toBe(false);
  });
  expect(calls.summaries.length).toBeGreaterThan(0);
}

beforeEach(() => {
  loadPage();
});

describe("scripted session", () => {
  it("submits a URL, sees the summary, switches language, asks questions", async () => {
    const { calls } = await mountApp();

    // Submit and watch the job progress to a summary.
    await submitAndWaitForSummary(calls);
    expect(calls.submits).toEqual([LISTING_URL]);
    expect(calls.summaries[0]).toEqual({ listingId: "f76edf9672cfecd8", lang: "en", model: "mock" });
    expect(document.getElementById("summary-text")!.textContent).toContain("language=en");

    // Switching language issues a new summary request carrying lang=el.
    select("language-switcher").value = "el";
    select("language-switcher").dispatchEvent(new Event("change", { bubbles: true }));
    await vi.waitFor(() => {
      expect(calls.summaries).toHaveLength(2);
    });
    expect(calls.summaries[1]).toEqual({ listingId: "f76edf9672cfecd8", lang: "el", model: "mock" });
    await vi.waitFor(() => {
      expect(document.getElementById("summary-text")!.textContent).toContain("language=el");
    });

    // Two questions append to the transcript in order.
    setInput("question-input", "is parking free?");
    submitForm("question-form");
    await vi.waitFor(() => {
      expect(document.querySelectorAll("#transcript li")).toHaveLength(1);
    });
    setInput("question-input", "how fast is the wifi?");
    submitForm("question-form");
    await vi.waitFor(() => {
      expect(document.querySelectorAll("#transcript li")).toHaveLength(2);
    });
    const questions = [...document.querySelectorAll("#transcript li .question")].map(
      (node) => node.textContent,
    );
    expect(questions).toEqual(["is parking free?", "how fast is the wifi?"]);
    expect(document.querySelectorAll("#transcript li.insufficient-evidence")).toHaveLength(0);

    // A nonsense question gets the insufficient-evidence styling.
    setInput("question-input", "zeppelin teleporter?");
    submitForm("question-form");
    await vi.waitFor(() => {
      expect(document.querySelectorAll("#transcript li")).toHaveLength(3);
    });
    const flagged = document.querySelectorAll("#transcript li")[2]!;
    expect(flagged.classList.contains("insufficient-evidence")).toBe(true);
    expect(flagged.querySelector(".evidence-tag")!.textContent).toBe("insufficient evidence");

    // Answer badges show the API's cost/latency verbatim.
    expect(flagged.querySelector(".badge")!.textContent).toBe("cost $0.000000 · 0.001s");
  });

  it("switching back to an already-requested language reuses the session cache", async () => {
    const { calls } = await mountApp();
    await submitAndWaitForSummary(calls);

    select("language-switcher").value = "el";
    select("language-switcher").dispatchEvent(new Event("change", { bubbles: true }));
    await vi.waitFor(() => expect(calls.summaries).toHaveLength(2));

    select("language-switcher").value = "en";
    select("language-switcher").dispatchEvent(new Event("change", { bubbles: true }));
    await vi.waitFor(() => {
      expect(document.getElementById("summary-text")!.textContent).toContain("language=en");
    });
    expect(calls.summaries).toHaveLength(2); // en came from the cache

    // Re-selecting the current language is a no-op entirely.
    select("language-switcher").dispatchEvent(new Event("change", { bubbles: true }));
    expect(calls.summaries).toHaveLength(2);
  });
});

describe("validation and failure paths", () => {
  it("rejects a malformed URL inline without calling the API", async () => {
    const { calls } = await mountApp();
    setInput("url-input", "not a url");
    submitForm("listing-form");
    await vi.waitFor(() => {
      expect(document.getElementById("form-error")!.classList.contains("hidden")).toBe(false);
    });
    expect(calls.submits).toHaveLength(0);
  });

  it("shows an error banner with a retry button when the job fails", async () => {
    const { calls } = await mountApp({ jobStates: ["pending", "failed"] });
    setInput("url-input", LISTING_URL);
    submitForm("listing-form");
    await vi.waitFor(() => {
      expect(document.getElementById("status-banner")!.classList.contains("error")).toBe(true);
    });
    expect(document.getElementById("status-banner")!.textContent).toContain("no_reviews_found");
    expect(document.getElementById("retry-btn")).not.toBeNull();
    expect(calls.summaries).toHaveLength(0);
  });

  it("keeps the ask button disabled for empty input and before readiness", async () => {
    const { calls } = await mountApp();
    expect(input("question-input").disabled).toBe(true);
    expect((document.getElementById("ask-btn") as HTMLButtonElement).disabled).toBe(true);

    await submitAndWaitForSummary(calls);
    expect(input("question-input").disabled).toBe(false);
    expect((document.getElementById("ask-btn") as HTMLButtonElement).disabled).toBe(true);
    setInput("question-input", "anything");
    expect((document.getElementById("ask-btn") as HTMLButtonElement).disabled).toBe(false);
  });
});

describe("model selector", () => {
  it("lists registry rows with pricing and disables unavailable ones", async () => {
    await mountApp();
    const options = [...select("model-selector").options];
    expect(options[0]?.value).toBe("mock");
    const gpt4 = options.find((o) => o.value === "gpt-4");
    expect(gpt4?.textContent).toContain("$30.000000/$60.000000 per 1M");
    expect(gpt4?.textContent).toContain("window 8192/8192");
    const llama = options.find((o) => o.value === "llama-3.2-3b");
    expect(llama?.disabled).toBe(true);
    expect(llama?.title).toBe("times out");
  });

  it("routes subsequent requests with the selected model", async () => {
    const { calls } = await mountApp();
    await submitAndWaitForSummary(calls);

    select("model-selector").value = "gpt-4";
    select("model-selector").dispatchEvent(new Event("change", { bubbles: true }));
    await vi.waitFor(() => expect(calls.summaries).toHaveLength(2));
    expect(calls.summaries[1]).toEqual({ listingId: "f76edf9672cfecd8", lang: "en", model: "gpt-4" });

    setInput("question-input", "is it quiet?");
    submitForm("question-form");
    await vi.waitFor(() => expect(calls.queries).toHaveLength(1));
    expect(calls.queries[0]?.model).toBe("gpt-4");
  });
});
