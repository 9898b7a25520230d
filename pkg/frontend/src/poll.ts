/** Job polling: 1s interval backing off to 5s until a terminal state. */

import type { Api, JobRecord } from "./api";

export interface PollOptions {
  intervalMs?: number;
  maxIntervalMs?: number;
  stepMs?: number;
  onUpdate?: (record: JobRecord) => void;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export async function pollJob(api: Api, jobId: string, options: PollOptions = {}): Promise<JobRecord> {
  const intervalMs = options.intervalMs ?? 1000;
  const maxIntervalMs = options.maxIntervalMs ?? 5000;
  const stepMs = options.stepMs ?? 1000;
  const sleep = options.sleep ?? defaultSleep;

  let delay = intervalMs;
  for (;;) {
    const record = await api.getJob(jobId);
    options.onUpdate?.(record);
    if (record.state === "ready" || record.state === "failed") {
      return record;
    }
    await sleep(delay);
    delay = Math.min(delay + stepMs, maxIntervalMs);
  }
}
