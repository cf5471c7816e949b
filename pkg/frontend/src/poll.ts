/**
 * Job polling: fixed 1.5 s interval, backing off to 5 s on network loss,
 * at most one in-flight poll per job.
 */

import { ApiError, GatewayClient, JobShape } from './api.js';

export const POLL_INTERVAL_MS = 1500;
export const POLL_BACKOFF_MAX_MS = 5000;

export class SessionExpired extends Error {
  constructor(public jobId: string) {
    super(`session expired while polling job ${jobId}`);
  }
}

export type SleepFn = (ms: number) => Promise<void>;

const realSleep: SleepFn = (ms) => new Promise((resolve) => setTimeout(resolve, ms));

const inFlight = new Set<string>();

export interface PollOptions {
  intervalMs?: number;
  backoffMaxMs?: number;
  sleep?: SleepFn;
  onTick?: (status: JobShape['status']) => void;
}

/**
 * Poll until the job reaches done or failed. Network errors are retried
 * with backoff (resumable polling); a 401 means the session died and the
 * caller should bounce to login keeping the job id.
 */
export async function pollUntilSettled(
  client: GatewayClient,
  jobId: string,
  options: PollOptions = {},
): Promise<JobShape> {
  const interval = options.intervalMs ?? POLL_INTERVAL_MS;
  const backoffMax = options.backoffMaxMs ?? POLL_BACKOFF_MAX_MS;
  const sleep = options.sleep ?? realSleep;

  if (inFlight.has(jobId)) throw new Error(`already polling job ${jobId}`);
  inFlight.add(jobId);
  let delay = interval;
  try {
    for (;;) {
      let job: JobShape;
      try {
        job = await client.jobStatus(jobId);
        delay = interval;
      } catch (err) {
        if (err instanceof ApiError) {
          if (err.status === 401) throw new SessionExpired(jobId);
          throw err;
        }
        // network loss: back off and resume
        delay = Math.min(delay * 2, backoffMax);
        await sleep(delay);
        continue;
      }
      options.onTick?.(job.status);
      if (job.status === 'done' || job.status === 'failed') return job;
      await sleep(delay);
    }
  } finally {
    inFlight.delete(jobId);
  }
}
