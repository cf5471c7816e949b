import { describe, expect, it } from 'vitest';

import { GatewayClient } from '../src/api';
import { pollUntilSettled, SessionExpired } from '../src/poll';
import { instantSleep, StubGateway } from './stub_gateway';

function clientFor(stub: StubGateway): GatewayClient {
  return new GatewayClient('', () => 'tok', stub.fetch);
}

describe('pollUntilSettled', () => {
  it('polls through queued and processing to done', async () => {
    const stub = new StubGateway({ statusScript: ['queued', 'queued', 'processing', 'done'] });
    const seen: string[] = [];
    const job = await pollUntilSettled(clientFor(stub), 'job-1', {
      sleep: instantSleep,
      onTick: (status) => seen.push(status),
    });
    expect(job.status).toBe('done');
    expect(seen).toEqual(['queued', 'queued', 'processing', 'done']);
  });

  it('settles on failed too', async () => {
    const stub = new StubGateway({ statusScript: ['processing', 'failed'] });
    const job = await pollUntilSettled(clientFor(stub), 'job-1', { sleep: instantSleep });
    expect(job.status).toBe('failed');
    expect(job.error).toBe('backend exploded');
  });

  it('resumes after network loss with bounded backoff', async () => {
    const stub = new StubGateway({ statusScript: ['done'], networkFailures: 3 });
    const delays: number[] = [];
    const job = await pollUntilSettled(clientFor(stub), 'job-1', {
      intervalMs: 1000,
      backoffMaxMs: 3000,
      sleep: async (ms) => void delays.push(ms),
    });
    expect(job.status).toBe('done');
    expect(delays).toEqual([2000, 3000, 3000]); // doubled then capped
  });

  it('raises SessionExpired with the job id on a 401', async () => {
    const stub = new StubGateway({ statusScript: ['queued'], failPollWith401After: 1 });
    await expect(
      pollUntilSettled(clientFor(stub), 'job-7', { sleep: instantSleep }),
    ).rejects.toThrowError(SessionExpired);
    try {
      await pollUntilSettled(clientFor(stub), 'job-7', { sleep: instantSleep });
    } catch (err) {
      expect((err as SessionExpired).jobId).toBe('job-7');
    }
  });

  it('allows at most one in-flight poll per job', async () => {
    const stub = new StubGateway({ statusScript: ['queued', 'queued', 'done'] });
    let release: () => void = () => {};
    const gate = new Promise<void>((resolve) => (release = resolve));
    const first = pollUntilSettled(clientFor(stub), 'job-1', { sleep: () => gate });
    await expect(
      pollUntilSettled(clientFor(stub), 'job-1', { sleep: instantSleep }),
    ).rejects.toThrow(/already polling/);
    release();
    await first;
    // settled: polling the same id again is fine now
    const stub2 = new StubGateway({ statusScript: ['done'] });
    await pollUntilSettled(clientFor(stub2), 'job-1', { sleep: instantSleep });
  });
});
