import { describe, expect, it } from 'vitest';

import { GatewayClient } from '../src/api';
import { uploadAndDiagnose } from '../src/diagnose';
import {
  healthyDiagnosis,
  instantSleep,
  StubGateway,
  twoDetectionDiagnosis,
} from './stub_gateway';

function clientFor(stub: StubGateway): GatewayClient {
  return new GatewayClient('', () => 'tok', stub.fetch);
}

const file = new Blob([new Uint8Array([1, 2, 3])], { type: 'image/png' });

describe('uploadAndDiagnose', () => {
  it('renders one scaled overlay box and one treatment card per detection', async () => {
    const stub = new StubGateway({
      statusScript: ['queued', 'processing', 'done'],
      diagnosis: twoDetectionDiagnosis(),
    });
    const view = await uploadAndDiagnose(clientFor(stub), file, { lat: 27.7, lon: 85.3 }, {
      sleep: instantSleep,
      renderedWidth: 640,
      renderedHeight: 480,
    });
    expect(view.kind).toBe('diseased');
    expect(view.boxes).toHaveLength(2);
    expect(view.treatments).toHaveLength(2);

    const [blast, tungro] = view.boxes;
    expect(blast.x).toBeCloseTo((0.5 - 0.1) * 640, 10);
    expect(blast.y).toBeCloseTo((0.4 - 0.15) * 480, 10);
    expect(blast.width).toBeCloseTo(0.2 * 640, 10);
    expect(blast.height).toBeCloseTo(0.3 * 480, 10);
    expect(blast.badge).toBe('verified');
    expect(tungro.badge).toBe('contested');
    expect(view.treatments.map((t) => t.slug)).toEqual(['blast', 'tungro']);

    // the flow touched exactly the expected endpoints, in order
    expect(stub.calls[0]).toBe('POST /images');
    expect(stub.calls[1]).toBe('POST /jobs');
    expect(stub.calls.at(-1)).toBe('GET /jobs/job-1/result');
  });

  it('shows the healthy state with no boxes for a normal classification', async () => {
    const stub = new StubGateway({ statusScript: ['done'], diagnosis: healthyDiagnosis() });
    const view = await uploadAndDiagnose(clientFor(stub), file, undefined, {
      sleep: instantSleep,
      renderedWidth: 100,
      renderedHeight: 100,
    });
    expect(view.kind).toBe('healthy');
    expect(view.boxes).toHaveLength(0);
    expect(view.classificationSlug).toBe('normal');
    expect(view.treatments[0].slug).toBe('normal');
    expect(view.treatments[0].actions).toHaveLength(0);
  });

  it('surfaces failed jobs with their error', async () => {
    const stub = new StubGateway({ statusScript: ['processing', 'failed'] });
    const view = await uploadAndDiagnose(clientFor(stub), file, undefined, {
      sleep: instantSleep,
    });
    expect(view.kind).toBe('failed');
    expect(view.error).toBe('backend exploded');
    expect(view.boxes).toHaveLength(0);
  });

  it('sends the geotag as multipart fields when provided', async () => {
    const stub = new StubGateway({ statusScript: ['done'], diagnosis: healthyDiagnosis() });
    const client = new GatewayClient('', () => 'tok', async (url, init) => {
      if (url === '/images') {
        const form = init?.body as FormData;
        expect(form.get('lat')).toBe('27.7');
        expect(form.get('lon')).toBe('85.3');
      }
      return stub.fetch(url, init);
    });
    await uploadAndDiagnose(client, file, { lat: 27.7, lon: 85.3 }, { sleep: instantSleep });
  });
});
