import { describe, expect, it } from 'vitest';

import { GatewayClient } from '../src/api';
import { AppController, Screen } from '../src/app';
import { SessionStore, StorageLike } from '../src/session';
import {
  instantSleep,
  StubGateway,
  twoDetectionDiagnosis,
} from './stub_gateway';

function memoryStorage(): StorageLike {
  const map = new Map<string, string>();
  return {
    getItem: (key) => map.get(key) ?? null,
    setItem: (key, value) => void map.set(key, value),
    removeItem: (key) => void map.delete(key),
  };
}

function build(stub: StubGateway) {
  const storage = memoryStorage();
  const session = new SessionStore(storage);
  const client = new GatewayClient('', () => session.token, stub.fetch);
  const screens: Screen[] = [];
  const app = new AppController(session, client, (screen) => screens.push(screen));
  return { app, session, screens, storage };
}

const file = new Blob([new Uint8Array([9])], { type: 'image/png' });

describe('AppController', () => {
  it('starts on login without a live session and on upload with one', () => {
    const stub = new StubGateway({});
    const { app } = build(stub);
    expect(app.screen).toBe('login');
  });

  it('login navigates to upload and diagnose lands on result', async () => {
    const stub = new StubGateway({ statusScript: ['done'], diagnosis: twoDetectionDiagnosis() });
    const { app, screens } = build(stub);
    await app.login('farmer', 'secret-pass');
    expect(app.screen).toBe('upload');
    const view = await app.diagnose(file, undefined, {
      sleep: instantSleep,
      renderedWidth: 200,
      renderedHeight: 100,
    });
    expect(view?.boxes).toHaveLength(2);
    expect(app.screen).toBe('result');
    expect(screens).toEqual(['upload', 'result']);
  });

  it('session expiry mid-poll redirects to login and preserves the job id', async () => {
    const stub = new StubGateway({
      statusScript: ['queued', 'queued'],
      failPollWith401After: 1,
    });
    const { app, session } = build(stub);
    await app.login('farmer', 'secret-pass');
    const view = await app.diagnose(file, undefined, { sleep: instantSleep });
    expect(view).toBeNull();
    expect(app.screen).toBe('login');
    expect(app.banner).toMatch(/session expired/);
    expect(session.isLive()).toBe(false);

    // logging back in resumes the pending job
    const resumedStub = new StubGateway({
      statusScript: ['done'],
      diagnosis: twoDetectionDiagnosis(),
    });
    const client = new GatewayClient('', () => session.token, resumedStub.fetch);
    const app2 = new AppController(session, client);
    const pending = await app2.login('farmer', 'secret-pass');
    expect(pending).toBe('job-1');
    expect(app2.screen).toBe('result');
    const resumed = await app2.resumeJob(pending!, { sleep: instantSleep });
    expect(resumed?.kind).toBe('diseased');
  });

  it('failed diagnosis raises a retry banner', async () => {
    const stub = new StubGateway({ statusScript: ['failed'] });
    const { app } = build(stub);
    await app.login('farmer', 'secret-pass');
    const view = await app.diagnose(file, undefined, { sleep: instantSleep });
    expect(view?.kind).toBe('failed');
    expect(app.banner).toMatch(/retry/);
  });

  it('map screen renders the grouped counts from the gateway', async () => {
    const stub = new StubGateway({
      outbreaks: [{ class: 'blast', count: 3, centroid: { latitude: 1, longitude: 2 } }],
    });
    const { app } = build(stub);
    await app.login('farmer', 'secret-pass');
    const layer = await app.showMap({ minLat: -90, minLon: -180, maxLat: 90, maxLon: 180 });
    expect(app.screen).toBe('map');
    expect(layer?.markers[0].label).toBe('blast ×3');
  });

  it('logout drops the session and returns to login', async () => {
    const stub = new StubGateway({});
    const { app, session } = build(stub);
    await app.login('farmer', 'secret-pass');
    app.logout();
    expect(app.screen).toBe('login');
    expect(session.isLive()).toBe(false);
  });

  it('diagnose without a live session goes straight to login', async () => {
    const stub = new StubGateway({});
    const { app } = build(stub);
    const view = await app.diagnose(file, undefined, { sleep: instantSleep });
    expect(view).toBeNull();
    expect(app.screen).toBe('login');
  });
});
