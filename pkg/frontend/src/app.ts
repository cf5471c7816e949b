/**
 * Screen controller for the single-page client.
 *
 * Screens: login, upload, result, map. A session expiring mid-poll
 * redirects to login with the pending job id stashed, and finishing the
 * login resumes that job's polling.
 */

import { ApiError, GatewayClient } from './api.js';
import { DiagnoseOptions, ResultView, resumeDiagnosis, uploadAndDiagnose } from './diagnose.js';
import { loadOutbreakLayer, OutbreakLayer, Viewport } from './outbreaks.js';
import { SessionExpired } from './poll.js';
import { SessionStore } from './session.js';

export type Screen = 'login' | 'upload' | 'result' | 'map';

export const DEFAULT_SESSION_TTL_MS = 24 * 3600 * 1000;

export class AppController {
  screen: Screen;
  banner: string | null = null;
  lastResult: ResultView | null = null;

  constructor(
    private session: SessionStore,
    private client: GatewayClient,
    private onNavigate: (screen: Screen) => void = () => {},
  ) {
    this.screen = session.isLive() ? 'upload' : 'login';
  }

  private goto(screen: Screen): void {
    this.screen = screen;
    this.onNavigate(screen);
  }

  async register(username: string, password: string): Promise<void> {
    await this.client.register(username, password);
    await this.login(username, password);
  }

  async login(username: string, password: string): Promise<string | null> {
    const token = await this.client.login(username, password);
    this.session.open(token, username, DEFAULT_SESSION_TTL_MS);
    this.banner = null;
    const pending = this.session.takePendingJob();
    this.goto(pending ? 'result' : 'upload');
    return pending;
  }

  logout(): void {
    this.session.close();
    this.goto('login');
  }

  async diagnose(
    file: Blob,
    geo: { lat: number; lon: number } | undefined,
    options: DiagnoseOptions = {},
  ): Promise<ResultView | null> {
    if (!this.session.isLive()) {
      this.goto('login');
      return null;
    }
    try {
      const view = await uploadAndDiagnose(this.client, file, geo, options);
      return this.finish(view);
    } catch (err) {
      return this.handleFlowError(err);
    }
  }

  async resumeJob(jobId: string, options: DiagnoseOptions = {}): Promise<ResultView | null> {
    try {
      const view = await resumeDiagnosis(this.client, jobId, options);
      return this.finish(view);
    } catch (err) {
      return this.handleFlowError(err);
    }
  }

  private finish(view: ResultView): ResultView {
    this.lastResult = view;
    this.banner = view.kind === 'failed' ? `${view.error} — retry the upload` : null;
    this.goto('result');
    return view;
  }

  private handleFlowError(err: unknown): null {
    if (err instanceof SessionExpired) {
      this.session.stashPendingJob(err.jobId);
      this.session.close();
      this.banner = 'session expired, please sign in again';
      this.goto('login');
      return null;
    }
    if (err instanceof ApiError && err.status === 401) {
      this.session.close();
      this.banner = 'session expired, please sign in again';
      this.goto('login');
      return null;
    }
    throw err;
  }

  async showMap(viewport: Viewport, since = 0): Promise<OutbreakLayer | null> {
    if (!this.session.isLive()) {
      this.goto('login');
      return null;
    }
    try {
      const layer = await loadOutbreakLayer(this.client, viewport, since);
      this.goto('map');
      return layer;
    } catch (err) {
      return this.handleFlowError(err);
    }
  }
}
