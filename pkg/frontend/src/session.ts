/**
 * Session state: bearer token, username, expiry.
 *
 * Authenticated screens check `isLive()` before rendering and fall back
 * to the login screen otherwise; a pending job id survives the redirect
 * so polling resumes after re-authentication.
 */

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

const KEY = 'paddydx.session';

export interface SessionState {
  token: string;
  username: string;
  expiresAt: number; // epoch ms
}

export class SessionStore {
  private state: SessionState | null = null;

  constructor(
    private storage: StorageLike,
    private now: () => number = () => Date.now(),
  ) {
    const raw = storage.getItem(KEY);
    if (raw) {
      try {
        this.state = JSON.parse(raw) as SessionState;
      } catch {
        storage.removeItem(KEY);
      }
    }
  }

  open(token: string, username: string, ttlMs: number): void {
    this.state = { token, username, expiresAt: this.now() + ttlMs };
    this.storage.setItem(KEY, JSON.stringify(this.state));
  }

  close(): void {
    this.state = null;
    this.storage.removeItem(KEY);
  }

  isLive(): boolean {
    return this.state !== null && this.state.expiresAt > this.now();
  }

  get token(): string | null {
    return this.isLive() ? this.state!.token : null;
  }

  get username(): string | null {
    return this.isLive() ? this.state!.username : null;
  }

  /** Remember a job across a login redirect. */
  stashPendingJob(jobId: string): void {
    this.storage.setItem('paddydx.pendingJob', jobId);
  }

  takePendingJob(): string | null {
    const jobId = this.storage.getItem('paddydx.pendingJob');
    if (jobId !== null) this.storage.removeItem('paddydx.pendingJob');
    return jobId;
  }
}
