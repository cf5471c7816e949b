/**
 * Typed client for the diagnosis gateway HTTP API.
 *
 * The fetch implementation is injectable so tests can stub the gateway;
 * everything the app renders comes back through these calls.
 */

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface BoxShape {
  cx: number;
  cy: number;
  w: number;
  h: number;
}

export interface DetectionShape {
  class_index: number;
  class_slug: string;
  confidence: number;
  box: BoxShape;
  status: 'raw' | 'kept' | 'verified' | 'contested';
}

export interface TreatmentShape {
  class_index: number;
  slug: string;
  summary: string;
  actions: string[];
}

export interface ClassificationShape {
  probs: number[];
  top_class: number;
  top_slug: string;
  top_prob: number;
}

export interface DiagnosisShape {
  job_id: string;
  backend_id: string;
  detections: DetectionShape[];
  classification: ClassificationShape | null;
  treatments: TreatmentShape[];
}

export interface JobShape {
  job_id: string;
  status: 'queued' | 'processing' | 'done' | 'failed';
  error: string | null;
}

export interface OutbreakGroupShape {
  class: string;
  count: number;
  centroid: { latitude: number; longitude: number };
}

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let detail = resp.statusText;
  try {
    const doc = await resp.json();
    if (doc && typeof doc.detail === 'string') detail = doc.detail;
  } catch {
    /* non-JSON error body */
  }
  return new ApiError(resp.status, detail);
}

export class GatewayClient {
  constructor(
    private baseUrl: string,
    private getToken: () => string | null,
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private headers(): Record<string, string> {
    const token = this.getToken();
    return token ? { Authorization: `Bearer ${token}` } : {};
  }

  private async request(path: string, init: RequestInit = {}): Promise<Response> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, {
      ...init,
      headers: { ...this.headers(), ...(init.headers ?? {}) },
    });
    if (!resp.ok) throw await parseError(resp);
    return resp;
  }

  async register(username: string, password: string): Promise<string> {
    const resp = await this.request('/auth/register', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ username, password }),
    });
    return (await resp.json()).user_id;
  }

  async login(username: string, password: string): Promise<string> {
    const resp = await this.request('/auth/login', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ username, password }),
    });
    return (await resp.json()).token;
  }

  async uploadImage(file: Blob, geo?: { lat: number; lon: number }): Promise<string> {
    const form = new FormData();
    form.append('file', file, 'upload.png');
    if (geo) {
      form.append('lat', String(geo.lat));
      form.append('lon', String(geo.lon));
    }
    const resp = await this.request('/images', { method: 'POST', body: form });
    return (await resp.json()).upload_id;
  }

  async createJob(uploadId: string, taskKind: string, verify: boolean): Promise<string> {
    const resp = await this.request('/jobs', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ upload_id: uploadId, task_kind: taskKind, verify }),
    });
    return (await resp.json()).job_id;
  }

  async jobStatus(jobId: string): Promise<JobShape> {
    const resp = await this.request(`/jobs/${jobId}`);
    return resp.json();
  }

  async jobResult(jobId: string): Promise<DiagnosisShape> {
    const resp = await this.request(`/jobs/${jobId}/result`);
    return resp.json();
  }

  async outbreaks(
    viewport: { minLat: number; minLon: number; maxLat: number; maxLon: number },
    since = 0,
  ): Promise<OutbreakGroupShape[]> {
    const params = new URLSearchParams({
      min_lat: String(viewport.minLat),
      min_lon: String(viewport.minLon),
      max_lat: String(viewport.maxLat),
      max_lon: String(viewport.maxLon),
      since: String(since),
    });
    const resp = await this.request(`/outbreaks?${params}`);
    return resp.json();
  }

  async treatment(slug: string): Promise<TreatmentShape> {
    const resp = await this.request(`/treatments/${slug}`);
    return resp.json();
  }
}
