/** Typed client for the platform HTTP routes. The workbench holds no
 * authoritative state: every fact displayed comes from these calls. */

export interface ResourceSummary {
  local_uri: string;
  kind: string;
  label: string | null;
  source_uri: string | null;
  fetched_at: string;
  content_digest: string;
  origin: string;
}

export interface RegionForm {
  kind: 'pixel' | 'pct';
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface OcrRevision {
  revision: number;
  text: string;
  created_at: string;
  editor: string | null;
}

export interface OcrResult {
  id: string;
  canvas: string;
  region: RegionForm;
  provider: string;
  confidence: number;
  image_uri: string;
  text: string;
  revision: number;
  revisions: OcrRevision[];
}

export interface SparqlCell {
  type: 'uri' | 'literal' | 'bnode';
  value: string;
  'xml:lang'?: string;
  datatype?: string;
}

export interface SparqlResults {
  head: { vars: string[] };
  results: { bindings: Record<string, SparqlCell>[] };
}

export interface ApiError {
  error: string;
  message: string;
  path?: string;
  [key: string]: unknown;
}

export class PlatformError extends Error {
  readonly body: ApiError;
  readonly status: number;

  constructor(status: number, body: ApiError) {
    super(`${body.error}: ${body.message}`);
    this.status = status;
    this.body = body;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class PlatformApi {
  readonly base: string;
  private token: string | null;
  private http: FetchLike;

  constructor(base: string, token: string | null = null, http: FetchLike = fetch) {
    this.base = base.replace(/\/$/, '');
    this.token = token;
    this.http = http;
  }

  get hasToken(): boolean {
    return this.token !== null && this.token !== '';
  }

  private async request<T>(path: string, init: RequestInit = {}): Promise<T> {
    const headers: Record<string, string> = {
      Accept: 'application/json',
      ...(init.headers as Record<string, string> | undefined),
    };
    if (init.body) headers['Content-Type'] = 'application/json';
    if (this.token && init.method && init.method !== 'GET') {
      headers['Authorization'] = `Bearer ${this.token}`;
    }
    const response = await this.http(this.base + path, { ...init, headers });
    if (!response.ok) {
      let body: ApiError;
      try {
        body = (await response.json()) as ApiError;
      } catch {
        body = { error: 'http_error', message: `HTTP ${response.status}` };
      }
      throw new PlatformError(response.status, body);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string; version: string }> {
    return this.request('/healthz');
  }

  listRegistered(kind?: string): Promise<{ items: ResourceSummary[] }> {
    const suffix = kind ? `?kind=${encodeURIComponent(kind)}` : '';
    return this.request(`/registry${suffix}`);
  }

  /** Presentation document of a platform resource by its local URI. */
  resource(localUri: string): Promise<any> {
    const parts = localUri.split('/');
    const id = parts.pop();
    const kind = parts.pop();
    return this.request(`/iiif/${kind}/${id}`);
  }

  importManifest(uri: string): Promise<ResourceSummary> {
    return this.request('/import', { method: 'POST', body: JSON.stringify({ uri }) });
  }

  composeCollection(label: string, members: string[]): Promise<ResourceSummary> {
    return this.request('/compose/collection', {
      method: 'POST',
      body: JSON.stringify({ label, members }),
    });
  }

  composeManifest(label: string, members: string[]): Promise<ResourceSummary> {
    return this.request('/compose/manifest', {
      method: 'POST',
      body: JSON.stringify({ label, members }),
    });
  }

  postAnnotation(payload: Record<string, unknown>): Promise<any> {
    return this.request('/annotations', { method: 'POST', body: JSON.stringify(payload) });
  }

  annotationsFor(target: string): Promise<{ type: string; items: any[] }> {
    return this.request(`/annotations?target=${encodeURIComponent(target)}`);
  }

  objectOccurrences(objectUri: string): Promise<{ object: string; occurrences: { canvas: string; region: RegionForm | null }[] }> {
    return this.request(`/annotations?object=${encodeURIComponent(objectUri)}`);
  }

  sparql(query: string): Promise<SparqlResults> {
    return this.request(`/sparql?query=${encodeURIComponent(query)}`);
  }

  ocrResults(canvas: string): Promise<{ items: OcrResult[] }> {
    return this.request(`/ocr/results?canvas=${encodeURIComponent(canvas)}`);
  }

  ocrRecognize(canvas: string, region: RegionForm, provider = 'stub'): Promise<OcrResult> {
    return this.request('/ocr/recognize', {
      method: 'POST',
      body: JSON.stringify({ canvas, region, provider }),
    });
  }

  ocrProofread(resultId: string, text: string, editor: string): Promise<OcrResult> {
    return this.request('/ocr/proofread', {
      method: 'POST',
      body: JSON.stringify({ result_id: resultId, text, editor }),
    });
  }
}
