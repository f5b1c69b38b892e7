import type {
  CatalogDocument,
  ErrorEnvelope,
  SelectionRecord,
  SelectionRequestBody,
  SlaRepresentation,
  SlaTermBody,
} from './types.js';

export interface ApiConfig {
  baseUrl: string;
  token: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details: string[] = [],
  ) {
    super(message);
  }
}

async function raise(response: Response): Promise<never> {
  let code = 'http_error';
  let message = `HTTP ${response.status}`;
  let details: string[] = [];
  try {
    const body = (await response.json()) as ErrorEnvelope;
    code = body.error.code;
    message = body.error.message;
    details = body.error.details;
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(response.status, code, message, details);
}

/** Thin typed client for the broker API; every number shown in the UI
 * originates from one of these responses. */
export class BrokerApi {
  constructor(private readonly config: ApiConfig) {}

  private headers(token?: string): Record<string, string> {
    return {
      Authorization: `Bearer ${token ?? this.config.token}`,
      'Content-Type': 'application/json',
    };
  }

  private async request<T>(method: string, path: string, body?: unknown,
                           token?: string): Promise<T> {
    const response = await fetch(`${this.config.baseUrl}${path}`, {
      method,
      headers: this.headers(token),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) await raise(response);
    return (await response.json()) as T;
  }

  putCatalog(doc: CatalogDocument) {
    return this.request<{ snapshot_id: number; catalog: CatalogDocument }>(
      'PUT', '/v1/catalog', doc);
  }

  getCatalog() {
    return this.request<{ snapshot_id: number; catalog: CatalogDocument }>(
      'GET', '/v1/catalog');
  }

  postSelection(body: SelectionRequestBody) {
    return this.request<SelectionRecord>('POST', '/v1/selections', body);
  }

  getSla(slaId: string) {
    return this.request<SlaRepresentation>('GET', `/v1/slas/${slaId}`);
  }

  proposeSla(body: { user_id: string; provider_id: string; terms: SlaTermBody[] }) {
    return this.request<SlaRepresentation>('POST', '/v1/slas', body);
  }

  respondSla(slaId: string, body: { actor: string; action: string; terms?: SlaTermBody[] }) {
    return this.request<SlaRepresentation>('POST', `/v1/slas/${slaId}/respond`, body);
  }

  health() {
    return this.request<{ status: string }>('GET', '/v1/healthz');
  }
}
