/** Wire types of the broker's /v1 JSON API. */

export interface QosAttribute {
  id: string;
  display_name: string;
  tendency: 'positive' | 'negative';
  unit: string;
}

export interface CatalogDocument {
  description?: string;
  attributes: QosAttribute[];
  mode: 'normalized' | 'raw';
  providers: ProviderEntry[];
}

export interface ProviderEntry {
  provider_id: string;
  name: string;
  capabilities: {
    software: { product: string; version: string }[];
    render_engines: string[];
    node_config: Record<string, number>;
  };
  qos_offering: Record<string, number>;
}

export interface SelectionRequestBody {
  functional: {
    software?: { product: string; version: string }[];
    render_engines?: string[];
    node_config_min?: Record<string, number>;
    required_attributes?: string[];
  };
  weights: Record<string, number>;
  sensitivities: Record<string, number>;
  minima: Record<string, number>;
}

export interface RankingEntry {
  provider_id: string;
  aggregate_utility: number;
  eligible: boolean;
  utilities: Record<string, number>;
}

export interface RankingReport {
  threshold: number;
  normalization: { mode: string; cohort_relative: boolean };
  entries: RankingEntry[];
  request_echo: {
    weights: Record<string, number>;
    sensitivities: Record<string, number>;
    minima: Record<string, number>;
  };
}

export interface SelectionRecord {
  request_id: string;
  created_at: string;
  snapshot_id: number;
  status: 'ok' | 'no_match';
  report: RankingReport;
}

export interface SlaTermBody {
  attribute_id: string;
  comparator: '>=' | '<=';
  bound: number;
  unit?: string;
}

export interface SlaRepresentation {
  sla_id: string;
  user_id: string;
  provider_id: string;
  state: 'proposed' | 'countered' | 'accepted' | 'rejected' | 'expired';
  offer_author: 'user' | 'provider';
  terms: Required<SlaTermBody>[];
  history: {
    seq: number;
    timestamp: string;
    actor: string;
    action: string;
    terms: Required<SlaTermBody>[];
  }[];
  violations: {
    report_id: string;
    monitor_id: string;
    attribute_id: string;
    observed: number;
    bound: number;
    comparator: string;
    observed_at: string;
  }[];
}

export interface ErrorEnvelope {
  error: { code: string; message: string; details: string[] };
}
