import type { SelectionRequestBody } from './types.js';

/** The tolerance the service applies to the weight sum; mirrored only to
 * colour the sum display and gate submission, never to compute scores. */
export const WEIGHT_SUM_TOLERANCE = 1e-9;

export interface AttributeInputs {
  weight: number;
  sensitivity: number;
  minimum: number;
}

export interface RequestFormState {
  attributes: string[];
  inputs: Record<string, AttributeInputs>;
  engines: string;      // comma-separated free text
  software: string;     // "product version" per line
  dirty: Set<string>;   // attribute ids touched by the operator
}

export function emptyForm(attributes: string[]): RequestFormState {
  const inputs: Record<string, AttributeInputs> = {};
  const share = attributes.length > 0 ? 1 / attributes.length : 0;
  for (const id of attributes) {
    inputs[id] = { weight: share, sensitivity: 1, minimum: 0 };
  }
  return { attributes, inputs, engines: '', software: '', dirty: new Set() };
}

export function weightSum(state: RequestFormState): number {
  let total = 0;
  for (const id of state.attributes) total += state.inputs[id].weight;
  return total;
}

export function weightSumOk(state: RequestFormState): boolean {
  return Math.abs(weightSum(state) - 1) <= WEIGHT_SUM_TOLERANCE;
}

/** Every field-level problem, keyed by attribute id (or '' for form-wide). */
export function fieldProblems(state: RequestFormState): Map<string, string> {
  const problems = new Map<string, string>();
  if (state.attributes.length === 0) {
    problems.set('', 'no QoS attributes loaded; upload a catalog first');
    return problems;
  }
  for (const id of state.attributes) {
    const row = state.inputs[id];
    if (!(row.weight >= 0 && row.weight <= 1)) {
      problems.set(id, 'weight must be in [0,1]');
    } else if (!(row.sensitivity >= 0) || !Number.isFinite(row.sensitivity)) {
      problems.set(id, 'sensitivity must be a finite number >= 0');
    } else if (!(row.minimum >= 0 && row.minimum <= 1)) {
      problems.set(id, 'minimum must be in [0,1]');
    }
  }
  if (!weightSumOk(state)) {
    problems.set('', `weights sum to ${weightSum(state).toFixed(4)}, not 1`);
  }
  return problems;
}

export function isSubmittable(state: RequestFormState): boolean {
  return fieldProblems(state).size === 0;
}

function parseSoftware(text: string): { product: string; version: string }[] {
  const pairs: { product: string; version: string }[] = [];
  for (const line of text.split('\n')) {
    const trimmed = line.trim();
    if (!trimmed) continue;
    const space = trimmed.lastIndexOf(' ');
    if (space < 0) continue;
    pairs.push({
      product: trimmed.slice(0, space).trim(),
      version: trimmed.slice(space + 1).trim(),
    });
  }
  return pairs;
}

export function toRequestBody(state: RequestFormState): SelectionRequestBody {
  const weights: Record<string, number> = {};
  const sensitivities: Record<string, number> = {};
  const minima: Record<string, number> = {};
  for (const id of state.attributes) {
    weights[id] = state.inputs[id].weight;
    sensitivities[id] = state.inputs[id].sensitivity;
    minima[id] = state.inputs[id].minimum;
  }
  const engines = state.engines.split(',').map((e) => e.trim()).filter(Boolean);
  const software = parseSoftware(state.software);
  const functional: SelectionRequestBody['functional'] = {};
  if (engines.length > 0) functional.render_engines = engines;
  if (software.length > 0) functional.software = software;
  return { functional, weights, sensitivities, minima };
}
