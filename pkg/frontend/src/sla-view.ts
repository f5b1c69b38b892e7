import { ApiError } from './api.js';
import type { BrokerApi } from './api.js';
import type { SlaRepresentation, SlaTermBody } from './types.js';
import { ALL_STATES, allowedActions } from './gating.js';
import type { ActionName, ActorName } from './gating.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function showToast(root: HTMLElement, message: string): void {
  const toast = el('div', 'toast', message);
  root.appendChild(toast);
  setTimeout(() => toast.remove(), 4000);
}

function stateStrip(current: string): HTMLElement {
  const strip = el('div', 'state-strip');
  for (const state of ALL_STATES) {
    strip.appendChild(el('span', state === current ? 'state current' : 'state', state));
  }
  return strip;
}

function parseCounterTerms(text: string): SlaTermBody[] {
  // one term per line: attribute comparator bound [unit]
  const terms: SlaTermBody[] = [];
  for (const line of text.split('\n')) {
    const parts = line.trim().split(/\s+/);
    if (parts.length < 3) continue;
    const comparator = parts[1];
    if (comparator !== '>=' && comparator !== '<=') continue;
    terms.push({
      attribute_id: parts[0],
      comparator,
      bound: Number(parts[2]),
      unit: parts[3] ?? '',
    });
  }
  return terms;
}

export interface SlaPanelOptions {
  api: BrokerApi;
  actor: ActorName;
  onUpdate?: (sla: SlaRepresentation) => void;
}

/**
 * Negotiation panel: state strip, action buttons gated by the transition
 * table for the chosen actor, and the violation feed in observation order.
 */
export function renderSlaPanel(
  root: HTMLElement, sla: SlaRepresentation, options: SlaPanelOptions,
): HTMLElement {
  const panel = el('section', 'sla-panel');
  panel.dataset.slaId = sla.sla_id;
  panel.dataset.state = sla.state;

  panel.appendChild(el('h3', undefined, `${sla.sla_id} — ${sla.user_id} with ${sla.provider_id}`));
  panel.appendChild(stateStrip(sla.state));

  const termsBox = el('div', 'terms');
  for (const term of sla.terms) {
    termsBox.appendChild(el('div', 'term',
      `${term.attribute_id} ${term.comparator} ${term.bound}${term.unit ? ' ' + term.unit : ''}`));
  }
  panel.appendChild(termsBox);

  const actions = allowedActions(sla.state, options.actor, sla.offer_author);
  const buttonBar = el('div', 'action-bar');
  const counterInput = el('textarea', 'counter-terms');
  counterInput.placeholder = 'counter terms, one per line: attribute >=|<= bound [unit]';

  const perform = async (action: ActionName) => {
    const body: { actor: string; action: string; terms?: SlaTermBody[] } = {
      actor: options.actor,
      action,
    };
    if (action === 'counter') {
      const terms = parseCounterTerms(counterInput.value);
      if (terms.length === 0) {
        showToast(root, 'counter needs at least one well-formed term');
        return;
      }
      body.terms = terms;
    }
    try {
      const updated = await options.api.respondSla(sla.sla_id, body);
      options.onUpdate?.(updated);
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        showToast(root, `not allowed: ${error.message}`);
      } else {
        showToast(root, String(error));
      }
    }
  };

  for (const action of ['accept', 'reject', 'counter'] as const) {
    const button = el('button', `action action-${action}`, action);
    button.dataset.action = action;
    button.disabled = !actions.includes(action);
    button.addEventListener('click', () => void perform(action));
    buttonBar.appendChild(button);
  }
  panel.appendChild(buttonBar);
  if (actions.includes('counter')) panel.appendChild(counterInput);

  const feed = el('div', 'violation-feed');
  feed.appendChild(el('h4', undefined, `violations (${sla.violations.length})`));
  for (const violation of sla.violations) {
    feed.appendChild(el('div', 'violation',
      `${violation.observed_at} ${violation.attribute_id}: observed ` +
      `${violation.observed} breaks ${violation.comparator} ${violation.bound} ` +
      `(reported by ${violation.monitor_id})`));
  }
  panel.appendChild(feed);
  return panel;
}
