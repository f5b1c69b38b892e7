import { ApiError, BrokerApi } from './api.js';
import type { ApiConfig } from './api.js';
import { DebouncedRequester } from './debounce.js';
import {
  emptyForm,
  fieldProblems,
  isSubmittable,
  toRequestBody,
  weightSum,
  weightSumOk,
} from './form.js';
import type { RequestFormState } from './form.js';
import { DEMO_ATTRIBUTE_ORDER, DEMO_CATALOG, DEMO_INPUTS } from './presets.js';
import { renderRanking } from './ranking-view.js';
import { renderSlaPanel, showToast } from './sla-view.js';
import type { ActorName } from './gating.js';
import type { SelectionRecord, SelectionRequestBody } from './types.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export interface App {
  root: HTMLElement;
  loadDemoPreset(): Promise<void>;
  openSla(slaId: string, actor: ActorName): Promise<void>;
  readonly lastRecord: SelectionRecord | undefined;
}

/**
 * Mount the operator portal. The portal never computes a utility itself:
 * ranking numbers, thresholds, and eligibility all come from POST
 * /v1/selections responses, re-requested (debounced, latest-wins) whenever
 * the operator retunes a slider.
 */
export function createApp(root: HTMLElement, config: ApiConfig): App {
  const api = new BrokerApi(config);
  let form: RequestFormState = emptyForm([]);
  let lastRecord: SelectionRecord | undefined;

  root.innerHTML = '';
  root.className = 'broker-portal';

  const header = el('header');
  header.appendChild(el('h1', undefined, 'Render-farm broker'));
  const presetButton = el('button', 'preset', 'Load worked example');
  presetButton.id = 'preset-demo';
  header.appendChild(presetButton);
  root.appendChild(header);

  const formSection = el('section', 'request-form');
  const sumLine = el('div', 'weight-sum');
  const tableBox = el('div', 'form-rows');
  const functionalBox = el('div', 'functional');
  const enginesInput = el('input', 'engines-input');
  enginesInput.placeholder = 'required engines, comma separated';
  const softwareInput = el('textarea', 'software-input');
  softwareInput.placeholder = 'required software, one "product version" per line';
  functionalBox.appendChild(enginesInput);
  functionalBox.appendChild(softwareInput);
  formSection.appendChild(sumLine);
  formSection.appendChild(tableBox);
  formSection.appendChild(functionalBox);
  root.appendChild(formSection);

  const rankingBox = el('section', 'ranking-box');
  rankingBox.id = 'ranking-box';
  root.appendChild(rankingBox);

  const slaBox = el('section', 'sla-box');
  slaBox.id = 'sla-box';
  root.appendChild(slaBox);

  const requester = new DebouncedRequester<SelectionRequestBody, SelectionRecord>(
    (body) => api.postSelection(body),
    (record) => {
      lastRecord = record;
      rankingBox.innerHTML = '';
      rankingBox.appendChild(renderRanking(record));
    },
    (error) => {
      if (error instanceof ApiError && error.status === 400) {
        sumLine.classList.add('invalid');
        sumLine.textContent = `rejected by service: ${error.details.join('; ')}`;
      } else {
        showToast(root, String(error));
      }
    },
  );

  function refreshSumLine(): void {
    const ok = weightSumOk(form);
    sumLine.classList.toggle('invalid', !ok);
    sumLine.textContent = `weight sum: ${weightSum(form).toFixed(4)}${ok ? '' : '  (must be 1)'}`;
  }

  function maybeRank(): void {
    refreshSumLine();
    if (isSubmittable(form)) {
      requester.schedule(toRequestBody(form));
    } else {
      const problems = fieldProblems(form);
      for (const [field, message] of problems) {
        if (field === '') continue;
        showFieldProblem(field, message);
      }
    }
  }

  const problemLabels = new Map<string, HTMLElement>();

  function showFieldProblem(field: string, message: string): void {
    problemLabels.get(field)?.replaceChildren(document.createTextNode(message));
  }

  function rebuildFormRows(): void {
    tableBox.innerHTML = '';
    problemLabels.clear();
    for (const id of form.attributes) {
      const row = el('div', 'form-row');
      row.dataset.attribute = id;
      row.appendChild(el('label', 'attr-label', id));
      for (const kind of ['weight', 'sensitivity', 'minimum'] as const) {
        const input = el('input', `input-${kind}`);
        input.type = 'number';
        input.step = kind === 'sensitivity' ? '1' : '0.01';
        input.min = '0';
        if (kind !== 'sensitivity') input.max = '1';
        input.value = String(form.inputs[id][kind]);
        input.addEventListener('input', () => {
          form.inputs[id][kind] = Number(input.value);
          form.dirty.add(id);
          problemLabels.get(id)?.replaceChildren();
          maybeRank();
        });
        const wrap = el('span', `cell cell-${kind}`);
        wrap.appendChild(input);
        row.appendChild(wrap);
      }
      const problem = el('span', 'field-problem');
      problemLabels.set(id, problem);
      row.appendChild(problem);
      tableBox.appendChild(row);
    }
    const formProblem = el('div', 'field-problem form-problem');
    problemLabels.set('', formProblem);
    tableBox.appendChild(formProblem);
    refreshSumLine();
  }

  enginesInput.addEventListener('input', () => {
    form.engines = enginesInput.value;
    maybeRank();
  });
  softwareInput.addEventListener('input', () => {
    form.software = softwareInput.value;
    maybeRank();
  });

  async function loadDemoPreset(): Promise<void> {
    await api.putCatalog(DEMO_CATALOG);
    form = emptyForm([...DEMO_ATTRIBUTE_ORDER]);
    for (const id of DEMO_ATTRIBUTE_ORDER) {
      form.inputs[id] = { ...DEMO_INPUTS[id] };
    }
    rebuildFormRows();
    await requester.fireNow(toRequestBody(form));
  }

  presetButton.addEventListener('click', () => {
    void loadDemoPreset().catch((error) => showToast(root, String(error)));
  });

  async function openSla(slaId: string, actor: ActorName): Promise<void> {
    const sla = await api.getSla(slaId);
    slaBox.innerHTML = '';
    slaBox.appendChild(renderSlaPanel(root, sla, {
      api,
      actor,
      onUpdate: () => void openSla(slaId, actor),
    }));
  }

  rebuildFormRows();

  return {
    root,
    loadDemoPreset,
    openSla,
    get lastRecord() {
      return lastRecord;
    },
  };
}
