import type { RankingReport, SelectionRecord } from './types.js';

/**
 * Render the ranking table and threshold gauge. Every number displayed here
 * is copied verbatim from a service response; nothing is computed locally.
 */

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function utilityBreakdown(entry: RankingReport['entries'][number]): HTMLElement {
  const list = el('div', 'breakdown');
  for (const [attribute, utility] of Object.entries(entry.utilities)) {
    const row = el('div', 'breakdown-row');
    row.appendChild(el('span', 'breakdown-attr', attribute));
    const bar = el('div', 'mini-bar');
    const fill = el('div', 'mini-bar-fill');
    fill.style.width = `${(utility * 100).toFixed(1)}%`;
    bar.appendChild(fill);
    row.appendChild(bar);
    row.appendChild(el('span', 'breakdown-value', utility.toFixed(4)));
    list.appendChild(row);
  }
  return list;
}

export function renderRanking(record: SelectionRecord): HTMLElement {
  const report = record.report;
  const container = el('section', 'ranking');
  container.dataset.status = record.status;

  const summary = el('div', 'ranking-summary');
  summary.appendChild(el('span', 'threshold-label', 'threshold EU'));
  const thresholdValue = el('span', 'threshold-value', report.threshold.toFixed(4));
  thresholdValue.id = 'threshold-value';
  summary.appendChild(thresholdValue);
  summary.appendChild(el('span', 'snapshot-note', `catalog snapshot #${record.snapshot_id}`));
  container.appendChild(summary);

  const gauge = el('div', 'threshold-gauge');
  const marker = el('div', 'threshold-marker');
  marker.style.left = `${(report.threshold * 100).toFixed(2)}%`;
  marker.title = `eligibility threshold ${report.threshold.toFixed(4)}`;
  gauge.appendChild(marker);
  container.appendChild(gauge);

  if (record.status === 'no_match') {
    container.appendChild(el('p', 'no-match', 'No providers match the functional requirements.'));
    return container;
  }

  const table = el('table', 'ranking-table');
  const head = el('tr');
  for (const column of ['provider', 'aggregate utility', 'eligible']) {
    head.appendChild(el('th', undefined, column));
  }
  table.appendChild(head);

  for (const entry of report.entries) {
    const row = el('tr', entry.eligible ? 'entry eligible' : 'entry ineligible');
    row.dataset.provider = entry.provider_id;

    row.appendChild(el('td', 'provider-id', entry.provider_id));

    const auCell = el('td', 'au-cell');
    const bar = el('div', 'au-bar');
    const fill = el('div', 'au-bar-fill');
    fill.style.width = `${(entry.aggregate_utility * 100).toFixed(1)}%`;
    bar.appendChild(fill);
    auCell.appendChild(bar);
    auCell.appendChild(el('span', 'au-value', entry.aggregate_utility.toFixed(4)));
    row.appendChild(auCell);

    const badgeCell = el('td');
    badgeCell.appendChild(el('span', 'badge', entry.eligible ? 'eligible' : 'below threshold'));
    row.appendChild(badgeCell);

    const detailRow = el('tr', 'detail hidden');
    const detailCell = el('td');
    detailCell.colSpan = 3;
    detailCell.appendChild(utilityBreakdown(entry));
    detailRow.appendChild(detailCell);

    row.addEventListener('click', () => detailRow.classList.toggle('hidden'));
    table.appendChild(row);
    table.appendChild(detailRow);
  }
  container.appendChild(table);
  return container;
}
