import type { ConsoleApi } from './api.js';
import type { Report } from './types.js';
import { ARTIFACTS } from './types.js';

const PANEL_LABELS: Record<string, string> = {
  'desiredT.png': 'desired at T',
  'computed0.png': 'computed at 0',
  'evolvedT.png': 'evolved at T',
};

/** Side-by-side desired/computed/evolved panels for a finished run. */
export function renderPanels(container: HTMLElement, api: ConsoleApi,
                             runId: string): void {
  container.replaceChildren();
  for (const name of ARTIFACTS) {
    const figure = document.createElement('figure');
    figure.className = 'panel';
    const img = document.createElement('img');
    img.src = api.artifactUrl(runId, name);
    img.alt = PANEL_LABELS[name];
    const caption = document.createElement('figcaption');
    caption.textContent = PANEL_LABELS[name];
    figure.append(img, caption);
    container.appendChild(figure);
  }
}

export function renderPlaceholders(container: HTMLElement): void {
  container.replaceChildren();
  for (const name of ARTIFACTS) {
    const figure = document.createElement('figure');
    figure.className = 'panel skeleton';
    const caption = document.createElement('figcaption');
    caption.textContent = `${PANEL_LABELS[name]} (pending)`;
    figure.appendChild(caption);
    container.appendChild(figure);
  }
}

const VARIABLES: Array<keyof Report['rows']> = ['psi', 'u', 'v', 'omega'];

/** Up to 4 significant digits, plain notation in the table's usual range. */
export function fmtNorm(v: number): string {
  if (v === 0) return '0';
  const a = Math.abs(v);
  if (a >= 1e6 || a < 1e-3) return v.toExponential(3);
  const digits = Math.max(0, 4 - Math.floor(Math.log10(a)) - 1);
  return v.toFixed(digits).replace(/(\.\d*?)0+$/, '$1').replace(/\.$/, '');
}

/** The desired/computed/evolved norm table, with delta badges marking the
 * smoothing signature (evolved derivative norms below desired). */
export function renderNormTable(container: HTMLElement, report: Report): void {
  container.replaceChildren();
  const table = document.createElement('table');
  table.className = 'norms';
  const head = table.createTHead().insertRow();
  for (const text of ['variable', 'desired at T', 'computed at 0',
                      'evolved at T', '']) {
    const th = document.createElement('th');
    th.textContent = text;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const variable of VARIABLES) {
    const [desired, computed, evolved] = report.rows[variable];
    const row = body.insertRow();
    row.insertCell().textContent = variable;
    for (const value of [desired, computed, evolved]) {
      row.insertCell().textContent = fmtNorm(value);
    }
    const badge = row.insertCell();
    if (variable !== 'psi' && evolved < desired) {
      badge.textContent = 'smoothed';
      badge.className = 'delta-badge';
    }
  }
  container.appendChild(table);
  const diag = document.createElement('p');
  diag.className = 'diagnostics';
  const re = report.reynolds != null ? fmtNorm(report.reynolds) : '-';
  const um = report.u_max != null ? fmtNorm(report.u_max) : '-';
  diag.textContent = `U_max = ${um}, RE = ${re}`;
  container.appendChild(diag);
}

export function renderBadge(element: HTMLElement, text: string | null): void {
  element.textContent = text ?? '';
  element.classList.toggle('badge-visible', text != null);
}
