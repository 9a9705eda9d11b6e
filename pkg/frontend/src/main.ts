import { ConsoleApi } from './api.js';
import { DEFAULT_PARAMS, ETA_SLIDER, GAMMA_SLIDER, P_SLIDER,
         gammaFromSlider, parseForm, sliderFromGamma } from './params.js';
import { RunPoller, divergenceBadge } from './poller.js';
import { TuningSession } from './session.js';
import { drawTrace } from './trace.js';
import { renderBadge, renderNormTable, renderPanels,
         renderPlaceholders } from './view.js';
import type { NormRow, RunParams } from './types.js';

const api = new ConsoleApi(
  (window as unknown as { SERVICE_URL?: string }).SERVICE_URL
  ?? 'http://127.0.0.1:8710');
const poller = new RunPoller(api, 1000);
const session = new TuningSession();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function currentParams(): RunParams {
  return parseForm({
    T: el<HTMLInputElement>('param-T').value,
    steps: el<HTMLInputElement>('param-steps').value,
    gamma: el<HTMLInputElement>('param-gamma-value').value,
    p: el<HTMLInputElement>('param-p').value,
    nu: el<HTMLInputElement>('param-nu').value,
    eta: el<HTMLInputElement>('param-eta').value,
    xi: el<HTMLInputElement>('param-xi').value,
    taper: el<HTMLInputElement>('param-taper').value,
    render: el<HTMLSelectElement>('param-render').value,
  });
}

function wireGammaSlider(): void {
  const slider = el<HTMLInputElement>('param-gamma');
  const value = el<HTMLInputElement>('param-gamma-value');
  slider.min = String(GAMMA_SLIDER.min);
  slider.max = String(GAMMA_SLIDER.max);
  slider.step = String(GAMMA_SLIDER.step);
  slider.value = String(sliderFromGamma(DEFAULT_PARAMS.gamma));
  value.value = String(DEFAULT_PARAMS.gamma);
  slider.addEventListener('input', () => {
    value.value = gammaFromSlider(Number(slider.value)).toExponential(3);
  });
  value.addEventListener('change', () => {
    slider.value = String(sliderFromGamma(Number(value.value)));
  });
}

function wireLinearSlider(id: string, spec: { min: number; max: number;
                          step: number }, initial: number): void {
  const slider = el<HTMLInputElement>(id);
  slider.min = String(spec.min);
  slider.max = String(spec.max);
  slider.step = String(spec.step);
  slider.value = String(initial);
  const label = el<HTMLElement>(`${id}-label`);
  const update = () => { label.textContent = slider.value; };
  slider.addEventListener('input', update);
  update();
}

function renderHistory(): void {
  const list = el<HTMLUListElement>('history');
  list.replaceChildren();
  for (const entry of session.entries) {
    const item = document.createElement('li');
    const g = entry.params.gamma.toExponential(2);
    item.textContent = `γ=${g} p=${entry.params.p} T=${entry.params.T} `
      + `→ ${entry.runId}: ${entry.verdict}`;
    list.appendChild(item);
  }
}

async function launch(): Promise<void> {
  const status = el<HTMLElement>('status-line');
  const badge = el<HTMLElement>('badge');
  const panels = el<HTMLElement>('panels');
  const tableBox = el<HTMLElement>('norm-table');
  const canvas = el<HTMLCanvasElement>('trace');
  renderBadge(badge, null);
  renderPlaceholders(panels);
  tableBox.replaceChildren();

  let params: RunParams;
  try {
    params = currentParams();
  } catch (err) {
    status.textContent = `invalid form: ${(err as Error).message}`;
    return;
  }
  const dataset = el<HTMLSelectElement>('dataset').value;
  const n = Number(el<HTMLInputElement>('grid-n').value);

  let runId: string;
  try {
    runId = await api.submitRun(dataset, n, params);
  } catch (err) {
    const fields = (err as { fieldErrors?: Record<string, string> }).fieldErrors;
    status.textContent = fields && Object.keys(fields).length
      ? Object.entries(fields).map(([k, v]) => `${k}: ${v}`).join('; ')
      : String(err);
    return;
  }

  status.textContent = `run ${runId} submitted`;
  const rows: NormRow[] = [];
  const final = await poller.watch(runId, (s) => {
    status.textContent =
      `run ${runId}: ${s.status} ${s.progress.phase} `
      + `${s.progress.step}/${s.progress.total}`;
    if (s.latest) {
      rows.push(s.latest);
      drawTrace(canvas, rows);
    }
    renderBadge(badge, divergenceBadge(s));
  });

  session.record(params, runId, final.status);
  renderHistory();
  if (final.status === 'done') {
    renderPanels(panels, api, runId);
    renderNormTable(tableBox, await api.getReport(runId));
  } else if (final.status === 'diverged') {
    // partial panels: the desired image exists even for unstable runs
    renderPanels(panels, api, runId);
  }
}

async function boot(): Promise<void> {
  wireGammaSlider();
  wireLinearSlider('param-p', P_SLIDER, DEFAULT_PARAMS.p);
  wireLinearSlider('param-eta', ETA_SLIDER, DEFAULT_PARAMS.eta);
  const select = el<HTMLSelectElement>('dataset');
  for (const d of await api.listDatasets()) {
    const opt = document.createElement('option');
    opt.value = d.name;
    opt.textContent = `${d.name} — ${d.description}`;
    select.appendChild(opt);
  }
  el<HTMLButtonElement>('launch').addEventListener('click', () => {
    void launch();
  });
}

void boot();
