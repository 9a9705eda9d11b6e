import type { RunParams } from './types.js';

/** Default parameters mirror the service; gamma/p ranges follow the usual
 * interactive-tuning envelope (gamma spans 14..7 decades, p 2.5..3.5). */
export const DEFAULT_PARAMS: RunParams = {
  T: 6e-4,
  steps: 800,
  gamma: 4e-9,
  p: 3.25,
  nu: 0.01,
  eta: 0.1,
  xi: 0.53,
  taper: 8,
  render: 'absolute',
};

export const GAMMA_SLIDER = { min: -14, max: -7, step: 0.05 };
export const P_SLIDER = { min: 2.5, max: 3.5, step: 0.01 };
export const ETA_SLIDER = { min: 0.01, max: 0.2, step: 0.005 };

/** gamma uses a log-scale slider: position is log10(gamma). */
export function gammaFromSlider(position: number): number {
  return Math.pow(10, position);
}

export function sliderFromGamma(gamma: number): number {
  if (gamma <= 0) return GAMMA_SLIDER.min;
  const pos = Math.log10(gamma);
  return Math.min(GAMMA_SLIDER.max, Math.max(GAMMA_SLIDER.min, pos));
}

/** Render parameter values exactly as they will be submitted. */
export function formValues(params: RunParams): Record<string, string> {
  return {
    T: String(params.T),
    steps: String(params.steps),
    gamma: String(params.gamma),
    p: String(params.p),
    nu: String(params.nu),
    eta: String(params.eta),
    xi: String(params.xi),
    taper: String(params.taper),
    render: params.render,
  };
}

export function parseForm(values: Record<string, string>): RunParams {
  const num = (key: string): number => {
    const v = Number(values[key]);
    if (!Number.isFinite(v)) throw new Error(`invalid number for ${key}`);
    return v;
  };
  const render = values.render === 'minmax' ? 'minmax' : 'absolute';
  return {
    T: num('T'),
    steps: Math.round(num('steps')),
    gamma: num('gamma'),
    p: num('p'),
    nu: num('nu'),
    eta: num('eta'),
    xi: num('xi'),
    taper: Math.round(num('taper')),
    render,
  };
}
