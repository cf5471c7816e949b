/**
 * DOM bootstrap: binds the controller to the screens in index.html.
 * Gateway base URL comes from ?gateway=... or defaults to same origin.
 */

import { GatewayClient } from './api.js';
import { AppController, Screen } from './app.js';
import { ResultView } from './diagnose.js';
import { OutbreakLayer } from './outbreaks.js';
import { drawOverlay } from './overlay.js';
import { SessionStore } from './session.js';

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function showScreen(screen: Screen): void {
  for (const name of ['login', 'upload', 'result', 'map'] as Screen[]) {
    $(`screen-${name}`).style.display = name === screen ? 'block' : 'none';
  }
}

function renderResult(view: ResultView): void {
  const img = $('result-image') as HTMLImageElement;
  const canvas = $('result-overlay') as HTMLCanvasElement;
  canvas.width = img.clientWidth;
  canvas.height = img.clientHeight;
  const ctx = canvas.getContext('2d');
  if (ctx && view.diagnosis) {
    drawOverlay(ctx, view.diagnosis.detections, canvas.width, canvas.height);
  }
  $('result-state').textContent =
    view.kind === 'healthy' ? 'No disease detected — plant looks healthy.' : '';
  const panel = $('treatments');
  panel.innerHTML = '';
  for (const treatment of view.treatments) {
    const card = document.createElement('div');
    card.className = 'treatment-card';
    const title = document.createElement('h3');
    title.textContent = treatment.slug.replace(/_/g, ' ');
    const summary = document.createElement('p');
    summary.textContent = treatment.summary;
    const list = document.createElement('ul');
    for (const action of treatment.actions) {
      const item = document.createElement('li');
      item.textContent = action;
      list.appendChild(item);
    }
    card.append(title, summary, list);
    panel.appendChild(card);
  }
}

function renderMap(layer: OutbreakLayer): void {
  const list = $('outbreak-list');
  list.innerHTML = '';
  if (layer.empty) {
    list.textContent = 'No outbreaks reported in this area.';
    return;
  }
  for (const marker of layer.markers) {
    const row = document.createElement('div');
    row.className = 'outbreak-marker';
    row.textContent = `${marker.label} @ (${marker.latitude.toFixed(3)}, ${marker.longitude.toFixed(3)})`;
    list.appendChild(row);
  }
}

function banner(text: string | null): void {
  const el = $('banner');
  el.textContent = text ?? '';
  el.style.display = text ? 'block' : 'none';
}

export function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get('gateway') ?? '';
  const session = new SessionStore(window.localStorage);
  const client = new GatewayClient(baseUrl, () => session.token);
  const app = new AppController(session, client, showScreen);
  showScreen(app.screen);

  $('login-form').addEventListener('submit', async (event) => {
    event.preventDefault();
    const username = ($('login-username') as HTMLInputElement).value;
    const password = ($('login-password') as HTMLInputElement).value;
    const register = (event as SubmitEvent).submitter?.id === 'register-button';
    try {
      if (register) await app.register(username, password);
      const pending = await app.login(username, password);
      banner(app.banner);
      if (pending) {
        const view = await app.resumeJob(pending);
        if (view) renderResult(view);
      }
    } catch (err) {
      banner(String(err));
    }
  });

  $('upload-form').addEventListener('submit', async (event) => {
    event.preventDefault();
    const input = $('photo-input') as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    const latRaw = ($('geo-lat') as HTMLInputElement).value;
    const lonRaw = ($('geo-lon') as HTMLInputElement).value;
    const geo =
      latRaw && lonRaw ? { lat: parseFloat(latRaw), lon: parseFloat(lonRaw) } : undefined;
    const img = $('result-image') as HTMLImageElement;
    img.src = URL.createObjectURL(file);
    banner('analyzing…');
    const view = await app.diagnose(file, geo, {
      renderedWidth: img.clientWidth || 1,
      renderedHeight: img.clientHeight || 1,
      onTick: (status) => banner(`analyzing… (${status})`),
    });
    banner(app.banner);
    if (view) renderResult(view);
  });

  $('map-button').addEventListener('click', async () => {
    const layer = await app.showMap({ minLat: -90, minLon: -180, maxLat: 90, maxLon: 180 });
    if (layer) renderMap(layer);
  });

  $('logout-button').addEventListener('click', () => {
    app.logout();
    banner(null);
  });
}

if (typeof document !== 'undefined' && document.readyState !== 'loading') {
  boot();
} else if (typeof document !== 'undefined') {
  document.addEventListener('DOMContentLoaded', boot);
}
