/** Browser entry: wires the workbench models into the page. The api base
 * is configured at load time (?api=... or the form on screen); the bearer
 * token is held in memory only. */

import { PlatformError } from './api.js';
import { annotationOverlays, draftRegionAnnotation, submitDraft } from './annotate.js';
import { browseCollections, BrowseNode, fullImageUrl } from './collections.js';
import { buildLinkGraph, renderSvg } from './graphview.js';
import { openPanel, recognize, saveCorrection, StaleRevisionError } from './proofread.js';
import { runQuery } from './sparql.js';
import { WorkbenchSession } from './session.js';

let session: WorkbenchSession | null = null;
let currentCanvas: { id: string; width: number; height: number; service: string } | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function note(text: string, isError = false): void {
  const bar = el<HTMLDivElement>('statusbar');
  bar.textContent = text;
  bar.className = isError ? 'status error' : 'status';
}

async function connect(): Promise<void> {
  const base = (el<HTMLInputElement>('api-base')).value.trim();
  const token = (el<HTMLInputElement>('api-token')).value.trim() || null;
  session = new WorkbenchSession(base, token);
  try {
    const health = await session.api.health();
    note(`connected to ${base} (version ${health.version})`);
    await refreshTree();
  } catch (error) {
    session = null;
    note(`cannot reach ${base}: ${String(error)}`, true);
  }
}

function renderNode(node: BrowseNode): HTMLElement {
  const card = document.createElement('div');
  card.className = `card ${node.kind.toLowerCase()}`;
  if (node.thumbnail) {
    const img = document.createElement('img');
    img.src = node.thumbnail;  // straight from the image service
    img.loading = 'lazy';
    card.appendChild(img);
  }
  const title = document.createElement('div');
  title.className = 'card-title';
  title.textContent = `${node.label} (${node.kind}${node.canvasCount ? `, ${node.canvasCount} canvases` : ''})`;
  card.appendChild(title);
  if (node.kind === 'Manifest') {
    card.addEventListener('click', () => void openManifest(node.uri));
  }
  if (node.children.length) {
    const children = document.createElement('div');
    children.className = 'children';
    for (const child of node.children) children.appendChild(renderNode(child));
    card.appendChild(children);
  }
  return card;
}

async function refreshTree(): Promise<void> {
  if (!session) return;
  const tree = el<HTMLDivElement>('tree');
  tree.textContent = '';
  try {
    const roots = await browseCollections(session.api);
    if (!roots.length) {
      tree.innerHTML = '<p class="empty">Nothing registered yet. Import manifests with the CLI or API.</p>';
      return;
    }
    for (const root of roots) tree.appendChild(renderNode(root));
  } catch (error) {
    tree.innerHTML = `<p class="empty">Failed to load: ${String(error)}</p>`;
  }
}

async function openManifest(uri: string): Promise<void> {
  if (!session) return;
  session.open(uri);
  const doc = await session.api.resource(uri);
  const canvas = doc.items?.[0];
  if (!canvas) {
    note('manifest has no canvases', true);
    return;
  }
  const service = canvas.items?.[0]?.items?.[0]?.body?.service?.[0];
  const base = (service?.id ?? service?.['@id'] ?? '').replace(/\/$/, '');
  currentCanvas = { id: canvas.id, width: canvas.width, height: canvas.height, service: base };
  const stage = el<HTMLDivElement>('stage');
  stage.innerHTML = '';
  const img = document.createElement('img');
  img.id = 'canvas-image';
  img.src = fullImageUrl(base);
  stage.appendChild(img);
  note(`opened ${uri}`);
  await refreshOverlays();
  await refreshProofread();
}

async function refreshOverlays(): Promise<void> {
  if (!session || !currentCanvas) return;
  const list = el<HTMLUListElement>('overlays');
  list.textContent = '';
  const overlays = await annotationOverlays(session, currentCanvas.id);
  for (const overlay of overlays) {
    const item = document.createElement('li');
    const where = overlay.region ? ` @ ${overlay.region.x},${overlay.region.y},${overlay.region.w},${overlay.region.h}` : '';
    item.textContent = `${overlay.layer}${where}`;
    list.appendChild(item);
  }
}

async function submitRegion(): Promise<void> {
  if (!session || !currentCanvas) return;
  const x = Number(el<HTMLInputElement>('rect-x').value);
  const y = Number(el<HTMLInputElement>('rect-y').value);
  const w = Number(el<HTMLInputElement>('rect-w').value);
  const h = Number(el<HTMLInputElement>('rect-h').value);
  const objectClass = el<HTMLInputElement>('object-class').value.trim();
  const image = el<HTMLImageElement>('canvas-image');
  const draft = draftRegionAnnotation(
    session,
    { id: currentCanvas.id, width: currentCanvas.width, height: currentCanvas.height },
    { x, y, w, h, viewWidth: image.clientWidth || currentCanvas.width, viewHeight: image.clientHeight || currentCanvas.height },
    objectClass,
  );
  if (draft.warnings.length) {
    note(draft.warnings.join('; '), true);
    return;
  }
  if (!window.confirm(`Annotate region ${draft.region!.x},${draft.region!.y},${draft.region!.w},${draft.region!.h} as ${objectClass}?`)) {
    session.discardDraft();
    return;
  }
  session.confirmDraft();
  try {
    await submitDraft(session);
    note('annotation saved');
    await refreshOverlays();  // server is the source of truth
  } catch (error) {
    note(error instanceof PlatformError ? error.message : String(error), true);
  }
}

async function refreshProofread(): Promise<void> {
  if (!session || !currentCanvas) return;
  const panelBox = el<HTMLDivElement>('proofread');
  const panel = await openPanel(session.api, currentCanvas.id);
  if (!panel) {
    panelBox.innerHTML = '<button id="recognize-btn">Recognize text in this canvas</button>';
    el<HTMLButtonElement>('recognize-btn').addEventListener('click', async () => {
      if (!session || !currentCanvas) return;
      await recognize(session.api, currentCanvas.id, {
        kind: 'pixel', x: 0, y: 0, w: currentCanvas.width, h: currentCanvas.height,
      });
      await refreshProofread();
    });
    return;
  }
  panelBox.innerHTML = `
    <img src="${panel.imageUri}" alt="region under correction"/>
    <textarea id="proof-text">${panel.latestText}</textarea>
    <div>revision ${panel.baseRevision}</div>
    <ol id="proof-history"></ol>
    <button id="proof-save">Save correction</button>`;
  const history = el<HTMLOListElement>('proof-history');
  for (const rev of panel.history) {
    const item = document.createElement('li');
    item.textContent = `r${rev.revision} (${rev.editor ?? 'machine'}): ${rev.text}`;
    history.appendChild(item);
  }
  el<HTMLButtonElement>('proof-save').addEventListener('click', async () => {
    if (!session) return;
    const text = el<HTMLTextAreaElement>('proof-text').value;
    const editor = window.prompt('Editor id for the audit trail:') ?? '';
    if (!editor) return;
    try {
      await saveCorrection(session.api, panel, text, editor);
      note('revision saved');
      await refreshProofread();
    } catch (error) {
      if (error instanceof StaleRevisionError) {
        note(`${error.message}`, true);
        await refreshProofread();
      } else {
        note(String(error), true);
      }
    }
  });
}

async function runConsole(): Promise<void> {
  if (!session) return;
  const query = el<HTMLTextAreaElement>('sparql-input').value;
  const out = el<HTMLDivElement>('sparql-out');
  try {
    const { table, links } = await runQuery(session.api, query);
    const header = table.variables.map((v) => `<th>?${v}</th>`).join('');
    const rows = table.rows
      .map((row) => `<tr>${row.map((cell) => `<td>${cell.replace(/</g, '&lt;')}</td>`).join('')}</tr>`)
      .join('');
    out.innerHTML = `<table><thead><tr>${header}</tr></thead><tbody>${rows}</tbody></table>`;
    if (links.length) {
      const graph = buildLinkGraph(links);
      out.insertAdjacentHTML('beforeend', renderSvg(graph));
    }
  } catch (error) {
    out.innerHTML = `<p class="empty">${error instanceof PlatformError ? error.message : String(error)}</p>`;
  }
}

window.addEventListener('DOMContentLoaded', () => {
  const params = new URLSearchParams(window.location.search);
  if (params.get('api')) el<HTMLInputElement>('api-base').value = params.get('api')!;
  el<HTMLButtonElement>('connect-btn').addEventListener('click', () => void connect());
  el<HTMLButtonElement>('annotate-btn').addEventListener('click', () => void submitRegion());
  el<HTMLButtonElement>('sparql-run').addEventListener('click', () => void runConsole());
  el<HTMLButtonElement>('refresh-btn').addEventListener('click', () => void refreshTree());
});
