/** Side-by-side proofreading: machine revision 0 plus human revisions,
 * edits submitted as new revisions. If the server moved on while the
 * panel was open, submission is refused with a reload prompt instead of
 * silently overwriting newer work. */

import { OcrResult, PlatformApi, RegionForm } from './api.js';

export interface ProofreadPanel {
  result: OcrResult;
  /** Image API URI of the region under correction (pixels come from the
   * image service, never from the workbench server). */
  imageUri: string;
  latestText: string;
  baseRevision: number;
  history: { revision: number; text: string; editor: string | null }[];
}

export class StaleRevisionError extends Error {
  constructor(expected: number, actual: number) {
    super(`revision moved from ${expected} to ${actual}; reload the panel before saving`);
  }
}

export async function openPanel(api: PlatformApi, canvas: string): Promise<ProofreadPanel | null> {
  const { items } = await api.ocrResults(canvas);
  if (!items.length) return null;
  return panelFor(items[items.length - 1]);
}

export function panelFor(result: OcrResult): ProofreadPanel {
  return {
    result,
    imageUri: result.image_uri,
    latestText: result.text,
    baseRevision: result.revision,
    history: result.revisions.map((r) => ({ revision: r.revision, text: r.text, editor: r.editor })),
  };
}

/** Run recognition for a canvas region (the "recognize" button when no
 * OCR exists yet) and open a panel on the fresh result. */
export async function recognize(
  api: PlatformApi,
  canvas: string,
  region: RegionForm,
  provider = 'stub',
): Promise<ProofreadPanel> {
  return panelFor(await api.ocrRecognize(canvas, region, provider));
}

/** Save a correction. Refuses when the server already has a newer
 * revision than the one the panel was opened on. */
export async function saveCorrection(
  api: PlatformApi,
  panel: ProofreadPanel,
  corrected: string,
  editor: string,
): Promise<ProofreadPanel> {
  const { items } = await api.ocrResults(panel.result.canvas);
  const current = items.find((r) => r.id === panel.result.id);
  if (current && current.revision !== panel.baseRevision) {
    throw new StaleRevisionError(panel.baseRevision, current.revision);
  }
  const updated = await api.ocrProofread(panel.result.id, corrected, editor);
  return panelFor(updated);
}
