/** Region annotation flow: a rectangle drawn over the rendered canvas is
 * converted to the platform's pixel selector, bounds-checked client-side,
 * and only submitted after explicit confirmation. The server stays the
 * source of truth: callers re-fetch overlays after every submit. */

import { RegionForm } from './api.js';
import { AnnotationDraft, WorkbenchSession } from './session.js';

export interface DrawnRectangle {
  /** Coordinates in the viewer's display space. */
  x: number;
  y: number;
  w: number;
  h: number;
  /** Rendered size of the canvas in display space. */
  viewWidth: number;
  viewHeight: number;
}

export interface CanvasInfo {
  id: string;
  width: number;
  height: number;
}

/** Display-space rectangle -> canvas pixel selector (rounded to pixels). */
export function rectangleToRegion(rect: DrawnRectangle, canvas: CanvasInfo): RegionForm {
  const scaleX = canvas.width / rect.viewWidth;
  const scaleY = canvas.height / rect.viewHeight;
  return {
    kind: 'pixel',
    x: Math.round(rect.x * scaleX),
    y: Math.round(rect.y * scaleY),
    w: Math.max(1, Math.round(rect.w * scaleX)),
    h: Math.max(1, Math.round(rect.h * scaleY)),
  };
}

export function boundsWarnings(region: RegionForm, canvas: CanvasInfo): string[] {
  const warnings: string[] = [];
  if (region.x < 0 || region.y < 0) {
    warnings.push('region origin lies outside the canvas');
  }
  if (region.x + region.w > canvas.width || region.y + region.h > canvas.height) {
    warnings.push(
      `region ${region.x},${region.y},${region.w},${region.h} exceeds canvas ${canvas.width}x${canvas.height}`,
    );
  }
  return warnings;
}

export function draftRegionAnnotation(
  session: WorkbenchSession,
  canvas: CanvasInfo,
  rect: DrawnRectangle,
  objectClass: string,
  body: { predicate: string; value: string }[] = [],
  objectUri?: string,
): AnnotationDraft {
  const draft = session.startDraft(canvas.id, 'object');
  draft.region = rectangleToRegion(rect, canvas);
  draft.objectClass = objectClass;
  draft.objectUri = objectUri;
  draft.body = body;
  draft.warnings = boundsWarnings(draft.region, canvas);
  return draft;
}

/** Submit the confirmed draft; refuses unconfirmed or out-of-bounds drafts
 * so nothing ever auto-submits. Returns the server's annotation document. */
export async function submitDraft(session: WorkbenchSession): Promise<any> {
  const draft = session.draft;
  if (!draft) throw new Error('no pending draft');
  if (!draft.confirmed) throw new Error('draft not confirmed by the user');
  if (draft.warnings.length) throw new Error(`draft has warnings: ${draft.warnings.join('; ')}`);
  const payload: Record<string, unknown> = {
    layer: draft.layer,
    target: draft.target,
    creator: 'workbench',
  };
  if (draft.layer === 'object') {
    payload.region = draft.region;
    payload.object_class = draft.objectClass;
    if (draft.objectUri) payload.object_uri = draft.objectUri;
    payload.body = draft.body;
  } else if (draft.layer === 'image') {
    payload.metadata = draft.body;
  }
  const created = await session.api.postAnnotation(payload);
  session.discardDraft();
  return created;
}

/** Overlays for a canvas, re-fetched from the server after any mutation. */
export async function annotationOverlays(
  session: WorkbenchSession,
  canvasId: string,
): Promise<{ id: string; region: RegionForm | null; layer: string }[]> {
  const page = await session.api.annotationsFor(canvasId);
  return page.items.map((item: any) => {
    const selector = item?.target?.selector?.value as string | undefined;
    let region: RegionForm | null = null;
    if (selector && selector.startsWith('xywh=')) {
      const body = selector.slice(5);
      const pct = body.startsWith('percent:');
      const numbers = (pct ? body.slice(8) : body).split(',').map(Number);
      region = { kind: pct ? 'pct' : 'pixel', x: numbers[0], y: numbers[1], w: numbers[2], h: numbers[3] };
    }
    return { id: item.id, region, layer: item['regather:layer'] };
  });
}
