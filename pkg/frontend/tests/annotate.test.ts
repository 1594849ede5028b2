import { describe, expect, it } from 'vitest';

import { boundsWarnings, draftRegionAnnotation, rectangleToRegion, submitDraft } from '../src/annotate.js';
import { PlatformApi } from '../src/api.js';
import { WorkbenchSession } from '../src/session.js';
import { mockFetch } from './mock.js';

const CANVAS = { id: 'http://inst.test/canvas/1', width: 640, height: 480 };


describe('rectangleToRegion', () => {
  it('scales display coordinates to canvas pixels', () => {
    const region = rectangleToRegion(
      { x: 10, y: 20, w: 30, h: 40, viewWidth: 320, viewHeight: 240 }, CANVAS);
    expect(region).toEqual({ kind: 'pixel', x: 20, y: 40, w: 60, h: 80 });
  });

  it('is exact when the view is 1:1', () => {
    const region = rectangleToRegion(
      { x: 5, y: 6, w: 7, h: 8, viewWidth: 640, viewHeight: 480 }, CANVAS);
    expect(region).toEqual({ kind: 'pixel', x: 5, y: 6, w: 7, h: 8 });
  });
});

describe('boundsWarnings', () => {
  it('accepts in-bounds regions', () => {
    expect(boundsWarnings({ kind: 'pixel', x: 0, y: 0, w: 640, h: 480 }, CANVAS)).toEqual([]);
  });

  it('warns before submit when the rectangle leaves the canvas', () => {
    const warnings = boundsWarnings({ kind: 'pixel', x: 600, y: 400, w: 100, h: 100 }, CANVAS);
    expect(warnings).toHaveLength(1);
    expect(warnings[0]).toContain('exceeds canvas 640x480');
  });
});

describe('draft lifecycle', () => {
  function sessionWith(routes: Record<string, unknown>) {
    const { fetch, calls } = mockFetch(routes);
    const session = new WorkbenchSession('http://platform.test');
    (session as any).api = new PlatformApi('http://platform.test', null, fetch);
    return { session, calls };
  }

  it('drafts never auto-submit: unconfirmed drafts are refused', async () => {
    const { session, calls } = sessionWith({});
    draftRegionAnnotation(session, CANVAS, { x: 1, y: 1, w: 5, h: 5, viewWidth: 640, viewHeight: 480 }, 'urn:v:Seal');
    await expect(submitDraft(session)).rejects.toThrow(/not confirmed/);
    expect(calls).toHaveLength(0);  // nothing left the workbench
  });

  it('out-of-bounds drafts are refused even when confirmed', async () => {
    const { session, calls } = sessionWith({});
    draftRegionAnnotation(session, CANVAS, { x: 630, y: 470, w: 60, h: 60, viewWidth: 640, viewHeight: 480 }, 'urn:v:Seal');
    session.confirmDraft();
    await expect(submitDraft(session)).rejects.toThrow(/warnings/);
    expect(calls).toHaveLength(0);
  });

  it('confirmed in-bounds drafts POST the platform selector form', async () => {
    const { session, calls } = sessionWith({
      'POST /annotations': { id: 'http://platform.test/annotation/A1', 'regather:layer': 'object' },
    });
    draftRegionAnnotation(
      session, CANVAS, { x: 10, y: 10, w: 50, h: 50, viewWidth: 640, viewHeight: 480 },
      'urn:v:Seal', [{ predicate: 'urn:p:label', value: 'a seal' }], 'urn:seal:1');
    session.confirmDraft();
    const created = await submitDraft(session);
    expect(created.id).toBe('http://platform.test/annotation/A1');
    expect(calls).toHaveLength(1);
    expect(calls[0].body).toMatchObject({
      layer: 'object',
      target: CANVAS.id,
      region: { kind: 'pixel', x: 10, y: 10, w: 50, h: 50 },
      object_class: 'urn:v:Seal',
      object_uri: 'urn:seal:1',
    });
    expect(session.draft).toBeNull();  // consumed
  });
});
