/** Workbench session: which platform we talk to, what is open, and the
 * pending annotation draft. Drafts never auto-submit; every mutation goes
 * through an explicit confirm step. */

import { PlatformApi, RegionForm } from './api.js';

export type AnnotationLayer = 'image' | 'object' | 'semantic';

export interface AnnotationDraft {
  target: string;
  layer: AnnotationLayer;
  region: RegionForm | null;
  objectClass?: string;
  objectUri?: string;
  body: { predicate: string; value: string }[];
  warnings: string[];
  confirmed: boolean;
}

export class WorkbenchSession {
  readonly api: PlatformApi;
  openResource: string | null = null;
  draft: AnnotationDraft | null = null;

  constructor(apiBase: string, token: string | null = null) {
    // token lives in memory only; it is never persisted anywhere
    this.api = new PlatformApi(apiBase, token);
  }

  get hasToken(): boolean {
    return this.api.hasToken;
  }

  open(resourceUri: string): void {
    this.openResource = resourceUri;
  }

  startDraft(target: string, layer: AnnotationLayer): AnnotationDraft {
    this.draft = { target, layer, region: null, body: [], warnings: [], confirmed: false };
    return this.draft;
  }

  discardDraft(): void {
    this.draft = null;
  }

  /** Mark the pending draft as user-confirmed; submission refuses otherwise. */
  confirmDraft(): void {
    if (!this.draft) throw new Error('no pending draft');
    this.draft.confirmed = true;
  }
}
