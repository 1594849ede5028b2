/** Browse model: collections/manifests as a tree with thumbnail URLs.
 * Thumbnails are Image API URIs pointing straight at the holding
 * institutions' services; nothing is proxied through the UI. */

import { PlatformApi, ResourceSummary } from './api.js';

export interface BrowseNode {
  uri: string;
  kind: string;
  label: string;
  thumbnail: string | null;
  canvasCount: number;
  children: BrowseNode[];
}

export function labelOf(doc: any): string {
  const label = doc?.label;
  if (!label || typeof label !== 'object') return doc?.id ?? '(unlabelled)';
  for (const values of Object.values(label)) {
    if (Array.isArray(values) && values.length) return String(values[0]);
  }
  return doc?.id ?? '(unlabelled)';
}

function serviceBases(doc: any): string[] {
  const bases: string[] = [];
  for (const canvas of doc?.items ?? []) {
    for (const page of canvas.items ?? []) {
      for (const anno of page.items ?? []) {
        const bodies = Array.isArray(anno.body) ? anno.body : [anno.body];
        for (const body of bodies) {
          for (const svc of body?.service ?? []) {
            const id = svc.id ?? svc['@id'];
            if (id) bases.push(String(id).replace(/\/$/, ''));
          }
        }
      }
    }
  }
  return bases;
}

export function thumbnailUrl(serviceBase: string, width = 160): string {
  return `${serviceBase}/full/${width},/0/default.jpg`;
}

/** Canonical full-size image of the first canvas; level-0 services always
 * pre-generate this derivative. */
export function fullImageUrl(serviceBase: string, format = 'png'): string {
  return `${serviceBase}/full/max/0/default.${format}`;
}

async function manifestNode(api: PlatformApi, uri: string, doc?: any): Promise<BrowseNode> {
  const manifest = doc ?? (await api.resource(uri));
  const bases = serviceBases(manifest);
  return {
    uri,
    kind: 'Manifest',
    label: labelOf(manifest),
    thumbnail: bases.length ? thumbnailUrl(bases[0]) : null,
    canvasCount: (manifest.items ?? []).length,
    children: [],
  };
}

async function collectionNode(api: PlatformApi, uri: string, depth: number): Promise<BrowseNode> {
  const doc = await api.resource(uri);
  const node: BrowseNode = {
    uri,
    kind: 'Collection',
    label: labelOf(doc),
    thumbnail: null,
    canvasCount: 0,
    children: [],
  };
  if (depth <= 0) return node;
  for (const item of doc.items ?? []) {
    if (item.type === 'Collection') {
      node.children.push(await collectionNode(api, item.id, depth - 1));
    } else {
      node.children.push(await manifestNode(api, item.id));
    }
  }
  node.thumbnail = node.children.find((c) => c.thumbnail)?.thumbnail ?? null;
  return node;
}

/** The tree mirrors GET responses exactly: collections expand to their
 * members, loose manifests appear at the top level. */
export async function browseCollections(api: PlatformApi, depth = 3): Promise<BrowseNode[]> {
  const { items } = await api.listRegistered();
  const inCollections = new Set<string>();
  const collections = items.filter((s: ResourceSummary) => s.kind === 'Collection');
  const docs = new Map<string, any>();
  for (const summary of collections) {
    docs.set(summary.local_uri, await api.resource(summary.local_uri));
  }
  for (const doc of docs.values()) {
    for (const item of doc.items ?? []) inCollections.add(item.id);
  }

  const roots: BrowseNode[] = [];
  for (const summary of items) {
    if (inCollections.has(summary.local_uri)) continue;
    if (summary.kind === 'Collection') {
      roots.push(await collectionNode(api, summary.local_uri, depth));
    } else {
      roots.push(await manifestNode(api, summary.local_uri));
    }
  }
  return roots;
}
