/** Node-link layout and SVG rendering for URI-URI query results.
 * Connected components are computed explicitly and laid out as separate
 * rings, so a sameAs closure shows up as one visibly connected cluster. */

import { LinkPair } from './sparql.js';

export interface GraphNode {
  id: string;
  label: string;
  component: number;
  x: number;
  y: number;
}

export interface GraphEdge {
  source: string;
  target: string;
  component: number;
}

export interface LinkGraph {
  nodes: GraphNode[];
  edges: GraphEdge[];
  componentCount: number;
  components: string[][];
}

function shortLabel(uri: string): string {
  const tail = uri.replace(/[/#]$/, '').split(/[/#]/).pop();
  return tail && tail.length ? tail : uri;
}

export function buildLinkGraph(pairs: LinkPair[], width = 640, height = 420): LinkGraph {
  const ids: string[] = [];
  const seen = new Set<string>();
  for (const pair of pairs) {
    for (const id of [pair.source, pair.target]) {
      if (!seen.has(id)) {
        seen.add(id);
        ids.push(id);
      }
    }
  }

  // union-find over the pair list
  const parent = new Map<string, string>(ids.map((id) => [id, id]));
  const find = (id: string): string => {
    let root = id;
    while (parent.get(root) !== root) root = parent.get(root)!;
    let cursor = id;
    while (parent.get(cursor) !== root) {
      const next = parent.get(cursor)!;
      parent.set(cursor, root);
      cursor = next;
    }
    return root;
  };
  for (const pair of pairs) {
    const a = find(pair.source);
    const b = find(pair.target);
    if (a !== b) parent.set(a, b);
  }

  const componentIndex = new Map<string, number>();
  const components: string[][] = [];
  for (const id of ids) {
    const root = find(id);
    if (!componentIndex.has(root)) {
      componentIndex.set(root, components.length);
      components.push([]);
    }
    components[componentIndex.get(root)!].push(id);
  }

  // each component gets a ring of nodes around its own center
  const nodes: GraphNode[] = [];
  const perRow = Math.max(1, Math.ceil(Math.sqrt(components.length)));
  components.forEach((members, index) => {
    const cx = ((index % perRow) + 0.5) * (width / perRow);
    const cy = (Math.floor(index / perRow) + 0.5) * (height / Math.ceil(components.length / perRow));
    const radius = Math.min(width / perRow, height) * 0.3;
    members.forEach((id, position) => {
      const angle = (2 * Math.PI * position) / members.length;
      nodes.push({
        id,
        label: shortLabel(id),
        component: index,
        x: Math.round(cx + (members.length === 1 ? 0 : radius * Math.cos(angle))),
        y: Math.round(cy + (members.length === 1 ? 0 : radius * Math.sin(angle))),
      });
    });
  });

  const byId = new Map(nodes.map((n) => [n.id, n]));
  const edges: GraphEdge[] = pairs.map((pair) => ({
    source: pair.source,
    target: pair.target,
    component: byId.get(pair.source)!.component,
  }));
  return { nodes, edges, componentCount: components.length, components };
}

const PALETTE = ['#2563eb', '#059669', '#d97706', '#dc2626', '#7c3aed', '#0891b2'];

function escapeXml(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;');
}

/** Self-contained SVG document for the graph; usable as innerHTML or a file. */
export function renderSvg(graph: LinkGraph, width = 640, height = 420): string {
  const byId = new Map(graph.nodes.map((n) => [n.id, n]));
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}">`,
  ];
  for (const edge of graph.edges) {
    const a = byId.get(edge.source)!;
    const b = byId.get(edge.target)!;
    parts.push(
      `<line data-component="${edge.component}" x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" stroke="#94a3b8" stroke-width="1.5"/>`,
    );
  }
  for (const node of graph.nodes) {
    const color = PALETTE[node.component % PALETTE.length];
    parts.push(
      `<g data-component="${node.component}">` +
        `<circle cx="${node.x}" cy="${node.y}" r="7" fill="${color}"><title>${escapeXml(node.id)}</title></circle>` +
        `<text x="${node.x + 10}" y="${node.y + 4}" font-size="11" fill="#334155">${escapeXml(node.label)}</text>` +
        `</g>`,
    );
  }
  parts.push('</svg>');
  return parts.join('');
}
