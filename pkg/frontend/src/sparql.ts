/** SPARQL console model: a bindings table, plus a node-link graph when the
 * results contain URI-URI pairs. Queries never mutate anything. */

import { PlatformApi, SparqlCell, SparqlResults } from './api.js';

export interface ResultsTable {
  variables: string[];
  rows: string[][];
  rowCount: number;
}

export interface LinkPair {
  source: string;
  target: string;
}

export function toTable(results: SparqlResults): ResultsTable {
  const variables = results.head.vars;
  const rows = results.results.bindings.map((binding) =>
    variables.map((name) => formatCell(binding[name])),
  );
  return { variables, rows, rowCount: rows.length };
}

export function formatCell(cell: SparqlCell | undefined): string {
  if (!cell) return '';
  if (cell.type === 'uri') return cell.value;
  if (cell.type === 'bnode') return `_:${cell.value}`;
  if (cell['xml:lang']) return `"${cell.value}"@${cell['xml:lang']}`;
  return cell.value;
}

/** URI-URI column pairs drive the optional link-graph rendering: every row
 * where two adjacent projected variables are both URIs becomes an edge. */
export function extractLinkPairs(results: SparqlResults): LinkPair[] {
  const variables = results.head.vars;
  const pairs: LinkPair[] = [];
  for (const binding of results.results.bindings) {
    for (let i = 0; i + 1 < variables.length; i += 1) {
      const a = binding[variables[i]];
      const b = binding[variables[i + 1]];
      if (a?.type === 'uri' && b?.type === 'uri') {
        pairs.push({ source: a.value, target: b.value });
      }
    }
  }
  return pairs;
}

export async function runQuery(api: PlatformApi, query: string): Promise<{
  table: ResultsTable;
  links: LinkPair[];
}> {
  const results = await api.sparql(query);
  return { table: toTable(results), links: extractLinkPairs(results) };
}
