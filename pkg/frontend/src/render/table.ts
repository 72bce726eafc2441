import { esc, fmt } from "../svg";
import type { EventTableRow } from "../types";

export type TableSort = "seq_count" | "occ_count" | "correlation";

const COLUMNS: { key: keyof EventTableRow; label: string; sortable: boolean }[] = [
  { key: "code", label: "code", sortable: false },
  { key: "label", label: "event type", sortable: false },
  { key: "seq_count", label: "sequences", sortable: true },
  { key: "occ_count", label: "occurrences", sortable: true },
  { key: "correlation", label: "correlation", sortable: true },
];

/** Sortable event-type table as an HTML string. Header cells carry
 * data-sort keys; rows carry data-code for focus clicks. */
export function renderTable(rows: EventTableRow[], sort: TableSort): string {
  const head = COLUMNS.map((c) => {
    const cls = c.key === sort ? "sorted" : c.sortable ? "sortable" : "";
    const attr = c.sortable ? ` data-sort="${c.key}"` : "";
    return `<th class="${cls}"${attr}>${esc(c.label)}</th>`;
  }).join("");
  const body = rows
    .map((r) => {
      const cells = [
        esc(r.code),
        esc(r.label),
        String(r.seq_count),
        String(r.occ_count),
        fmt(r.correlation),
      ]
        .map((v) => `<td>${v}</td>`)
        .join("");
      return `<tr data-code="${esc(r.code)}">${cells}</tr>`;
    })
    .join("");
  return `<table class="events"><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`;
}
