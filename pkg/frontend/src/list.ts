import type { KeyReport, RunResults, SessionView } from "./types.js";

// Ranked decision list and pin controls. Buttons carry data attributes;
// main.ts wires one delegated click handler instead of per-row listeners.

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function badgeHtml(report: KeyReport, totalDecisions: number): string {
  const pct = totalDecisions > 0 ? (100 * report.kappa) / totalDecisions : 0;
  const worst = Math.max(0, ...Object.values(report.collapse_ratio));
  const note = report.collapsed ? "collapsed" : "no collapse";
  return (
    `<span class="badge" data-kappa="${report.kappa}">` +
    `${report.kappa} keys (${pct.toFixed(1)}%) · spread ratio ${worst.toFixed(2)} · ${note}` +
    `</span>`
  );
}

export function pinnedHtml(view: SessionView): string {
  if (!view.pinned.length) return `<p class="empty">nothing pinned</p>`;
  const rows = view.pinned
    .map(
      ([node, polarity]) =>
        `<li class="pin ${polarity}">` +
        `<code>${esc(node)}</code> ${polarity} ` +
        `<button data-action="unpin" data-node="${esc(node)}">unpin</button>` +
        `</li>`,
    )
    .join("");
  return `<ul class="pins">${rows}</ul>`;
}

export function orderingHtml(results: RunResults): string {
  const rows = results.ordering.entries
    .map((e, i) => {
      const node = esc(e.node);
      return (
        `<tr data-node="${node}">` +
        `<td class="rank">${i + 1}</td>` +
        `<td><code>${node}</code></td>` +
        `<td class="polarity">${e.polarity}</td>` +
        `<td class="score">${e.value.toFixed(3)}</td>` +
        `<td>` +
        `<button data-action="pin" data-node="${node}" data-polarity="satisfied">pin satisfied</button> ` +
        `<button data-action="pin" data-node="${node}" data-polarity="denied">pin denied</button>` +
        `</td>` +
        `</tr>`
      );
    })
    .join("");
  return (
    `<table class="ordering">` +
    `<thead><tr><th>#</th><th>decision</th><th>best polarity</th><th>score</th><th></th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}
