import type { AnalyzeResponse, EditOp, HemistichReport } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function marker(kind: "add" | "del" | "flip", glyph: string, title: string): HTMLElement {
  const node = el("span", `bit marker ${kind}`, glyph);
  node.title = title;
  return node;
}

/**
 * The pattern as one cell per bit, with the edit script overlaid.
 *
 * Ops are applied in the order the service sent them (positions are
 * valid under sequential application, highest first): an insert splices
 * in a new marker cell, a delete or flip converts the targeted cell into
 * a marker. Each op therefore yields exactly one `.marker` element.
 * Glyphs (+x / − / ~x) carry the distinction without color.
 */
export function renderPattern(pattern: string, ops: EditOp[]): HTMLElement {
  const container = el("div", "pattern");
  container.dir = "ltr";
  const cells = Array.from(pattern, (bit) => el("span", "bit", bit));
  for (const op of ops) {
    if (op.kind === "insert") {
      cells.splice(op.position, 0, marker("add", `+${op.bit}`, "add"));
    } else if (op.kind === "delete") {
      const target = cells[op.position];
      if (target) {
        target.className = "bit marker del";
        target.textContent = "−";
        target.title = "delete";
      }
    } else {
      const target = cells[op.position];
      if (target) {
        target.className = "bit marker flip";
        target.textContent = `~${op.bit}`;
        target.title = "flip";
      }
    }
  }
  cells.forEach((cell) => container.appendChild(cell));
  return container;
}

function renderHemistich(report: HemistichReport, index: number): HTMLElement {
  const section = el("div", "hemistich");
  const verse = el("div", "verse", report.text);
  verse.dir = "rtl";
  section.appendChild(verse);

  if (report.error !== null) {
    section.appendChild(el("div", "scan-error", report.error));
    return section;
  }

  section.appendChild(renderPattern(report.pattern ?? "", report.ops));

  const gauge = el("div", "gauge");
  const similarity = report.similarity ?? 0;
  const fill = el("div", "gauge-fill");
  fill.style.width = `${similarity * 100}%`;
  gauge.appendChild(fill);
  gauge.appendChild(el("span", "similarity", String(report.similarity)));
  section.appendChild(gauge);

  section.appendChild(el("div", "variant", `variant ${report.variant}`));
  section.dataset.index = String(index);
  return section;
}

/** Full diagnostic view of one analysis response. */
export function renderDiagnostic(response: AnalyzeResponse): HTMLElement {
  const article = el("article", "diagnostic");

  const header = el("header");
  header.appendChild(
    el("span", "meter-name", `${response.meter.name} (${response.meter.index})`),
  );
  const qafiyah = el("span", "qafiyah", `rawiy ${response.qafiyah.rawiy}`);
  qafiyah.dir = "rtl";
  qafiyah.title = `tail ${response.qafiyah.tail}`;
  header.appendChild(qafiyah);
  article.appendChild(header);

  response.hemistiches.forEach((report, index) => {
    article.appendChild(renderHemistich(report, index));
  });

  if (response.warnings.length > 0) {
    const list = el("ul", "warnings");
    response.warnings.forEach((warning) => list.appendChild(el("li", "", warning)));
    article.appendChild(list);
  }
  return article;
}
