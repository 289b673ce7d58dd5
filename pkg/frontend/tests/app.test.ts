import { beforeEach, describe, expect, it } from "vitest";

import { ApiError } from "../src/api.js";
import { createApp, type App } from "../src/app.js";
import { renderPattern } from "../src/view.js";
import type {
  AnalyzeResponse,
  EditOp,
  MeterEntry,
  QasidaClient,
} from "../src/types.js";

const METER_NAMES = [
  "Taweel", "Madeed", "Baseet", "Wafer", "Kamel", "Hazaj", "Rajaz", "Ramal",
  "Saree", "Munsareh", "Khafeef", "Mudare", "Muqtadeb", "Mujtath",
  "Mutaqareb", "Mutadarak",
];

const TAWEEL_CANONICAL = "11010110101011010110110";
const CANONICAL_TEXT = "قِفَا نَبْكِ مِنْ ذِكْرَى حَبِيبٍ وَمَنْزِلِ";

function meterList(names = METER_NAMES): MeterEntry[] {
  return names.map((name, index) => ({ index, name }));
}

function analysis(overrides: Partial<AnalyzeResponse> = {}): AnalyzeResponse {
  return {
    meter: { index: 0, name: "Taweel" },
    qafiyah: { rawiy: "ل", tail: "لِي" },
    hemistiches: [
      {
        text: CANONICAL_TEXT,
        coverage: 1.0,
        pattern: TAWEEL_CANONICAL,
        variant: TAWEEL_CANONICAL,
        similarity: 1.0,
        ops: [],
        error: null,
      },
    ],
    warnings: [],
    ...overrides,
  };
}

type Respond = (text: string, hint: number | null) => Promise<AnalyzeResponse>;

class StubClient implements QasidaClient {
  calls: Array<{ text: string; hint: number | null }> = [];

  constructor(
    private readonly respond: Respond = () => Promise.resolve(analysis()),
    private readonly meterEntries: MeterEntry[] = meterList(),
  ) {}

  meters(): Promise<MeterEntry[]> {
    return Promise.resolve(this.meterEntries);
  }

  analyze(text: string, hint: number | null): Promise<AnalyzeResponse> {
    this.calls.push({ text, hint });
    return this.respond(text, hint);
  }
}

function mount(client: QasidaClient): App {
  document.body.innerHTML = '<main id="app"></main>';
  return createApp(document.getElementById("app")!, client);
}

async function flush(): Promise<void> {
  await Promise.resolve();
  await Promise.resolve();
}

function type(app: App, text: string): void {
  const input = app.root.querySelector<HTMLTextAreaElement>(".verse-input")!;
  input.value = text;
  input.dispatchEvent(new Event("input"));
}

async function submit(app: App, text?: string): Promise<void> {
  if (text !== undefined) {
    type(app, text);
  }
  const form = app.root.querySelector<HTMLFormElement>(".composer")!;
  form.dispatchEvent(new Event("submit", { cancelable: true }));
  await app.idle();
  await flush();
}

describe("meter picker", () => {
  it("lists the 16 meters plus auto, defaulting to auto", async () => {
    const app = mount(new StubClient());
    await flush();
    const picker = app.root.querySelector<HTMLSelectElement>(".meter-picker")!;
    expect(picker.options).toHaveLength(17);
    expect(picker.options[0]!.value).toBe("auto");
    expect(picker.value).toBe("auto");
    const names = Array.from(picker.options).slice(1).map((o) => o.textContent);
    expect(names).toEqual(METER_NAMES);
  });

  it("shows whatever names the service returns (no local meter table)", async () => {
    const fake = meterList(METER_NAMES.map((_, i) => `Stub Meter ${i}`));
    const app = mount(new StubClient(undefined, fake));
    await flush();
    const names = Array.from(
      app.root.querySelectorAll<HTMLOptionElement>(".meter-picker option"),
    ).slice(1).map((o) => o.textContent);
    expect(names).toEqual(fake.map((m) => m.name));
  });

  it("sends the selection as meter_hint and keeps it across submissions", async () => {
    const client = new StubClient();
    const app = mount(client);
    await flush();
    const picker = app.root.querySelector<HTMLSelectElement>(".meter-picker")!;
    picker.value = "3";
    await submit(app, CANONICAL_TEXT);
    await submit(app, CANONICAL_TEXT + " ");
    expect(client.calls.map((c) => c.hint)).toEqual([3, 3]);
    expect(picker.value).toBe("3");
  });

  it("sends no hint on auto", async () => {
    const client = new StubClient();
    const app = mount(client);
    await flush();
    await submit(app, CANONICAL_TEXT);
    expect(client.calls[0]!.hint).toBeNull();
  });
});

describe("submission flow", () => {
  it("disables submit while the input is empty", async () => {
    const client = new StubClient();
    const app = mount(client);
    const button = app.root.querySelector<HTMLButtonElement>(".submit")!;
    expect(button.disabled).toBe(true);
    type(app, "   ");
    expect(button.disabled).toBe(true);
    type(app, CANONICAL_TEXT);
    expect(button.disabled).toBe(false);
    type(app, "");
    expect(button.disabled).toBe(true);
    await submit(app); // empty: the handler must not call the service
    expect(client.calls).toHaveLength(0);
  });

  it("renders the canonical fixture with zero correction markers", async () => {
    const app = mount(new StubClient());
    await submit(app, CANONICAL_TEXT);
    const result = app.root.querySelector(".result")!;
    expect(result.querySelectorAll(".marker")).toHaveLength(0);
    expect(result.querySelector(".meter-name")!.textContent).toBe("Taweel (0)");
    expect(result.querySelector(".similarity")!.textContent).toBe("1");
    const bits = Array.from(result.querySelectorAll(".bit"))
      .map((b) => b.textContent).join("");
    expect(bits).toBe(TAWEEL_CANONICAL);
  });

  it("renders exactly one flip marker for the one-flip fixture", async () => {
    const observed = TAWEEL_CANONICAL.slice(0, 5) + "0" + TAWEEL_CANONICAL.slice(6);
    const oneFlip = analysis({
      hemistiches: [
        {
          text: CANONICAL_TEXT,
          coverage: 1.0,
          pattern: observed,
          variant: TAWEEL_CANONICAL,
          similarity: 44 / 46,
          ops: [{ kind: "flip", position: 5, bit: "1" }],
          error: null,
        },
      ],
    });
    const app = mount(new StubClient(() => Promise.resolve(oneFlip)));
    await submit(app, CANONICAL_TEXT);
    const result = app.root.querySelector(".result")!;
    const markers = result.querySelectorAll(".marker");
    expect(markers).toHaveLength(1);
    expect(markers[0]!.classList.contains("flip")).toBe(true);
    expect(markers[0]!.textContent).toBe("~1");
    // the marker sits at the traced position
    const cells = result.querySelectorAll(".pattern .bit");
    expect(cells[5]).toBe(markers[0]);
    expect(result.querySelectorAll(".marker.add")).toHaveLength(0);
    expect(result.querySelectorAll(".marker.del")).toHaveLength(0);
    expect(result.querySelector(".similarity")!.textContent)
      .toBe(String(44 / 46));
  });

  it("displays the service's values verbatim even when they are wrong", async () => {
    // Divergence probe: no client-side prosody could produce these values
    // for this text, so seeing them rendered proves the UI only relays.
    const divergent = analysis({
      meter: { index: 9, name: "Munsareh" },
      qafiyah: { rawiy: "خ", tail: "خا" },
      hemistiches: [
        {
          text: CANONICAL_TEXT,
          coverage: 0.5,
          pattern: "0011",
          variant: "1100",
          similarity: 0.123,
          ops: [],
          error: null,
        },
      ],
    });
    const app = mount(new StubClient(() => Promise.resolve(divergent)));
    await submit(app, CANONICAL_TEXT);
    const result = app.root.querySelector(".result")!;
    expect(result.querySelector(".meter-name")!.textContent).toBe("Munsareh (9)");
    expect(result.querySelector(".qafiyah")!.textContent).toBe("rawiy خ");
    expect(result.querySelector(".similarity")!.textContent).toBe("0.123");
    const bits = Array.from(result.querySelectorAll(".bit"))
      .map((b) => b.textContent).join("");
    expect(bits).toBe("0011");
    expect(result.querySelector(".variant")!.textContent).toBe("variant 1100");
  });

  it("renders Arabic text right-to-left", async () => {
    const app = mount(new StubClient());
    await submit(app, CANONICAL_TEXT);
    const verse = app.root.querySelector<HTMLElement>(".result .verse")!;
    expect(verse.dir).toBe("rtl");
    expect(app.root.querySelector<HTMLTextAreaElement>(".verse-input")!.dir)
      .toBe("rtl");
  });

  it("shows per-hemistich scan errors and warnings inline", async () => {
    const mixed = analysis({
      hemistiches: [
        analysis().hemistiches[0]!,
        {
          text: "قفا نبك",
          coverage: 0.0,
          pattern: null,
          variant: null,
          similarity: null,
          ops: [],
          error: "IncompleteDiacritization: diacritic coverage 0.000",
        },
      ],
      warnings: ["hemistich 2: IncompleteDiacritization: diacritic coverage 0.000"],
    });
    const app = mount(new StubClient(() => Promise.resolve(mixed)));
    await submit(app, CANONICAL_TEXT);
    const result = app.root.querySelector(".result")!;
    expect(result.querySelector(".scan-error")!.textContent)
      .toContain("IncompleteDiacritization");
    expect(result.querySelectorAll(".warnings li")).toHaveLength(1);
  });
});

describe("errors", () => {
  it("renders a 422 inline with the structured error", async () => {
    const app = mount(new StubClient(() =>
      Promise.reject(new ApiError(422, "NoScannableVerse", "no hemistich could be scanned")),
    ));
    await submit(app, "قفا نبك");
    const box = app.root.querySelector<HTMLElement>(".error")!;
    expect(box.hidden).toBe(false);
    expect(box.textContent).toBe("NoScannableVerse: no hemistich could be scanned");
    expect(app.root.querySelectorAll(".history-entry")).toHaveLength(0);
  });

  it("renders network failures inline and recovers on success", async () => {
    let fail = true;
    const app = mount(new StubClient(() =>
      fail
        ? Promise.reject(new TypeError("fetch failed"))
        : Promise.resolve(analysis()),
    ));
    await submit(app, CANONICAL_TEXT);
    const box = app.root.querySelector<HTMLElement>(".error")!;
    expect(box.hidden).toBe(false);
    expect(box.textContent).toBe("NetworkError: fetch failed");

    fail = false;
    await submit(app, CANONICAL_TEXT);
    expect(box.hidden).toBe(true);
    expect(app.root.querySelectorAll(".history-entry")).toHaveLength(1);
  });
});

describe("history", () => {
  it("appends each successful submission and never mutates old entries", async () => {
    const responses: Record<string, AnalyzeResponse> = {
      "نص أول": analysis(),
      "نص ثان": analysis({ meter: { index: 4, name: "Kamel" } }),
    };
    const app = mount(new StubClient((text) => Promise.resolve(responses[text]!)));
    await submit(app, "نص أول");
    const entries = app.root.querySelectorAll(".history-entry");
    expect(entries).toHaveLength(1);
    const firstEntry = entries[0]!;
    const firstHtml = firstEntry.innerHTML;

    await submit(app, "نص ثان");
    const after = app.root.querySelectorAll(".history-entry");
    expect(after).toHaveLength(2);
    expect(after[0]).toBe(firstEntry); // same node: append-only
    expect(after[0]!.innerHTML).toBe(firstHtml);
    expect(after[0]!.querySelector(".history-text")!.textContent).toBe("نص أول");
    expect(after[1]!.querySelector(".history-text")!.textContent).toBe("نص ثان");
    expect(after[1]!.querySelector(".meter-name")!.textContent).toBe("Kamel (4)");
  });
});

describe("request discipline", () => {
  it("keeps a single request in flight; the latest queued submission wins", async () => {
    const pending: Array<(r: AnalyzeResponse) => void> = [];
    const client = new StubClient(
      () => new Promise<AnalyzeResponse>((resolve) => pending.push(resolve)),
    );
    const app = mount(client);
    await flush();

    type(app, "أ");
    app.root.querySelector<HTMLFormElement>(".composer")!
      .dispatchEvent(new Event("submit", { cancelable: true }));
    type(app, "ب");
    app.root.querySelector<HTMLFormElement>(".composer")!
      .dispatchEvent(new Event("submit", { cancelable: true }));
    type(app, "ج");
    app.root.querySelector<HTMLFormElement>(".composer")!
      .dispatchEvent(new Event("submit", { cancelable: true }));

    expect(client.calls.map((c) => c.text)).toEqual(["أ"]); // ب and ج queued
    pending[0]!(analysis());
    await flush();
    expect(client.calls.map((c) => c.text)).toEqual(["أ", "ج"]); // ب dropped
    pending[1]!(analysis({ meter: { index: 5, name: "Hazaj" } }));
    await app.idle();
    await flush();

    const history = app.root.querySelectorAll(".history-entry .history-text");
    expect(Array.from(history).map((h) => h.textContent)).toEqual(["أ", "ج"]);
    expect(app.root.querySelector(".result .meter-name")!.textContent)
      .toBe("Hazaj (5)");
  });
});

describe("renderPattern op accounting", () => {
  const cases: Array<{ pattern: string; ops: EditOp[] }> = [
    { pattern: "1010", ops: [] },
    { pattern: "1010", ops: [{ kind: "flip", position: 2, bit: "0" }] },
    { pattern: "1010", ops: [{ kind: "delete", position: 3, bit: null }] },
    { pattern: "1010", ops: [{ kind: "insert", position: 4, bit: "1" }] },
    {
      pattern: "1010",
      ops: [
        { kind: "insert", position: 4, bit: "1" },
        { kind: "delete", position: 2, bit: null },
        { kind: "flip", position: 0, bit: "0" },
      ],
    },
    {
      // flip and insert sharing a position still yield two markers
      pattern: "1",
      ops: [
        { kind: "flip", position: 0, bit: "0" },
        { kind: "insert", position: 0, bit: "0" },
      ],
    },
  ];

  it("renders exactly one marker per op", () => {
    for (const { pattern, ops } of cases) {
      const node = renderPattern(pattern, ops);
      expect(node.querySelectorAll(".marker")).toHaveLength(ops.length);
      expect(node.querySelectorAll(".bit")).toHaveLength(
        pattern.length + ops.filter((op) => op.kind === "insert").length,
      );
    }
  });

  it("keeps the untouched bits in place", () => {
    const node = renderPattern("0011", []);
    expect(Array.from(node.children).map((c) => c.textContent).join("")).toBe("0011");
  });
});
