import { ApiError } from "./api.js";
import { SubmitQueue } from "./queue.js";
import { renderDiagnostic } from "./view.js";
import type { AnalyzeResponse, QasidaClient } from "./types.js";

export interface App {
  root: HTMLElement;
  /** Resolves when no submission is running or queued. */
  idle(): Promise<void>;
}

function buildSkeleton(root: HTMLElement): void {
  root.innerHTML = `
    <h1>qasida</h1>
    <form class="composer">
      <textarea class="verse-input" dir="rtl" rows="3"
        placeholder="أدخل بيتا مشكولا — الشطران يفصلهما #"></textarea>
      <div class="controls">
        <label>meter
          <select class="meter-picker">
            <option value="auto">auto</option>
          </select>
        </label>
        <button class="submit" type="submit" disabled>Analyze</button>
      </div>
    </form>
    <div class="error" hidden></div>
    <section class="result"></section>
    <section class="history">
      <h2>Revisions</h2>
      <ol class="history-list"></ol>
    </section>
  `;
}

/**
 * Wire the revision console into `root`.
 *
 * All displayed values come from `client` responses; the app computes
 * nothing itself. One request is in flight at a time; re-submitting
 * while one is pending queues only the latest text.
 */
export function createApp(root: HTMLElement, client: QasidaClient): App {
  buildSkeleton(root);
  const form = root.querySelector<HTMLFormElement>(".composer")!;
  const input = root.querySelector<HTMLTextAreaElement>(".verse-input")!;
  const picker = root.querySelector<HTMLSelectElement>(".meter-picker")!;
  const submit = root.querySelector<HTMLButtonElement>(".submit")!;
  const errorBox = root.querySelector<HTMLDivElement>(".error")!;
  const result = root.querySelector<HTMLElement>(".result")!;
  const historyList = root.querySelector<HTMLOListElement>(".history-list")!;

  const queue = new SubmitQueue();

  void client.meters().then((meters) => {
    for (const meter of meters) {
      const option = document.createElement("option");
      option.value = String(meter.index);
      option.textContent = meter.name;
      picker.appendChild(option);
    }
  });

  input.addEventListener("input", () => {
    submit.disabled = input.value.trim() === "";
  });

  function showError(title: string, message: string): void {
    errorBox.hidden = false;
    errorBox.textContent = `${title}: ${message}`;
  }

  function appendHistory(text: string, response: AnalyzeResponse): void {
    const entry = document.createElement("li");
    entry.className = "history-entry";
    entry.appendChild(renderDiagnostic(response));
    const caption = document.createElement("div");
    caption.className = "history-text";
    caption.dir = "rtl";
    caption.textContent = text;
    entry.prepend(caption);
    historyList.appendChild(entry);
  }

  async function analyzeOnce(text: string, meterHint: number | null): Promise<void> {
    try {
      const response = await client.analyze(text, meterHint);
      errorBox.hidden = true;
      errorBox.textContent = "";
      result.replaceChildren(renderDiagnostic(response));
      appendHistory(text, response);
    } catch (err) {
      if (err instanceof ApiError) {
        showError(err.type, err.message);
      } else {
        showError("NetworkError", err instanceof Error ? err.message : String(err));
      }
    }
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (text === "") {
      return;
    }
    const hint = picker.value === "auto" ? null : Number(picker.value);
    queue.run(() => analyzeOnce(text, hint));
  });

  return { root, idle: () => queue.idle() };
}
