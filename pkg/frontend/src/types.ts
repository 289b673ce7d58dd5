/** Response shapes of the /v1 service (mirrors the published schema). */

export interface EditOp {
  kind: "insert" | "delete" | "flip";
  position: number;
  bit: "0" | "1" | null;
}

export interface HemistichReport {
  text: string;
  coverage: number | null;
  pattern: string | null;
  variant: string | null;
  similarity: number | null;
  ops: EditOp[];
  error: string | null;
}

export interface AnalyzeResponse {
  meter: { index: number; name: string };
  qafiyah: { rawiy: string; tail: string };
  hemistiches: HemistichReport[];
  warnings: string[];
}

export interface MeterEntry {
  index: number;
  name: string;
}

/** The client surface the app depends on; tests substitute stubs. */
export interface QasidaClient {
  meters(): Promise<MeterEntry[]>;
  analyze(text: string, meterHint: number | null): Promise<AnalyzeResponse>;
}
