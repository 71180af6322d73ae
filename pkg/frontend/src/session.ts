import { writeFileSync } from "node:fs";
import { join } from "node:path";

import { frameToCsv } from "./csv";
import type { DataFrame } from "./dataframe";
import { frameFromColumns } from "./dataframe";
import { EngineClient, EngineError } from "./engine";

export interface SkinOptions {
  /** working directory; frames and the session directory live here */
  dir: string;
  sessionDir?: string;
  /** frozen UTC timestamp, e.g. "2026-01-01T00:00:00Z" */
  clock?: string;
  /** path to a rule-parameter YAML file */
  configPath?: string;
  engineCommand?: string[];
  /** set false to silence the immediate three-panel display */
  echo?: boolean;
}

export interface TabulateOptions {
  values?: string;
  aggfunc?: string;
  margins?: boolean;
}

export interface CheckedOutput {
  id: string;
  /** "pass" when nothing was suppressed or withheld */
  status: "pass" | "fail";
  summary: string;
  /** the engine's full display text (outcome grid + released values) */
  text: string;
}

function parseRecorded(stdout: string): string {
  const m = stdout.match(/^recorded: (output_\d+)$/m);
  if (!m) throw new EngineError("engine output had no recorded id");
  return m[1]!;
}

function parseSummary(stdout: string): string {
  const m = stdout.match(/^summary: (.*)$/m);
  return m ? m[1]! : "";
}

/**
 * A researcher session.  Every method delegates to the engine CLI over its
 * flag contract; the skin only converts frames to CSV and relays text, so
 * engine and skin can never disagree about what is safe.
 */
export class SkinSession {
  private engine: EngineClient;
  private dir: string;
  private sessionDir: string;
  private clock?: string;
  private configPath?: string;
  private echo: boolean;
  private frameCount = 0;

  constructor(opts: SkinOptions) {
    this.dir = opts.dir;
    this.sessionDir = opts.sessionDir ?? "sdc_session";
    this.clock = opts.clock;
    this.configPath = opts.configPath;
    this.echo = opts.echo ?? true;
    this.engine = new EngineClient(opts.dir, opts.engineCommand);
  }

  /**
   * Write the frame where the engine can read it.  Files are numbered in
   * call order so a scripted session is fully reproducible.
   */
  materialize(frame: DataFrame): string {
    this.frameCount += 1;
    const name = `frame_${this.frameCount}.csv`;
    writeFileSync(join(this.dir, name), frameToCsv(frame), "utf-8");
    return name;
  }

  private sessionArgs(): string[] {
    const args = ["--session", this.sessionDir];
    if (this.clock) args.push("--clock", this.clock);
    if (this.configPath) args.push("--config", this.configPath);
    return args;
  }

  private checked(args: string[]): CheckedOutput {
    const res = this.engine.run([...args, ...this.sessionArgs()]);
    if (this.echo) console.log(res.stdout.trimEnd());
    return {
      id: parseRecorded(res.stdout),
      status: res.status === 0 ? "pass" : "fail",
      summary: parseSummary(res.stdout),
      text: res.stdout,
    };
  }

  crosstab(
    frame: DataFrame,
    index: string | string[],
    columns: string | string[],
    opts: TabulateOptions = {},
  ): CheckedOutput {
    const data = this.materialize(frame);
    return this.checked([
      "tabulate",
      "--data", data,
      "--index", joinNames(index),
      "--columns", joinNames(columns),
      ...tabulateFlags(opts),
    ]);
  }

  pivotTable(
    frame: DataFrame,
    index: string | string[],
    opts: TabulateOptions = {},
  ): CheckedOutput {
    const data = this.materialize(frame);
    return this.checked([
      "tabulate",
      "--data", data,
      "--index", joinNames(index),
      ...tabulateFlags(opts),
    ]);
  }

  /** Formula fit: "response ~ term + term [- 1]". */
  fit(
    model: "ols" | "logit" | "probit",
    frame: DataFrame,
    formula: string,
  ): CheckedOutput {
    const data = this.materialize(frame);
    return this.checked([
      "regress",
      "--model", model,
      "--data", data,
      "--formula", formula,
    ]);
  }

  /**
   * Array fit in the lm() style: y against columns of X.  The design is
   * used exactly as given — include a ones column if an intercept is wanted.
   */
  fitArrays(
    model: "ols" | "logit" | "probit",
    y: number[],
    X: number[][],
    names?: string[],
  ): CheckedOutput {
    const k = X[0]?.length ?? 0;
    const colNames = names ?? Array.from({ length: k }, (_, j) => `x${j + 1}`);
    const cols: Record<string, (number | null)[]> = { y };
    colNames.forEach((name, j) => {
      cols[name] = X.map((row) => row[j] ?? null);
    });
    const frame = frameFromColumns(cols);
    const formula = `y ~ ${colNames.join(" + ")} - 1`;
    return this.fit(model, frame, formula);
  }

  printOutputs(): string {
    const res = this.engine.run(["list", "--session", this.sessionDir]);
    if (this.echo) console.log(res.stdout.trimEnd());
    return res.stdout;
  }

  removeOutput(id: string): void {
    this.engine.run(["remove", "--id", id, "--session", this.sessionDir]);
  }

  finalise(out: string, format: "json" | "csv-bundle" = "json"): void {
    this.engine.run([
      "finalise",
      "--out", out,
      "--format", format,
      "--session", this.sessionDir,
    ]);
  }
}

function joinNames(names: string | string[]): string {
  return Array.isArray(names) ? names.join(",") : names;
}

function tabulateFlags(opts: TabulateOptions): string[] {
  const flags: string[] = [];
  if (opts.values) flags.push("--values", opts.values);
  if (opts.aggfunc) flags.push("--aggfunc", opts.aggfunc);
  if (opts.margins) flags.push("--margins");
  return flags;
}
